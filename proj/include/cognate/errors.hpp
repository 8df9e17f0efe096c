#pragma once

#include <stdexcept>
#include <string>

namespace cognate {

// Bad or inconsistent user input: malformed files, unknown words, mismatched
// languages. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric routine could not produce a valid result (non-finite values,
// SVD failure). The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics (dropped duplicates, loosely orthogonal matrices).
// Written to stderr unless silenced.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

}  // namespace cognate
