#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace cognate {

// Short lowercase language code such as "es", "pt", "la".
class LanguageTag {
 public:
  LanguageTag() = default;
  explicit LanguageTag(std::string code);

  const std::string& code() const { return code_; }
  bool empty() const { return code_.empty(); }

  auto operator<=>(const LanguageTag&) const = default;
  bool operator==(const LanguageTag&) const = default;

 private:
  std::string code_;
};

inline std::ostream& operator<<(std::ostream& os, const LanguageTag& tag) {
  return os << tag.code();
}

}  // namespace cognate

template <>
struct std::hash<cognate::LanguageTag> {
  size_t operator()(const cognate::LanguageTag& tag) const noexcept {
    return std::hash<std::string>{}(tag.code());
  }
};
