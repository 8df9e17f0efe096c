#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cognate::text {

// getline that also strips a trailing '\r'.
bool read_line(std::istream& in, std::string& line);

std::ifstream open_input(const std::filesystem::path& path, std::string_view what);
std::ofstream open_output(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line, char delimiter);
std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view text);

// Strict decimal parse of the whole token.
bool parse_double(std::string_view token, double& value);
bool parse_size(std::string_view token, std::size_t& value);

// "%.6g" formatting used by every CSV and the embedding serializer.
std::string sig6(double value);
// Round-trip exact formatting for matrix files.
std::string exact(double value);
std::string fixed(double value, int decimals);

}  // namespace cognate::text
