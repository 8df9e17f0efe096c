#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cognate/embedding_store.hpp"
#include "cognate/falsefriends.hpp"
#include "cognate/language.hpp"

namespace cognate::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 1, kNumericError = 2 };

struct LanguageSource {
  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> seeds;   // TSV lexicon, language -> pivot
  std::optional<std::filesystem::path> matrix;  // precomputed map into the pivot
};

struct RunConfig {
  std::map<LanguageTag, LanguageSource> languages;
  std::optional<LanguageTag> pivot;
  std::optional<std::filesystem::path> cognates;
  LanguageTag etymon_language{"la"};
  std::size_t limit = kDefaultVocabLimit;
  bool histogram = false;
  double threshold = kDefaultFalsenessThreshold;
  std::size_t search_k = 1;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  // Languages selected for this run; empty means every configured language.
  std::vector<LanguageTag> langs;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> synsets;
  std::optional<std::filesystem::path> similarity_matrix;
};

// JSON config; relative paths are resolved against the config's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);

std::vector<LanguageTag> parse_language_list(const std::string& comma_separated);

// Each command writes under config.out and a short report to `log`.
int cmd_align(const RunConfig& config, std::ostream& log);
int cmd_divergence(const RunConfig& config, std::ostream& log);
int cmd_cluster(const RunConfig& config, std::ostream& log);
int cmd_falsefriends(const RunConfig& config, std::ostream& log);
int cmd_evaluate(const RunConfig& config, std::ostream& log);

// Full command line: parses flags, dispatches, and maps exceptions to exit
// codes (errors are printed to `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cognate::cli
