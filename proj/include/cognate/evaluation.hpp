#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cognate/falsefriends.hpp"
#include "cognate/language.hpp"

namespace cognate {

enum class GoldLabel { false_friend, true_cognate };

struct GoldPair {
  std::string word1;
  std::string word2;
  LanguageTag lang1;
  LanguageTag lang2;
  GoldLabel label = GoldLabel::true_cognate;
};

// TSV rows "word1 word2 FF|TC". An optional header row and '#' comments are
// skipped. Duplicate (word1, word2) pairs are rejected with the line number.
std::vector<GoldPair> load_gold_pairs(const std::filesystem::path& path, const LanguageTag& lang1,
                                      const LanguageTag& lang2);
std::vector<GoldPair> parse_gold_pairs(std::istream& in, const LanguageTag& lang1,
                                       const LanguageTag& lang2);

using SynsetMember = std::pair<LanguageTag, std::string>;

struct SynsetTable {
  std::vector<std::set<SynsetMember>> synsets;
};

// One synset per line, members as space-separated "lang:word" tokens.
SynsetTable load_synset_table(const std::filesystem::path& path);
SynsetTable parse_synset_table(std::istream& in);

struct SynsetGold {
  std::vector<GoldPair> labeled;
  std::vector<std::pair<std::string, std::string>> excluded;
};

SynsetGold gold_from_synsets(const SynsetTable& table,
                             const std::vector<std::pair<std::string, std::string>>& pairs,
                             const LanguageTag& lang1, const LanguageTag& lang2);

struct EvalResult {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::size_t evaluated_count = 0;
  std::size_t excluded_count = 0;
};

// Positive class is false_friend. Gold pairs without a prediction are
// excluded; a prediction outside the gold set is an error.
EvalResult evaluate(const std::vector<FalseFriendReport>& predictions,
                    const std::vector<GoldPair>& gold);

// Computes the metrics from confusion counts.
EvalResult metrics_from_counts(std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn,
                               std::size_t excluded = 0);

// "70.00" style percentage; "n/a" when absent.
std::string format_percent(std::optional<double> fraction);

// Aligned text table with columns pair, Accuracy, Precision, Recall.
std::string format_eval_table(const std::vector<std::pair<std::string, EvalResult>>& rows);

}  // namespace cognate
