#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cognate/embedding_store.hpp"
#include "cognate/language.hpp"

namespace cognate {

// One etymon and its descendant forms. The etymon acts as the form of
// `etymon_language` (Latin in the Romance data).
class CognateSet {
 public:
  CognateSet(std::string etymon, LanguageTag etymon_language,
             std::map<LanguageTag, std::string> forms);

  const std::string& etymon() const { return etymon_; }
  const LanguageTag& etymon_language() const { return etymon_language_; }
  const std::map<LanguageTag, std::string>& forms() const { return forms_; }

  // Etymon for the etymon language, the descendant form otherwise.
  std::optional<std::string> form(const LanguageTag& language) const;

 private:
  std::string etymon_;
  LanguageTag etymon_language_;
  std::map<LanguageTag, std::string> forms_;
};

// TSV with a header row "etymon<TAB>lang1<TAB>lang2...". Empty cell = absent.
std::vector<CognateSet> load_cognate_sets(const std::filesystem::path& path,
                                          const LanguageTag& etymon_language);
std::vector<CognateSet> parse_cognate_sets(std::istream& in, const LanguageTag& etymon_language);
std::vector<LanguageTag> cognate_file_languages(std::istream& in);

struct CognatePairScore {
  LanguageTag lang1;
  LanguageTag lang2;
  std::string word1;
  std::string word2;
  double similarity = 0.0;
};

enum class OovSide { first, second, both };

struct ScoreSkip {
  OovSide side = OovSide::both;
};

double clamp_similarity(double value);

// Cosine in [-1, 1]. Throws InputError on a zero vector or dim mismatch.
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(const Vector& u, const Vector& v);

std::variant<CognatePairScore, ScoreSkip> score_pair(const EmbeddingSpace& a,
                                                     const EmbeddingSpace& b,
                                                     const std::string& word_a,
                                                     const std::string& word_b);

struct LanguagePairSummary {
  LanguageTag lang1;
  LanguageTag lang2;
  double mean_similarity = 0.0;
  std::size_t scored_count = 0;
  std::size_t skipped_oov_count = 0;
  // Sets lacking a form in either language.
  std::size_t skipped_missing_count = 0;
  std::vector<CognatePairScore> scores;
};

// Map from language to its space in shared (pivot) coordinates.
using SpaceTable = std::map<LanguageTag, const EmbeddingSpace*>;

LanguagePairSummary language_pair_divergence(const std::vector<CognateSet>& cognates,
                                             const LanguageTag& lang1, const LanguageTag& lang2,
                                             const SpaceTable& spaces);

// (most similar, most dissimilar); ties keep the earlier cognate.
std::pair<CognatePairScore, CognatePairScore> extreme_pairs(const LanguagePairSummary& summary);

inline constexpr std::size_t kHistogramBins = 50;

struct Histogram {
  std::array<double, kHistogramBins + 1> bin_edges{};
  std::array<std::size_t, kHistogramBins> counts{};
};

// Uniform bins on [-1, 1]; right-open except the last, which includes 1.0.
Histogram histogram(const LanguagePairSummary& summary);
std::size_t histogram_bin(double similarity);

struct SimilarityMatrix {
  std::vector<LanguageTag> labels;
  std::vector<std::vector<double>> values;
};

SimilarityMatrix similarity_matrix(const std::vector<CognateSet>& cognates,
                                   const std::vector<LanguageTag>& languages,
                                   const SpaceTable& spaces);

}  // namespace cognate
