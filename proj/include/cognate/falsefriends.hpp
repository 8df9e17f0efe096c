#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cognate/divergence.hpp"
#include "cognate/embedding_store.hpp"
#include "cognate/language.hpp"

namespace cognate {

inline constexpr double kDefaultFalsenessThreshold = 0.3;

struct FalseFriendReport {
  LanguageTag lang1;
  LanguageTag lang2;
  std::string word1;
  std::string word2;
  bool is_false_friend = false;
  std::optional<std::string> correction;
  // sim(c1, w2) − sim(c1, c2); zero for true cognates.
  double falseness = 0.0;
  double cognate_similarity = 0.0;
  double best_similarity = 0.0;
  // Top search_k lang2 neighbours of c1, best first.
  std::vector<NeighborHit> alternates;
};

enum class Falseness { hard, soft, true_cognate };

struct FalsenessClass {
  Falseness kind = Falseness::true_cognate;
  double threshold = kDefaultFalsenessThreshold;
};

std::string_view to_string(Falseness kind);

// Finds w2, the lang2 word nearest to c1 in the shared space. The pair is a
// false friend when w2 is strictly closer to c1 than c2 is; a tie keeps c2.
// Throws InputError if either word is out of vocabulary or search_k < 1.
FalseFriendReport detect(const std::string& c1, const std::string& c2, const EmbeddingSpace& space1,
                         const EmbeddingSpace& space2, std::size_t search_k = 1);

FalsenessClass classify(const FalseFriendReport& report, double threshold);

struct ClassifiedReport {
  FalseFriendReport report;
  FalsenessClass falseness_class;
};

struct BatchResult {
  std::vector<ClassifiedReport> reports;
  std::size_t skipped_oov = 0;
  std::size_t skipped_missing = 0;
};

// Runs detect over every set with both forms; sorted by descending falseness,
// stable with respect to input order.
BatchResult detect_batch(const std::vector<CognateSet>& cognates, const LanguageTag& lang1,
                         const LanguageTag& lang2, const SpaceTable& spaces,
                         double threshold = kDefaultFalsenessThreshold, std::size_t search_k = 1);

}  // namespace cognate
