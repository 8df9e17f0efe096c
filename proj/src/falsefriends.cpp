#include "cognate/falsefriends.hpp"

#include <algorithm>
#include <optional>

#include "cognate/errors.hpp"
#include "cognate/nn_kernels.hpp"

namespace cognate {

std::string_view to_string(Falseness kind) {
  switch (kind) {
    case Falseness::hard:
      return "hard";
    case Falseness::soft:
      return "soft";
    case Falseness::true_cognate:
      return "true_cognate";
  }
  return "unknown";
}

FalseFriendReport detect(const std::string& c1, const std::string& c2, const EmbeddingSpace& space1,
                         const EmbeddingSpace& space2, std::size_t search_k) {
  if (search_k < 1) throw InputError("search_k must be at least 1");
  if (!space1.normalized() || !space2.normalized()) {
    throw InputError("false friend detection requires normalized shared spaces");
  }
  if (space1.dim() != space2.dim()) throw InputError("shared spaces differ in dimension");
  const auto i1 = space1.find(c1);
  if (!i1) throw InputError("out of vocabulary (" + space1.language().code() + "): " + c1);
  const auto i2 = space2.find(c2);
  if (!i2) throw InputError("out of vocabulary (" + space2.language().code() + "): " + c2);

  const auto query = space1.row(*i1);
  auto hits = nearest_neighbor(space2, query, std::min(search_k, space2.size()));
  const NeighborHit& best = hits.front();

  FalseFriendReport report;
  report.lang1 = space1.language();
  report.lang2 = space2.language();
  report.word1 = c1;
  report.word2 = c2;
  // Same kernel as the scan, so c2 scores bit-identically in both places.
  report.cognate_similarity = clamp_similarity(kernels::row_dot(space2.vectors(), *i2, query));
  report.best_similarity = best.similarity;
  if (best.index != *i2 && best.similarity > report.cognate_similarity) {
    report.is_false_friend = true;
    report.correction = best.word;
    report.falseness = best.similarity - report.cognate_similarity;
  }
  report.alternates = std::move(hits);
  return report;
}

FalsenessClass classify(const FalseFriendReport& report, double threshold) {
  if (!(threshold > 0.0)) throw InputError("falseness threshold must be positive");
  FalsenessClass result{Falseness::true_cognate, threshold};
  if (!report.is_false_friend || report.falseness <= 0.0) return result;
  result.kind = report.falseness >= threshold ? Falseness::hard : Falseness::soft;
  return result;
}

BatchResult detect_batch(const std::vector<CognateSet>& cognates, const LanguageTag& lang1,
                         const LanguageTag& lang2, const SpaceTable& spaces, double threshold,
                         std::size_t search_k) {
  if (!(threshold > 0.0)) throw InputError("falseness threshold must be positive");
  if (search_k < 1) throw InputError("search_k must be at least 1");
  if (lang1 == lang2) throw InputError("language pair must name two distinct languages");
  const auto it1 = spaces.find(lang1);
  const auto it2 = spaces.find(lang2);
  if (it1 == spaces.end() || it2 == spaces.end() || !it1->second || !it2->second) {
    throw InputError("missing embedding space for " + lang1.code() + "-" + lang2.code());
  }
  const EmbeddingSpace& a = *it1->second;
  const EmbeddingSpace& b = *it2->second;

  enum class Outcome { reported, oov, missing };
  std::vector<Outcome> outcomes(cognates.size(), Outcome::missing);
  std::vector<std::optional<FalseFriendReport>> reports(cognates.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cognates.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto w1 = cognates[idx].form(lang1);
    const auto w2 = cognates[idx].form(lang2);
    if (!w1 || !w2) continue;
    if (!a.find(*w1) || !b.find(*w2)) {
      outcomes[idx] = Outcome::oov;
      continue;
    }
    reports[idx] = detect(*w1, *w2, a, b, search_k);
    outcomes[idx] = Outcome::reported;
  }

  BatchResult batch;
  for (std::size_t i = 0; i < cognates.size(); ++i) {
    if (outcomes[i] == Outcome::reported) {
      FalsenessClass cls = classify(*reports[i], threshold);
      batch.reports.push_back({std::move(*reports[i]), cls});
    } else if (outcomes[i] == Outcome::oov) {
      ++batch.skipped_oov;
    } else {
      ++batch.skipped_missing;
    }
  }
  std::stable_sort(batch.reports.begin(), batch.reports.end(),
                   [](const ClassifiedReport& x, const ClassifiedReport& y) {
                     return x.report.falseness > y.report.falseness;
                   });
  if (batch.reports.empty()) {
    warn("no scorable cognate pairs for " + lang1.code() + "-" + lang2.code() + " (" +
         std::to_string(batch.skipped_oov) + " out of vocabulary)");
  }
  return batch;
}

}  // namespace cognate
