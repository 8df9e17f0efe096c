#include "cognate/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>

#include "cognate/errors.hpp"
#include "cognate/text_io.hpp"

namespace cognate {

CognateSet::CognateSet(std::string etymon, LanguageTag etymon_language,
                       std::map<LanguageTag, std::string> forms)
    : etymon_(std::move(etymon)), etymon_language_(std::move(etymon_language)) {
  for (auto& [lang, word] : forms) {
    if (lang == etymon_language_) {
      throw InputError("descendant language " + lang.code() + " collides with the etymon language");
    }
    if (!word.empty()) forms_.emplace(lang, std::move(word));
  }
  const bool ok = forms_.size() >= 2 || (forms_.size() == 1 && !etymon_.empty());
  if (!ok) throw InputError("cognate set needs two forms, or one form and an etymon");
}

std::optional<std::string> CognateSet::form(const LanguageTag& language) const {
  if (language == etymon_language_) {
    if (etymon_.empty()) return std::nullopt;
    return etymon_;
  }
  if (auto it = forms_.find(language); it != forms_.end()) return it->second;
  return std::nullopt;
}

namespace {

std::vector<LanguageTag> parse_header(const std::string& line) {
  const auto columns = text::split(line, '\t');
  if (columns.empty() || text::trim(columns[0]) != "etymon") {
    throw InputError("cognate file header must start with an \"etymon\" column");
  }
  std::vector<LanguageTag> langs;
  for (std::size_t i = 1; i < columns.size(); ++i) {
    LanguageTag tag{std::string(text::trim(columns[i]))};
    if (std::find(langs.begin(), langs.end(), tag) != langs.end()) {
      throw InputError("duplicate language column " + tag.code());
    }
    langs.push_back(std::move(tag));
  }
  if (langs.empty()) throw InputError("cognate file names no language columns");
  return langs;
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (text::read_line(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) return true;
  }
  return false;
}

}  // namespace

std::vector<LanguageTag> cognate_file_languages(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) throw InputError("empty cognate file");
  return parse_header(line);
}

std::vector<CognateSet> parse_cognate_sets(std::istream& in, const LanguageTag& etymon_language) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) throw InputError("empty cognate file");
  const auto langs = parse_header(line);

  std::vector<CognateSet> sets;
  while (next_content_line(in, line, line_no)) {
    const auto cells = text::split(line, '\t');
    if (cells.size() > langs.size() + 1) {
      throw InputError("line " + std::to_string(line_no) + ": too many columns");
    }
    std::map<LanguageTag, std::string> forms;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      forms.emplace(langs[i - 1], std::string(text::trim(cells[i])));
    }
    try {
      sets.emplace_back(std::string(text::trim(cells[0])), etymon_language, std::move(forms));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return sets;
}

std::vector<CognateSet> load_cognate_sets(const std::filesystem::path& path,
                                          const LanguageTag& etymon_language) {
  auto in = text::open_input(path, "cognate");
  try {
    return parse_cognate_sets(in, etymon_language);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

double clamp_similarity(double value) { return std::clamp(value, -1.0, 1.0); }

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw InputError("cosine_similarity: dimension mismatch");
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw InputError("cosine_similarity: zero vector");
  return clamp_similarity(dot / (std::sqrt(uu) * std::sqrt(vv)));
}

double cosine_similarity(const Vector& u, const Vector& v) {
  return cosine_similarity(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())),
                           std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

std::variant<CognatePairScore, ScoreSkip> score_pair(const EmbeddingSpace& a,
                                                     const EmbeddingSpace& b,
                                                     const std::string& word_a,
                                                     const std::string& word_b) {
  const auto ia = a.find(word_a);
  const auto ib = b.find(word_b);
  if (!ia || !ib) {
    return ScoreSkip{!ia && !ib ? OovSide::both : (!ia ? OovSide::first : OovSide::second)};
  }
  return CognatePairScore{a.language(), b.language(), word_a, word_b,
                          cosine_similarity(a.row(*ia), b.row(*ib))};
}

namespace {

const EmbeddingSpace& space_for(const SpaceTable& spaces, const LanguageTag& lang) {
  const auto it = spaces.find(lang);
  if (it == spaces.end() || it->second == nullptr) {
    throw InputError("no embedding space for language " + lang.code());
  }
  return *it->second;
}

}  // namespace

LanguagePairSummary language_pair_divergence(const std::vector<CognateSet>& cognates,
                                             const LanguageTag& lang1, const LanguageTag& lang2,
                                             const SpaceTable& spaces) {
  if (lang1 == lang2) throw InputError("language pair must name two distinct languages");
  const EmbeddingSpace& a = space_for(spaces, lang1);
  const EmbeddingSpace& b = space_for(spaces, lang2);
  if (a.dim() != b.dim()) throw InputError("spaces for " + lang1.code() + " and " + lang2.code() +
                                           " have different dimensions");

  enum class Outcome { scored, oov, missing };
  std::vector<Outcome> outcomes(cognates.size(), Outcome::missing);
  std::vector<std::optional<CognatePairScore>> scored(cognates.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cognates.size()); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto w1 = cognates[idx].form(lang1);
    const auto w2 = cognates[idx].form(lang2);
    if (!w1 || !w2) continue;
    auto result = score_pair(a, b, *w1, *w2);
    if (auto* score = std::get_if<CognatePairScore>(&result)) {
      scored[idx] = std::move(*score);
      outcomes[idx] = Outcome::scored;
    } else {
      outcomes[idx] = Outcome::oov;
    }
  }

  LanguagePairSummary summary;
  summary.lang1 = lang1;
  summary.lang2 = lang2;
  double sum = 0.0;
  for (std::size_t i = 0; i < cognates.size(); ++i) {
    switch (outcomes[i]) {
      case Outcome::scored:
        sum += scored[i]->similarity;
        summary.scores.push_back(std::move(*scored[i]));
        break;
      case Outcome::oov:
        ++summary.skipped_oov_count;
        break;
      case Outcome::missing:
        ++summary.skipped_missing_count;
        break;
    }
  }
  summary.scored_count = summary.scores.size();
  if (summary.scored_count == 0) {
    throw InputError("no scorable pairs for " + lang1.code() + "-" + lang2.code());
  }
  summary.mean_similarity = sum / static_cast<double>(summary.scored_count);
  return summary;
}

std::pair<CognatePairScore, CognatePairScore> extreme_pairs(const LanguagePairSummary& summary) {
  if (summary.scores.empty()) throw InputError("extreme_pairs: empty summary");
  std::size_t best = 0;
  std::size_t worst = 0;
  for (std::size_t i = 1; i < summary.scores.size(); ++i) {
    if (summary.scores[i].similarity > summary.scores[best].similarity) best = i;
    if (summary.scores[i].similarity < summary.scores[worst].similarity) worst = i;
  }
  return {summary.scores[best], summary.scores[worst]};
}

namespace {

double bin_edge(std::size_t i) {
  return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kHistogramBins);
}

}  // namespace

std::size_t histogram_bin(double similarity) {
  const double s = clamp_similarity(similarity);
  auto bin = static_cast<std::size_t>(std::floor((s + 1.0) * (kHistogramBins / 2.0)));
  bin = std::min(bin, kHistogramBins - 1);
  // Agree exactly with the published edges when s sits on a boundary.
  while (bin + 1 < kHistogramBins && s >= bin_edge(bin + 1)) ++bin;
  while (bin > 0 && s < bin_edge(bin)) --bin;
  return bin;
}

Histogram histogram(const LanguagePairSummary& summary) {
  Histogram h;
  for (std::size_t i = 0; i <= kHistogramBins; ++i) h.bin_edges[i] = bin_edge(i);
  for (const auto& score : summary.scores) ++h.counts[histogram_bin(score.similarity)];
  return h;
}

SimilarityMatrix similarity_matrix(const std::vector<CognateSet>& cognates,
                                   const std::vector<LanguageTag>& languages,
                                   const SpaceTable& spaces) {
  if (languages.size() < 2) throw InputError("similarity_matrix needs at least two languages");
  const std::size_t n = languages.size();
  SimilarityMatrix m{languages, std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double mean =
          language_pair_divergence(cognates, languages[i], languages[j], spaces).mean_similarity;
      m.values[i][j] = mean;
      m.values[j][i] = mean;
    }
  }
  return m;
}

}  // namespace cognate
