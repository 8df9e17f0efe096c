#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cognate/language.hpp"

namespace cognate {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr std::size_t kDefaultVocabLimit = 200000;

struct NeighborHit {
  std::string word;
  double similarity = 0.0;
  std::size_t index = 0;
};

// Immutable vocabulary-to-vector table for one language. Rows keep the order
// of the source file, which for standard dumps is frequency order.
class EmbeddingSpace {
 public:
  EmbeddingSpace(LanguageTag language, std::vector<std::string> vocab, RowMatrix vectors,
                 bool normalized = false);

  const LanguageTag& language() const { return language_; }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t size() const { return vocab_.size(); }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& vocab() const { return vocab_; }
  const RowMatrix& vectors() const { return vectors_; }
  const std::string& word(std::size_t row) const { return vocab_[row]; }
  std::span<const double> row(std::size_t index) const;

  // Exact match first, then the lowercase-folded form.
  std::optional<std::size_t> find(std::string_view word) const;

 private:
  LanguageTag language_;
  std::vector<std::string> vocab_;
  RowMatrix vectors_;
  bool normalized_ = false;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadStats {
  std::size_t declared_count = 0;
  std::size_t duplicates_dropped = 0;
};

// Parses the text embedding dump: a "count dim" header, then one token and
// dim numbers per line. Keeps at most `limit` rows (counted after dedup).
EmbeddingSpace load_embeddings(const std::filesystem::path& path, const LanguageTag& language,
                               std::optional<std::size_t> limit = std::nullopt,
                               LoadStats* stats = nullptr);
EmbeddingSpace parse_embeddings(std::istream& in, const LanguageTag& language,
                                std::optional<std::size_t> limit = std::nullopt,
                                LoadStats* stats = nullptr);

// Same text format with 6 significant digits.
void serialize_embeddings(const EmbeddingSpace& space, std::ostream& out);

EmbeddingSpace normalize(const EmbeddingSpace& space);

std::optional<Vector> lookup(const EmbeddingSpace& space, std::string_view word);

// Exact top-k by cosine over a normalized space. Ties go to the lower row.
std::vector<NeighborHit> nearest_neighbor(const EmbeddingSpace& space, std::span<const double> query,
                                          std::size_t k);

// Lowercases ASCII and the Latin-1 / Latin Extended letters used by the
// Romance languages. Other code points pass through unchanged.
std::string fold_lowercase(std::string_view text);

}  // namespace cognate
