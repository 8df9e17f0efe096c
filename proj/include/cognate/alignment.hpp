#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cognate/embedding_store.hpp"
#include "cognate/language.hpp"

namespace cognate {

using Matrix = Eigen::MatrixXd;

inline constexpr double kOrthogonalityTolerance = 1e-6;
inline constexpr double kLoadedOrthogonalityTolerance = 1e-3;

struct SeedLexicon {
  LanguageTag source_language;
  LanguageTag target_language;
  std::vector<std::pair<std::string, std::string>> pairs;
};

// Removes duplicate pairs, keeping first occurrences in order.
SeedLexicon make_seed_lexicon(LanguageTag source, LanguageTag target,
                              std::vector<std::pair<std::string, std::string>> pairs);

// Two-column TSV; lines starting with '#' and blank lines are ignored.
SeedLexicon load_seed_lexicon(const std::filesystem::path& path, LanguageTag source,
                              LanguageTag target);

// Square matrix mapping row vectors of the source space into target
// coordinates: mapped = row * matrix.
class AlignmentMap {
 public:
  AlignmentMap(LanguageTag source, LanguageTag target, Matrix matrix);

  static AlignmentMap identity(LanguageTag language, std::size_t dim);

  const LanguageTag& source_language() const { return source_; }
  const LanguageTag& target_language() const { return target_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  // max |WᵀW − I|
  double orthogonality_residual() const;

 private:
  LanguageTag source_;
  LanguageTag target_;
  Matrix matrix_;
};

double orthogonality_residual(const Matrix& m);

struct AlignmentFit {
  std::size_t used_pairs = 0;
  std::size_t dropped_pairs = 0;
};

// Orthogonal Procrustes on the seed pairs: W = U·Vᵀ where U·S·Vᵀ = XᵀY and
// X, Y stack the (normalized) source / target seed vectors.
AlignmentMap learn_alignment(const EmbeddingSpace& source, const EmbeddingSpace& target,
                             const SeedLexicon& seeds, AlignmentFit* fit = nullptr);

// Closed-form solution on explicit point sets (rows are paired).
Matrix procrustes(const Matrix& source_rows, const Matrix& target_rows);

EmbeddingSpace apply_alignment(const EmbeddingSpace& space, const AlignmentMap& map);

AlignmentMap load_alignment_matrix(const std::filesystem::path& path, LanguageTag source,
                                   LanguageTag target);
AlignmentMap parse_alignment_matrix(std::istream& in, LanguageTag source, LanguageTag target);
void write_alignment_matrix(const AlignmentMap& map, std::ostream& out);

// Maps both spaces into the shared pivot coordinates and renormalizes.
std::pair<EmbeddingSpace, EmbeddingSpace> shared_space_pair(const EmbeddingSpace& a,
                                                            const EmbeddingSpace& b,
                                                            const AlignmentMap& map_a,
                                                            const AlignmentMap& map_b);

}  // namespace cognate
