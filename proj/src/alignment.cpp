#include "cognate/alignment.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include <Eigen/SVD>

#include "cognate/errors.hpp"
#include "cognate/text_io.hpp"

namespace cognate {

SeedLexicon make_seed_lexicon(LanguageTag source, LanguageTag target,
                              std::vector<std::pair<std::string, std::string>> pairs) {
  SeedLexicon lexicon{std::move(source), std::move(target), {}};
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& pair : pairs) {
    if (seen.insert(pair).second) lexicon.pairs.push_back(std::move(pair));
  }
  if (lexicon.pairs.empty()) throw InputError("seed lexicon is empty");
  return lexicon;
}

SeedLexicon load_seed_lexicon(const std::filesystem::path& path, LanguageTag source,
                              LanguageTag target) {
  auto in = text::open_input(path, "seed lexicon");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = text::split(trimmed, '\t');
    if (fields.size() != 2) {
      // Tolerate space-separated dictionaries as long as there are two tokens.
      const auto tokens = text::split_whitespace(trimmed);
      if (tokens.size() != 2) {
        throw InputError(path.string() + ": line " + std::to_string(line_no) +
                         ": expected two columns");
      }
      fields = {std::string(tokens[0]), std::string(tokens[1])};
    }
    pairs.emplace_back(std::string(text::trim(fields[0])), std::string(text::trim(fields[1])));
  }
  return make_seed_lexicon(std::move(source), std::move(target), std::move(pairs));
}

double orthogonality_residual(const Matrix& m) {
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

AlignmentMap::AlignmentMap(LanguageTag source, LanguageTag target, Matrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw InputError("alignment matrix must be square and non-empty");
  }
  if (!matrix_.allFinite()) throw NumericError("alignment matrix has non-finite entries");
}

AlignmentMap AlignmentMap::identity(LanguageTag language, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  LanguageTag target = language;
  return AlignmentMap(std::move(language), std::move(target), Matrix::Identity(n, n));
}

double AlignmentMap::orthogonality_residual() const { return cognate::orthogonality_residual(matrix_); }

Matrix procrustes(const Matrix& source_rows, const Matrix& target_rows) {
  if (source_rows.rows() != target_rows.rows() || source_rows.cols() != target_rows.cols()) {
    throw InputError("procrustes: point sets must have equal shape");
  }
  if (!source_rows.allFinite() || !target_rows.allFinite()) {
    throw NumericError("procrustes: non-finite input");
  }
  const Matrix cross = source_rows.transpose() * target_rows;
  Eigen::BDCSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NumericError("procrustes: SVD did not converge");
  Matrix w = svd.matrixU() * svd.matrixV().transpose();
  if (!w.allFinite()) throw NumericError("procrustes: SVD produced non-finite values");
  return w;
}

AlignmentMap learn_alignment(const EmbeddingSpace& source, const EmbeddingSpace& target,
                             const SeedLexicon& seeds, AlignmentFit* fit) {
  if (source.dim() != target.dim()) {
    throw InputError("dimension mismatch: " + source.language().code() + " has " +
                     std::to_string(source.dim()) + ", " + target.language().code() + " has " +
                     std::to_string(target.dim()));
  }
  if (!source.normalized() || !target.normalized()) {
    throw InputError("learn_alignment requires normalized spaces");
  }
  if (seeds.source_language != source.language() || seeds.target_language != target.language()) {
    throw InputError("seed lexicon languages do not match the spaces");
  }

  std::vector<std::pair<std::size_t, std::size_t>> rows;
  rows.reserve(seeds.pairs.size());
  for (const auto& [s, t] : seeds.pairs) {
    const auto si = source.find(s);
    const auto ti = target.find(t);
    if (si && ti) rows.emplace_back(*si, *ti);
  }
  const std::size_t dropped = seeds.pairs.size() - rows.size();
  if (rows.empty()) {
    throw InputError("no usable seed pairs for " + source.language().code() + " -> " +
                     target.language().code());
  }
  if (dropped > 0) {
    warn(source.language().code() + " -> " + target.language().code() + ": dropped " +
         std::to_string(dropped) + " unresolvable seed pairs");
  }
  if (rows.size() < source.dim()) {
    warn(source.language().code() + " -> " + target.language().code() + ": only " +
         std::to_string(rows.size()) + " seed pairs for dimension " +
         std::to_string(source.dim()));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(source.dim());
  Matrix x(n, d);
  Matrix y(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [si, ti] = rows[static_cast<std::size_t>(i)];
    x.row(i) = source.vectors().row(static_cast<Eigen::Index>(si));
    y.row(i) = target.vectors().row(static_cast<Eigen::Index>(ti));
  }
  if (fit) *fit = {rows.size(), dropped};
  return AlignmentMap(source.language(), target.language(), procrustes(x, y));
}

EmbeddingSpace apply_alignment(const EmbeddingSpace& space, const AlignmentMap& map) {
  if (space.language() != map.source_language()) {
    throw InputError("alignment maps " + map.source_language().code() + ", space is " +
                     space.language().code());
  }
  if (space.dim() != map.dim()) throw InputError("alignment dimension mismatch");
  RowMatrix mapped = space.vectors() * map.matrix();
  return EmbeddingSpace(space.language(), space.vocab(), std::move(mapped), space.normalized());
}

AlignmentMap parse_alignment_matrix(std::istream& in, LanguageTag source, LanguageTag target) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (text::read_line(in, line)) {
    ++line_no;
    const auto tokens = text::split_whitespace(line);
    if (tokens.empty()) continue;
    if (!rows.empty() && tokens.size() != rows.front().size()) {
      throw InputError("ragged alignment matrix: line " + std::to_string(line_no) + " has " +
                       std::to_string(tokens.size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
    }
    std::vector<double> row(tokens.size());
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (!text::parse_double(tokens[j], row[j])) {
        throw InputError("non-numeric alignment entry '" + std::string(tokens[j]) + "' at line " +
                         std::to_string(line_no));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("empty alignment matrix");
  if (rows.size() != rows.front().size()) {
    throw InputError("alignment matrix is " + std::to_string(rows.size()) + "x" +
                     std::to_string(rows.front().size()) + ", expected square");
  }
  const auto d = static_cast<Eigen::Index>(rows.size());
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  AlignmentMap map(std::move(source), std::move(target), std::move(m));
  if (const double r = map.orthogonality_residual(); r > kLoadedOrthogonalityTolerance) {
    warn("alignment matrix " + map.source_language().code() + " -> " +
         map.target_language().code() + " is not orthogonal (residual " + text::sig6(r) + ")");
  }
  return map;
}

AlignmentMap load_alignment_matrix(const std::filesystem::path& path, LanguageTag source,
                                   LanguageTag target) {
  auto in = text::open_input(path, "alignment matrix");
  try {
    return parse_alignment_matrix(in, std::move(source), std::move(target));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_alignment_matrix(const AlignmentMap& map, std::ostream& out) {
  const Matrix& m = map.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << text::exact(m(i, j));
    }
    out << '\n';
  }
}

std::pair<EmbeddingSpace, EmbeddingSpace> shared_space_pair(const EmbeddingSpace& a,
                                                            const EmbeddingSpace& b,
                                                            const AlignmentMap& map_a,
                                                            const AlignmentMap& map_b) {
  if (map_a.target_language() != map_b.target_language()) {
    throw InputError("pivot mismatch: " + map_a.target_language().code() + " vs " +
                     map_b.target_language().code());
  }
  if (a.dim() != b.dim()) throw InputError("shared space requires equal dimensions");
  return {normalize(apply_alignment(a, map_a)), normalize(apply_alignment(b, map_b))};
}

}  // namespace cognate
