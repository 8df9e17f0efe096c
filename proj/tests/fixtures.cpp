#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/QR>

namespace fixtures {

Eigen::MatrixXd random_orthogonal(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXd random_unit_rows(std::size_t rows, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
    m.row(i).normalize();
  }
  return m;
}

cognate::EmbeddingSpace make_space(const std::string& lang, const Eigen::MatrixXd& rows,
                                   bool normalize_rows, std::vector<std::string> names) {
  if (names.empty()) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) names.push_back("w" + std::to_string(i));
  }
  cognate::RowMatrix m = rows;
  cognate::EmbeddingSpace space(cognate::LanguageTag(lang), std::move(names), std::move(m), false);
  return normalize_rows ? cognate::normalize(space) : space;
}

cognate::EmbeddingSpace make_space(const std::string& lang,
                                   const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                                   bool normalize_rows) {
  std::vector<std::string> names;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().second.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    names.push_back(rows[i].first);
    for (std::size_t j = 0; j < rows[i].second.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i].second[j];
    }
  }
  return make_space(lang, m, normalize_rows, std::move(names));
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("cognate_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_embeddings(const std::filesystem::path& path, const std::vector<std::string>& words,
                      const Eigen::MatrixXd& rows) {
  std::ostringstream out;
  out.precision(17);
  out << rows.rows() << ' ' << rows.cols() << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out << words[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < rows.cols(); ++j) out << ' ' << rows(i, j);
    out << '\n';
  }
  write_file(path, out.str());
}

namespace {

double plain_cosine(const Eigen::MatrixXd& a, std::size_t i, const Eigen::MatrixXd& b, std::size_t j) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double x = a(static_cast<Eigen::Index>(i), k);
    const double y = b(static_cast<Eigen::Index>(j), k);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

}  // namespace

OracleVerdict brute_force_verdict(const Eigen::MatrixXd& lang1_rows, std::size_t c1,
                                  const Eigen::MatrixXd& lang2_rows, std::size_t c2) {
  OracleVerdict v;
  v.cognate_similarity = plain_cosine(lang1_rows, c1, lang2_rows, c2);
  v.best_index = c2;
  v.best_similarity = v.cognate_similarity;
  for (std::size_t i = 0; i < static_cast<std::size_t>(lang2_rows.rows()); ++i) {
    const double s = plain_cosine(lang1_rows, c1, lang2_rows, i);
    if (s > v.best_similarity || (s == v.best_similarity && v.best_index != c2 && i < v.best_index)) {
      v.best_similarity = s;
      v.best_index = i;
    }
  }
  v.is_false_friend = v.best_index != c2;
  v.falseness = v.is_false_friend ? v.best_similarity - v.cognate_similarity : 0.0;
  return v;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace fixtures
