#pragma once

// Shared helpers for the unit and acceptance suites. Nothing here calls the
// code under test except to construct inputs.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cognate/alignment.hpp"
#include "cognate/embedding_store.hpp"

namespace fixtures {

// Haar-ish random orthogonal matrix from the QR factorization of a Gaussian
// matrix (sign-corrected so the distribution does not favour R's signs).
Eigen::MatrixXd random_orthogonal(std::size_t dim, std::mt19937_64& rng);

Eigen::MatrixXd random_unit_rows(std::size_t rows, std::size_t dim, std::mt19937_64& rng);

// Space with words "w0".."w{n-1}" (or the given names) and the given rows.
cognate::EmbeddingSpace make_space(const std::string& lang, const Eigen::MatrixXd& rows,
                                   bool normalize_rows = true,
                                   std::vector<std::string> names = {});

cognate::EmbeddingSpace make_space(const std::string& lang,
                                   const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                                   bool normalize_rows = true);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Text dump in the embedding file format with full precision.
void write_embeddings(const std::filesystem::path& path, const std::vector<std::string>& words,
                      const Eigen::MatrixXd& rows);

struct OracleVerdict {
  bool is_false_friend = false;
  std::size_t best_index = 0;
  double cognate_similarity = 0.0;
  double best_similarity = 0.0;
  double falseness = 0.0;
};

// Brute-force false friend verdict: scans every lang2 row, computing cosine
// with explicit norms, and takes the argmax (c2 wins ties, then lower rows).
OracleVerdict brute_force_verdict(const Eigen::MatrixXd& lang1_rows, std::size_t c1,
                                  const Eigen::MatrixXd& lang2_rows, std::size_t c2);

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace fixtures
