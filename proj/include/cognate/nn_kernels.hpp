#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cognate/embedding_store.hpp"

namespace cognate::kernels {

struct ScoredRow {
  double similarity = 0.0;
  std::size_t index = 0;
};

// Strict ranking order: higher similarity first, then lower row index.
inline bool ranks_before(const ScoredRow& a, const ScoredRow& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.index < b.index;
}

// Dot product of one row with the query. Both kernels call this so that
// every row score is bit-identical regardless of how rows are partitioned.
double row_dot(const RowMatrix& rows, std::size_t row, std::span<const double> query);

// Reference implementation: score every row, then partial sort.
std::vector<ScoredRow> top_k_serial(const RowMatrix& rows, std::span<const double> query,
                                    std::size_t k);

// OpenMP scan: each thread keeps a bounded heap over a contiguous chunk, the
// per-thread candidates are merged with ranks_before. Identical output to
// top_k_serial for any thread count.
std::vector<ScoredRow> top_k_parallel(const RowMatrix& rows, std::span<const double> query,
                                      std::size_t k);

// Same contract as top_k_parallel with an explicit chunk count, used to test
// partition independence.
std::vector<ScoredRow> top_k_chunked(const RowMatrix& rows, std::span<const double> query,
                                     std::size_t k, std::size_t chunks);

}  // namespace cognate::kernels
