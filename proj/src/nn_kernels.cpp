#include "cognate/nn_kernels.hpp"

#include <algorithm>
#include <queue>

#include <omp.h>

namespace cognate::kernels {

namespace {

struct WorstOnTop {
  bool operator()(const ScoredRow& a, const ScoredRow& b) const { return ranks_before(a, b); }
};

using BoundedHeap = std::priority_queue<ScoredRow, std::vector<ScoredRow>, WorstOnTop>;

void scan_range(const RowMatrix& rows, std::span<const double> query, std::size_t k,
                std::size_t begin, std::size_t end, std::vector<ScoredRow>& out) {
  BoundedHeap heap;
  for (std::size_t i = begin; i < end; ++i) {
    const ScoredRow candidate{row_dot(rows, i, query), i};
    if (heap.size() < k) {
      heap.push(candidate);
    } else if (ranks_before(candidate, heap.top())) {
      heap.pop();
      heap.push(candidate);
    }
  }
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
}

std::vector<ScoredRow> merge(std::vector<std::vector<ScoredRow>>& parts, std::size_t k) {
  std::vector<ScoredRow> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    ranks_before);
  all.resize(k);
  return all;
}

}  // namespace

double row_dot(const RowMatrix& rows, std::size_t row, std::span<const double> query) {
  const double* r = rows.data() + row * static_cast<std::size_t>(rows.cols());
  double sum = 0.0;
  for (std::size_t j = 0; j < query.size(); ++j) sum += r[j] * query[j];
  return sum;
}

std::vector<ScoredRow> top_k_serial(const RowMatrix& rows, std::span<const double> query,
                                    std::size_t k) {
  const auto n = static_cast<std::size_t>(rows.rows());
  std::vector<ScoredRow> scored(n);
  for (std::size_t i = 0; i < n; ++i) scored[i] = {row_dot(rows, i, query), i};
  k = std::min(k, n);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    ranks_before);
  scored.resize(k);
  return scored;
}

std::vector<ScoredRow> top_k_chunked(const RowMatrix& rows, std::span<const double> query,
                                     std::size_t k, std::size_t chunks) {
  const auto n = static_cast<std::size_t>(rows.rows());
  chunks = std::clamp<std::size_t>(chunks, 1, std::max<std::size_t>(n, 1));
  std::vector<std::vector<ScoredRow>> parts(chunks);
  const std::size_t step = (n + chunks - 1) / chunks;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t begin = std::min(n, static_cast<std::size_t>(c) * step);
    const std::size_t end = std::min(n, begin + step);
    scan_range(rows, query, k, begin, end, parts[static_cast<std::size_t>(c)]);
  }
  return merge(parts, k);
}

std::vector<ScoredRow> top_k_parallel(const RowMatrix& rows, std::span<const double> query,
                                      std::size_t k) {
  const auto n = static_cast<std::size_t>(rows.rows());
  // Small scans are not worth a thread team.
  if (n * static_cast<std::size_t>(rows.cols()) < (1u << 15)) return top_k_serial(rows, query, k);
  return top_k_chunked(rows, query, k, static_cast<std::size_t>(omp_get_max_threads()));
}

}  // namespace cognate::kernels
