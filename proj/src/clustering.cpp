#include "cognate/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "cognate/errors.hpp"
#include "cognate/text_io.hpp"

namespace cognate {

namespace {

constexpr double kSimilarityAsymmetryTolerance = 1e-9;
constexpr double kDistanceAsymmetryTolerance = 1e-12;

}  // namespace

DistanceMatrix to_distance(const std::vector<std::string>& labels,
                           const std::vector<std::vector<double>>& similarity) {
  const std::size_t n = labels.size();
  if (similarity.size() != n) throw InputError("similarity matrix size does not match labels");
  for (const auto& row : similarity) {
    if (row.size() != n) throw InputError("similarity matrix must be square");
  }
  DistanceMatrix d{labels, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(similarity[i][i]) ||
        std::abs(similarity[i][i] - 1.0) > kSimilarityAsymmetryTolerance) {
      throw InputError("similarity matrix diagonal must be 1 (" + labels[i] + ")");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = similarity[i][j];
      const double b = similarity[j][i];
      if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InputError("similarity matrix has a missing entry for " + labels[i] + "-" + labels[j]);
      }
      if (std::abs(a - b) > kSimilarityAsymmetryTolerance) {
        throw InputError("similarity matrix is asymmetric at " + labels[i] + "-" + labels[j]);
      }
      d.entries[i][j] = d.entries[j][i] = 1.0 - a;
    }
  }
  validate(d);
  return d;
}

DistanceMatrix to_distance(const SimilarityMatrix& similarity) {
  std::vector<std::string> labels;
  for (const auto& tag : similarity.labels) labels.push_back(tag.code());
  return to_distance(labels, similarity.values);
}

void validate(const DistanceMatrix& d) {
  const std::size_t n = d.labels.size();
  if (d.entries.size() != n) throw InputError("distance matrix size does not match labels");
  std::set<std::string> unique(d.labels.begin(), d.labels.end());
  if (unique.size() != n) throw InputError("distance matrix labels must be unique");
  for (std::size_t i = 0; i < n; ++i) {
    if (d.entries[i].size() != n) throw InputError("distance matrix must be square");
    if (d.entries[i][i] != 0.0) throw InputError("distance matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = d.entries[i][j];
      if (!std::isfinite(v) || v < 0.0) {
        throw InputError("distance matrix entries must be finite and non-negative");
      }
      if (std::abs(v - d.entries[j][i]) > kDistanceAsymmetryTolerance) {
        throw InputError("distance matrix is asymmetric at " + d.labels[i] + "-" + d.labels[j]);
      }
    }
  }
}

std::unique_ptr<DendrogramNode> DendrogramNode::leaf(std::string label) {
  auto node = std::make_unique<DendrogramNode>();
  node->label_ = std::move(label);
  node->canonical_ = node->label_;
  return node;
}

std::unique_ptr<DendrogramNode> DendrogramNode::join(std::unique_ptr<DendrogramNode> a,
                                                     std::unique_ptr<DendrogramNode> b,
                                                     double height) {
  auto node = std::make_unique<DendrogramNode>();
  if (b->canonical_ < a->canonical_) std::swap(a, b);
  node->canonical_ = a->canonical_;
  node->size_ = a->size_ + b->size_;
  // Rounding in the averages can leave a parent a hair below a child.
  node->height_ = std::max({height, a->height_, b->height_});
  node->left_ = std::move(a);
  node->right_ = std::move(b);
  return node;
}

std::vector<std::string> DendrogramNode::leaves() const {
  if (is_leaf()) return {label_};
  auto out = left_->leaves();
  auto more = right_->leaves();
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

Dendrogram upgma(const DistanceMatrix& d) {
  validate(d);
  const std::size_t n = d.labels.size();
  if (n < 2) throw InputError("upgma needs at least two labels");

  struct Cluster {
    std::unique_ptr<DendrogramNode> node;
    std::vector<std::size_t> members;  // sorted by label
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i) active.push_back({DendrogramNode::leaf(d.labels[i]), {i}});

  // Mean over all cross pairs, summed in label order so the value does not
  // depend on input order or merge history.
  auto linkage = [&](const Cluster& a, const Cluster& b) {
    double sum = 0.0;
    for (std::size_t i : a.members) {
      for (std::size_t j : b.members) sum += d.entries[i][j];
    }
    return sum / static_cast<double>(a.members.size() * b.members.size());
  };
  auto pair_key = [](const Cluster& a, const Cluster& b) {
    const auto& x = a.node->canonical_label();
    const auto& y = b.node->canonical_label();
    return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
  };

  Dendrogram result;
  while (active.size() > 1) {
    std::size_t best_i = 0;
    std::size_t best_j = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double dist = linkage(active[i], active[j]);
        if (dist < best ||
            (dist == best && pair_key(active[i], active[j]) < pair_key(active[best_i], active[best_j]))) {
          best = dist;
          best_i = i;
          best_j = j;
        }
      }
    }
    Cluster a = std::move(active[best_i]);
    Cluster b = std::move(active[best_j]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));

    MergeStep step;
    step.step = result.merges.size() + 1;
    step.cluster_a = a.node->leaves();
    step.cluster_b = b.node->leaves();
    std::sort(step.cluster_a.begin(), step.cluster_a.end());
    std::sort(step.cluster_b.begin(), step.cluster_b.end());
    if (step.cluster_b.front() < step.cluster_a.front()) std::swap(step.cluster_a, step.cluster_b);

    Cluster merged;
    merged.members = a.members;
    merged.members.insert(merged.members.end(), b.members.begin(), b.members.end());
    std::sort(merged.members.begin(), merged.members.end(),
              [&](std::size_t x, std::size_t y) { return d.labels[x] < d.labels[y]; });
    merged.node = DendrogramNode::join(std::move(a.node), std::move(b.node), best / 2.0);
    step.height = merged.node->height();
    result.merges.push_back(std::move(step));
    active.push_back(std::move(merged));
  }
  result.root = std::move(active.front().node);
  return result;
}

namespace {

void write_newick(const DendrogramNode& node, std::string& out) {
  if (node.is_leaf()) {
    out += node.label();
    return;
  }
  out += '(';
  write_newick(*node.left(), out);
  out += ':' + text::fixed(node.height() - node.left()->height(), 4) + ',';
  write_newick(*node.right(), out);
  out += ':' + text::fixed(node.height() - node.right()->height(), 4) + ')';
}

const DendrogramNode* lowest_common_ancestor(const DendrogramNode& node, const std::string& a,
                                             const std::string& b) {
  if (node.is_leaf()) return nullptr;
  for (const auto* child : {node.left(), node.right()}) {
    const auto leaves = child->leaves();
    const bool has_a = std::find(leaves.begin(), leaves.end(), a) != leaves.end();
    const bool has_b = std::find(leaves.begin(), leaves.end(), b) != leaves.end();
    if (has_a && has_b) return lowest_common_ancestor(*child, a, b);
  }
  return &node;
}

}  // namespace

std::string to_newick(const DendrogramNode& root) {
  std::string out;
  write_newick(root, out);
  out += ';';
  return out;
}

double cophenetic_distance(const DendrogramNode& root, const std::string& a, const std::string& b) {
  if (a == b) return 0.0;
  const auto leaves = root.leaves();
  for (const auto* label : {&a, &b}) {
    if (std::find(leaves.begin(), leaves.end(), *label) == leaves.end()) {
      throw InputError("label not in dendrogram: " + *label);
    }
  }
  return 2.0 * lowest_common_ancestor(root, a, b)->height();
}

}  // namespace cognate
