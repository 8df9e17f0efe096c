#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "cognate/divergence.hpp"
#include "cognate/language.hpp"

namespace cognate {

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> entries;
};

// 1 − similarity with a zero diagonal. Rejects asymmetry beyond 1e-9.
DistanceMatrix to_distance(const SimilarityMatrix& similarity);
DistanceMatrix to_distance(const std::vector<std::string>& labels,
                           const std::vector<std::vector<double>>& similarity);

void validate(const DistanceMatrix& d);

class DendrogramNode {
 public:
  static std::unique_ptr<DendrogramNode> leaf(std::string label);
  static std::unique_ptr<DendrogramNode> join(std::unique_ptr<DendrogramNode> a,
                                              std::unique_ptr<DendrogramNode> b, double height);

  bool is_leaf() const { return !left_; }
  const std::string& label() const { return label_; }
  const DendrogramNode* left() const { return left_.get(); }
  const DendrogramNode* right() const { return right_.get(); }
  double height() const { return height_; }
  std::size_t size() const { return size_; }
  // Smallest leaf label below this node.
  const std::string& canonical_label() const { return canonical_; }

  std::vector<std::string> leaves() const;

 private:
  std::string label_;
  std::string canonical_;
  std::unique_ptr<DendrogramNode> left_;
  std::unique_ptr<DendrogramNode> right_;
  double height_ = 0.0;
  std::size_t size_ = 1;
};

struct MergeStep {
  std::size_t step = 0;
  std::vector<std::string> cluster_a;
  std::vector<std::string> cluster_b;
  double height = 0.0;
};

struct Dendrogram {
  std::unique_ptr<DendrogramNode> root;
  std::vector<MergeStep> merges;
};

// Average-linkage agglomeration. Heights are half the merge distance. Equal
// distances merge the pair with the lexicographically smallest
// (min label, max label) of the clusters' canonical labels.
Dendrogram upgma(const DistanceMatrix& d);

// Children ordered by canonical label, branch lengths with 4 decimals.
std::string to_newick(const DendrogramNode& root);

// 2 × height of the lowest common ancestor.
double cophenetic_distance(const DendrogramNode& root, const std::string& a, const std::string& b);

}  // namespace cognate
