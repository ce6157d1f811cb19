#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "scig/errors.hpp"

namespace scig {

struct Edge {
  int a = 0;  // 0-based node, a < b
  int b = 0;
  double weight = 0.0;
};

/// Undirected, loop-free graph over p nodes with per-edge weights.
/// Edges are kept sorted by (a, b).
class EdgeSet {
 public:
  explicit EdgeSet(int p = 0) : p_(p) {
    require(p >= 0, ErrorKind::invalid_input, "node count must be >= 0");
  }

  int nodes() const { return p_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }

  void add(int q, int l, double weight = 1.0) {
    require(q != l, ErrorKind::invalid_input, "self-loops are not allowed");
    require(q >= 0 && l >= 0 && q < p_ && l < p_, ErrorKind::invalid_input, "edge endpoint out of range");
    Edge e{std::min(q, l), std::max(q, l), weight};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e, less);
    if (it != edges_.end() && it->a == e.a && it->b == e.b) {
      it->weight = weight;
      return;
    }
    edges_.insert(it, e);
  }

  bool contains(int q, int l) const {
    if (q == l) return false;
    Edge e{std::min(q, l), std::max(q, l), 0.0};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e, less);
    return it != edges_.end() && it->a == e.a && it->b == e.b;
  }

  double max_weight() const {
    double top = 0.0;
    for (const auto& e : edges_) top = std::max(top, e.weight);
    return top;
  }

  /// Copy with weights scaled so the largest is 1.
  EdgeSet normalized() const {
    EdgeSet out = *this;
    const double top = max_weight();
    if (top > 0.0)
      for (auto& e : out.edges_) e.weight /= top;
    return out;
  }

  /// Same node pairs, ignoring weights.
  bool same_pairs(const EdgeSet& other) const {
    if (p_ != other.p_ || edges_.size() != other.edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].a != other.edges_[i].a || edges_[i].b != other.edges_[i].b) return false;
    return true;
  }

 private:
  static bool less(const Edge& x, const Edge& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); }

  int p_;
  std::vector<Edge> edges_;
};

}  // namespace scig
