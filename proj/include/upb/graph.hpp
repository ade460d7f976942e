#pragma once

// Vertex and edge-set arithmetic over a fixed universe of labeled vertices.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace upb {

using Vertex = int;

/// Unordered vertex pair, always stored with the smaller endpoint first.
struct Edge {
  Vertex a = 0;
  Vertex b = 0;

  constexpr Edge() = default;
  constexpr Edge(Vertex u, Vertex v) : a(std::min(u, v)), b(std::max(u, v)) {}

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Set of unordered vertex pairs over the universe [0, size()).
///
/// Stored as an adjacency bit matrix; iteration order is lexicographic on
/// (smaller endpoint, larger endpoint), so equality and serialization are exact.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(int universe_size)
      : n_(check_size(universe_size)), words_(word_count(n_)), bits_(static_cast<std::size_t>(n_) * words_, 0) {}

  EdgeSet(int universe_size, std::span<const Edge> edges) : EdgeSet(universe_size) {
    for (const Edge& e : edges) insert(e.a, e.b);
  }

  int universe_size() const noexcept { return n_; }

  /// Inserts {u, v}; returns true if the edge was new.
  bool insert(Vertex u, Vertex v) {
    check_pair(u, v);
    if (contains(u, v)) return false;
    set_bit(u, v);
    set_bit(v, u);
    ++count_;
    return true;
  }

  bool erase(Vertex u, Vertex v) {
    check_pair(u, v);
    if (!contains(u, v)) return false;
    clear_bit(u, v);
    clear_bit(v, u);
    --count_;
    return true;
  }

  bool contains(Vertex u, Vertex v) const noexcept {
    if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) return false;
    return (bits_[row(u) + static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1u;
  }
  bool contains(const Edge& e) const noexcept { return contains(e.a, e.b); }

  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  int degree(Vertex v) const {
    int d = 0;
    for (std::size_t w = 0; w < words_; ++w) d += std::popcount(bits_[row(v) + w]);
    return d;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(count_);
    for (Vertex a = 0; a < n_; ++a)
      for (Vertex b = a + 1; b < n_; ++b)
        if (contains(a, b)) out.emplace_back(a, b);
    return out;
  }

  /// In-place union; universes must agree.
  EdgeSet& operator|=(const EdgeSet& other) {
    require_same_universe(other);
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    recount();
    return *this;
  }

  /// Edges of this set that are absent from `other`.
  EdgeSet minus(const EdgeSet& other) const {
    require_same_universe(other);
    EdgeSet out = *this;
    for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= ~other.bits_[i];
    out.recount();
    return out;
  }

  std::size_t intersection_size(const EdgeSet& other) const {
    require_same_universe(other);
    std::size_t total = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) total += std::popcount(bits_[i] & other.bits_[i]);
    return total / 2;
  }

  friend bool operator==(const EdgeSet& x, const EdgeSet& y) noexcept {
    return x.n_ == y.n_ && x.bits_ == y.bits_;
  }

 private:
  static int check_size(int n) {
    if (n < 0) throw std::invalid_argument("edge set universe size must be non-negative");
    return n;
  }
  static std::size_t word_count(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }
  std::size_t row(Vertex v) const noexcept { return static_cast<std::size_t>(v) * words_; }

  void check_pair(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_)
      throw std::out_of_range("edge endpoint outside universe of size " + std::to_string(n_));
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  }
  void require_same_universe(const EdgeSet& other) const {
    if (other.n_ != n_)
      throw std::invalid_argument("edge sets over different universes (" + std::to_string(n_) + " vs " +
                                  std::to_string(other.n_) + ")");
  }
  void set_bit(Vertex u, Vertex v) { bits_[row(u) + static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (v % 64); }
  void clear_bit(Vertex u, Vertex v) {
    bits_[row(u) + static_cast<std::size_t>(v) / 64] &= ~(std::uint64_t{1} << (v % 64));
  }
  void recount() {
    std::size_t total = 0;
    for (std::uint64_t w : bits_) total += std::popcount(w);
    count_ = total / 2;
  }

  int n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::size_t count_ = 0;
};

/// A set of pairwise-disjoint edges on an even universe.
struct Matching {
  int universe_size = 0;
  std::vector<Edge> pairs;

  bool is_perfect() const {
    if (universe_size % 2 != 0 || static_cast<int>(pairs.size()) * 2 != universe_size) return false;
    std::vector<bool> seen(static_cast<std::size_t>(universe_size), false);
    for (const Edge& e : pairs) {
      if (e.a < 0 || e.b >= universe_size || e.a == e.b) return false;
      if (seen[e.a] || seen[e.b]) return false;
      seen[e.a] = seen[e.b] = true;
    }
    return true;
  }

  EdgeSet to_edge_set() const { return EdgeSet(universe_size, pairs); }

  friend bool operator==(const Matching&, const Matching&) = default;
};

inline EdgeSet complete_graph(int n) {
  if (n < 0) throw std::invalid_argument("complete_graph: n must be non-negative");
  EdgeSet g(n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) g.insert(a, b);
  return g;
}

/// K_{|left|,|right|} between two disjoint vertex lists.
inline EdgeSet complete_bipartite(int universe_size, std::span<const Vertex> left, std::span<const Vertex> right) {
  EdgeSet g(universe_size);
  for (Vertex a : left)
    for (Vertex b : right) g.insert(a, b);
  return g;
}

inline EdgeSet union_edges(std::span<const EdgeSet> parts) {
  if (parts.empty()) return EdgeSet(0);
  EdgeSet out(parts.front().universe_size());
  for (const EdgeSet& p : parts) out |= p;
  return out;
}

inline EdgeSet complement_edges(const EdgeSet& g) { return complete_graph(g.universe_size()).minus(g); }

/// Two disjoint copies of K_{2k+2}: vertices [0, 2k+2) and [2k+2, 4k+4).
inline EdgeSet double_complete_graph(int k) {
  if (k < 1) throw std::invalid_argument("double_complete_graph: k must be at least 1");
  const int block = 2 * k + 2;
  EdgeSet g(2 * block);
  for (int offset : {0, block})
    for (Vertex a = 0; a < block; ++a)
      for (Vertex b = a + 1; b < block; ++b) g.insert(offset + a, offset + b);
  return g;
}

/// Round-robin 1-factorization of K_n (n even): vertex n-1 stays fixed while
/// 0..n-2 rotate. Factor r pairs r with n-1 and (r+i, r-i) mod (n-1) for
/// i = 1..n/2-1. Pairs inside each factor are sorted.
inline std::vector<Matching> one_factorize_complete(int n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("one_factorize_complete: n must be even and at least 2");
  const int m = n - 1;
  std::vector<Matching> factors;
  factors.reserve(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    Matching f{n, {}};
    f.pairs.emplace_back(r, n - 1);
    for (int i = 1; i < n / 2; ++i) f.pairs.emplace_back((r + i) % m, ((r - i) % m + m) % m);
    std::sort(f.pairs.begin(), f.pairs.end());
    factors.push_back(std::move(f));
  }
  return factors;
}

}  // namespace upb
