#pragma once

// The 4k+4 state UPB on 4k qubits (k >= 2).
//
// Vertices are v_i, w_i, x_i, y_i for 0 <= i <= k with ids
//   v_i -> i, w_i -> (k+1)+i, x_i -> (2k+2)+i, y_i -> (3k+3)+i.
// Parties 0..2 carry the bipartite graphs B_{0,k}, B_{1,k}, B_{2,k} on one
// qubit each; parties 2j-3 and 2j-2 jointly carry B_{j,k} for 3 <= j <= k;
// the last 2k+1 parties split the two K_{2k+2} blocks {v,w} and {x,y} into
// perfect matchings.

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "upb/certificate.hpp"
#include "upb/graph.hpp"
#include "upb/model.hpp"
#include "upb/states.hpp"

namespace upb {

enum class Role { v, w, x, y };

inline Vertex role_vertex(Role role, int i, int k) {
  if (k < 1 || i < 0 || i > k) throw std::out_of_range("role index outside [0, k]");
  return static_cast<int>(role) * (k + 1) + i;
}

inline int mod_k1(int i, int k) { return ((i % (k + 1)) + (k + 1)) % (k + 1); }

/// Edges v_i, w_i -- x_{i+j}, y_{i+j} (indices mod k+1).
inline EdgeSet b_graph_edges(int j, int k) {
  if (k < 1) throw std::invalid_argument("b_graph_edges: k must be at least 1");
  if (j < 0 || j > k) throw std::invalid_argument("b_graph_edges: j must lie in [0, k]");
  EdgeSet g(4 * k + 4);
  for (int i = 0; i <= k; ++i) {
    const int t = mod_k1(i + j, k);
    for (Role left : {Role::v, Role::w})
      for (Role right : {Role::x, Role::y}) g.insert(role_vertex(left, i, k), role_vertex(right, t, k));
  }
  return g;
}

/// A party layout with the basis labels of its regions.
struct PartyFragment {
  PartyLayout layout;
  std::vector<RegionLabel> labels;
};

/// Regions {v_i, w_i} (basis i, plus) and {x_i, y_i} (basis i-j, perp);
/// {v_i, w_i} is paired with {x_{i+j}, y_{i+j}}.
inline PartyFragment single_qubit_party(int j, int k) {
  if (k < 1) throw std::invalid_argument("single_qubit_party: k must be at least 1");
  if (j < 0 || j > 2) throw std::invalid_argument("single_qubit_party: j must be 0, 1 or 2");
  std::vector<std::vector<Vertex>> regions;
  std::vector<RegionLabel> labels;
  for (int i = 0; i <= k; ++i) {
    regions.push_back({role_vertex(Role::v, i, k), role_vertex(Role::w, i, k)});
    labels.push_back({i, Side::plus});
  }
  for (int i = 0; i <= k; ++i) {
    regions.push_back({role_vertex(Role::x, i, k), role_vertex(Role::y, i, k)});
    labels.push_back({mod_k1(i - j, k), Side::perp});
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= k; ++i) pairs.emplace_back(i, (k + 1) + mod_k1(i + j, k));
  return {PartyLayout(4 * k + 4, std::move(regions), pairs), std::move(labels)};
}

namespace detail {

inline std::vector<std::vector<Vertex>> singleton_regions(int n) {
  std::vector<std::vector<Vertex>> regions;
  for (Vertex v = 0; v < n; ++v) regions.push_back({v});
  return regions;
}

}  // namespace detail

/// Two singleton-region parties whose union of edges is B_{j,k}:
///   first:  v_i = b_i,        w_i = b_{i+k+1},  x_i = b_{i-j}^perp,        y_i = b_{i-j+k+1}^perp
///   second: v_i = b_i,        w_i = b_{i+k+1},  x_i = b_{i-j+k+1}^perp,    y_i = b_{i-j}^perp
inline std::array<PartyFragment, 2> two_qubit_parties(int j, int k) {
  if (j < 3 || j > k) throw std::invalid_argument("two_qubit_parties: j must lie in [3, k]");
  const int s = 4 * k + 4;
  std::array<PartyFragment, 2> out;
  for (int half = 0; half < 2; ++half) {
    std::vector<RegionLabel> labels(static_cast<std::size_t>(s));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i <= k; ++i) {
      const int back = mod_k1(i - j, k);
      const int fwd = mod_k1(i + j, k);
      labels[role_vertex(Role::v, i, k)] = {i, Side::plus};
      labels[role_vertex(Role::w, i, k)] = {i + k + 1, Side::plus};
      labels[role_vertex(Role::x, i, k)] = {half == 0 ? back : back + k + 1, Side::perp};
      labels[role_vertex(Role::y, i, k)] = {half == 0 ? back + k + 1 : back, Side::perp};
      const Role v_mate = half == 0 ? Role::x : Role::y;
      const Role w_mate = half == 0 ? Role::y : Role::x;
      pairs.emplace_back(role_vertex(Role::v, i, k), role_vertex(v_mate, fwd, k));
      pairs.emplace_back(role_vertex(Role::w, i, k), role_vertex(w_mate, fwd, k));
    }
    std::sort(pairs.begin(), pairs.end());
    out[half] = {PartyLayout(s, detail::singleton_regions(s), pairs), std::move(labels)};
  }
  return out;
}

/// Factor t of the round-robin 1-factorization applied to both K_{2k+2}
/// blocks forms party t. Matched pair r of a party (block-one pairs first)
/// uses basis r with the lower vertex on the plus side.
inline std::vector<PartyFragment> matching_parties(int k) {
  if (k < 1) throw std::invalid_argument("matching_parties: k must be at least 1");
  const int block = 2 * k + 2;
  const int s = 2 * block;
  const auto factors = one_factorize_complete(block);
  std::vector<PartyFragment> out;
  for (const Matching& f : factors) {
    std::vector<std::pair<int, int>> pairs;
    std::vector<RegionLabel> labels(static_cast<std::size_t>(s));
    int r = 0;
    for (int offset : {0, block})
      for (const Edge& e : f.pairs) {
        pairs.emplace_back(offset + e.a, offset + e.b);
        labels[offset + e.a] = {r, Side::plus};
        labels[offset + e.b] = {r, Side::perp};
        ++r;
      }
    std::sort(pairs.begin(), pairs.end());
    out.push_back({PartyLayout(s, detail::singleton_regions(s), pairs), std::move(labels)});
  }
  return out;
}

/// UPB of 4k+4 states on 4k qubits.
inline Certificate construct_upb_4k4(int k) {
  if (k < 2) throw std::invalid_argument("construct_upb_4k4: k must be at least 2");
  std::vector<PartyFragment> frags;
  for (int j = 0; j <= 2; ++j) frags.push_back(single_qubit_party(j, k));
  for (int j = 3; j <= k; ++j)
    for (auto& f : two_qubit_parties(j, k)) frags.push_back(std::move(f));
  for (auto& f : matching_parties(k)) frags.push_back(std::move(f));

  std::vector<PartyLayout> parties;
  SymbolicAssignment a;
  for (auto& f : frags) {
    parties.push_back(std::move(f.layout));
    a.parties.push_back(std::move(f.labels));
  }
  return {Configuration(4 * k + 4, std::move(parties)), std::move(a),
          "4k+4 construction, k=" + std::to_string(k), std::nullopt};
}

}  // namespace upb
