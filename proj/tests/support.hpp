#pragma once

// Test helpers and brute-force oracles. The oracles here deliberately share
// no code with the library's search routines.

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "upb/model.hpp"
#include "upb/search.hpp"

namespace upb::oracles {

inline PartyLayout layout(int s, std::vector<std::vector<Vertex>> regions, std::vector<std::pair<int, int>> pairs = {}) {
  return PartyLayout(s, std::move(regions), pairs);
}

inline PartyLayout singletons(int s, std::vector<std::pair<int, int>> pairs) {
  std::vector<std::vector<Vertex>> regions;
  for (Vertex v = 0; v < s; ++v) regions.push_back({v});
  return layout(s, std::move(regions), std::move(pairs));
}

/// Random layout: random set partition, then a random partial pairing.
/// With `all_paired` the region count is forced even and every region paired.
inline PartyLayout random_layout(int s, std::mt19937_64& rng, bool all_paired = false) {
  std::vector<std::vector<Vertex>> regions;
  for (Vertex v = 0; v < s; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, regions.size());
    const std::size_t r = pick(rng);
    if (r == regions.size())
      regions.push_back({v});
    else
      regions[r].push_back(v);
  }
  if (all_paired && regions.size() % 2 == 1) {
    if (regions.size() == 1) {
      if (regions[0].size() < 2) return layout(s, std::move(regions));
      regions.push_back({regions[0].back()});
      regions[0].pop_back();
    } else {
      auto last = regions.back();
      regions.pop_back();
      regions[0].insert(regions[0].end(), last.begin(), last.end());
    }
  }
  std::vector<int> idx(regions.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i + 1 < idx.size(); i += 2)
    if (all_paired || rng() % 3 != 0) pairs.emplace_back(idx[i], idx[i + 1]);
  return layout(s, std::move(regions), std::move(pairs));
}

inline Configuration random_configuration(int s, int p, std::mt19937_64& rng, bool all_paired = false) {
  std::vector<PartyLayout> parties;
  for (int j = 0; j < p; ++j) parties.push_back(random_layout(s, rng, all_paired));
  return Configuration(s, std::move(parties));
}

/// Every way of choosing one region or nothing per party; true if some choice
/// covers all states.
inline bool oracle_extendible(const Configuration& c) {
  const int p = c.num_parties();
  std::vector<int> choice(static_cast<std::size_t>(p), -1);
  for (;;) {
    VertexMask m = 0;
    for (int j = 0; j < p; ++j)
      if (choice[j] >= 0) m |= c.party(j).region_mask(choice[j]);
    if (m == full_mask(c.num_states())) return true;
    int j = 0;
    while (j < p && ++choice[j] == c.party(j).region_count()) choice[j++] = -1;
    if (j == p) return false;
  }
}

/// Most edges any partial pairing of the given region sizes produces, by
/// enumerating every pairing.
inline int oracle_pairing_edges(std::vector<int> sizes) {
  std::function<int(std::vector<int>&)> go = [&](std::vector<int>& rest) -> int {
    if (rest.empty()) return 0;
    const int first = rest.back();
    rest.pop_back();
    int best = go(rest);  // leave `first` unpaired
    for (std::size_t i = 0; i < rest.size(); ++i) {
      std::vector<int> without = rest;
      const int partner = without[i];
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
      best = std::max(best, first * partner + go(without));
    }
    rest.push_back(first);
    return best;
  };
  return go(sizes);
}

/// Integer partitions of n, parts in non-increasing order.
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> go = [&](int left, int cap) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(left, cap); part >= 1; --part) {
      cur.push_back(part);
      go(left - part, part);
      cur.pop_back();
    }
  };
  go(n, n);
  return out;
}

/// Every layout on s states: each set partition with each partial pairing.
inline std::vector<PartyLayout> all_layouts(int s) {
  std::vector<PartyLayout> out;
  std::vector<std::vector<Vertex>> regions;
  std::function<void(Vertex)> partition = [&](Vertex v) {
    if (v == s) {
      const int n = static_cast<int>(regions.size());
      std::vector<std::pair<int, int>> pairs;
      std::vector<bool> used(static_cast<std::size_t>(n), false);
      std::function<void(int)> pairing = [&](int r) {
        while (r < n && used[r]) ++r;
        if (r == n) {
          out.push_back(layout(s, regions, pairs));
          return;
        }
        used[r] = true;
        pairing(r + 1);
        for (int q = r + 1; q < n; ++q) {
          if (used[q]) continue;
          used[q] = true;
          pairs.emplace_back(r, q);
          pairing(r + 1);
          pairs.pop_back();
          used[q] = false;
        }
        used[r] = false;
      };
      pairing(0);
      return;
    }
    for (std::size_t r = 0, n = regions.size(); r < n; ++r) {
      regions[r].push_back(v);
      partition(v + 1);
      regions[r].pop_back();
    }
    regions.push_back({v});
    partition(v + 1);
    regions.pop_back();
  };
  partition(0);
  return out;
}

/// Smallest s <= s_max with a UPB on p parties, trying every tuple of
/// layouts with no symmetry reduction at all.
inline std::optional<int> oracle_min_upb(int p, int s_max) {
  for (int s = 1; s <= s_max; ++s) {
    const auto layouts = all_layouts(s);
    std::vector<std::size_t> pick(static_cast<std::size_t>(p), 0);
    for (;;) {
      std::vector<PartyLayout> parties;
      for (auto i : pick) parties.push_back(layouts[i]);
      Configuration c(s, std::move(parties));
      if (is_product_basis(c).is_basis && !oracle_extendible(c)) return s;
      int j = 0;
      while (j < p && ++pick[j] == layouts.size()) pick[j++] = 0;
      if (j == p) break;
    }
  }
  return std::nullopt;
}

/// Any choice of at most one pair per party covering chosen + excess states.
inline bool oracle_violates(const PairSystem& ps) {
  const std::size_t m = ps.parties.size();
  std::vector<int> choice(m, -1);
  for (;;) {
    VertexMask covered = 0;
    int chosen = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (choice[j] >= 0) {
        const Edge& e = ps.parties[j][choice[j]];
        covered |= (VertexMask{1} << e.a) | (VertexMask{1} << e.b);
        ++chosen;
      }
    if (chosen > 0 && std::popcount(covered) >= chosen + ps.excess) return true;
    std::size_t j = 0;
    while (j < m && ++choice[j] == static_cast<int>(ps.parties[j].size())) choice[j++] = -1;
    if (j == m) return false;
  }
}

}  // namespace upb::oracles
