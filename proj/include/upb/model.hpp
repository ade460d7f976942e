#pragma once

// Combinatorial model of qubit product sets: each party partitions the states
// into regions of equal local vectors, and pairs regions whose vectors are
// orthogonal. A paired region pair contributes a complete bipartite block of
// orthogonality edges on that party.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "upb/graph.hpp"

namespace upb {

/// Region membership is tracked in 64-bit masks, which caps the state count.
inline constexpr int kMaxStates = 64;

using VertexMask = std::uint64_t;

inline VertexMask full_mask(int n) { return n >= 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1; }

inline VertexMask mask_of(std::span<const Vertex> vs) {
  VertexMask m = 0;
  for (Vertex v : vs) m |= VertexMask{1} << v;
  return m;
}

inline std::vector<Vertex> vertices_of(VertexMask m) {
  std::vector<Vertex> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

class InvalidConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One party's partition of the states into regions plus a partial pairing
/// of those regions. Region order is preserved as given.
class PartyLayout {
 public:
  PartyLayout() = default;

  PartyLayout(int num_states, std::vector<std::vector<Vertex>> regions, std::span<const std::pair<int, int>> pairs)
      : num_states_(num_states), regions_(std::move(regions)) {
    if (num_states < 1 || num_states > kMaxStates)
      throw InvalidConfiguration("party layout: state count must be in [1, " + std::to_string(kMaxStates) + "]");
    VertexMask seen = 0;
    masks_.reserve(regions_.size());
    region_of_.assign(static_cast<std::size_t>(num_states), -1);
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      auto& region = regions_[r];
      if (region.empty()) throw InvalidConfiguration("party layout: empty region " + std::to_string(r));
      std::sort(region.begin(), region.end());
      VertexMask m = 0;
      for (Vertex v : region) {
        if (v < 0 || v >= num_states)
          throw InvalidConfiguration("party layout: vertex " + std::to_string(v) + " outside [0, " +
                                     std::to_string(num_states) + ")");
        const VertexMask bit = VertexMask{1} << v;
        if ((seen | m) & bit)
          throw InvalidConfiguration("party layout: vertex " + std::to_string(v) + " appears in two regions");
        m |= bit;
        region_of_[v] = static_cast<int>(r);
      }
      seen |= m;
      masks_.push_back(m);
    }
    if (seen != full_mask(num_states)) throw InvalidConfiguration("party layout: regions do not cover every state");
    partner_.assign(regions_.size(), -1);
    for (auto [x, y] : pairs) {
      const int n = static_cast<int>(regions_.size());
      if (x < 0 || y < 0 || x >= n || y >= n)
        throw InvalidConfiguration("party layout: pairing references missing region");
      if (x == y) throw InvalidConfiguration("party layout: region paired with itself");
      if (partner_[x] != -1 || partner_[y] != -1)
        throw InvalidConfiguration("party layout: region paired more than once");
      partner_[x] = y;
      partner_[y] = x;
    }
  }

  int num_states() const noexcept { return num_states_; }
  int region_count() const noexcept { return static_cast<int>(regions_.size()); }
  std::span<const Vertex> region(int r) const { return regions_.at(static_cast<std::size_t>(r)); }
  const std::vector<std::vector<Vertex>>& regions() const noexcept { return regions_; }
  VertexMask region_mask(int r) const { return masks_.at(static_cast<std::size_t>(r)); }
  std::span<const VertexMask> region_masks() const noexcept { return masks_; }
  std::optional<int> partner(int r) const {
    const int p = partner_.at(static_cast<std::size_t>(r));
    return p < 0 ? std::nullopt : std::optional<int>(p);
  }
  int region_of(Vertex v) const { return region_of_.at(static_cast<std::size_t>(v)); }

  /// Paired region indices as (lower, higher), ordered by the lower index.
  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < region_count(); ++r)
      if (partner_[r] > r) out.emplace_back(r, partner_[r]);
    return out;
  }

  /// Same layout with regions ordered by smallest member.
  PartyLayout canonical() const {
    std::vector<int> order(regions_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return regions_[x].front() < regions_[y].front(); });
    std::vector<int> new_index(regions_.size());
    std::vector<std::vector<Vertex>> regions;
    for (std::size_t i = 0; i < order.size(); ++i) {
      new_index[order[i]] = static_cast<int>(i);
      regions.push_back(regions_[order[i]]);
    }
    std::vector<std::pair<int, int>> pairs;
    for (auto [x, y] : this->pairs()) pairs.emplace_back(std::min(new_index[x], new_index[y]), std::max(new_index[x], new_index[y]));
    std::sort(pairs.begin(), pairs.end());
    return PartyLayout(num_states_, std::move(regions), pairs);
  }

  friend bool operator==(const PartyLayout& x, const PartyLayout& y) {
    return x.num_states_ == y.num_states_ && x.regions_ == y.regions_ && x.partner_ == y.partner_;
  }

 private:
  int num_states_ = 0;
  std::vector<std::vector<Vertex>> regions_;
  std::vector<VertexMask> masks_;
  std::vector<int> partner_;
  std::vector<int> region_of_;
};

/// s states on p qubit parties.
class Configuration {
 public:
  Configuration() = default;
  Configuration(int num_states, std::vector<PartyLayout> parties)
      : num_states_(num_states), parties_(std::move(parties)) {
    if (num_states < 1 || num_states > kMaxStates)
      throw InvalidConfiguration("configuration: state count must be in [1, " + std::to_string(kMaxStates) + "]");
    if (parties_.empty()) throw InvalidConfiguration("configuration: at least one party required");
    for (std::size_t j = 0; j < parties_.size(); ++j)
      if (parties_[j].num_states() != num_states)
        throw InvalidConfiguration("configuration: party " + std::to_string(j) + " has mismatched state count");
  }

  int num_states() const noexcept { return num_states_; }
  int num_parties() const noexcept { return static_cast<int>(parties_.size()); }
  const PartyLayout& party(int j) const { return parties_.at(static_cast<std::size_t>(j)); }
  const std::vector<PartyLayout>& parties() const noexcept { return parties_; }

  Configuration canonical() const {
    std::vector<PartyLayout> ps;
    ps.reserve(parties_.size());
    for (const auto& p : parties_) ps.push_back(p.canonical());
    return Configuration(num_states_, std::move(ps));
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  int num_states_ = 0;
  std::vector<PartyLayout> parties_;
};

/// One optional region per party.
struct ExtensionWitness {
  std::vector<std::optional<int>> choices;

  friend bool operator==(const ExtensionWitness&, const ExtensionWitness&) = default;
};

inline VertexMask covered_by(const Configuration& c, const ExtensionWitness& w) {
  if (static_cast<int>(w.choices.size()) != c.num_parties())
    throw std::invalid_argument("witness length does not match party count");
  VertexMask m = 0;
  for (int j = 0; j < c.num_parties(); ++j)
    if (w.choices[j]) {
      const int r = *w.choices[j];
      if (r < 0 || r >= c.party(j).region_count()) throw std::invalid_argument("witness region out of range");
      m |= c.party(j).region_mask(r);
    }
  return m;
}

inline bool is_valid_witness(const Configuration& c, const ExtensionWitness& w) {
  try {
    return covered_by(c, w) == full_mask(c.num_states());
  } catch (const std::invalid_argument&) {
    return false;
  }
}

inline EdgeSet party_edges(const PartyLayout& layout) {
  EdgeSet g(layout.num_states());
  for (auto [x, y] : layout.pairs())
    for (Vertex a : layout.region(x))
      for (Vertex b : layout.region(y)) g.insert(a, b);
  return g;
}

inline EdgeSet configuration_edges(const Configuration& c) {
  EdgeSet g(c.num_states());
  for (const auto& p : c.parties()) g |= party_edges(p);
  return g;
}

struct ProductBasisVerdict {
  bool is_basis = false;
  EdgeSet missing;
};

/// Orthonormal iff every pair of states is orthogonal on at least one party.
inline ProductBasisVerdict is_product_basis(const Configuration& c) {
  EdgeSet missing = complement_edges(configuration_edges(c));
  const bool ok = missing.empty();
  return {ok, std::move(missing)};
}

namespace detail {

// Upper bound on how many of `uncovered` the parties [from, p) can still add.
inline int coverage_bound(const Configuration& c, int from, VertexMask uncovered) {
  int bound = 0;
  for (int j = from; j < c.num_parties(); ++j) {
    int best = 0;
    for (VertexMask m : c.party(j).region_masks()) best = std::max(best, std::popcount(m & uncovered));
    bound += best;
  }
  return bound;
}

inline bool extend(const Configuration& c, int j, VertexMask covered, ExtensionWitness& w) {
  const VertexMask all = full_mask(c.num_states());
  if (covered == all) return true;
  if (j == c.num_parties()) return false;
  const VertexMask uncovered = all & ~covered;
  if (coverage_bound(c, j, uncovered) < std::popcount(uncovered)) return false;
  const auto masks = c.party(j).region_masks();
  for (int r = 0; r < static_cast<int>(masks.size()); ++r) {
    if (!(masks[r] & uncovered)) continue;
    w.choices[j] = r;
    if (extend(c, j + 1, covered | masks[r], w)) return true;
  }
  w.choices[j] = std::nullopt;
  return extend(c, j + 1, covered, w);
}

inline void best_cover(const Configuration& c, int j, VertexMask covered, ExtensionWitness& current, int& best,
                       ExtensionWitness& best_w) {
  const int have = std::popcount(covered);
  if (have > best) {
    best = have;
    best_w = current;
  }
  if (j == c.num_parties()) return;
  const VertexMask uncovered = full_mask(c.num_states()) & ~covered;
  if (uncovered == 0 || have + coverage_bound(c, j, uncovered) <= best) return;
  const auto masks = c.party(j).region_masks();
  for (int r = 0; r < static_cast<int>(masks.size()); ++r) {
    if (!(masks[r] & uncovered)) continue;
    current.choices[j] = r;
    best_cover(c, j + 1, covered | masks[r], current, best, best_w);
  }
  current.choices[j] = std::nullopt;
  best_cover(c, j + 1, covered, current, best, best_w);
}

}  // namespace detail

/// Exact search for one region per party (or none) covering every state.
///
/// Parties are visited in order; on each party the regions that add at least
/// one uncovered state are tried in index order before skipping the party, and
/// the search stops once all states are covered. The result is therefore the
/// lexicographically first witness in that order.
inline std::optional<ExtensionWitness> find_extension(const Configuration& c) {
  ExtensionWitness w{std::vector<std::optional<int>>(static_cast<std::size_t>(c.num_parties()))};
  if (detail::extend(c, 0, 0, w)) return w;
  return std::nullopt;
}

inline bool is_unextendible(const Configuration& c) { return !find_extension(c).has_value(); }

struct CoverResult {
  int covered = 0;
  ExtensionWitness selection;
};

/// Largest number of states reachable by one region per party.
inline CoverResult max_cover(const Configuration& c) {
  ExtensionWitness current{std::vector<std::optional<int>>(static_cast<std::size_t>(c.num_parties()))};
  CoverResult out{0, current};
  detail::best_cover(c, 0, 0, current, out.covered, out.selection);
  return out;
}

struct PairingViolation {
  enum class Kind { unpaired_region, odd_region_count };
  Kind kind;
  int party;
  int region;  // -1 for odd_region_count

  friend bool operator==(const PairingViolation&, const PairingViolation&) = default;
};

/// Every region of an unextendible basis must be paired, so every party has
/// an even region count. Lists each region and party that breaks this.
inline std::vector<PairingViolation> pairing_violations(const Configuration& c) {
  std::vector<PairingViolation> out;
  for (int j = 0; j < c.num_parties(); ++j) {
    const auto& p = c.party(j);
    for (int r = 0; r < p.region_count(); ++r)
      if (!p.partner(r)) out.push_back({PairingViolation::Kind::unpaired_region, j, r});
    if (p.region_count() % 2 != 0) out.push_back({PairingViolation::Kind::odd_region_count, j, -1});
  }
  return out;
}

struct PartyStats {
  int max_region = 0;
  std::map<int, int> counts;  // region size -> number of regions of that size

  int count(int size) const {
    auto it = counts.find(size);
    return it == counts.end() ? 0 : it->second;
  }
};

inline PartyStats party_stats(const PartyLayout& layout) {
  PartyStats st;
  for (const auto& r : layout.regions()) {
    const int n = static_cast<int>(r.size());
    st.max_region = std::max(st.max_region, n);
    ++st.counts[n];
  }
  return st;
}

inline PartyStats party_stats(const Configuration& c, int j) {
  if (j < 0 || j >= c.num_parties()) throw std::out_of_range("party index " + std::to_string(j) + " out of range");
  return party_stats(c.party(j));
}

/// Multiset of region sizes, kept sorted in descending order.
using RegionSizeProfile = std::vector<int>;

inline RegionSizeProfile profile_of(const PartyLayout& layout) {
  RegionSizeProfile p;
  for (const auto& r : layout.regions()) p.push_back(static_cast<int>(r.size()));
  std::sort(p.rbegin(), p.rend());
  return p;
}

namespace detail {

inline int best_pairing(std::vector<int>& sizes, std::map<std::vector<int>, int>& memo) {
  if (sizes.size() < 2) return 0;
  if (auto it = memo.find(sizes); it != memo.end()) return it->second;
  const int head = sizes.front();
  std::vector<int> rest(sizes.begin() + 1, sizes.end());
  int best = best_pairing(rest, memo);  // head stays unpaired
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (i > 0 && rest[i] == rest[i - 1]) continue;
    std::vector<int> next = rest;
    next.erase(next.begin() + static_cast<std::ptrdiff_t>(i));
    best = std::max(best, head * rest[i] + best_pairing(next, memo));
  }
  memo.emplace(sizes, best);
  return best;
}

}  // namespace detail

/// Maximum number of orthogonality edges a single party can carry when its
/// regions have the given sizes: the best pairing under weight |A|*|B|.
inline int max_party_edges(int num_states, RegionSizeProfile profile) {
  long total = 0;
  for (int n : profile) {
    if (n < 1) throw std::invalid_argument("max_party_edges: region sizes must be positive");
    total += n;
  }
  if (total != num_states) throw std::invalid_argument("max_party_edges: profile does not sum to the state count");
  std::sort(profile.rbegin(), profile.rend());
  std::map<std::vector<int>, int> memo;
  return detail::best_pairing(profile, memo);
}

}  // namespace upb
