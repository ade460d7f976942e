#pragma once

// Exhaustive and constrained searches over qubit product configurations:
//  - pair systems under the "i parties may cover at most i + excess - 1
//    states" rule that every small UPB must satisfy,
//  - minimal UPB sizes for a given number of parties,
//  - UPB discovery under per-party structural limits.

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "upb/certificate.hpp"
#include "upb/model.hpp"

namespace upb {

struct SearchEvent {
  std::string phase;
  std::uint64_t nodes = 0;
  int depth = 0;
  int best = 0;
};

struct SearchBudget {
  std::uint64_t node_limit = 4'000'000'000ULL;
  std::optional<double> seconds;
  std::uint64_t seed = 0;
  int threads = 1;
  // Called roughly every progress_interval nodes when set.
  std::function<void(const SearchEvent&)> on_progress;
  std::uint64_t progress_interval = 1'000'000;
};

enum class SearchStatus { completed, budget_exhausted };

inline const char* to_string(SearchStatus s) {
  return s == SearchStatus::completed ? "completed" : "budget_exhausted";
}

namespace detail {

// Shared node counter; safe to tick from several workers.
class BudgetTracker {
 public:
  explicit BudgetTracker(const SearchBudget& b, std::string phase)
      : budget_(b), phase_(std::move(phase)), start_(std::chrono::steady_clock::now()) {}

  /// Counts one node; returns false once the budget is spent.
  bool tick(int depth = 0, int best = 0) {
    if (exhausted_.load(std::memory_order_relaxed)) return false;
    const std::uint64_t n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (n > budget_.node_limit) {
      exhausted_ = true;
      return false;
    }
    if ((n & 0xFFF) == 0 && budget_.seconds) {
      const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
      if (el.count() > *budget_.seconds) {
        exhausted_ = true;
        return false;
      }
    }
    if (budget_.on_progress && budget_.progress_interval > 0 && n % budget_.progress_interval == 0) {
      std::lock_guard lock(progress_mutex_);
      budget_.on_progress({phase_, n, depth, best});
    }
    return true;
  }

  bool exhausted() const { return exhausted_.load(); }
  std::uint64_t nodes() const { return std::min(nodes_.load(), budget_.node_limit); }

 private:
  const SearchBudget& budget_;
  std::string phase_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> exhausted_{false};
  std::mutex progress_mutex_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Pair systems
// ---------------------------------------------------------------------------

/// Parties that each hold pairwise-disjoint 2-sets of states (groups of two
/// equal local vectors), together with the excess s - p of the basis they
/// would belong to.
struct PairSystem {
  int excess = 0;
  std::vector<std::vector<Edge>> parties;

  int vertex_bound() const {
    int n = 0;
    for (const auto& party : parties)
      for (const Edge& e : party) n = std::max(n, e.b + 1);
    return n;
  }

  friend bool operator==(const PairSystem&, const PairSystem&) = default;
};

inline void validate_pair_system(const PairSystem& ps) {
  for (std::size_t j = 0; j < ps.parties.size(); ++j) {
    VertexMask used = 0;
    for (const Edge& e : ps.parties[j]) {
      if (e.a < 0 || e.b >= kMaxStates || e.a == e.b)
        throw std::invalid_argument("pair system: bad pair on party " + std::to_string(j));
      const VertexMask m = (VertexMask{1} << e.a) | (VertexMask{1} << e.b);
      if (used & m) throw std::invalid_argument("pair system: overlapping pairs on party " + std::to_string(j));
      used |= m;
    }
  }
}

/// Relabels vertices in order of first use (parties in order, pairs sorted)
/// and sorts each party's pairs; repeated until stable.
inline PairSystem canonical_labels(PairSystem ps) {
  for (int round = 0; round < 16; ++round) {
    std::map<Vertex, Vertex> relabel;
    auto label = [&](Vertex v) {
      auto [it, fresh] = relabel.try_emplace(v, static_cast<Vertex>(relabel.size()));
      return it->second;
    };
    PairSystem out{ps.excess, {}};
    for (auto party : ps.parties) {
      std::sort(party.begin(), party.end());
      std::vector<Edge> mapped;
      for (const Edge& e : party) {
        const Vertex a = label(e.a);
        const Vertex b = label(e.b);
        mapped.emplace_back(a, b);
      }
      std::sort(mapped.begin(), mapped.end());
      out.parties.push_back(std::move(mapped));
    }
    if (out == ps) return out;
    ps = std::move(out);
  }
  return ps;
}

/// Chosen pair per participating party.
struct PairSelection {
  std::vector<std::pair<int, Edge>> picks;

  int covered() const {
    VertexMask m = 0;
    for (auto& [p, e] : picks) m |= (VertexMask{1} << e.a) | (VertexMask{1} << e.b);
    return std::popcount(m);
  }
};

namespace detail {

inline bool surplus_search(const PairSystem& ps, std::size_t j, VertexMask covered, int chosen,
                           std::vector<std::pair<int, Edge>>& picks) {
  const int net = std::popcount(covered) - chosen;
  if (net >= ps.excess && chosen > 0) return true;
  if (j == ps.parties.size()) return false;
  // Each further party adds at most one to the net surplus.
  if (net + static_cast<int>(ps.parties.size() - j) < ps.excess) return false;
  for (const Edge& e : ps.parties[j]) {
    const VertexMask m = (VertexMask{1} << e.a) | (VertexMask{1} << e.b);
    if (std::popcount(m & ~covered) < 2) continue;  // gains nothing toward the surplus
    picks.emplace_back(static_cast<int>(j), e);
    if (surplus_search(ps, j + 1, covered | m, chosen + 1, picks)) return true;
    picks.pop_back();
  }
  return surplus_search(ps, j + 1, covered, chosen, picks);
}

}  // namespace detail

/// A selection of one pair on each of i distinct parties covering at least
/// i + excess states, if one exists. Any such selection makes a basis with
/// this excess extendible.
inline std::optional<PairSelection> violates_extension_rule(const PairSystem& ps) {
  validate_pair_system(ps);
  std::vector<std::pair<int, Edge>> picks;
  if (detail::surplus_search(ps, 0, 0, 0, picks)) return PairSelection{std::move(picks)};
  return std::nullopt;
}

/// Each pair on a constrained party contains exactly one anchor vertex.
struct AnchorConstraint {
  std::vector<Vertex> anchors;
};

struct PairSearchOptions {
  // Parties are compared as sets of pairs. With repeats allowed a party may
  // appear several times, which changes the anchored answer.
  bool allow_repeats = false;
  // Stop deepening at this many parties; some systems grow without bound.
  std::optional<int> party_cap;
};

struct PairSearchResult {
  int max_parties = 0;
  // max_parties reached party_cap; the true maximum may be larger.
  bool capped = false;
  PairSystem witness;
  SearchStatus status = SearchStatus::completed;
  std::uint64_t nodes = 0;
};

namespace detail {

struct PairEngine {
  int per_party;
  int excess;
  bool anchored;
  bool allow_repeats;
  int cap;
  BudgetTracker& tracker;

  // Pair masks per placed party.
  std::vector<std::vector<VertexMask>> masks;
  std::vector<std::vector<Edge>> pairs;
  int best = 0;
  std::vector<std::vector<Edge>> best_pairs;

  // Is there a rainbow set of `need` disjoint pairs over parties [from, last)
  // avoiding `used`?
  bool rainbow(std::size_t from, std::size_t last, int need, VertexMask used) const {
    if (need == 0) return true;
    if (last - from < static_cast<std::size_t>(need)) return false;
    for (std::size_t t = from; t < last; ++t)
      for (VertexMask q : masks[t])
        if (!(q & used) && rainbow(t + 1, last, need - 1, used | q)) return true;
    return false;
  }

  // A surplus of `excess` needs `excess` pairwise-disjoint pairs on distinct
  // parties; only selections through the newest party are new.
  bool newest_violates() const {
    const std::size_t last = masks.size() - 1;
    for (VertexMask q : masks[last])
      if (rainbow(0, last, excess - 1, q)) return true;
    return false;
  }

  void candidates(int n, std::vector<std::vector<Edge>>& out) const {
    std::vector<Edge> cur;
    if (anchored) {
      VertexMask taken = 0;
      anchored_candidates(0, n, n, taken, cur, out);
    } else {
      plain_candidates(0, n, n, 0, cur, out);
    }
  }

  // Old vertices in increasing order: skip, pair with a later old vertex, or
  // pair with a fresh vertex. Remaining pairs are fresh-fresh.
  void plain_candidates(int v, int n, int next_fresh, VertexMask used, std::vector<Edge>& cur,
                        std::vector<std::vector<Edge>>& out) const {
    const int have = static_cast<int>(cur.size());
    if (have == per_party || v == n) {
      std::vector<Edge> party = cur;
      int f = next_fresh;
      for (int i = have; i < per_party; ++i, f += 2) party.emplace_back(f, f + 1);
      if (f > kMaxStates) return;
      std::sort(party.begin(), party.end());
      out.push_back(std::move(party));
      return;
    }
    const VertexMask bit = VertexMask{1} << v;
    if (!(used & bit)) {
      for (int u = v + 1; u < n; ++u) {
        if (used & (VertexMask{1} << u)) continue;
        cur.emplace_back(v, u);
        plain_candidates(v + 1, n, next_fresh, used | bit | (VertexMask{1} << u), cur, out);
        cur.pop_back();
      }
      if (next_fresh < kMaxStates) {
        cur.emplace_back(v, next_fresh);
        plain_candidates(v + 1, n, next_fresh + 1, used | bit, cur, out);
        cur.pop_back();
      }
    }
    plain_candidates(v + 1, n, next_fresh, used, cur, out);
  }

  // Anchor i (vertex i) takes an unused old non-anchor partner or a fresh one.
  void anchored_candidates(int anchor, int n, int next_fresh, VertexMask taken, std::vector<Edge>& cur,
                           std::vector<std::vector<Edge>>& out) const {
    if (anchor == per_party) {
      std::vector<Edge> party = cur;
      std::sort(party.begin(), party.end());
      out.push_back(std::move(party));
      return;
    }
    for (int u = per_party; u < n; ++u) {
      if (taken & (VertexMask{1} << u)) continue;
      cur.emplace_back(anchor, u);
      anchored_candidates(anchor + 1, n, next_fresh, taken | (VertexMask{1} << u), cur, out);
      cur.pop_back();
    }
    if (next_fresh < kMaxStates) {
      cur.emplace_back(anchor, next_fresh);
      anchored_candidates(anchor + 1, n, next_fresh + 1, taken, cur, out);
      cur.pop_back();
    }
  }

  void push(const std::vector<Edge>& party) {
    std::vector<VertexMask> ms;
    for (const Edge& e : party) ms.push_back((VertexMask{1} << e.a) | (VertexMask{1} << e.b));
    masks.push_back(std::move(ms));
    pairs.push_back(party);
  }
  void pop() {
    masks.pop_back();
    pairs.pop_back();
  }

  void record() {
    const int depth = static_cast<int>(pairs.size());
    if (depth > best) {
      best = depth;
      best_pairs = pairs;
    }
  }

  static int universe(const std::vector<Edge>& party, int n) {
    for (const Edge& e : party) n = std::max(n, e.b + 1);
    return n;
  }

  void dfs(int n) {
    record();
    if (static_cast<int>(pairs.size()) >= cap) return;
    if (!tracker.tick(static_cast<int>(pairs.size()), best)) return;
    std::vector<std::vector<Edge>> cands;
    candidates(n, cands);
    for (const auto& party : cands) {
      if (tracker.exhausted()) return;
      if (!allow_repeats && std::find(pairs.begin(), pairs.end(), party) != pairs.end()) continue;
      push(party);
      if (!newest_violates()) dfs(universe(party, n));
      pop();
    }
  }
};

}  // namespace detail

/// Largest number of parties, each holding `pairs_per_party` disjoint pairs,
/// that admits no selection of i parties covering i + excess states.
///
/// Enumerates pair systems with fresh vertices introduced in first-use order,
/// which removes the relabeling symmetry among unused vertices. The first
/// party is fixed (up to relabeling every party is alike); further parties
/// range over all placements on the vertices seen so far plus fresh ones.
inline PairSearchResult pair_config_max_parties(int pairs_per_party, int excess,
                                                const std::optional<AnchorConstraint>& anchors,
                                                const SearchBudget& budget = {},
                                                const PairSearchOptions& opts = {}) {
  if (pairs_per_party < 1) throw std::invalid_argument("pair_config_max_parties: pairs_per_party must be >= 1");
  if (excess < 1) throw std::invalid_argument("pair_config_max_parties: excess must be >= 1");
  if (anchors && static_cast<int>(anchors->anchors.size()) != pairs_per_party)
    throw std::invalid_argument("pair_config_max_parties: anchor set size must equal pairs_per_party");
  if (opts.party_cap && *opts.party_cap < 1) throw std::invalid_argument("pair_config_max_parties: party_cap must be >= 1");
  const int cap = opts.party_cap.value_or(std::numeric_limits<int>::max());

  detail::BudgetTracker tracker(budget, anchors ? "pairs-anchored" : "pairs");
  const bool anchored = anchors.has_value();
  // Anchors occupy vertices 0..pairs_per_party-1.
  const int base = anchored ? pairs_per_party : 0;

  detail::PairEngine root{pairs_per_party, excess, anchored, opts.allow_repeats, cap, tracker, {}, {}, 0, {}};
  std::vector<Edge> first;
  for (int i = 0; i < pairs_per_party; ++i)
    first.emplace_back(anchored ? i : 2 * i, anchored ? base + i : 2 * i + 1);
  root.push(first);
  root.record();
  if (root.newest_violates()) {
    // A single party already breaks the rule (possible only for excess == 1).
    root.pop();
    return PairSearchResult{0, false, PairSystem{excess, {}}, SearchStatus::completed, tracker.nodes()};
  }
  if (cap == 1) return PairSearchResult{1, true, PairSystem{excess, root.pairs}, SearchStatus::completed, 0};
  const int n0 = detail::PairEngine::universe(first, base);

  std::vector<std::vector<Edge>> seconds;
  root.candidates(n0, seconds);
  if (!opts.allow_repeats) std::erase(seconds, first);

  const int workers = std::max(1, std::min<int>(budget.threads, static_cast<int>(seconds.size())));
  std::vector<int> branch_best(seconds.size(), 1);
  std::vector<std::vector<std::vector<Edge>>> branch_pairs(seconds.size(), root.pairs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seconds.size() || tracker.exhausted()) return;
      detail::PairEngine eng{pairs_per_party, excess, anchored, opts.allow_repeats, cap, tracker,
                             root.masks,      root.pairs, 1,      root.pairs};
      eng.push(seconds[i]);
      if (!eng.newest_violates()) eng.dfs(detail::PairEngine::universe(seconds[i], n0));
      branch_best[i] = eng.best;
      branch_pairs[i] = eng.best_pairs;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  PairSearchResult out;
  out.max_parties = 1;
  out.witness = PairSystem{excess, root.pairs};
  for (std::size_t i = 0; i < seconds.size(); ++i)
    if (branch_best[i] > out.max_parties) {
      out.max_parties = branch_best[i];
      out.witness = PairSystem{excess, branch_pairs[i]};
    }
  out.capped = out.max_parties >= cap;
  out.status = tracker.exhausted() ? SearchStatus::budget_exhausted : SearchStatus::completed;
  out.nodes = tracker.nodes();
  return out;
}

// ---------------------------------------------------------------------------
// Layout enumeration shared by the configuration searches
// ---------------------------------------------------------------------------

/// Block of a fully paired layout: two paired regions.
struct Block {
  VertexMask left = 0;
  VertexMask right = 0;
};

inline PartyLayout layout_from_blocks(int num_states, const std::vector<Block>& blocks) {
  std::vector<std::vector<Vertex>> regions;
  std::vector<std::pair<int, int>> pairs;
  for (const Block& b : blocks) {
    pairs.emplace_back(static_cast<int>(regions.size()), static_cast<int>(regions.size()) + 1);
    regions.push_back(vertices_of(b.left));
    regions.push_back(vertices_of(b.right));
  }
  return PartyLayout(num_states, std::move(regions), pairs).canonical();
}

namespace detail {

inline void subsets_of_size(VertexMask pool, int size, VertexMask acc, std::vector<VertexMask>& out) {
  if (size == 0) {
    out.push_back(acc);
    return;
  }
  while (pool) {
    const VertexMask bit = pool & (~pool + 1);
    pool &= pool - 1;
    if (std::popcount(pool) < size - 1) break;
    subsets_of_size(pool, size - 1, acc | bit, out);
  }
}

inline void all_nonempty_subsets(VertexMask pool, std::vector<VertexMask>& out) {
  for (VertexMask sub = pool; sub; sub = (sub - 1) & pool) out.push_back(sub);
}

inline void paired_layouts(int s, VertexMask remaining, std::vector<Block>& blocks, std::vector<PartyLayout>& out) {
  if (!remaining) {
    out.push_back(layout_from_blocks(s, blocks));
    return;
  }
  const VertexMask low = remaining & (~remaining + 1);
  const VertexMask rest = remaining & ~low;
  std::vector<VertexMask> lefts;
  all_nonempty_subsets(rest, lefts);
  lefts.push_back(0);
  for (VertexMask l : lefts) {
    const VertexMask left = l | low;
    const VertexMask pool = remaining & ~left;
    std::vector<VertexMask> rights;
    all_nonempty_subsets(pool, rights);
    for (VertexMask right : rights) {
      blocks.push_back({left, right});
      paired_layouts(s, pool & ~right, blocks, out);
      blocks.pop_back();
    }
  }
}

}  // namespace detail

/// Every layout on s states whose regions are all paired, in a fixed order.
inline std::vector<PartyLayout> all_paired_layouts(int s) {
  if (s < 1 || s > 16) throw std::invalid_argument("all_paired_layouts: s must lie in [1, 16]");
  std::vector<PartyLayout> out;
  std::vector<Block> blocks;
  detail::paired_layouts(s, full_mask(s), blocks, out);
  return out;
}

/// Relabeling orbit of a fully paired layout: the sorted block shapes.
inline std::vector<std::pair<int, int>> block_shape(const PartyLayout& layout) {
  std::vector<std::pair<int, int>> shape;
  for (auto [x, y] : layout.pairs()) {
    const int a = static_cast<int>(layout.region(x).size());
    const int b = static_cast<int>(layout.region(y).size());
    shape.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(shape.begin(), shape.end());
  return shape;
}

// ---------------------------------------------------------------------------
// Minimal UPB size
// ---------------------------------------------------------------------------

struct MinUpbResult {
  int parties = 0;
  int max_states = 0;
  std::optional<int> min_size;
  std::optional<Certificate> witness;
  SearchStatus status = SearchStatus::completed;
  std::uint64_t nodes = 0;
};

namespace detail {

struct MinUpbEngine {
  int s;
  int p;
  const std::vector<PartyLayout>& layouts;
  std::vector<int> order;  // layout indices; each orbit's representative first
  std::vector<bool> is_rep;
  std::vector<EdgeSet> edges;
  BudgetTracker& tracker;
  std::vector<int> chosen;
  std::optional<Configuration> found;

  bool dfs(std::size_t from, const EdgeSet& covered) {
    if (static_cast<int>(chosen.size()) == p) {
      if (!tracker.tick(p)) return false;
      if (covered.size() != static_cast<std::size_t>(s) * (s - 1) / 2) return false;
      std::vector<PartyLayout> ps;
      for (int i : chosen) ps.push_back(layouts[i]);
      Configuration c(s, std::move(ps));
      if (is_unextendible(c)) {
        found = std::move(c);
        return true;
      }
      return false;
    }
    for (std::size_t t = from; t < order.size(); ++t) {
      if (tracker.exhausted()) return false;
      const int idx = order[t];
      if (chosen.empty() && !is_rep[idx]) continue;
      EdgeSet next = covered;
      next |= edges[idx];
      chosen.push_back(idx);
      if (dfs(t, next)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace detail

/// Smallest s <= s_max for which p parties admit a UPB of s states.
///
/// Parties range over fully paired layouts (every region of a UPB is paired).
/// Configurations are enumerated as multisets of layouts, sorted by orbit
/// and index, with the first party restricted to its orbit's representative;
/// every configuration is equivalent under relabeling to one of these.
inline MinUpbResult exhaustive_min_upb(int p, int s_max, const SearchBudget& budget = {}) {
  if (p < 1) throw std::invalid_argument("exhaustive_min_upb: p must be >= 1");
  if (s_max < 1) throw std::invalid_argument("exhaustive_min_upb: s_max must be >= 1");
  detail::BudgetTracker tracker(budget, "min-upb");
  MinUpbResult out;
  out.parties = p;
  out.max_states = s_max;
  for (int s = 1; s <= s_max; ++s) {
    const auto layouts = all_paired_layouts(s);
    std::vector<std::vector<std::pair<int, int>>> shapes;
    for (const auto& l : layouts) shapes.push_back(block_shape(l));
    std::vector<int> order(layouts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return shapes[x] < shapes[y]; });
    std::vector<bool> is_rep(layouts.size(), false);
    for (std::size_t t = 0; t < order.size(); ++t)
      if (t == 0 || shapes[order[t]] != shapes[order[t - 1]]) is_rep[order[t]] = true;
    std::vector<EdgeSet> edges;
    for (const auto& l : layouts) edges.push_back(party_edges(l));

    detail::MinUpbEngine eng{s, p, layouts, order, is_rep, edges, tracker, {}, std::nullopt};
    eng.dfs(0, EdgeSet(s));
    if (eng.found) {
      out.min_size = s;
      out.witness = make_certificate(*eng.found, "exhaustive search, p=" + std::to_string(p));
      break;
    }
    if (tracker.exhausted()) break;
  }
  out.status = tracker.exhausted() ? SearchStatus::budget_exhausted : SearchStatus::completed;
  out.nodes = tracker.nodes();
  return out;
}

// ---------------------------------------------------------------------------
// Constrained UPB discovery
// ---------------------------------------------------------------------------

struct StructuralLimits {
  std::optional<int> max_region;    // cap on M_j
  std::optional<int> max_pairs;     // cap on C_{2,j}, the number of size-2 regions
  // Exactly this many parties have C_{2,j} equal to max_pairs.
  std::optional<int> parties_at_pair_cap;
};

struct FindResult {
  std::optional<Certificate> certificate;
  SearchStatus status = SearchStatus::completed;
  std::uint64_t nodes = 0;
  int restarts = 0;
};

namespace detail {

struct Shape {
  std::vector<std::pair<int, int>> blocks;  // (a, b) with a <= b
  int edges = 0;
  int pairs = 0;  // number of size-2 regions
};

inline void enumerate_shapes(int remaining, int cap, std::pair<int, int> min_block, std::vector<std::pair<int, int>>& cur,
                             std::vector<Shape>& out) {
  if (remaining == 0) {
    Shape sh{cur, 0, 0};
    for (auto [a, b] : cur) {
      sh.edges += a * b;
      sh.pairs += (a == 2) + (b == 2);
    }
    out.push_back(std::move(sh));
    return;
  }
  for (int a = min_block.first; a <= cap; ++a)
    for (int b = (a == min_block.first ? std::max(a, min_block.second) : a); b <= cap; ++b) {
      if (a + b > remaining) break;
      cur.emplace_back(a, b);
      enumerate_shapes(remaining - a - b, cap, {a, b}, cur, out);
      cur.pop_back();
    }
}

class UpbFinder {
 public:
  UpbFinder(int p, int s, const StructuralLimits& lim, BudgetTracker& tracker)
      : p_(p), s_(s), tracker_(tracker), total_(s * (s - 1) / 2), adj_(static_cast<std::size_t>(s), 0) {
    const int cap = lim.max_region.value_or(s - 1);
    std::vector<Shape> shapes;
    std::vector<std::pair<int, int>> cur;
    enumerate_shapes(s, std::max(1, cap), {1, 1}, cur, shapes);
    std::vector<Shape> at_cap, below_cap;
    for (auto& sh : shapes) {
      if (lim.max_pairs && sh.pairs > *lim.max_pairs) continue;
      if (lim.max_pairs && sh.pairs == *lim.max_pairs)
        at_cap.push_back(sh);
      else
        below_cap.push_back(sh);
    }
    const int n_cap = lim.parties_at_pair_cap.value_or(-1);
    if (lim.parties_at_pair_cap && !lim.max_pairs)
      throw std::invalid_argument("find_upb: parties_at_pair_cap requires max_pairs");
    if (n_cap > p) throw std::invalid_argument("find_upb: parties_at_pair_cap exceeds party count");
    for (int j = 0; j < p; ++j) {
      if (n_cap < 0) {
        std::vector<Shape> all = at_cap;
        all.insert(all.end(), below_cap.begin(), below_cap.end());
        group_.push_back(std::move(all));
      } else {
        group_.push_back(j < n_cap ? at_cap : below_cap);
      }
      std::sort(group_.back().begin(), group_.back().end(), [](const Shape& x, const Shape& y) { return x.edges > y.edges; });
    }
    rest_bound_.assign(static_cast<std::size_t>(p) + 1, 0);
    for (int j = p - 1; j >= 0; --j) {
      int best = 0;
      for (const auto& sh : group_[j]) best = std::max(best, sh.edges);
      rest_bound_[j] = rest_bound_[j + 1] + best;
    }
  }

  bool feasible_at_root() const {
    for (const auto& g : group_)
      if (g.empty()) return false;
    return rest_bound_[0] >= total_;
  }

  /// One restart. Returns true with `found` set on success; `complete` tells
  /// whether the tree was exhausted within `node_cap`.
  bool run(std::mt19937_64& rng, std::uint64_t node_cap, bool& complete) {
    rng_ = &rng;
    nodes_ = 0;
    cap_ = node_cap;
    aborted_ = false;
    std::fill(adj_.begin(), adj_.end(), 0);
    covered_ = 0;
    parties_.clear();
    const bool ok = party(0);
    complete = !aborted_ && !ok;
    return ok;
  }

  std::optional<Configuration> found;

 private:
  bool step() {
    if (++nodes_ > cap_ || !tracker_.tick(static_cast<int>(parties_.size()))) {
      aborted_ = true;
      return false;
    }
    return true;
  }

  int new_edges(VertexMask left, VertexMask right) const {
    int n = 0;
    for (VertexMask l = left; l; l &= l - 1) n += std::popcount(right & ~adj_[std::countr_zero(l)]);
    return n;
  }

  void cover(VertexMask left, VertexMask right, std::vector<VertexMask>& undo) {
    undo.assign(adj_.begin(), adj_.end());
    for (VertexMask l = left; l; l &= l - 1) adj_[std::countr_zero(l)] |= right;
    for (VertexMask r = right; r; r &= r - 1) adj_[std::countr_zero(r)] |= left;
  }

  bool party(int j) {
    if (!step()) return false;
    if (j == p_) {
      if (covered_ != total_) return false;
      std::vector<PartyLayout> ps;
      for (const auto& blocks : parties_) ps.push_back(layout_from_blocks(s_, blocks));
      Configuration c(s_, std::move(ps));
      if (!is_product_basis(c).is_basis || !is_unextendible(c)) return false;
      found = std::move(c);
      return true;
    }
    if (covered_ + rest_bound_[j] < total_) return false;
    std::vector<const Shape*> shapes;
    for (const auto& sh : group_[j]) shapes.push_back(&sh);
    std::shuffle(shapes.begin(), shapes.end(), *rng_);
    std::stable_sort(shapes.begin(), shapes.end(), [](const Shape* x, const Shape* y) { return x->edges > y->edges; });
    for (const Shape* sh : shapes) {
      if (aborted_) return false;
      if (covered_ + sh->edges + rest_bound_[j + 1] < total_) continue;
      std::vector<std::pair<int, int>> remaining = sh->blocks;
      std::vector<Block> blocks;
      const bool ok = j == 0 ? place_fixed(remaining, blocks) : place(j, full_mask(s_), remaining, sh->edges, 0, blocks);
      if (ok) return true;
    }
    return false;
  }

  // The first party is fixed up to relabeling: blocks on consecutive states.
  bool place_fixed(const std::vector<std::pair<int, int>>& shape, std::vector<Block>& blocks) {
    int v = 0;
    std::vector<VertexMask> undo;
    std::vector<std::vector<VertexMask>> saved;
    const int before = covered_;
    for (auto [a, b] : shape) {
      const VertexMask left = ((VertexMask{1} << a) - 1) << v;
      const VertexMask right = ((VertexMask{1} << b) - 1) << (v + a);
      v += a + b;
      covered_ += new_edges(left, right);
      cover(left, right, undo);
      saved.push_back(undo);
      blocks.push_back({left, right});
    }
    bool ok = finish_party(0, blocks);
    if (!ok) {
      adj_ = saved.front();
      covered_ = before;
    }
    return ok;
  }

  bool finish_party(int j, const std::vector<Block>& blocks) {
    parties_.push_back(blocks);
    if (!partial_rule_ok()) {
      parties_.pop_back();
      return false;
    }
    if (party(j + 1)) return true;
    parties_.pop_back();
    return false;
  }

  // Lowest unassigned state opens the next block; `edge_room` is the most
  // edges the remaining blocks could add.
  bool place(int j, VertexMask unassigned, std::vector<std::pair<int, int>>& remaining, int edge_room, int gained,
             std::vector<Block>& blocks) {
    if (!step()) return false;
    if (!unassigned) return finish_party(j, blocks);
    if (covered_ + edge_room + rest_bound_[j + 1] < total_) return false;
    const VertexMask low = unassigned & (~unassigned + 1);
    const VertexMask rest = unassigned & ~low;

    struct Option {
      std::size_t block;
      VertexMask left, right;
      int gain;
    };
    std::vector<Option> options;
    for (std::size_t bi = 0; bi < remaining.size(); ++bi) {
      if (bi > 0 && remaining[bi] == remaining[bi - 1]) continue;
      auto [a, b] = remaining[bi];
      for (int side = 0; side < (a == b ? 1 : 2); ++side) {
        const int own = side == 0 ? a : b;
        const int other = side == 0 ? b : a;
        std::vector<VertexMask> lefts;
        subsets_of_size(rest, own - 1, low, lefts);
        for (VertexMask left : lefts) {
          std::vector<VertexMask> rights;
          subsets_of_size(unassigned & ~left, other, 0, rights);
          for (VertexMask right : rights) options.push_back({bi, left, right, new_edges(left, right)});
        }
      }
    }
    std::shuffle(options.begin(), options.end(), *rng_);
    std::stable_sort(options.begin(), options.end(), [](const Option& x, const Option& y) { return x.gain > y.gain; });
    std::vector<VertexMask> undo;
    for (const Option& o : options) {
      if (aborted_) return false;
      auto [a, b] = remaining[o.block];
      const int room = edge_room - a * b;
      if (covered_ + o.gain + room + rest_bound_[j + 1] < total_) continue;
      auto next = remaining;
      next.erase(next.begin() + static_cast<std::ptrdiff_t>(o.block));
      cover(o.left, o.right, undo);
      covered_ += o.gain;
      blocks.push_back({o.left, o.right});
      if (place(j, unassigned & ~(o.left | o.right), next, room, gained + o.gain, blocks)) return true;
      blocks.pop_back();
      covered_ -= o.gain;
      adj_ = undo;
    }
    return false;
  }

  // No i placed parties may cover i + (s - p) states: the remaining parties
  // could then pick up one state each and the basis would be extendible.
  bool partial_rule_ok() const {
    const int excess = s_ - p_;
    std::vector<std::vector<VertexMask>> regions;
    for (const auto& blocks : parties_) {
      std::vector<VertexMask> rs;
      for (const Block& b : blocks) {
        rs.push_back(b.left);
        rs.push_back(b.right);
      }
      regions.push_back(std::move(rs));
    }
    return !surplus(regions, 0, 0, 0, excess);
  }

  static bool surplus(const std::vector<std::vector<VertexMask>>& regions, std::size_t j, VertexMask covered, int chosen,
                      int excess) {
    const int net = std::popcount(covered) - chosen;
    if (net >= excess && chosen > 0) return true;
    if (j == regions.size()) return false;
    int room = 0;
    for (std::size_t t = j; t < regions.size(); ++t) {
      int best = 0;
      for (VertexMask r : regions[t]) best = std::max(best, std::popcount(r & ~covered));
      room += std::max(0, best - 1);
    }
    if (net + room < excess) return false;
    for (VertexMask r : regions[j])
      if (std::popcount(r & ~covered) >= 2 && surplus(regions, j + 1, covered | r, chosen + 1, excess)) return true;
    return surplus(regions, j + 1, covered, chosen, excess);
  }

  int p_;
  int s_;
  BudgetTracker& tracker_;
  int total_;
  std::vector<VertexMask> adj_;
  int covered_ = 0;
  std::vector<std::vector<Shape>> group_;
  std::vector<int> rest_bound_;
  std::vector<std::vector<Block>> parties_;
  std::mt19937_64* rng_ = nullptr;
  std::uint64_t nodes_ = 0;
  std::uint64_t cap_ = 0;
  bool aborted_ = false;
};

}  // namespace detail

inline std::string describe(int p, int s, const StructuralLimits& lim) {
  std::string out = "find_upb p=" + std::to_string(p) + " s=" + std::to_string(s);
  if (lim.max_region) out += " max_region=" + std::to_string(*lim.max_region);
  if (lim.max_pairs) out += " max_pairs=" + std::to_string(*lim.max_pairs);
  if (lim.parties_at_pair_cap) out += " parties_at_pair_cap=" + std::to_string(*lim.parties_at_pair_cap);
  return out;
}

/// Randomized backtracking for a UPB of s states on p parties whose layouts
/// obey `limits`. Restarts double their node allowance; a restart that
/// finishes its tree proves that none exists. Returned certificates have
/// passed verify_certificate.
inline FindResult find_upb(int p, int s, const StructuralLimits& limits, const SearchBudget& budget = {}) {
  if (p < 1 || s < 1) throw std::invalid_argument("find_upb: p and s must be >= 1");
  if (s > kMaxStates) throw std::invalid_argument("find_upb: too many states");
  detail::BudgetTracker tracker(budget, "find-upb");
  FindResult out;
  if (s == 1) {
    out.nodes = 0;
    return out;  // a lone state is always extendible
  }
  detail::UpbFinder finder(p, s, limits, tracker);
  if (!finder.feasible_at_root()) return out;
  std::mt19937_64 rng(budget.seed);
  std::uint64_t cap = 20'000;
  for (;;) {
    bool complete = false;
    ++out.restarts;
    if (finder.run(rng, cap, complete)) {
      Certificate cert = make_certificate(*finder.found, describe(p, s, limits), budget.seed);
      if (verify_certificate(cert).passed()) {
        out.certificate = std::move(cert);
        break;
      }
      throw std::logic_error("find_upb: search produced a certificate that fails verification");
    }
    if (complete) break;
    if (tracker.exhausted()) {
      out.status = SearchStatus::budget_exhausted;
      break;
    }
    cap = cap < (1ULL << 40) ? cap * 2 : cap;
  }
  out.nodes = tracker.nodes();
  return out;
}

}  // namespace upb
