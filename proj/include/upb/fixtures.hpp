#pragma once

// Small configurations used by the tests, the acceptance checks and the CLI
// fixtures directory.

#include <string_view>

#include "upb/certificate.hpp"
#include "upb/document.hpp"
#include "upb/model.hpp"
#include "upb/search.hpp"
#include "upb/states.hpp"

namespace upb {

/// Seven states on three qubits forming a product basis that is extendible.
/// Party 0 is K_{3,4}; party 1 is K_{1,2} plus K_{2,2}; party 2 is K_{1,2}
/// plus two K_{1,1}. The assignment follows the pattern
///   v0 = 0 0 0,  v1 = 0 1 +,  v2 = 0 0 1,  v3 = 1 + -,
///   v4 = 1 + +,  v5 = 1 - b,  v6 = 1 - b^perp
/// with family bases standing in for {0,1}, {+,-} and {b, b^perp}.
inline Certificate seven_state_example() {
  std::vector<PartyLayout> parties;
  const std::vector<std::pair<int, int>> p0{{0, 1}};
  parties.emplace_back(7, std::vector<std::vector<Vertex>>{{0, 1, 2}, {3, 4, 5, 6}}, p0);
  const std::vector<std::pair<int, int>> p1{{0, 1}, {2, 3}};
  parties.emplace_back(7, std::vector<std::vector<Vertex>>{{0, 2}, {1}, {3, 4}, {5, 6}}, p1);
  const std::vector<std::pair<int, int>> p2{{0, 2}, {1, 3}, {4, 5}};
  parties.emplace_back(7, std::vector<std::vector<Vertex>>{{0}, {1, 4}, {2}, {3}, {5}, {6}}, p2);

  SymbolicAssignment a;
  a.parties.push_back({{0, Side::plus}, {0, Side::perp}});
  a.parties.push_back({{0, Side::plus}, {0, Side::perp}, {1, Side::plus}, {1, Side::perp}});
  a.parties.push_back({{0, Side::plus}, {1, Side::plus}, {0, Side::perp}, {1, Side::perp}, {2, Side::plus}, {2, Side::perp}});
  return {Configuration(7, std::move(parties)), std::move(a), "seven-state extendible example", std::nullopt};
}

/// The three perfect matchings of K_4, two pairs per party: no fourth party
/// with two disjoint pairs can join them at excess 2.
inline PairSystem k4_matching_system() {
  return {2, {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}}};
}

namespace detail {

// Output of
//   upb find --parties 8 --states 11 --max-region 2 --max-pairs 3 --parties-at-cap 4 --seed 1
inline constexpr std::string_view kUpb811Document = R"({
  "format": "upb-config",
  "version": 1,
  "num_states": 11,
  "num_parties": 8,
  "parties": [
    {"regions": [[0],[1],[2],[3],[4],[5,6],[7,8],[9,10]], "pairs": [[0,1],[2,3],[4,5],[6,7]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 0, "side": "perp"},{"basis": 1, "side": "plus"},{"basis": 1, "side": "perp"},{"basis": 2, "side": "plus"},{"basis": 2, "side": "perp"},{"basis": 3, "side": "plus"},{"basis": 3, "side": "perp"}]},
    {"regions": [[0,8],[1],[2],[3],[4],[5,9],[6,7],[10]], "pairs": [[0,6],[1,5],[2,4],[3,7]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 2, "side": "plus"},{"basis": 3, "side": "plus"},{"basis": 2, "side": "perp"},{"basis": 1, "side": "perp"},{"basis": 0, "side": "perp"},{"basis": 3, "side": "perp"}]},
    {"regions": [[0],[1],[2],[3],[4],[5,10],[6,9],[7,8]], "pairs": [[0,3],[1,4],[2,7],[5,6]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 2, "side": "plus"},{"basis": 0, "side": "perp"},{"basis": 1, "side": "perp"},{"basis": 3, "side": "plus"},{"basis": 3, "side": "perp"},{"basis": 2, "side": "perp"}]},
    {"regions": [[0,7],[1],[2],[3],[4],[5,9],[6,8],[10]], "pairs": [[0,4],[1,7],[2,5],[3,6]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 2, "side": "plus"},{"basis": 3, "side": "plus"},{"basis": 0, "side": "perp"},{"basis": 2, "side": "perp"},{"basis": 3, "side": "perp"},{"basis": 1, "side": "perp"}]},
    {"regions": [[0],[1],[2],[3],[4],[5,9],[6],[7],[8],[10]], "pairs": [[0,5],[1,6],[2,9],[3,7],[4,8]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 2, "side": "plus"},{"basis": 3, "side": "plus"},{"basis": 4, "side": "plus"},{"basis": 0, "side": "perp"},{"basis": 1, "side": "perp"},{"basis": 3, "side": "perp"},{"basis": 4, "side": "perp"},{"basis": 2, "side": "perp"}]},
    {"regions": [[0],[1],[2],[3],[4],[5],[6],[7,8],[9],[10]], "pairs": [[0,2],[1,7],[3,4],[5,9],[6,8]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 0, "side": "perp"},{"basis": 2, "side": "plus"},{"basis": 2, "side": "perp"},{"basis": 3, "side": "plus"},{"basis": 4, "side": "plus"},{"basis": 1, "side": "perp"},{"basis": 4, "side": "perp"},{"basis": 3, "side": "perp"}]},
    {"regions": [[0],[1],[2],[3],[4],[5],[6],[7,8],[9],[10]], "pairs": [[0,9],[1,3],[2,6],[4,8],[5,7]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 2, "side": "plus"},{"basis": 1, "side": "perp"},{"basis": 3, "side": "plus"},{"basis": 4, "side": "plus"},{"basis": 2, "side": "perp"},{"basis": 4, "side": "perp"},{"basis": 3, "side": "perp"},{"basis": 0, "side": "perp"}]},
    {"regions": [[0],[1],[2],[3],[4],[5,9],[6],[7],[8],[10]], "pairs": [[0,8],[1,2],[3,5],[4,9],[6,7]], "assignment": [{"basis": 0, "side": "plus"},{"basis": 1, "side": "plus"},{"basis": 1, "side": "perp"},{"basis": 2, "side": "plus"},{"basis": 3, "side": "plus"},{"basis": 2, "side": "perp"},{"basis": 4, "side": "plus"},{"basis": 4, "side": "perp"},{"basis": 0, "side": "perp"},{"basis": 3, "side": "perp"}]}
  ],
  "provenance": {"note": "find_upb p=8 s=11 max_region=2 max_pairs=3 parties_at_pair_cap=4", "seed": 1}
}
)";

}  // namespace detail

/// UPB of 11 states on 8 qubits. Every region has at most two states and
/// exactly four parties carry three size-2 regions.
inline Certificate upb_8_11_certificate() {
  return parse_document(std::string(detail::kUpb811Document)).to_certificate();
}

}  // namespace upb
