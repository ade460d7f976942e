#pragma once

// Numeric realization of configurations as qubit product states, and the
// reverse map from product states back to region layouts.

#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "upb/model.hpp"

namespace upb {

inline constexpr double kOrthogonalTol = 1e-9;

struct Qubit {
  std::complex<double> a0{1.0, 0.0};
  std::complex<double> a1{0.0, 0.0};

  static Qubit from_angle(double theta) { return {{std::cos(theta), 0.0}, {std::sin(theta), 0.0}}; }

  double norm() const { return std::sqrt(std::norm(a0) + std::norm(a1)); }
};

/// <x|y>, conjugate-linear in the first argument.
inline std::complex<double> inner(const Qubit& x, const Qubit& y) {
  return std::conj(x.a0) * y.a0 + std::conj(x.a1) * y.a1;
}

struct ProductState {
  std::vector<Qubit> factors;
};

inline std::complex<double> inner(const ProductState& x, const ProductState& y) {
  if (x.factors.size() != y.factors.size()) throw std::invalid_argument("product states with different party counts");
  std::complex<double> out{1.0, 0.0};
  for (std::size_t j = 0; j < x.factors.size(); ++j) out *= inner(x.factors[j], y.factors[j]);
  return out;
}

enum class Side { plus, perp };

struct RegionLabel {
  int basis = 0;
  Side side = Side::plus;

  friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
  friend auto operator<=>(const RegionLabel&, const RegionLabel&) = default;
};

/// Per party, per region: which basis vector the region's states carry.
struct SymbolicAssignment {
  std::vector<std::vector<RegionLabel>> parties;

  friend bool operator==(const SymbolicAssignment&, const SymbolicAssignment&) = default;
};

/// Real bases {(cos t, sin t), (-sin t, cos t)} with angles
/// t_i = (i+1) pi / (4(n+1)), all inside one quarter turn, so two different
/// bases never share a vector and never contain orthogonal vectors.
class BasisFamily {
 public:
  explicit BasisFamily(int count) {
    if (count < 1) throw std::invalid_argument("basis family needs at least one basis");
    angles_.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
      angles_.push_back((i + 1) * std::numbers::pi / (4.0 * (count + 1)));
  }

  int count() const noexcept { return static_cast<int>(angles_.size()); }
  double angle(int i) const { return angles_.at(static_cast<std::size_t>(i)); }
  Qubit plus(int i) const { return Qubit::from_angle(angle(i)); }
  Qubit perp(int i) const { return Qubit::from_angle(angle(i) + std::numbers::pi / 2.0); }
  Qubit vector(const RegionLabel& l) const { return l.side == Side::plus ? plus(l.basis) : perp(l.basis); }

 private:
  std::vector<double> angles_;
};

inline BasisFamily make_basis_family(int n) { return BasisFamily(n); }

/// Used on parties a witness leaves free; pi/3 lies outside every family angle.
inline Qubit fresh_qubit() { return Qubit::from_angle(std::numbers::pi / 3.0); }

class AssignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws AssignmentError unless the labels are consistent with the pairings
/// of `c`: one label per region, distinct within a party, paired regions share
/// a basis on opposite sides, and unpaired regions never meet the opposite side
/// of a label in use on the same party.
inline void validate_assignment(const Configuration& c, const SymbolicAssignment& a) {
  if (static_cast<int>(a.parties.size()) != c.num_parties())
    throw AssignmentError("assignment covers " + std::to_string(a.parties.size()) + " parties, configuration has " +
                          std::to_string(c.num_parties()));
  for (int j = 0; j < c.num_parties(); ++j) {
    const auto& layout = c.party(j);
    const auto& labels = a.parties[j];
    const std::string where = "party " + std::to_string(j);
    if (static_cast<int>(labels.size()) != layout.region_count())
      throw AssignmentError(where + ": label count does not match region count");
    for (int r = 0; r < layout.region_count(); ++r) {
      if (labels[r].basis < 0) throw AssignmentError(where + ": negative basis index");
      for (int q = r + 1; q < layout.region_count(); ++q) {
        const bool same_basis = labels[r].basis == labels[q].basis;
        if (same_basis && labels[r].side == labels[q].side)
          throw AssignmentError(where + ": regions " + std::to_string(r) + " and " + std::to_string(q) +
                                " share a label");
        const bool paired = layout.partner(r) == q;
        if (paired && !same_basis)
          throw AssignmentError(where + ": paired regions " + std::to_string(r) + "," + std::to_string(q) +
                                " use different bases");
        if (!paired && same_basis)
          throw AssignmentError(where + ": unpaired regions " + std::to_string(r) + "," + std::to_string(q) +
                                " would be orthogonal");
      }
    }
  }
}

/// Block t of a party (its t-th pair, by lower region index) uses basis t,
/// lower region on the plus side; unpaired regions take the following indices.
inline SymbolicAssignment canonical_assignment(const Configuration& c) {
  SymbolicAssignment a;
  for (const auto& layout : c.parties()) {
    std::vector<RegionLabel> labels(static_cast<std::size_t>(layout.region_count()));
    int next = 0;
    for (auto [x, y] : layout.pairs()) {
      labels[x] = {next, Side::plus};
      labels[y] = {next, Side::perp};
      ++next;
    }
    for (int r = 0; r < layout.region_count(); ++r)
      if (!layout.partner(r)) labels[r] = {next++, Side::plus};
    a.parties.push_back(std::move(labels));
  }
  return a;
}

inline int required_basis_count(const SymbolicAssignment& a) {
  int n = 0;
  for (const auto& party : a.parties)
    for (const auto& l : party) n = std::max(n, l.basis + 1);
  return std::max(n, 1);
}

inline std::vector<ProductState> realize_configuration(const Configuration& c, const SymbolicAssignment& a,
                                                       const BasisFamily& f) {
  validate_assignment(c, a);
  if (required_basis_count(a) > f.count())
    throw AssignmentError("basis family has " + std::to_string(f.count()) + " bases, assignment needs " +
                          std::to_string(required_basis_count(a)));
  std::vector<ProductState> states(static_cast<std::size_t>(c.num_states()));
  for (auto& st : states) st.factors.resize(static_cast<std::size_t>(c.num_parties()));
  for (int j = 0; j < c.num_parties(); ++j) {
    const auto& layout = c.party(j);
    for (int r = 0; r < layout.region_count(); ++r) {
      const Qubit q = f.vector(a.parties[j][r]);
      for (Vertex v : layout.region(r)) states[v].factors[j] = q;
    }
  }
  return states;
}

struct OrthogonalityVerdict {
  bool orthonormal = false;
  std::vector<Edge> offending;
};

/// Every distinct pair must be orthogonal (|<x|y>| <= tol) on some party.
inline OrthogonalityVerdict pairwise_orthogonality_check(const std::vector<ProductState>& states,
                                                         double tol = kOrthogonalTol) {
  OrthogonalityVerdict out;
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a + 1; b < states.size(); ++b) {
      const auto& x = states[a].factors;
      const auto& y = states[b].factors;
      if (x.size() != y.size()) throw std::invalid_argument("product states with different party counts");
      bool orth = false;
      for (std::size_t j = 0; j < x.size() && !orth; ++j) orth = std::abs(inner(x[j], y[j])) <= tol;
      if (!orth) out.offending.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
    }
  out.orthonormal = out.offending.empty();
  return out;
}

class AmbiguousGrouping : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rebuilds the region layout of each party: states whose local vectors agree
/// up to phase share a region, and regions holding orthogonal vectors are
/// paired. Overlaps strictly between 1-10*tol and 1-tol are rejected.
inline Configuration recover_orthogonality_graph(const std::vector<ProductState>& states, double tol = kOrthogonalTol) {
  if (states.empty()) throw std::invalid_argument("recover_orthogonality_graph: no states");
  const std::size_t p = states.front().factors.size();
  const int s = static_cast<int>(states.size());
  std::vector<PartyLayout> parties;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<std::vector<Vertex>> regions;
    std::vector<Qubit> reps;
    for (int v = 0; v < s; ++v) {
      if (states[v].factors.size() != p) throw std::invalid_argument("product states with different party counts");
      const Qubit& q = states[v].factors[j];
      int found = -1;
      for (std::size_t r = 0; r < reps.size(); ++r) {
        const double ov = std::abs(inner(reps[r], q));
        if (ov >= 1.0 - tol) {
          if (found >= 0)
            throw AmbiguousGrouping("party " + std::to_string(j) + ": state " + std::to_string(v) +
                                    " matches two regions");
          found = static_cast<int>(r);
        } else if (ov > 1.0 - 10.0 * tol) {
          throw AmbiguousGrouping("party " + std::to_string(j) + ": state " + std::to_string(v) +
                                  " has overlap " + std::to_string(ov) + " inside the dead band");
        }
      }
      if (found < 0) {
        regions.push_back({v});
        reps.push_back(q);
      } else {
        regions[found].push_back(v);
      }
    }
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> partner(regions.size(), -1);
    for (std::size_t x = 0; x < reps.size(); ++x)
      for (std::size_t y = x + 1; y < reps.size(); ++y)
        if (std::abs(inner(reps[x], reps[y])) <= tol) {
          if (partner[x] >= 0 || partner[y] >= 0)
            throw AmbiguousGrouping("party " + std::to_string(j) + ": region orthogonal to two others");
          partner[x] = static_cast<int>(y);
          partner[y] = static_cast<int>(x);
          pairs.emplace_back(static_cast<int>(x), static_cast<int>(y));
        }
    parties.emplace_back(s, std::move(regions), pairs);
  }
  return Configuration(s, std::move(parties));
}

/// Product state orthogonal to every realized member, built from a valid
/// extension witness: on a chosen region's party it takes the opposite side
/// of that region's basis, elsewhere a vector outside the family.
inline ProductState realize_witness(const Configuration& c, const ExtensionWitness& w, const SymbolicAssignment& a,
                                    const BasisFamily& f) {
  if (!is_valid_witness(c, w)) throw std::invalid_argument("realize_witness: witness does not cover every state");
  validate_assignment(c, a);
  ProductState out;
  for (int j = 0; j < c.num_parties(); ++j) {
    if (!w.choices[j]) {
      out.factors.push_back(fresh_qubit());
      continue;
    }
    RegionLabel l = a.parties[j][*w.choices[j]];
    l.side = l.side == Side::plus ? Side::perp : Side::plus;
    out.factors.push_back(f.vector(l));
  }
  return out;
}

/// One state per row; each qubit contributes "re im re im" for (a0, a1).
inline void write_state_matrix(std::ostream& os, const std::vector<ProductState>& states) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  for (const auto& st : states) {
    bool first = true;
    for (const auto& q : st.factors)
      for (auto z : {q.a0, q.a1}) {
        os << (first ? "" : " ") << z.real() << ' ' << z.imag();
        first = false;
      }
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace upb
