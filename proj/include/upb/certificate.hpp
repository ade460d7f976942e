#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "upb/model.hpp"
#include "upb/states.hpp"

namespace upb {

/// A configuration together with the basis labels that realize it, plus a
/// note on where it came from.
struct Certificate {
  Configuration config;
  SymbolicAssignment assignment;
  std::string provenance;
  std::optional<std::uint64_t> seed;
};

inline Certificate make_certificate(Configuration c, std::string provenance = {},
                                    std::optional<std::uint64_t> seed = std::nullopt) {
  SymbolicAssignment a = canonical_assignment(c);
  return {std::move(c), std::move(a), std::move(provenance), seed};
}

struct VerifyOptions {
  bool numeric = true;
  double tol = kOrthogonalTol;
};

struct VerificationReport {
  bool product_basis = false;
  EdgeSet missing_edges;
  bool unextendible = false;
  std::optional<ExtensionWitness> witness;
  std::vector<PairingViolation> pairing_violations;
  bool assignment_valid = false;
  std::string assignment_error;
  // Unset when the numeric cross-check was skipped.
  std::optional<bool> numeric_orthonormal;
  std::vector<Edge> numeric_offending;
  std::optional<bool> numeric_round_trip;
  std::string numeric_error;

  bool passed() const {
    return product_basis && unextendible && pairing_violations.empty() && assignment_valid &&
           numeric_orthonormal.value_or(true) && numeric_round_trip.value_or(true);
  }
};

inline VerificationReport verify_certificate(const Certificate& cert, const VerifyOptions& opts = {}) {
  VerificationReport rep;
  const Configuration& c = cert.config;
  auto basis = is_product_basis(c);
  rep.product_basis = basis.is_basis;
  rep.missing_edges = std::move(basis.missing);
  rep.witness = find_extension(c);
  rep.unextendible = !rep.witness.has_value();
  rep.pairing_violations = pairing_violations(c);
  try {
    validate_assignment(c, cert.assignment);
    rep.assignment_valid = true;
  } catch (const AssignmentError& e) {
    rep.assignment_error = e.what();
  }
  if (opts.numeric && rep.assignment_valid) {
    try {
      const BasisFamily family(required_basis_count(cert.assignment));
      const auto states = realize_configuration(c, cert.assignment, family);
      auto orth = pairwise_orthogonality_check(states, opts.tol);
      rep.numeric_orthonormal = orth.orthonormal;
      rep.numeric_offending = std::move(orth.offending);
      rep.numeric_round_trip = recover_orthogonality_graph(states, opts.tol).canonical() == c.canonical();
    } catch (const std::exception& e) {
      rep.numeric_error = e.what();
      rep.numeric_orthonormal = false;
      rep.numeric_round_trip = false;
    }
  }
  return rep;
}

}  // namespace upb
