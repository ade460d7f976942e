// upb: construct, verify, search for and export qubit UPB configurations.
//
// Exit codes: 0 success, 1 verification failed, 2 budget exhausted,
// 3 invalid input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "upb/certificate.hpp"
#include "upb/constructions.hpp"
#include "upb/document.hpp"
#include "upb/search.hpp"
#include "upb/states.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { ok = 0, failed = 1, exhausted = 2, invalid = 3 };

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_threads() {
  if (const char* env = std::getenv("UPB_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring UPB_THREADS=" << env << '\n';
  }
  return 1;
}

struct BudgetFlags {
  std::uint64_t node_limit = upb::SearchBudget{}.node_limit;
  std::optional<double> seconds;
  std::uint64_t seed = 0;
  int threads = default_threads();
  bool progress = false;
  std::uint64_t progress_every = upb::SearchBudget{}.progress_interval;

  void attach(CLI::App* cmd) {
    cmd->add_option("--node-limit", node_limit, "Stop after this many search nodes")->check(CLI::PositiveNumber);
    cmd->add_option("--seconds", seconds, "Wall-clock limit")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Seed for randomized restarts");
    cmd->add_option("--threads", threads, "Worker threads (default: $UPB_THREADS or 1)")->check(CLI::PositiveNumber);
    cmd->add_flag("--progress", progress, "Emit progress events as JSON lines on stderr");
    cmd->add_option("--progress-every", progress_every, "Nodes between progress events")->check(CLI::PositiveNumber);
  }

  upb::SearchBudget budget() const {
    upb::SearchBudget b;
    b.node_limit = node_limit;
    b.seconds = seconds;
    b.seed = seed;
    b.threads = threads;
    b.progress_interval = progress_every;
    if (progress)
      b.on_progress = [](const upb::SearchEvent& e) {
        nlohmann::json j{{"phase", e.phase}, {"nodes", e.nodes}, {"depth", e.depth}, {"best", e.best}};
        std::cerr << j.dump() << '\n';
      };
    return b;
  }
};

upb::ConfigDocument load(const std::string& path) {
  try {
    return upb::read_document_file(path);
  } catch (const upb::DocumentError& e) {
    throw InvalidInput(e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void save(const std::string& path, const upb::Certificate& cert) {
  upb::write_document_file(path, upb::ConfigDocument::from_certificate(cert));
  std::cout << "wrote " << path << '\n';
}

std::string region_text(const upb::PartyLayout& layout, int r) {
  std::string out = "{";
  for (upb::Vertex v : layout.region(r)) out += (out.size() > 1 ? "," : "") + ("v" + std::to_string(v));
  return out + "}";
}

void print_report(const upb::Certificate& cert, const upb::VerificationReport& rep) {
  const auto& c = cert.config;
  std::cout << "states: " << c.num_states() << ", parties: " << c.num_parties()
            << ", edges: " << upb::configuration_edges(c).size() << '\n';
  std::cout << "product basis: " << (rep.product_basis ? "yes" : "no");
  if (!rep.product_basis) {
    std::cout << " (missing";
    int shown = 0;
    for (const auto& e : rep.missing_edges.edges()) {
      if (shown++ == 8) {
        std::cout << " ...";
        break;
      }
      std::cout << " v" << e.a << "-v" << e.b;
    }
    std::cout << ')';
  }
  std::cout << '\n';
  std::cout << "unextendible: " << (rep.unextendible ? "yes" : "no") << '\n';
  if (rep.witness) {
    std::cout << "extension witness:";
    for (int j = 0; j < c.num_parties(); ++j)
      if (auto r = rep.witness->choices[j]) std::cout << " party " << j << ' ' << region_text(c.party(j), *r) << ';';
    std::cout << '\n';
  }
  std::cout << "all regions paired: " << (rep.pairing_violations.empty() ? "yes" : "no") << '\n';
  for (const auto& v : rep.pairing_violations) {
    if (v.kind == upb::PairingViolation::Kind::odd_region_count)
      std::cout << "  party " << v.party << ": odd number of regions\n";
    else
      std::cout << "  party " << v.party << ": region " << region_text(c.party(v.party), v.region) << " unpaired\n";
  }
  std::cout << "assignment: " << (rep.assignment_valid ? "consistent" : rep.assignment_error) << '\n';
  if (rep.numeric_orthonormal) {
    std::cout << "numeric orthonormality: " << (*rep.numeric_orthonormal ? "yes" : "no") << '\n';
    std::cout << "numeric round trip: " << (rep.numeric_round_trip.value_or(false) ? "yes" : "no") << '\n';
    if (!rep.numeric_error.empty()) std::cout << "numeric error: " << rep.numeric_error << '\n';
  }
  std::cout << "verified: " << (rep.passed() ? "true" : "false") << '\n';
}

int cmd_construct(int k, const std::string& out, bool numeric) {
  if (k < 2) throw InvalidInput("construct: k must be at least 2 (got " + std::to_string(k) + ")");
  const auto cert = upb::construct_upb_4k4(k);
  const auto rep = upb::verify_certificate(cert, {numeric, upb::kOrthogonalTol});
  print_report(cert, rep);
  if (!out.empty()) save(out, cert);
  return rep.passed() ? ok : failed;
}

int cmd_verify(const std::string& path, bool numeric, double tol) {
  const auto cert = load(path).to_certificate();
  const auto rep = upb::verify_certificate(cert, {numeric, tol});
  print_report(cert, rep);
  return rep.passed() ? ok : failed;
}

int cmd_search_min(int p, int s_max, const BudgetFlags& bf, const std::string& out) {
  const auto r = upb::exhaustive_min_upb(p, s_max, bf.budget());
  std::cout << "nodes: " << r.nodes << '\n';
  if (r.min_size) {
    std::cout << "f(" << p << ") = " << *r.min_size << '\n';
    if (!out.empty()) save(out, *r.witness);
    return ok;
  }
  if (r.status == upb::SearchStatus::budget_exhausted) {
    std::cout << "budget exhausted: no UPB found so far, verdict unknown\n";
    return exhausted;
  }
  std::cout << "f(" << p << ") > " << s_max << " (none <= " << s_max << ")\n";
  return ok;
}

int cmd_search_pairs(int per_party, int excess, bool anchored, bool repeats, std::optional<int> cap,
                     const BudgetFlags& bf) {
  std::optional<upb::AnchorConstraint> anchors;
  if (anchored) {
    anchors.emplace();
    for (int i = 0; i < per_party; ++i) anchors->anchors.push_back(i);
  }
  upb::PairSearchOptions opts;
  opts.allow_repeats = repeats;
  opts.party_cap = cap;
  const auto r = upb::pair_config_max_parties(per_party, excess, anchors, bf.budget(), opts);
  std::cout << "nodes: " << r.nodes << '\n';
  if (r.status == upb::SearchStatus::budget_exhausted) {
    std::cout << "budget exhausted: best so far " << r.max_parties << " parties, verdict unknown\n";
    return exhausted;
  }
  std::cout << "max parties: " << r.max_parties;
  if (r.capped) std::cout << " (reached --party-cap; may be larger)";
  std::cout << '\n';
  for (std::size_t j = 0; j < r.witness.parties.size(); ++j) {
    std::cout << "  party " << j << ':';
    for (const auto& e : r.witness.parties[j]) std::cout << " {" << e.a << ',' << e.b << '}';
    std::cout << '\n';
  }
  return ok;
}

int cmd_find(int p, int s, const upb::StructuralLimits& lim, const BudgetFlags& bf, const std::string& out) {
  upb::FindResult r;
  try {
    r = upb::find_upb(p, s, lim, bf.budget());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  std::cout << "nodes: " << r.nodes << ", restarts: " << r.restarts << '\n';
  if (r.certificate) {
    std::cout << "found: " << s << " states on " << p << " parties\n";
    print_report(*r.certificate, upb::verify_certificate(*r.certificate));
    if (!out.empty()) save(out, *r.certificate);
    return ok;
  }
  if (r.status == upb::SearchStatus::budget_exhausted) {
    std::cout << "budget exhausted: nothing found, verdict unknown\n";
    return exhausted;
  }
  std::cout << "none: no UPB of " << s << " states on " << p << " parties within these limits\n";
  return ok;
}

int cmd_export(const std::string& path, const std::string& format, const std::string& out_dir) {
  const auto cert = load(path).to_certificate();
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  if (format == "dot") {
    for (int j = 0; j < cert.config.num_parties(); ++j) {
      const fs::path file = dir / ("party" + std::to_string(j) + ".dot");
      std::ofstream(file) << upb::party_dot(cert.config, j);
      std::cout << "wrote " << file.string() << '\n';
    }
    return ok;
  }
  // format == "states"
  const upb::BasisFamily family(upb::required_basis_count(cert.assignment));
  const fs::path file = dir / "states.txt";
  std::ofstream os(file);
  upb::write_state_matrix(os, upb::realize_configuration(cert.config, cert.assignment, family));
  std::cout << "wrote " << file.string() << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unextendible product bases on qubits"};
  app.require_subcommand(1);

  int k = 0;
  std::string out;
  bool no_numeric = false;
  auto* construct = app.add_subcommand("construct", "Build and verify the 4k+4 state UPB on 4k qubits");
  construct->add_option("--k", k, "Construction parameter (k >= 2)")->required();
  construct->add_option("--out", out, "Write the certificate here");
  construct->add_flag("--no-numeric", no_numeric, "Skip the numeric cross-check");

  std::string path;
  bool numeric = false;
  double tol = upb::kOrthogonalTol;
  auto* verify = app.add_subcommand("verify", "Check a configuration document");
  verify->add_option("path", path, "Document to check")->required();
  verify->add_flag("--numeric", numeric, "Also realize the states and check them numerically");
  verify->add_option("--tol", tol, "Orthogonality tolerance")->check(CLI::PositiveNumber);

  int parties = 0, max_states = 0;
  BudgetFlags min_budget;
  auto* search_min = app.add_subcommand("search-min", "Smallest UPB on a given number of parties");
  search_min->add_option("--parties", parties)->required()->check(CLI::PositiveNumber);
  search_min->add_option("--max-states", max_states)->required()->check(CLI::PositiveNumber);
  search_min->add_option("--out", out, "Write the witness here");
  min_budget.attach(search_min);

  int per_party = 0, excess = 0;
  bool anchored = false, repeats = false;
  std::optional<int> party_cap;
  BudgetFlags pair_budget;
  auto* search_pairs = app.add_subcommand("search-pairs", "Largest pair system obeying the extension rule");
  search_pairs->add_option("--pairs-per-party", per_party)->required()->check(CLI::PositiveNumber);
  search_pairs->add_option("--excess", excess)->required()->check(CLI::PositiveNumber);
  search_pairs->add_flag("--anchored", anchored, "Every pair holds exactly one of vertices 0..pairs-per-party-1");
  search_pairs->add_flag("--allow-repeats", repeats, "Let a party occur more than once");
  search_pairs->add_option("--party-cap", party_cap, "Stop deepening at this many parties")->check(CLI::PositiveNumber);
  pair_budget.attach(search_pairs);

  int states = 0;
  upb::StructuralLimits lim;
  BudgetFlags find_budget;
  auto* find = app.add_subcommand("find", "Randomized search for a UPB under structural limits");
  find->add_option("--parties", parties)->required()->check(CLI::PositiveNumber);
  find->add_option("--states", states)->required()->check(CLI::PositiveNumber);
  find->add_option("--max-region", lim.max_region, "Largest region size on any party")->check(CLI::PositiveNumber);
  find->add_option("--max-pairs", lim.max_pairs, "Most size-2 regions on any party")->check(CLI::NonNegativeNumber);
  find->add_option("--parties-at-cap", lim.parties_at_pair_cap, "Exactly this many parties reach --max-pairs")
      ->check(CLI::NonNegativeNumber);
  find->add_option("--out", out, "Write the certificate here");
  find_budget.attach(find);

  std::string format = "dot", out_dir = ".";
  auto* exp = app.add_subcommand("export", "Write per-party graphs or realized states");
  exp->add_option("path", path, "Document to export")->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"dot", "states"}));
  exp->add_option("--out-dir", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return invalid;
  }

  try {
    if (*construct) return cmd_construct(k, out, !no_numeric);
    if (*verify) return cmd_verify(path, numeric, tol);
    if (*search_min) return cmd_search_min(parties, max_states, min_budget, out);
    if (*search_pairs) return cmd_search_pairs(per_party, excess, anchored, repeats, party_cap, pair_budget);
    if (*find) return cmd_find(parties, states, lim, find_budget, out);
    if (*exp) return cmd_export(path, format, out_dir);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid;
  } catch (const upb::AssignmentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return failed;
  }
  return invalid;
}
