#pragma once

// Versioned text format for configurations and certificates, and Graphviz
// export of per-party region diagrams.
//
// The format is JSON with a fixed field order and one party per line:
//
//   {
//     "format": "upb-config",
//     "version": 1,
//     "num_states": 7,
//     "num_parties": 3,
//     "parties": [
//       {"regions": [[0,1,2],[3,4,5,6]], "pairs": [[0,1]], "assignment": [...]},
//       ...
//     ],
//     "provenance": {"note": "...", "seed": 7}
//   }
//
// "assignment" and "provenance" are optional. Writing a parsed document
// reproduces the input byte for byte when the input was produced here.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "upb/certificate.hpp"
#include "upb/model.hpp"
#include "upb/states.hpp"

namespace upb {

inline constexpr int kDocumentVersion = 1;

class DocumentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigDocument {
  Configuration config;
  std::optional<SymbolicAssignment> assignment;
  std::optional<std::string> provenance;
  std::optional<std::uint64_t> seed;

  Certificate to_certificate() const {
    return {config, assignment ? *assignment : canonical_assignment(config), provenance.value_or(""), seed};
  }

  static ConfigDocument from_certificate(const Certificate& c) {
    return {c.config, c.assignment, c.provenance.empty() ? std::nullopt : std::optional(c.provenance), c.seed};
  }
};

namespace detail {

inline std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

template <class Range>
std::string int_list(const Range& r) {
  std::string out = "[";
  bool first = true;
  for (auto v : r) {
    if (!first) out += ',';
    out += std::to_string(v);
    first = false;
  }
  return out + "]";
}

}  // namespace detail

inline std::string write_document(const ConfigDocument& doc) {
  const Configuration& c = doc.config;
  if (doc.assignment) validate_assignment(c, *doc.assignment);
  std::ostringstream os;
  os << "{\n";
  os << "  \"format\": \"upb-config\",\n";
  os << "  \"version\": " << kDocumentVersion << ",\n";
  os << "  \"num_states\": " << c.num_states() << ",\n";
  os << "  \"num_parties\": " << c.num_parties() << ",\n";
  os << "  \"parties\": [\n";
  for (int j = 0; j < c.num_parties(); ++j) {
    const auto& layout = c.party(j);
    os << "    {\"regions\": [";
    for (int r = 0; r < layout.region_count(); ++r) os << (r ? "," : "") << detail::int_list(layout.region(r));
    os << "], \"pairs\": [";
    bool first = true;
    for (auto [x, y] : layout.pairs()) {
      os << (first ? "" : ",") << '[' << x << ',' << y << ']';
      first = false;
    }
    os << ']';
    if (doc.assignment) {
      os << ", \"assignment\": [";
      const auto& labels = doc.assignment->parties[j];
      for (std::size_t r = 0; r < labels.size(); ++r)
        os << (r ? "," : "") << "{\"basis\": " << labels[r].basis << ", \"side\": \""
           << (labels[r].side == Side::plus ? "plus" : "perp") << "\"}";
      os << ']';
    }
    os << '}' << (j + 1 < c.num_parties() ? "," : "") << '\n';
  }
  os << "  ]";
  if (doc.provenance || doc.seed) {
    os << ",\n  \"provenance\": {\"note\": " << detail::json_string(doc.provenance.value_or(""));
    if (doc.seed) os << ", \"seed\": " << *doc.seed;
    os << '}';
  }
  os << "\n}\n";
  return os.str();
}

inline ConfigDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("malformed document: ") + e.what());
  }
  try {
    if (!j.is_object()) throw DocumentError("document must be an object");
    if (j.value("format", std::string()) != "upb-config") throw DocumentError("missing or unknown \"format\"");
    const int version = j.at("version").get<int>();
    if (version != kDocumentVersion) throw DocumentError("unsupported version " + std::to_string(version));
    const int s = j.at("num_states").get<int>();
    const int p = j.at("num_parties").get<int>();
    const auto& parties = j.at("parties");
    if (!parties.is_array() || static_cast<int>(parties.size()) != p)
      throw DocumentError("\"parties\" must list num_parties entries");

    std::vector<PartyLayout> layouts;
    SymbolicAssignment assignment;
    int with_assignment = 0;
    for (const auto& pj : parties) {
      auto regions = pj.at("regions").get<std::vector<std::vector<int>>>();
      auto raw_pairs = pj.value("pairs", std::vector<std::vector<int>>{});
      std::vector<std::pair<int, int>> pairs;
      for (const auto& pr : raw_pairs) {
        if (pr.size() != 2) throw DocumentError("each pair must hold two region indices");
        pairs.emplace_back(pr[0], pr[1]);
      }
      layouts.emplace_back(s, std::move(regions), pairs);
      if (pj.contains("assignment")) {
        ++with_assignment;
        std::vector<RegionLabel> labels;
        for (const auto& lj : pj.at("assignment")) {
          const std::string side = lj.at("side").get<std::string>();
          if (side != "plus" && side != "perp") throw DocumentError("side must be \"plus\" or \"perp\"");
          labels.push_back({lj.at("basis").get<int>(), side == "plus" ? Side::plus : Side::perp});
        }
        assignment.parties.push_back(std::move(labels));
      }
    }
    if (with_assignment != 0 && with_assignment != p)
      throw DocumentError("assignment must be given for every party or for none");

    ConfigDocument doc{Configuration(s, std::move(layouts)), std::nullopt, std::nullopt, std::nullopt};
    if (with_assignment) {
      validate_assignment(doc.config, assignment);
      doc.assignment = std::move(assignment);
    }
    if (j.contains("provenance")) {
      const auto& pv = j.at("provenance");
      doc.provenance = pv.value("note", std::string());
      if (pv.contains("seed")) doc.seed = pv.at("seed").get<std::uint64_t>();
    }
    return doc;
  } catch (const DocumentError&) {
    throw;
  } catch (const std::exception& e) {
    throw DocumentError(std::string("invalid document: ") + e.what());
  }
}

inline ConfigDocument read_document_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

inline void write_document_file(const std::string& path, const ConfigDocument& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_document(doc);
}

/// Graphviz description of one party: states v0..v{s-1}, one cluster per
/// region, one cluster-to-cluster edge per pairing.
inline std::string party_dot(const Configuration& c, int j) {
  const auto& layout = c.party(j);
  std::ostringstream os;
  os << "graph party" << j << " {\n";
  os << "  compound=true;\n";
  os << "  node [shape=circle];\n";
  for (int r = 0; r < layout.region_count(); ++r) {
    os << "  subgraph cluster_r" << r << " {\n";
    os << "    style=filled; color=lightgrey; label=\"R" << r << "\";\n";
    for (Vertex v : layout.region(r)) os << "    v" << v << ";\n";
    os << "  }\n";
  }
  for (auto [x, y] : layout.pairs())
    os << "  v" << layout.region(x).front() << " -- v" << layout.region(y).front() << " [ltail=cluster_r" << x
       << ", lhead=cluster_r" << y << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace upb
