// JSON ingestion and serialization.
//
// Lattice files:
//   {"name": ..., "kind": "flats", "atoms": [...], "flats": [[...], ...]}
//   {"name": ..., "kind": "point_line", "atoms": [...], "lines": [[...], ...]}
//     (rank 3; pairs not on a listed line form two-point lines)
//   {"name": ..., "kind": "graph", "edges": [["u","v"], ...]}
//   {"name": ..., "kind": "partition", "n": 4}
//   {"name": ..., "kind": "boolean", "n": 3}
//   {"name": ..., "kind": "uniform", "rank": 2, "n": 4}
#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "json.hpp"
#include "mdg/lattice.hpp"
#include "mdg/md_cdga.hpp"
#include "mdg/modularity.hpp"

namespace mdg {

using json = nlohmann::ordered_json;

struct LatticeSpec {
  std::string name;
  std::string kind;
  LatticePtr lattice;
  std::optional<Graph> graph;
};

LatticeSpec parse_lattice(const json& j);
LatticeSpec load_lattice(const std::string& path);
json lattice_to_json(const GeometricLattice& l, const std::string& name);

std::string rational_str(const mpq_class& q);  // "p/q", or "p" when integral
json certificate_to_json(const Certificate& c);
json diagram_to_json(const MDSpace& s, const DiagramKey& k, int sign = 1);
json vector_to_json(const MDSpace& s, const DiagramVector& v);

}  // namespace mdg
