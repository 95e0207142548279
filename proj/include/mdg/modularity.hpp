// Modular flats, the diamond isomorphism and supersolvability.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdg/lattice.hpp"

namespace mdg {

struct ModularityResult {
  bool modular = true;
  // Minimal-rank flat violating the rank identity, ties broken by the
  // lexicographic order of atom index lists; -1 when modular.
  FlatId witness = -1;
};

ModularityResult is_modular(const GeometricLattice& l, FlatId f);

// The three equivalent characterisations, evaluated independently:
// (1) rank identity, (2) F^(A v B) = A v (F^B) for A <= F,
// (3) B^(A v F) = A v (B^F) for A <= B.
bool modular_by_rank(const GeometricLattice& l, FlatId f);
bool modular_by_lower_law(const GeometricLattice& l, FlatId f);
bool modular_by_upper_law(const GeometricLattice& l, FlatId f);
bool modular_characterizations_agree(const GeometricLattice& l, FlatId f);

// X -> X v G from [F ^ G, F] onto [G, F v G], with inverse Y -> Y ^ F.
struct DiamondIso {
  FlatId f = -1, g = -1;
  std::vector<std::pair<FlatId, FlatId>> pairs;  // (X, X v G)
  FlatId forward(FlatId x) const;
  FlatId backward(FlatId y) const;
};
DiamondIso diamond_iso(const GeometricLattice& l, FlatId f_modular, FlatId g);

std::vector<FlatId> modular_flats(const GeometricLattice& l);
std::vector<FlatId> modular_coatoms(const GeometricLattice& l);

struct ModularChain {
  std::vector<FlatId> chain;  // G_0 = bottom < ... < G_n = top
  std::vector<Mask> j_sets;   // atoms below G_i and not below G_{i-1}, i = 1..n
  std::vector<int> j_sizes() const;
};

// Top-down search over modular coatoms, recursing into [0, G].
std::optional<ModularChain> is_supersolvable(const LatticePtr& l);

using Graph = std::vector<std::pair<std::string, std::string>>;
// Perfect-elimination-ordering test via maximum cardinality search.
bool is_chordal(const Graph& g);

struct ChordalityCheck {
  bool chordal = false;
  bool supersolvable = false;
  bool agree() const { return chordal == supersolvable; }
};
ChordalityCheck chordality_crosscheck(const Graph& g);

}  // namespace mdg
