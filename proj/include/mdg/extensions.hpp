// Matroid surgery: modular cuts, truncation, single-element extensions,
// pushouts along a common lower interval, symmetric extensions and the
// bounded catalogue of modular extensions.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mdg/lattice.hpp"

namespace mdg {

// Membership vector over the flat ids of a lattice.
using FlatSet = std::vector<char>;

// An embedding of `base` onto a lower interval [0, F_i] of `lattice`.
struct ModularExtension {
  LatticePtr base;
  LatticePtr lattice;
  std::vector<int> atom_map;  // base atom -> lattice atom

  Embedding embedding() const { return Embedding{base, lattice, atom_map}; }
  Mask image_atoms() const;
  Mask new_atoms() const { return lattice->all_atoms() & ~image_atoms(); }
  FlatId top_image() const { return lattice->closure(image_atoms()); }
  int extra_rank() const { return lattice->rank() - base->rank(); }
  // Image is exactly [0, F_i] and F_i is modular; `why` explains a failure.
  bool valid(std::string* why = nullptr) const;
};

ModularExtension identity_extension(const LatticePtr& l);

// Restrict the extension lattice to the image atoms plus `keep`.
ModularExtension restrict_extension(const ModularExtension& ext, Mask keep);

struct CutCheck {
  bool ok = true;
  FlatId first = -1, second = -1;  // violating flat or pair
  std::string reason;
};
CutCheck is_modular_cut(const GeometricLattice& l, const FlatSet& m);

LatticePtr truncation(const LatticePtr& l, const FlatSet& m);

struct SingleElementExtension {
  LatticePtr lattice;  // atoms of l followed by the new atom
  Embedding embedding;
};
SingleElementExtension single_element_extension(const LatticePtr& l, const FlatSet& m,
                                                const std::string& label);

// All modular cuts avoiding the forbidden flats (each exactly once).
std::vector<FlatSet> enumerate_modular_cuts(const GeometricLattice& l, const FlatSet& forbidden);

struct PushoutResult {
  ModularExtension ext;  // base -> E1 u_L E2
  Embedding from_first;  // E1 -> pushout
  Embedding from_second; // E2 -> pushout
};
// Atoms of the result: base atoms, then new atoms of E1, then of E2.
PushoutResult pushout(const ModularExtension& e1, const ModularExtension& e2);

struct SymmetricExtension {
  ModularExtension ext;  // L -> L u_F E u_F e
  LatticePtr glued;      // L u_[0,F] E before adding e
  FlatSet cut;           // modular cut of `glued` used for e
  bool degenerate = false;  // empty cut: e is added freely
};
SymmetricExtension symmetric_extension(const LatticePtr& l, const ModularExtension& ext, FlatId f,
                                       const std::string& label);

struct CatalogOptions {
  int max_new_atoms = 3;
  int max_extra_rank = 1;
  // Optional progress hook (level, number of extensions found so far).
  std::function<void(int, std::size_t)> progress;
  std::size_t max_extensions = 2000000;
};

// Modular extensions up to isomorphism fixing the base atoms, each
// relabelled canonically: base atoms first in base order, then e1, e2, ...
std::vector<ModularExtension> enumerate_modular_extensions(const LatticePtr& l,
                                                           const CatalogOptions& opt);

// Canonical relabelling of an extension with its base atoms fixed.
struct CanonicalExtension {
  ModularExtension ext;
  Certificate cert;
  std::vector<int> order;  // canonical position -> atom of the input lattice
  std::vector<std::vector<int>> automorphisms;  // in canonical positions
};
CanonicalExtension canonicalize_extension(const ModularExtension& ext);

}  // namespace mdg
