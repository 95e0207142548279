// Finite geometric lattices stored as explicit tables of flats.
//
// A flat is kept as the bitmask of the atoms below it. Atom labels are
// opaque strings; every internal index is positional.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mdg {

using Mask = std::uint64_t;
using FlatId = int;

constexpr int kMaxAtoms = 64;

inline Mask bit(int i) { return Mask{1} << i; }
inline int popcount(Mask m) { return __builtin_popcountll(m); }
inline int lowest(Mask m) { return __builtin_ctzll(m); }
std::vector<int> bits_of(Mask m);

enum class ErrorKind {
  NotALattice,
  NotGeometric,
  DuplicateEdge,
  SelfLoop,
  ForeignFlat,
  NotComparable,
  NotModular,
  NotAModularCut,
  DegenerateCut,
  MismatchedBase,
  NotModularCoatom,
  InvalidExtension,
  NotContractible,
  LatticeMismatch,
  ImproperFlat,
  NotIso,
  InconsistentChain,
  SpecParse,
  TrivialLattice,
  ResourceLimit,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class GeometricLattice;
using LatticePtr = std::shared_ptr<const GeometricLattice>;

class GeometricLattice {
 public:
  // Checks every geometric-lattice axiom; throws NotALattice / NotGeometric
  // with a witness.
  static GeometricLattice from_flats(std::vector<std::string> atoms,
                                     const std::vector<Mask>& flats);

  // Used by the surgery code, which already knows the ranks. With
  // `check` the same validation as from_flats runs afterwards.
  static GeometricLattice from_ranked(std::vector<std::string> atoms,
                                      std::vector<std::pair<Mask, int>> flats,
                                      bool check = false);

  // Flats are the closed sets of a closure operator on the atoms.
  template <class Closure>
  static GeometricLattice from_closure(std::vector<std::string> atoms,
                                       Closure&& closure);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_flats() const { return static_cast<int>(masks_.size()); }
  int rank() const { return ranks_.back(); }
  bool trivial() const { return atoms_.empty(); }

  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom(int a) const { return atoms_[a]; }
  int atom_index(std::string_view label) const;
  Mask all_atoms() const { return masks_.back(); }

  // Flats are ordered by (rank, mask); 0 is the bottom and the last id the top.
  FlatId bottom() const { return 0; }
  FlatId top() const { return num_flats() - 1; }
  Mask mask(FlatId f) const { return masks_[f]; }
  int rank(FlatId f) const { return ranks_[f]; }
  FlatId find(Mask m) const;
  FlatId atom_flat(int a) const { return find(bit(a)); }

  FlatId closure(Mask s) const;
  int rank_of(Mask s) const { return ranks_[closure(s)]; }
  bool independent(Mask s) const { return rank_of(s) == popcount(s); }
  FlatId join(FlatId a, FlatId b) const { return closure(masks_[a] | masks_[b]); }
  FlatId meet(FlatId a, FlatId b) const { return find(masks_[a] & masks_[b]); }
  bool leq(FlatId a, FlatId b) const { return (masks_[a] & ~masks_[b]) == 0; }
  bool covers(FlatId upper, FlatId lower) const {
    return leq(lower, upper) && ranks_[upper] == ranks_[lower] + 1;
  }

  // [first, last) ids of the flats of rank r.
  std::pair<FlatId, FlatId> rank_range(int r) const;
  std::vector<FlatId> flats_of_rank(int r) const;
  std::vector<FlatId> upper_covers(FlatId f) const;
  std::string flat_label(FlatId f) const;
  std::string set_label(Mask m) const;

  // Exhaustive check of the five lattice invariants over all pairs.
  // Returns an empty string when they hold, otherwise a description.
  std::string check_invariants() const;

  bool same_table(const GeometricLattice& o) const {
    return atoms_ == o.atoms_ && masks_ == o.masks_;
  }

 private:
  GeometricLattice() = default;
  void index();
  void validate() const;

  std::vector<std::string> atoms_;
  std::vector<Mask> masks_;
  std::vector<int> ranks_;
  std::vector<FlatId> rank_start_;
  std::unordered_map<Mask, FlatId> index_;
};

template <class Closure>
GeometricLattice GeometricLattice::from_closure(std::vector<std::string> atoms,
                                                Closure&& closure) {
  const int n = static_cast<int>(atoms.size());
  std::vector<std::pair<Mask, int>> found;
  std::unordered_map<Mask, int> seen;
  Mask z = closure(Mask{0});
  found.push_back({z, 0});
  seen.emplace(z, 0);
  for (std::size_t head = 0; head < found.size(); ++head) {
    const auto [m, r] = found[head];
    for (int a = 0; a < n; ++a) {
      if (m & bit(a)) continue;
      Mask c = closure(m | bit(a));
      if (seen.emplace(c, r + 1).second) found.push_back({c, r + 1});
    }
  }
  return from_ranked(std::move(atoms), std::move(found), true);
}

// An injective join-preserving map sending atoms to atoms; it is determined
// by the atom map.
struct Embedding {
  LatticePtr source;
  LatticePtr target;
  std::vector<int> atom_map;

  Mask map_mask(Mask m) const;
  FlatId map_flat(FlatId f) const { return target->closure(map_mask(source->mask(f))); }
  FlatId image_top() const { return map_flat(source->top()); }
  // Preimage of a flat lying in the image; -1 when it does not.
  FlatId preimage(FlatId g) const;
  bool valid() const;
};

Embedding identity_embedding(const LatticePtr& l);
Embedding compose(const Embedding& outer, const Embedding& inner);

LatticePtr make_lattice(GeometricLattice l);

// Builders.
LatticePtr build_from_flats(const std::vector<std::string>& atoms,
                            const std::vector<std::vector<std::string>>& flats);
LatticePtr build_from_graph(const std::vector<std::pair<std::string, std::string>>& edges);
LatticePtr build_partition_lattice(int n);
LatticePtr build_boolean(int n);
LatticePtr build_uniform(int rank, int n);
LatticePtr trivial_lattice();

struct IntervalResult {
  LatticePtr lattice;
  std::vector<FlatId> to_parent;    // interval flat -> parent flat
  std::vector<FlatId> from_parent;  // parent flat -> interval flat or -1
  FlatId lower = 0;
  FlatId upper = 0;
};
// Atoms of [F1,F2] are the flats covering F1. Lower intervals keep the
// parent's atom labels and order; other intervals label an atom by the set
// of parent atoms below it and sort atoms by that label.
IntervalResult interval(const LatticePtr& l, FlatId lower, FlatId upper);

struct RestrictionResult {
  LatticePtr lattice;
  Embedding inclusion;  // restriction -> l
};
RestrictionResult restriction(const LatticePtr& l, Mask atoms);

LatticePtr direct_product(const LatticePtr& a, const LatticePtr& b);

struct Factorization {
  std::vector<LatticePtr> factors;
  std::vector<Mask> supports;  // atom partition of the parent
};
Factorization irreducible_factors(const LatticePtr& l);
// Connected components of the circuit-sharing relation, as atom masks.
std::vector<Mask> connected_components(const GeometricLattice& l);

std::vector<Mask> circuits(const GeometricLattice& l);

// Canonical labelling. Atoms carry initial colours; the result is invariant
// under colour-preserving isomorphism.
struct Certificate {
  int n = 0;
  std::vector<int> colors;  // colour at each canonical position
  std::vector<Mask> flats;  // relabelled flats, sorted
  auto operator<=>(const Certificate&) const = default;
  bool operator==(const Certificate&) const = default;
  std::size_t hash() const;
};

struct CanonicalForm {
  std::vector<int> order;     // canonical position -> atom
  std::vector<int> position;  // atom -> canonical position
  Certificate cert;
  // Colour-preserving automorphisms as atom permutations (includes identity).
  std::vector<std::vector<int>> automorphisms;
};

CanonicalForm canonical_form_colored(const GeometricLattice& l, const std::vector<int>& colors);
// Atoms in `fixed` are individually stabilised, in the listed order.
CanonicalForm canonical_form(const GeometricLattice& l, const std::vector<int>& fixed = {});
bool isomorphic(const GeometricLattice& a, const GeometricLattice& b);

// Relabel a lattice so that atom at canonical position p becomes atom p.
LatticePtr relabel(const LatticePtr& l, const std::vector<int>& order,
                   const std::vector<std::string>& labels);

bool lex_less(Mask a, Mask b);

}  // namespace mdg

template <>
struct std::hash<mdg::Certificate> {
  std::size_t operator()(const mdg::Certificate& c) const { return c.hash(); }
};
