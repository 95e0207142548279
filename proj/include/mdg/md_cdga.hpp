// Modular diagrams: normal forms, contraction, differential, product, the
// map to the Orlik-Solomon algebra and the coproducts.
//
// A normalized diagram is stored as (extension id, T): the extension is
// canonically relabelled so that the base atoms occupy positions
// 0..m-1 in base order and the new atoms follow; J is T (a set of base
// atoms) together with every new atom, in increasing position order.
#pragma once

#include <gmpxx.h>

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "mdg/extensions.hpp"
#include "mdg/os_algebra.hpp"

namespace mdg {

struct ExtRecord {
  LatticePtr lattice;  // canonical labelling: base atoms a0.., new atoms e1..
  Certificate cert;
  int num_old = 0;
  Mask old_mask = 0, new_mask = 0;
  int extra_rank = 0;
  bool odd = false;    // an automorphism acts oddly on the new atoms
  // Cached vanishing test (rel. 3-5 and bridges), independent of T.
  signed char viable = -1;
};

// Extensions interned by certificate; shared by every space so that keys
// compare across spaces over equal base tables.
class ExtRegistry {
 public:
  int intern(const CanonicalExtension& ce);
  const ExtRecord& get(int id) const { return records_[id]; }
  ExtRecord& get_mut(int id) { return records_[id]; }
  std::size_t size() const { return records_.size(); }

 private:
  std::deque<ExtRecord> records_;  // stable references across interning
  std::unordered_map<Certificate, int> ids_;
};

struct DiagramKey {
  int ext = 0;
  Mask t = 0;
  auto operator<=>(const DiagramKey&) const = default;
};

using DiagramVector = std::map<DiagramKey, mpq_class>;
using TensorVector = std::map<std::pair<DiagramKey, DiagramKey>, mpq_class>;

void add_to(DiagramVector& v, const DiagramKey& k, const mpq_class& c);
void add_to(TensorVector& v, const std::pair<DiagramKey, DiagramKey>& k, const mpq_class& c);

struct SignedKey {
  DiagramKey key;
  int sign = 1;
};

struct Bounds {
  int max_new_atoms = 3;
  int max_extra_rank = 1;
};

class MDContext;

class MDSpace {
 public:
  MDSpace(MDContext& ctx, LatticePtr base);

  const LatticePtr& base() const { return base_; }
  MDContext& context() const { return ctx_; }
  const ExtRecord& ext(int id) const;

  // Normal form of (E, i, word); nullopt when the diagram vanishes.
  std::optional<SignedKey> normalize(const LatticePtr& e, const std::vector<int>& atom_map,
                                     const std::vector<int>& word) const;
  std::optional<SignedKey> normalize(const ModularExtension& ext, const std::vector<int>& word) const {
    return normalize(ext.lattice, ext.atom_map, word);
  }

  std::vector<int> word(const DiagramKey& k) const;  // J in stored order
  int degree(const DiagramKey& k) const;
  FlatId grading(const DiagramKey& k) const;  // flat of the base
  int num_new(const DiagramKey& k) const { return popcount(ext(k.ext).new_mask); }
  int extra_rank(const DiagramKey& k) const { return ext(k.ext).extra_rank; }
  ModularExtension extension(const DiagramKey& k) const;
  std::string describe(const DiagramKey& k) const;

  // The diagram (L, Id, atoms) for a set of base atoms.
  std::optional<SignedKey> base_diagram(const std::vector<int>& atoms) const;
  DiagramKey unit() const;

  Mask contractible_atoms(const DiagramKey& k) const;  // positions in the extension
  bool is_bridge(const DiagramKey& k, int atom) const;
  // Gamma / H for a contractible atom position H; nullopt when it vanishes.
  std::optional<SignedKey> contract(const DiagramKey& k, int atom) const;

  DiagramVector differential(const DiagramKey& k) const;
  DiagramVector differential(const DiagramVector& v) const;

  DiagramVector product(const DiagramKey& a, const DiagramKey& b) const;
  DiagramVector product(const DiagramVector& a, const DiagramVector& b) const;

  OSElement to_os(const DiagramKey& k) const;
  OSElement to_os(const DiagramVector& v) const;
  const OSAlgebra& os() const { return *os_; }

  // MD(phi): (E, i, J) -> (E, i o phi, J) for a base automorphism given as
  // an atom permutation.
  std::optional<SignedKey> relabel(const DiagramKey& k, const std::vector<int>& perm) const;

  // All nonzero normalized diagrams of the given grading (a flat of the
  // base, or -1 for any) and degree (or INT_MIN for any) over the bounded
  // catalogue, sorted by certificate and T.
  std::vector<DiagramKey> basis(FlatId grading, int degree, const Bounds& b) const;
  const std::vector<int>& catalogue(const Bounds& b) const;

 private:
  bool viable(int ext_id) const;

  MDContext& ctx_;
  LatticePtr base_;
  std::shared_ptr<OSAlgebra> os_;
  mutable std::map<std::pair<int, int>, std::vector<int>> catalogues_;
  mutable std::map<DiagramKey, DiagramVector> d_memo_;
};

// Owns the registry and one space per base lattice table.
class MDContext {
 public:
  ExtRegistry& registry() { return registry_; }
  MDSpace& space(const LatticePtr& l);

  struct Split {
    IntervalResult lower, upper;
    MDSpace* lower_space;
    MDSpace* upper_space;
  };
  // Intervals [0,F] and [F,1] of a base with their spaces.
  const Split& split(const MDSpace& s, FlatId f);

 private:
  ExtRegistry registry_;
  std::map<std::string, std::unique_ptr<MDSpace>> spaces_;
  std::map<std::pair<const MDSpace*, FlatId>, Split> splits_;
};

// Delta_F: sum over flats F' of E meeting F_i in i(F) of
// eps * Gamma_{F'} (x) Gamma^{F'}.
TensorVector coproduct(MDSpace& s, const DiagramKey& k, FlatId f);
TensorVector coproduct(MDSpace& s, const DiagramVector& v, FlatId f);

// Forward: restrict to i(F) + J, a diagram over [0,F] of grading top.
// Backward: glue L along [0,F].
std::optional<SignedKey> grading_forward(MDSpace& s, const DiagramKey& k);
std::optional<SignedKey> grading_backward(MDSpace& whole, FlatId f, const DiagramKey& k);

// Carry a diagram between spaces over isomorphic bases; phi sends atom j of
// to.base() to atom phi[j] of from.base().
std::optional<SignedKey> transport(const MDSpace& from, const DiagramKey& k, const MDSpace& to,
                                   const std::vector<int>& phi);

// Refactor a diagram as a product of diagrams with irreducible extensions
// and multiply back. Returns the factors (over the same space) and whether
// the product gives back +-the diagram.
struct Factoring {
  std::vector<DiagramKey> factors;
  bool reproduces = false;
  bool factors_irreducible = false;
};
Factoring refactor(const MDSpace& s, const DiagramKey& k);

}  // namespace mdg
