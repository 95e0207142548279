// Orlik-Solomon algebra in the no-broken-circuit basis.
//
// Atoms are ordered by their index in the lattice. A monomial is stored as
// the mask of its atoms and stands for the product in increasing order.
#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdg/lattice.hpp"

namespace mdg {

struct OSElement {
  std::map<Mask, mpq_class> terms;  // nbc monomial -> coefficient, no zeros

  bool zero() const { return terms.empty(); }
  void add(Mask m, const mpq_class& c);
  OSElement& operator+=(const OSElement& o);
  OSElement operator*(const mpq_class& c) const;
  bool operator==(const OSElement& o) const { return terms == o.terms; }
};

// Sign of the permutation sorting the concatenation of two disjoint
// increasing words.
int shuffle_sign(Mask first, Mask second);
// Sign of sorting an arbitrary word of distinct atoms (0 on repeats).
int word_sign(const std::vector<int>& word);

class OSAlgebra {
 public:
  explicit OSAlgebra(LatticePtr l);

  const LatticePtr& lattice() const { return l_; }
  const std::vector<Mask>& broken_circuits() const { return broken_; }
  bool is_nbc(Mask m) const;
  std::vector<std::vector<Mask>> nbc_basis() const;  // per degree

  OSElement reduce(Mask increasing) const;
  OSElement reduce_word(const std::vector<int>& word) const;
  OSElement monomial(Mask m, const mpq_class& c = 1) const;
  OSElement multiply(const OSElement& a, const OSElement& b) const;

  std::vector<long long> hilbert_series() const;
  // Number of nbc monomials per flat, indexed by flat id.
  std::vector<long long> graded_dims() const;
  // OS(L, top) lives in degree rank(L) only.
  bool top_concentrated() const;

  std::string format(const OSElement& e) const;

 private:
  LatticePtr l_;
  std::vector<Mask> circuits_;
  std::vector<Mask> broken_;  // sorted lexicographically
  mutable std::unordered_map<Mask, OSElement> memo_;
};

struct HolonomyRelation {
  int atom;            // t_H
  FlatId flat;         // rank-2 flat F with H <= F
  std::vector<int> sum;  // atoms of F
};
struct HolonomyPresentation {
  std::vector<std::string> generators;
  std::vector<HolonomyRelation> relations;
};
HolonomyPresentation holonomy_presentation(const GeometricLattice& l);

struct KoszulSeries {
  bool pass = true;
  int fail_index = -1;
  std::vector<mpz_class> coefficients;  // of 1 / Hilb(-t), orders 0..N
};
KoszulSeries koszul_series_check(const std::vector<long long>& hilbert, int order);

// Delta_F on OS(L) into OS([0,F]) (x) OS([F,1]): e_H -> e_H (x) 1 when H <= F,
// otherwise 1 (x) e_{F v H}; extended multiplicatively with Koszul signs.
using OSTensor = std::map<std::pair<Mask, Mask>, mpq_class>;
OSTensor os_coproduct(const OSAlgebra& whole, const IntervalResult& lower, const OSAlgebra& lower_os,
                      const IntervalResult& upper, const OSAlgebra& upper_os, const OSElement& x);

}  // namespace mdg
