#include "mdg/extensions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "mdg/modularity.hpp"

namespace mdg {

Mask ModularExtension::image_atoms() const {
  Mask m = 0;
  for (int a : atom_map) m |= bit(a);
  return m;
}

bool ModularExtension::valid(std::string* why) const {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (!embedding().valid()) return fail("atom map is not an embedding");
  FlatId fi = top_image();
  if (lattice->rank(fi) != base->rank()) return fail("image top has the wrong rank");
  if (lattice->mask(fi) != image_atoms()) return fail("image is not a lower interval");
  if (!is_modular(*lattice, fi).modular) return fail("image top is not modular");
  return true;
}

ModularExtension identity_extension(const LatticePtr& l) {
  ModularExtension e{l, l, {}};
  for (int a = 0; a < l->num_atoms(); ++a) e.atom_map.push_back(a);
  return e;
}

ModularExtension restrict_extension(const ModularExtension& ext, Mask keep) {
  Mask s = keep | ext.image_atoms();
  RestrictionResult r = restriction(ext.lattice, s);
  std::vector<int> inv(ext.lattice->num_atoms(), -1);
  for (std::size_t i = 0; i < r.inclusion.atom_map.size(); ++i)
    inv[r.inclusion.atom_map[i]] = static_cast<int>(i);
  ModularExtension out{ext.base, r.lattice, {}};
  for (int a : ext.atom_map) out.atom_map.push_back(inv[a]);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
};

// Incremental closure under "upward closed + meets of modular pairs".
class CutCloser {
 public:
  explicit CutCloser(const GeometricLattice& l)
      : l_(l), nf_(l.num_flats()), up_(nf_), pair_(static_cast<std::size_t>(nf_) * nf_, -1) {
    for (FlatId f = 0; f < nf_; ++f)
      for (FlatId g = f; g < nf_; ++g)
        if (l.leq(f, g)) up_[f].push_back(g);
  }

  bool modular_pair(FlatId a, FlatId b) {
    auto& p = pair_[static_cast<std::size_t>(a) * nf_ + b];
    if (p < 0) {
      p = l_.rank(l_.meet(a, b)) + l_.rank(l_.join(a, b)) == l_.rank(a) + l_.rank(b);
      pair_[static_cast<std::size_t>(b) * nf_ + a] = p;
    }
    return p;
  }

  // Add g (with its up-set) to the cut and close; newly added flats are
  // appended to `added`.
  void add(std::vector<char>& m, std::vector<FlatId>& members, FlatId g,
           std::vector<FlatId>& added) {
    std::vector<FlatId> queue;
    auto insert_up = [&](FlatId x) {
      for (FlatId y : up_[x])
        if (!m[y]) {
          m[y] = 1;
          members.push_back(y);
          added.push_back(y);
          queue.push_back(y);
        }
    };
    insert_up(g);
    while (!queue.empty()) {
      FlatId x = queue.back();
      queue.pop_back();
      for (std::size_t i = 0; i < members.size(); ++i) {
        FlatId y = members[i];
        if (y == x) continue;
        FlatId z = l_.meet(x, y);
        if (m[z]) continue;
        if (modular_pair(x, y)) insert_up(z);
      }
    }
  }

 private:
  const GeometricLattice& l_;
  int nf_;
  std::vector<std::vector<FlatId>> up_;
  std::vector<signed char> pair_;
};

}  // namespace

CutCheck is_modular_cut(const GeometricLattice& l, const FlatSet& m) {
  CutCheck c;
  const int nf = l.num_flats();
  for (FlatId f = 0; f < nf; ++f) {
    if (!m[f]) continue;
    for (FlatId g = 0; g < nf; ++g)
      if (!m[g] && l.leq(f, g)) {
        c.ok = false;
        c.first = f;
        c.second = g;
        c.reason = "not upward closed";
        return c;
      }
  }
  for (FlatId f = 0; f < nf; ++f) {
    if (!m[f]) continue;
    for (FlatId g = f + 1; g < nf; ++g) {
      if (!m[g]) continue;
      FlatId z = l.meet(f, g);
      if (m[z]) continue;
      if (l.rank(z) + l.rank(l.join(f, g)) == l.rank(f) + l.rank(g)) {
        c.ok = false;
        c.first = f;
        c.second = g;
        c.reason = "modular pair whose meet is outside the cut";
        return c;
      }
    }
  }
  return c;
}

namespace {

// Flats outside the cut that are covered by a member of it.
std::vector<char> covered_by_cut(const GeometricLattice& l, const FlatSet& m) {
  std::vector<char> cov(l.num_flats(), 0);
  for (FlatId f = 0; f < l.num_flats(); ++f) {
    if (!m[f] || l.rank(f) == 0) continue;
    auto [lo, hi] = l.rank_range(l.rank(f) - 1);
    for (FlatId g = lo; g < hi; ++g)
      if (!m[g] && l.leq(g, f)) cov[g] = 1;
  }
  return cov;
}

bool cut_has_atom(const GeometricLattice& l, const FlatSet& m) {
  auto [lo, hi] = l.rank_range(1);
  for (FlatId f = lo; f < hi; ++f)
    if (m[f]) return true;
  return m[l.bottom()] != 0;
}

}  // namespace

LatticePtr truncation(const LatticePtr& l, const FlatSet& m) {
  CutCheck c = is_modular_cut(*l, m);
  if (!c.ok) throw Error(ErrorKind::NotAModularCut, c.reason);
  if (cut_has_atom(*l, m)) throw Error(ErrorKind::DegenerateCut, "cut contains an atom");
  std::vector<char> cov = covered_by_cut(*l, m);
  std::vector<std::pair<Mask, int>> fl;
  for (FlatId f = 0; f < l->num_flats(); ++f) {
    if (m[f]) {
      fl.push_back({l->mask(f), l->rank(f) - 1});
    } else if (!cov[f]) {
      fl.push_back({l->mask(f), l->rank(f)});
    }
  }
  return make_lattice(GeometricLattice::from_ranked(l->atoms(), std::move(fl), true));
}

SingleElementExtension single_element_extension(const LatticePtr& l, const FlatSet& m,
                                                const std::string& label) {
  if (cut_has_atom(*l, m)) throw Error(ErrorKind::DegenerateCut, "cut contains an atom");
  const int n = l->num_atoms();
  if (n + 1 > kMaxAtoms) throw Error(ErrorKind::ResourceLimit, "too many atoms");
  const Mask e = bit(n);
  std::vector<char> cov = covered_by_cut(*l, m);
  std::vector<std::pair<Mask, int>> fl;
  fl.reserve(2 * l->num_flats());
  for (FlatId f = 0; f < l->num_flats(); ++f) {
    if (m[f]) {
      fl.push_back({l->mask(f) | e, l->rank(f)});
    } else {
      fl.push_back({l->mask(f), l->rank(f)});
      if (!cov[f]) fl.push_back({l->mask(f) | e, l->rank(f) + 1});
    }
  }
  std::vector<std::string> atoms = l->atoms();
  atoms.push_back(label);
  SingleElementExtension out;
  out.lattice = make_lattice(GeometricLattice::from_ranked(std::move(atoms), std::move(fl)));
  out.embedding = Embedding{l, out.lattice, {}};
  for (int a = 0; a < n; ++a) out.embedding.atom_map.push_back(a);
  return out;
}

std::vector<FlatSet> enumerate_modular_cuts(const GeometricLattice& l, const FlatSet& forbidden) {
  const int nf = l.num_flats();
  CutCloser closer(l);
  std::vector<FlatSet> out;
  // Prefix-preserving closure extension over flats in id (rank) order:
  // every closed family is produced once, from the closure of its prefix.
  struct Frame {
    FlatSet m;
    std::vector<FlatId> members;
    FlatId last;
  };
  std::vector<Frame> stack;
  stack.push_back({FlatSet(nf, 0), {}, -1});
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    out.push_back(fr.m);
    for (FlatId g = nf - 1; g > fr.last; --g) {
      if (fr.m[g] || forbidden[g]) continue;
      FlatSet m2 = fr.m;
      std::vector<FlatId> members = fr.members, added;
      closer.add(m2, members, g, added);
      bool ok = true;
      for (FlatId x : added)
        if (forbidden[x] || x < g) {
          ok = false;
          break;
        }
      if (ok) stack.push_back({std::move(m2), std::move(members), g});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

PushoutResult pushout(const ModularExtension& e1, const ModularExtension& e2) {
  if (e1.base.get() != e2.base.get() && !e1.base->same_table(*e2.base))
    throw Error(ErrorKind::MismatchedBase, "pushout of extensions of different lattices");
  const LatticePtr& b = e1.base;
  const int nb = b->num_atoms();
  const Mask new1 = e1.new_atoms(), new2 = e2.new_atoms();
  const std::vector<int> n1 = bits_of(new1), n2 = bits_of(new2);
  if (nb + n1.size() + n2.size() > static_cast<std::size_t>(kMaxAtoms))
    throw Error(ErrorKind::ResourceLimit, "pushout too large");

  // Atom maps of E1 and E2 into the pushout.
  std::vector<int> map1(e1.lattice->num_atoms(), -1), map2(e2.lattice->num_atoms(), -1);
  for (int a = 0; a < nb; ++a) {
    map1[e1.atom_map[a]] = a;
    map2[e2.atom_map[a]] = a;
  }
  for (std::size_t k = 0; k < n1.size(); ++k) map1[n1[k]] = nb + static_cast<int>(k);
  for (std::size_t k = 0; k < n2.size(); ++k)
    map2[n2[k]] = nb + static_cast<int>(n1.size() + k);

  std::vector<std::string> labels = b->atoms();
  std::set<std::string> used(labels.begin(), labels.end());
  auto fresh = [&](std::string s) {
    while (used.count(s)) s += "'";
    used.insert(s);
    return s;
  };
  for (int x : n1) labels.push_back(fresh(e1.lattice->atom(x)));
  for (int x : n2) labels.push_back(fresh(e2.lattice->atom(x)));

  Embedding emb1 = e1.embedding(), emb2 = e2.embedding();
  FlatId f1 = e1.top_image(), f2 = e2.top_image();
  // Group flats of each side by the base flat they meet the image in.
  std::map<FlatId, std::vector<FlatId>> side1, side2;
  for (FlatId x = 0; x < e1.lattice->num_flats(); ++x)
    side1[emb1.preimage(e1.lattice->meet(x, f1))].push_back(x);
  for (FlatId x = 0; x < e2.lattice->num_flats(); ++x)
    side2[emb2.preimage(e2.lattice->meet(x, f2))].push_back(x);

  auto translate = [](const GeometricLattice& l, const std::vector<int>& map, FlatId x) {
    Mask m = 0;
    for (int a : bits_of(l.mask(x))) m |= bit(map[a]);
    return m;
  };
  std::vector<std::pair<Mask, int>> fl;
  for (auto& [c, xs] : side1) {
    if (c < 0) throw Error(ErrorKind::InvalidExtension, "first extension image is not an interval");
    auto it = side2.find(c);
    if (it == side2.end()) continue;
    for (FlatId x : xs)
      for (FlatId y : it->second)
        fl.push_back({translate(*e1.lattice, map1, x) | translate(*e2.lattice, map2, y),
                      e1.lattice->rank(x) + e2.lattice->rank(y) - b->rank(c)});
  }
  PushoutResult res;
  auto p = make_lattice(GeometricLattice::from_ranked(std::move(labels), std::move(fl)));
  res.ext = ModularExtension{b, p, {}};
  for (int a = 0; a < nb; ++a) res.ext.atom_map.push_back(a);
  res.from_first = Embedding{e1.lattice, p, map1};
  res.from_second = Embedding{e2.lattice, p, map2};
  return res;
}

SymmetricExtension symmetric_extension(const LatticePtr& l, const ModularExtension& ext, FlatId f,
                                       const std::string& label) {
  if (f < 0 || f >= l->num_flats() || l->rank(f) + 1 != l->rank() || !is_modular(*l, f).modular)
    throw Error(ErrorKind::NotModularCoatom, "symmetric extension needs a modular coatom");
  IntervalResult lower = interval(l, l->bottom(), f);
  const LatticePtr& base = lower.lattice;
  // Atoms of [0,F] are the atoms of L below F, in order.
  std::vector<int> into_l;
  for (int a : bits_of(l->mask(f))) into_l.push_back(a);

  SymmetricExtension out;
  ModularExtension first{base, l, into_l};
  ModularExtension second;
  bool paper_form = ext.base.get() == l.get() || ext.base->same_table(*l);
  if (paper_form) {
    second = ModularExtension{base, ext.lattice, {}};
    for (int a : into_l) second.atom_map.push_back(ext.atom_map[a]);
  } else if (ext.base->same_table(*base)) {
    second = ModularExtension{base, ext.lattice, ext.atom_map};
  } else {
    throw Error(ErrorKind::MismatchedBase, "extension is neither of L nor of [0,F]");
  }
  PushoutResult po = pushout(first, second);
  out.glued = po.ext.lattice;
  out.cut.assign(out.glued->num_flats(), 0);
  if (paper_form) {
    for (int h = 0; h < l->num_atoms(); ++h) {
      if (l->mask(f) & bit(h)) continue;
      Mask both = bit(po.from_first.atom_map[h]) | bit(po.from_second.atom_map[ext.atom_map[h]]);
      for (FlatId x = 0; x < out.glued->num_flats(); ++x)
        if ((out.glued->mask(x) & both) == both) out.cut[x] = 1;
    }
  }
  out.degenerate = std::none_of(out.cut.begin(), out.cut.end(), [](char c) { return c != 0; });
  CutCheck cc = is_modular_cut(*out.glued, out.cut);
  if (!cc.ok) throw Error(ErrorKind::NotAModularCut, "symmetric cut: " + cc.reason);
  SingleElementExtension se = single_element_extension(out.glued, out.cut, label);
  out.ext = ModularExtension{l, se.lattice, po.from_first.atom_map};
  std::string why;
  if (!out.ext.valid(&why)) throw Error(ErrorKind::InvalidExtension, "symmetric extension: " + why);
  return out;
}

// ---------------------------------------------------------------------------

CanonicalExtension canonicalize_extension(const ModularExtension& ext) {
  CanonicalForm cf = canonical_form(*ext.lattice, ext.atom_map);
  const int nb = ext.base->num_atoms();
  std::vector<std::string> labels = ext.base->atoms();
  for (int p = nb; p < ext.lattice->num_atoms(); ++p) labels.push_back("e" + std::to_string(p - nb + 1));
  CanonicalExtension out;
  out.ext = ModularExtension{ext.base, relabel(ext.lattice, cf.order, labels), {}};
  for (int a = 0; a < nb; ++a) out.ext.atom_map.push_back(a);
  out.cert = std::move(cf.cert);
  for (const auto& perm : cf.automorphisms) {
    std::vector<int> q(perm.size());
    for (std::size_t p = 0; p < perm.size(); ++p) q[p] = cf.position[perm[cf.order[p]]];
    out.automorphisms.push_back(std::move(q));
  }
  out.order = std::move(cf.order);
  return out;
}

std::vector<ModularExtension> enumerate_modular_extensions(const LatticePtr& l,
                                                           const CatalogOptions& opt) {
  std::vector<ModularExtension> out;
  std::unordered_set<Certificate> seen;
  CanonicalExtension root = canonicalize_extension(identity_extension(l));
  seen.insert(root.cert);
  out.push_back(root.ext);
  std::vector<ModularExtension> frontier{root.ext};
  for (int level = 1; level <= opt.max_new_atoms; ++level) {
    std::vector<ModularExtension> next;
    for (const ModularExtension& ext : frontier) {
      const GeometricLattice& e = *ext.lattice;
      const FlatId fi = ext.top_image();
      FlatSet forbidden(e.num_flats(), 0);
      for (FlatId x = 0; x < e.num_flats(); ++x)
        if (e.rank(x) <= 1 || e.leq(x, fi)) forbidden[x] = 1;
      const bool may_grow = ext.extra_rank() < opt.max_extra_rank;
      for (const FlatSet& cut : enumerate_modular_cuts(e, forbidden)) {
        bool empty = std::none_of(cut.begin(), cut.end(), [](char c) { return c != 0; });
        if (empty && !may_grow) continue;
        SingleElementExtension se = single_element_extension(ext.lattice, cut, "new");
        ModularExtension cand{l, se.lattice, ext.atom_map};
        if (!is_modular(*cand.lattice, cand.top_image()).modular) continue;
        CanonicalExtension ce = canonicalize_extension(cand);
        if (!seen.insert(ce.cert).second) continue;
        next.push_back(ce.ext);
        out.push_back(ce.ext);
        if (out.size() > opt.max_extensions)
          throw Error(ErrorKind::ResourceLimit, "extension catalogue exceeds its size limit");
      }
    }
    if (opt.progress) opt.progress(level, out.size());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace mdg
