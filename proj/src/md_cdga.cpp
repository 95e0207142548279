#include "mdg/md_cdga.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include "mdg/modularity.hpp"

namespace mdg {

void add_to(DiagramVector& v, const DiagramKey& k, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = v.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

void add_to(TensorVector& v, const std::pair<DiagramKey, DiagramKey>& k, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = v.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) v.erase(it);
  }
}

namespace {

int parity(const std::vector<int>& perm, Mask support) {
  // Parity of the permutation restricted to `support` (which it preserves).
  Mask seen = 0;
  int transpositions = 0;
  for (int s : bits_of(support)) {
    if (seen & bit(s)) continue;
    int len = 0;
    for (int x = s; !(seen & bit(x)); x = perm[x]) {
      seen |= bit(x);
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2;
}

Mask low_bits(int m) { return m >= 64 ? ~Mask{0} : bit(m) - 1; }

// Index of an atom among the atoms of a flat, in increasing order.
int index_in(Mask flat, int atom) { return popcount(flat & (bit(atom) - 1)); }

// Relations 3-5 and the bridge rule for a diagram whose extension has
// atoms exactly image + J.
bool vanishes(const LatticePtr& e, Mask image, Mask j) {
  const GeometricLattice& l = *e;
  if (l.closure(image | j) != l.top()) return true;
  for (Mask comp : connected_components(l))
    if ((comp & image) == 0) return true;
  for (FlatId g = 0; g < l.num_flats(); ++g) {
    if ((l.mask(g) & image) != image) continue;
    int outside = popcount(j & ~l.mask(g));
    if (outside == 1) return true;
    if (outside == 2 && is_modular(l, g).modular) return true;
  }
  return false;
}

}  // namespace

int ExtRegistry::intern(const CanonicalExtension& ce) {
  if (auto it = ids_.find(ce.cert); it != ids_.end()) return it->second;
  ExtRecord r;
  r.lattice = ce.ext.lattice;
  r.cert = ce.cert;
  r.num_old = static_cast<int>(ce.ext.atom_map.size());
  r.old_mask = low_bits(r.num_old);
  r.new_mask = r.lattice->all_atoms() & ~r.old_mask;
  r.extra_rank = ce.ext.extra_rank();
  for (const auto& perm : ce.automorphisms)
    if (parity(perm, r.new_mask)) r.odd = true;
  int id = static_cast<int>(records_.size());
  records_.push_back(std::move(r));
  ids_.emplace(ce.cert, id);
  return id;
}

// ---------------------------------------------------------------------------

MDSpace::MDSpace(MDContext& ctx, LatticePtr base)
    : ctx_(ctx), base_(std::move(base)), os_(std::make_shared<OSAlgebra>(base_)) {
  if (base_->trivial())
    throw Error(ErrorKind::TrivialLattice, "modular diagrams of the one-point lattice are not defined");
}

const ExtRecord& MDSpace::ext(int id) const { return ctx_.registry().get(id); }

bool MDSpace::viable(int id) const {
  ExtRecord& r = ctx_.registry().get_mut(id);
  if (r.viable < 0) r.viable = !r.odd && !vanishes(r.lattice, r.old_mask, r.new_mask);
  return r.viable;
}

std::optional<SignedKey> MDSpace::normalize(const LatticePtr& e, const std::vector<int>& atom_map,
                                            const std::vector<int>& word) const {
  if (static_cast<int>(atom_map.size()) != base_->num_atoms())
    throw Error(ErrorKind::InvalidExtension, "atom map does not match the base lattice");
  Mask jm = 0;
  for (int x : word) {
    if (x < 0 || x >= e->num_atoms()) throw Error(ErrorKind::InvalidExtension, "word atom out of range");
    if (jm & bit(x)) return std::nullopt;  // relation 1 on a repeated atom
    jm |= bit(x);
  }
  Mask image = 0;
  for (int a : atom_map) image |= bit(a);
  const Mask keep = image | jm;
  // Restrict to image + J, keeping atom order.
  ModularExtension r{base_, e, atom_map};
  std::vector<int> w(word);
  if (keep != e->all_atoms()) {
    r = restrict_extension(r, keep);
    for (int& x : w) x = index_in(keep, x);
  }
  CanonicalExtension ce = canonicalize_extension(r);
  int id = ctx_.registry().intern(ce);
  if (!viable(id)) return std::nullopt;
  std::vector<int> pos(ce.order.size());
  for (std::size_t p = 0; p < ce.order.size(); ++p) pos[ce.order[p]] = static_cast<int>(p);
  SignedKey out;
  out.key.ext = id;
  for (int& x : w) {
    x = pos[x];
    if (x < ext(id).num_old) out.key.t |= bit(x);
  }
  out.sign = word_sign(w);
  return out;
}

std::vector<int> MDSpace::word(const DiagramKey& k) const { return bits_of(k.t | ext(k.ext).new_mask); }

int MDSpace::degree(const DiagramKey& k) const {
  const ExtRecord& r = ext(k.ext);
  const GeometricLattice& e = *r.lattice;
  Mask jm = k.t | r.new_mask;
  FlatId join = e.closure(jm);
  FlatId meet = e.meet(join, e.closure(r.old_mask));
  return popcount(jm) - 2 * (e.rank(join) - e.rank(meet));
}

FlatId MDSpace::grading(const DiagramKey& k) const {
  const ExtRecord& r = ext(k.ext);
  const GeometricLattice& e = *r.lattice;
  FlatId meet = e.meet(e.closure(k.t | r.new_mask), e.closure(r.old_mask));
  return base_->find(e.mask(meet));
}

ModularExtension MDSpace::extension(const DiagramKey& k) const {
  const ExtRecord& r = ext(k.ext);
  ModularExtension x{base_, r.lattice, {}};
  for (int a = 0; a < r.num_old; ++a) x.atom_map.push_back(a);
  return x;
}

std::string MDSpace::describe(const DiagramKey& k) const {
  const ExtRecord& r = ext(k.ext);
  std::ostringstream os;
  os << "(E" << k.ext << " +" << popcount(r.new_mask) << " atoms, rank +" << r.extra_rank << "; J = {";
  bool first = true;
  for (int x : word(k)) {
    os << (first ? "" : ",");
    if (x < r.num_old) {
      os << base_->atom(x);
    } else {
      os << "e" << (x - r.num_old + 1);
    }
    first = false;
  }
  os << "})";
  return os.str();
}

std::optional<SignedKey> MDSpace::base_diagram(const std::vector<int>& atoms) const {
  std::vector<int> id(base_->num_atoms());
  for (int a = 0; a < base_->num_atoms(); ++a) id[a] = a;
  return normalize(base_, id, atoms);
}

DiagramKey MDSpace::unit() const { return base_diagram({})->key; }

bool MDSpace::is_bridge(const DiagramKey& k, int atom) const {
  const ExtRecord& r = ext(k.ext);
  const GeometricLattice& e = *r.lattice;
  Mask jm = k.t | r.new_mask;
  if (!(jm & bit(atom))) return false;
  for (FlatId g = 0; g < e.num_flats(); ++g)
    if ((e.mask(g) & r.old_mask) == r.old_mask && (jm & ~e.mask(g)) == bit(atom)) return true;
  return false;
}

Mask MDSpace::contractible_atoms(const DiagramKey& k) const {
  const ExtRecord& r = ext(k.ext);
  Mask out = 0;
  for (int x : word(k))
    if (!(r.old_mask & bit(x)) && !is_bridge(k, x)) out |= bit(x);
  return out;
}

std::optional<SignedKey> MDSpace::contract(const DiagramKey& k, int atom) const {
  if (!(contractible_atoms(k) & bit(atom)))
    throw Error(ErrorKind::NotContractible, "atom is not contractible in " + describe(k));
  const ExtRecord& r = ext(k.ext);
  const LatticePtr& e = r.lattice;
  const FlatId h = e->atom_flat(atom);
  IntervalResult iv = interval(e, h, e->top());
  auto atom_of = [&](int x) {
    return lowest(iv.lattice->mask(iv.from_parent[e->join(h, e->atom_flat(x))]));
  };
  std::vector<int> amap, w;
  for (int a = 0; a < r.num_old; ++a) amap.push_back(atom_of(a));
  for (int x : word(k))
    if (x != atom) w.push_back(atom_of(x));
  return normalize(iv.lattice, amap, w);
}

DiagramVector MDSpace::differential(const DiagramKey& k) const {
  if (auto it = d_memo_.find(k); it != d_memo_.end()) return it->second;
  DiagramVector out;
  const Mask contr = contractible_atoms(k);
  const std::vector<int> w = word(k);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(contr & bit(w[i]))) continue;
    auto c = contract(k, w[i]);
    if (c) add_to(out, c->key, mpq_class(c->sign * (i % 2 ? -1 : 1)));
  }
  d_memo_.emplace(k, out);
  return out;
}

DiagramVector MDSpace::differential(const DiagramVector& v) const {
  DiagramVector out;
  for (auto& [k, c] : v)
    for (auto& [k2, c2] : differential(k)) add_to(out, k2, c * c2);
  return out;
}

DiagramVector MDSpace::product(const DiagramKey& a, const DiagramKey& b) const {
  DiagramVector out;
  PushoutResult po = pushout(extension(a), extension(b));
  std::vector<int> w;
  for (int x : word(a)) w.push_back(po.from_first.atom_map[x]);
  for (int x : word(b)) w.push_back(po.from_second.atom_map[x]);
  if (auto n = normalize(po.ext, w)) add_to(out, n->key, mpq_class(n->sign));
  return out;
}

DiagramVector MDSpace::product(const DiagramVector& a, const DiagramVector& b) const {
  DiagramVector out;
  for (auto& [ka, ca] : a)
    for (auto& [kb, cb] : b)
      for (auto& [k, c] : product(ka, kb)) add_to(out, k, ca * cb * c);
  return out;
}

OSElement MDSpace::to_os(const DiagramKey& k) const {
  if (contractible_atoms(k)) return {};
  if (ext(k.ext).new_mask)
    throw Error(ErrorKind::InvalidExtension, "non-contractible new atom in " + describe(k));
  return os_->reduce(k.t);
}

OSElement MDSpace::to_os(const DiagramVector& v) const {
  OSElement out;
  for (auto& [k, c] : v) out += to_os(k) * c;
  return out;
}

std::optional<SignedKey> MDSpace::relabel(const DiagramKey& k, const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != base_->num_atoms())
    throw Error(ErrorKind::NotIso, "permutation has the wrong length");
  std::vector<int> inv(perm.size(), -1);
  for (std::size_t a = 0; a < perm.size(); ++a) {
    if (perm[a] < 0 || perm[a] >= base_->num_atoms() || inv[perm[a]] >= 0)
      throw Error(ErrorKind::NotIso, "not a permutation of the atoms");
    inv[perm[a]] = static_cast<int>(a);
  }
  for (FlatId f = 0; f < base_->num_flats(); ++f) {
    Mask m = 0;
    for (int a : bits_of(base_->mask(f))) m |= bit(perm[a]);
    if (base_->find(m) < 0) throw Error(ErrorKind::NotIso, "permutation is not a lattice automorphism");
  }
  const ExtRecord& r = ext(k.ext);
  return normalize(r.lattice, perm, word(k));
}

const std::vector<int>& MDSpace::catalogue(const Bounds& b) const {
  auto key = std::make_pair(b.max_new_atoms, b.max_extra_rank);
  if (auto it = catalogues_.find(key); it != catalogues_.end()) return it->second;
  CatalogOptions opt;
  opt.max_new_atoms = b.max_new_atoms;
  opt.max_extra_rank = b.max_extra_rank;
  std::vector<int> ids;
  for (const ModularExtension& x : enumerate_modular_extensions(base_, opt)) {
    int id = ctx_.registry().intern(canonicalize_extension(x));
    if (viable(id)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return ext(a).cert < ext(b).cert; });
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return catalogues_.emplace(key, std::move(ids)).first->second;
}

std::vector<DiagramKey> MDSpace::basis(FlatId grading_flat, int deg, const Bounds& b) const {
  std::vector<DiagramKey> out;
  const int m = base_->num_atoms();
  if (m > 20) throw Error(ErrorKind::ResourceLimit, "too many base atoms for basis enumeration");
  for (int id : catalogue(b)) {
    for (Mask t = 0; t < bit(m); ++t) {
      DiagramKey k{id, t};
      if (deg != INT_MIN && degree(k) != deg) continue;
      if (grading_flat >= 0 && grading(k) != grading_flat) continue;
      out.push_back(k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string table_key(const GeometricLattice& l) {
  std::ostringstream os;
  for (const auto& a : l.atoms()) os << a << '\x1f';
  os << '\x1e';
  for (FlatId f = 0; f < l.num_flats(); ++f) os << l.mask(f) << ',';
  return os.str();
}

}  // namespace

MDSpace& MDContext::space(const LatticePtr& l) {
  std::string key = table_key(*l);
  auto it = spaces_.find(key);
  if (it == spaces_.end()) it = spaces_.emplace(key, std::make_unique<MDSpace>(*this, l)).first;
  return *it->second;
}

const MDContext::Split& MDContext::split(const MDSpace& s, FlatId f) {
  auto key = std::make_pair(&s, f);
  if (auto it = splits_.find(key); it != splits_.end()) return it->second;
  const LatticePtr& l = s.base();
  Split sp;
  sp.lower = interval(l, l->bottom(), f);
  sp.upper = interval(l, f, l->top());
  sp.lower_space = sp.lower.lattice->trivial() ? nullptr : &space(sp.lower.lattice);
  sp.upper_space = sp.upper.lattice->trivial() ? nullptr : &space(sp.upper.lattice);
  return splits_.emplace(key, std::move(sp)).first->second;
}

TensorVector coproduct(MDSpace& s, const DiagramKey& k, FlatId f) {
  const LatticePtr& l = s.base();
  if (f <= l->bottom() || f >= l->top())
    throw Error(ErrorKind::ImproperFlat, "coproduct needs a flat strictly between bottom and top");
  const MDContext::Split& sp = s.context().split(s, f);
  const ExtRecord& r = s.ext(k.ext);
  const LatticePtr& e = r.lattice;
  const Mask fm = l->mask(f);
  const std::vector<int> w = s.word(k);
  Mask jm = k.t | r.new_mask;
  TensorVector out;
  for (FlatId fp = 0; fp < e->num_flats(); ++fp) {
    const Mask pm = e->mask(fp);
    if ((pm & r.old_mask) != fm) continue;
    // Lower factor over [0,F].
    IntervalResult lo = interval(e, e->bottom(), fp);
    std::vector<int> amap_lo, w_lo, amap_up, w_up;
    for (int a : bits_of(fm)) amap_lo.push_back(index_in(pm, a));
    for (int x : w)
      if (pm & bit(x)) w_lo.push_back(index_in(pm, x));
    auto klo = sp.lower_space->normalize(lo.lattice, amap_lo, w_lo);
    if (!klo) continue;
    // Upper factor over [F,1].
    IntervalResult up = interval(e, fp, e->top());
    auto up_atom = [&](Mask m) { return lowest(up.lattice->mask(up.from_parent[e->closure(pm | m)])); };
    const GeometricLattice& ub = *sp.upper.lattice;
    for (int j = 0; j < ub.num_atoms(); ++j)
      amap_up.push_back(up_atom(l->mask(sp.upper.to_parent[ub.atom_flat(j)])));
    for (int x : w)
      if (!(pm & bit(x))) w_up.push_back(up_atom(bit(x)));
    auto kup = sp.upper_space->normalize(up.lattice, amap_up, w_up);
    if (!kup) continue;
    int eps = shuffle_sign(jm & pm, jm & ~pm);
    add_to(out, {klo->key, kup->key}, mpq_class(eps * klo->sign * kup->sign));
  }
  return out;
}

TensorVector coproduct(MDSpace& s, const DiagramVector& v, FlatId f) {
  TensorVector out;
  for (auto& [k, c] : v)
    for (auto& [kk, cc] : coproduct(s, k, f)) add_to(out, kk, c * cc);
  return out;
}

std::optional<SignedKey> grading_forward(MDSpace& s, const DiagramKey& k) {
  const LatticePtr& l = s.base();
  const FlatId f = s.grading(k);
  if (f == l->top()) return SignedKey{k, 1};
  if (f == l->bottom()) throw Error(ErrorKind::ImproperFlat, "grading bottom has no lower space");
  const MDContext::Split& sp = s.context().split(s, f);
  const ExtRecord& r = s.ext(k.ext);
  const Mask fm = l->mask(f);
  const Mask keep = fm | k.t | r.new_mask;
  RestrictionResult rr = restriction(r.lattice, keep);
  std::vector<int> amap, w;
  for (int a : bits_of(fm)) amap.push_back(index_in(keep, a));
  for (int x : s.word(k)) w.push_back(index_in(keep, x));
  return sp.lower_space->normalize(rr.lattice, amap, w);
}

std::optional<SignedKey> grading_backward(MDSpace& whole, FlatId f, const DiagramKey& k) {
  const LatticePtr& l = whole.base();
  if (f == l->top()) return SignedKey{k, 1};
  const MDContext::Split& sp = whole.context().split(whole, f);
  MDSpace& lower = *sp.lower_space;
  std::vector<int> into_l = bits_of(l->mask(f));
  ModularExtension first{lower.base(), l, into_l};
  PushoutResult po = pushout(first, lower.extension(k));
  std::vector<int> w;
  for (int x : lower.word(k)) w.push_back(po.from_second.atom_map[x]);
  return whole.normalize(po.ext.lattice, po.from_first.atom_map, w);
}

std::optional<SignedKey> transport(const MDSpace& from, const DiagramKey& k, const MDSpace& to,
                                   const std::vector<int>& phi) {
  const GeometricLattice &a = *from.base(), &b = *to.base();
  if (static_cast<int>(phi.size()) != b.num_atoms() || a.num_atoms() != b.num_atoms() ||
      a.num_flats() != b.num_flats())
    throw Error(ErrorKind::NotIso, "bases have different sizes");
  for (FlatId f = 0; f < b.num_flats(); ++f) {
    Mask m = 0;
    for (int x : bits_of(b.mask(f))) m |= bit(phi[x]);
    if (a.find(m) < 0) throw Error(ErrorKind::NotIso, "atom map is not a lattice isomorphism");
  }
  ModularExtension x = from.extension(k);
  std::vector<int> amap(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) amap[j] = x.atom_map[phi[j]];
  return to.normalize(x.lattice, amap, from.word(k));
}

Factoring refactor(const MDSpace& s, const DiagramKey& k) {
  Factoring out;
  const ExtRecord& r = s.ext(k.ext);
  const LatticePtr& e = r.lattice;
  const FlatId fi = e->closure(r.old_mask);
  IntervalResult up = interval(e, fi, e->top());
  std::vector<Mask> comps;
  if (!up.lattice->trivial()) comps = connected_components(*up.lattice);
  std::vector<Mask> groups(comps.size(), 0);
  for (int h : bits_of(r.new_mask)) {
    int a = lowest(up.lattice->mask(up.from_parent[e->join(fi, e->atom_flat(h))]));
    for (std::size_t c = 0; c < comps.size(); ++c)
      if (comps[c] & bit(a)) groups[c] |= bit(h);
  }
  DiagramVector prod;
  prod[s.unit()] = 1;
  bool ok = true;
  out.factors_irreducible = true;
  auto push = [&](const std::optional<SignedKey>& f) {
    if (!f) {
      ok = false;
      return;
    }
    out.factors.push_back(f->key);
    DiagramVector v;
    v[f->key] = f->sign;
    prod = s.product(prod, v);
  };
  for (int a : bits_of(k.t)) push(s.base_diagram({a}));
  for (Mask g : groups) {
    ModularExtension sub = restrict_extension(s.extension(k), g);
    std::vector<int> w;
    for (int h : bits_of(g)) w.push_back(index_in(r.old_mask | g, h));
    auto f = s.normalize(sub, w);
    push(f);
    if (f) {
      const ExtRecord& fr = s.ext(f->key.ext);
      IntervalResult fu = interval(fr.lattice, fr.lattice->closure(fr.old_mask), fr.lattice->top());
      if (fu.lattice->trivial() || connected_components(*fu.lattice).size() != 1)
        out.factors_irreducible = false;
    }
  }
  out.reproduces = ok && prod.size() == 1 && prod.begin()->first == k && abs(prod.begin()->second) == 1;
  return out;
}

}  // namespace mdg
