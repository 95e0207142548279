#include "mdg/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace mdg {

std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(lowest(m));
    m &= m - 1;
  }
  return out;
}

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotALattice: return "NotALattice";
    case ErrorKind::NotGeometric: return "NotGeometric";
    case ErrorKind::DuplicateEdge: return "DuplicateEdge";
    case ErrorKind::SelfLoop: return "SelfLoop";
    case ErrorKind::ForeignFlat: return "ForeignFlat";
    case ErrorKind::NotComparable: return "NotComparable";
    case ErrorKind::NotModular: return "NotModular";
    case ErrorKind::NotAModularCut: return "NotAModularCut";
    case ErrorKind::DegenerateCut: return "DegenerateCut";
    case ErrorKind::MismatchedBase: return "MismatchedBase";
    case ErrorKind::NotModularCoatom: return "NotModularCoatom";
    case ErrorKind::InvalidExtension: return "InvalidExtension";
    case ErrorKind::NotContractible: return "NotContractible";
    case ErrorKind::LatticeMismatch: return "LatticeMismatch";
    case ErrorKind::ImproperFlat: return "ImproperFlat";
    case ErrorKind::NotIso: return "NotIso";
    case ErrorKind::InconsistentChain: return "InconsistentChain";
    case ErrorKind::SpecParse: return "SpecParse";
    case ErrorKind::TrivialLattice: return "TrivialLattice";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

bool lex_less(Mask a, Mask b) {
  // Compare the sorted index lists of the two sets lexicographically.
  while (a && b) {
    int x = lowest(a), y = lowest(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

// ---------------------------------------------------------------------------

namespace {

void check_labels(const std::vector<std::string>& atoms) {
  if (static_cast<int>(atoms.size()) > kMaxAtoms)
    throw Error(ErrorKind::ResourceLimit, "more than 64 atoms");
  std::set<std::string> seen;
  for (const auto& a : atoms)
    if (!seen.insert(a).second) throw Error(ErrorKind::SpecParse, "repeated atom label " + a);
}

}  // namespace

void GeometricLattice::index() {
  std::vector<std::size_t> perm(masks_.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    if (ranks_[x] != ranks_[y]) return ranks_[x] < ranks_[y];
    return masks_[x] < masks_[y];
  });
  std::vector<Mask> m(perm.size());
  std::vector<int> r(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    m[i] = masks_[perm[i]];
    r[i] = ranks_[perm[i]];
  }
  masks_ = std::move(m);
  ranks_ = std::move(r);
  index_.clear();
  index_.reserve(masks_.size() * 2);
  for (std::size_t i = 0; i < masks_.size(); ++i) index_.emplace(masks_[i], static_cast<FlatId>(i));
  const int top_rank = ranks_.empty() ? 0 : ranks_.back();
  rank_start_.assign(top_rank + 2, static_cast<FlatId>(masks_.size()));
  for (int i = static_cast<int>(masks_.size()) - 1; i >= 0; --i) rank_start_[ranks_[i]] = i;
  for (int k = top_rank; k >= 0; --k)
    if (rank_start_[k] > rank_start_[k + 1]) rank_start_[k] = rank_start_[k + 1];
}

GeometricLattice GeometricLattice::from_ranked(std::vector<std::string> atoms,
                                               std::vector<std::pair<Mask, int>> flats,
                                               bool check) {
  check_labels(atoms);
  GeometricLattice l;
  l.atoms_ = std::move(atoms);
  for (auto& [m, r] : flats) {
    l.masks_.push_back(m);
    l.ranks_.push_back(r);
  }
  l.index();
  if (check) l.validate();
  return l;
}

GeometricLattice GeometricLattice::from_flats(std::vector<std::string> atoms,
                                              const std::vector<Mask>& flats) {
  check_labels(atoms);
  const int n = static_cast<int>(atoms.size());
  const Mask full = n == 64 ? ~Mask{0} : (bit(n) - 1);
  std::vector<Mask> fl(flats.begin(), flats.end());
  std::sort(fl.begin(), fl.end(), [](Mask a, Mask b) {
    int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  fl.erase(std::unique(fl.begin(), fl.end()), fl.end());
  std::unordered_map<Mask, int> idx;
  for (std::size_t i = 0; i < fl.size(); ++i) {
    if (fl[i] & ~full) throw Error(ErrorKind::SpecParse, "flat uses an undeclared atom");
    idx.emplace(fl[i], static_cast<int>(i));
  }
  if (!idx.count(0)) throw Error(ErrorKind::NotALattice, "no bottom element (empty flat missing)");
  if (!idx.count(full)) throw Error(ErrorKind::NotALattice, "no top element (full atom set missing)");
  for (int a = 0; a < n; ++a)
    if (!idx.count(bit(a)))
      throw Error(ErrorKind::NotGeometric, "atom " + atoms[a] + " is not a flat on its own");
  // Intersection-closed with a top element means every pair has a join.
  for (std::size_t i = 0; i < fl.size(); ++i)
    for (std::size_t j = i + 1; j < fl.size(); ++j)
      if (!idx.count(fl[i] & fl[j])) {
        std::ostringstream os;
        os << "flats " << i << " and " << j << " have no meet, so their union has no least closed superset";
        throw Error(ErrorKind::NotALattice, os.str());
      }
  auto close = [&](Mask s) {
    for (Mask f : fl)
      if ((f & s) == s) return f;  // smallest by popcount order is the closure
    return full;
  };
  // Ranks along covers; the covers of G are the minimal closures of G+a.
  std::vector<int> rank(fl.size(), -1);
  rank[0] = 0;
  for (std::size_t i = 0; i < fl.size(); ++i) {
    if (rank[i] < 0)
      throw Error(ErrorKind::NotGeometric, "flat unreachable by covers (not atomic)");
    for (int a = 0; a < n; ++a) {
      if (fl[i] & bit(a)) continue;
      Mask c = close(fl[i] | bit(a));
      // Semimodularity of an atomistic lattice: G v a covers G.
      for (Mask g : fl) {
        if ((g & fl[i]) == fl[i] && g != fl[i] && (g & c) == g && g != c) {
          std::ostringstream os;
          os << "join of a flat with atom " << atoms[a] << " does not cover it (semimodularity fails)";
          throw Error(ErrorKind::NotGeometric, os.str());
        }
      }
      int j = idx.at(c);
      if (rank[j] < 0) {
        rank[j] = rank[i] + 1;
      } else if (rank[j] != rank[i] + 1) {
        throw Error(ErrorKind::NotGeometric, "maximal chains of different lengths (not well-ranked)");
      }
    }
  }
  std::vector<std::pair<Mask, int>> ranked;
  for (std::size_t i = 0; i < fl.size(); ++i) ranked.push_back({fl[i], rank[i]});
  return from_ranked(std::move(atoms), std::move(ranked), false);
}

void GeometricLattice::validate() const {
  const int n = num_atoms();
  if (masks_.empty() || masks_.front() != 0 || ranks_.front() != 0)
    throw Error(ErrorKind::NotALattice, "no bottom element");
  const Mask full = n == 64 ? ~Mask{0} : (bit(n) - 1);
  if (masks_.back() != full) throw Error(ErrorKind::NotALattice, "top is not the full atom set");
  for (int a = 0; a < n; ++a) {
    FlatId f = find(bit(a));
    if (f < 0 || ranks_[f] != 1)
      throw Error(ErrorKind::NotGeometric, "atom " + atoms_[a] + " is not a rank-1 flat");
  }
  for (FlatId f = 0; f < num_flats(); ++f) {
    for (int a = 0; a < n; ++a) {
      if (masks_[f] & bit(a)) continue;
      FlatId c = closure(masks_[f] | bit(a));
      if (ranks_[c] != ranks_[f] + 1)
        throw Error(ErrorKind::NotGeometric,
                    "flat " + flat_label(f) + " joined with " + atoms_[a] + " does not cover it");
    }
    for (FlatId g = f + 1; g < num_flats(); ++g)
      if (find(masks_[f] & masks_[g]) < 0)
        throw Error(ErrorKind::NotALattice,
                    "flats " + flat_label(f) + " and " + flat_label(g) + " have no meet");
  }
}

std::string GeometricLattice::check_invariants() const {
  std::ostringstream err;
  const int n = num_atoms();
  if (masks_.front() != 0 || ranks_.front() != 0) return "bounded: bottom is not the empty flat";
  if (popcount(masks_.back()) != n) return "bounded: top is not the full atom set";
  for (FlatId f = 0; f < num_flats(); ++f) {
    // Atomic: the flat is the closure of its own atoms, by construction the
    // closure of its atom set must be itself.
    if (closure(masks_[f]) != f) return "atomic: flat " + flat_label(f) + " is not closed";
    for (int a = 0; a < n; ++a) {
      if (masks_[f] & bit(a)) continue;
      if (ranks_[closure(masks_[f] | bit(a))] == ranks_[f])
        return "closed: adding " + atoms_[a] + " to " + flat_label(f) + " keeps the rank";
    }
    // Well-ranked: every lower cover has rank one less.
    for (FlatId g = 0; g < num_flats(); ++g) {
      if (!leq(g, f) || g == f) continue;
      bool cover = true;
      for (FlatId h = 0; h < num_flats() && cover; ++h)
        if (h != g && h != f && leq(g, h) && leq(h, f)) cover = false;
      if (cover && ranks_[g] + 1 != ranks_[f])
        return "well-ranked: " + flat_label(g) + " < " + flat_label(f) + " is a cover of rank gap " +
               std::to_string(ranks_[f] - ranks_[g]);
    }
  }
  for (FlatId f = 0; f < num_flats(); ++f)
    for (FlatId g = f; g < num_flats(); ++g) {
      FlatId m = meet(f, g);
      if (m < 0) return "lattice: no meet of " + flat_label(f) + " and " + flat_label(g);
      FlatId j = join(f, g);
      if (ranks_[m] + ranks_[j] > ranks_[f] + ranks_[g])
        return "semimodular: fails on " + flat_label(f) + ", " + flat_label(g);
    }
  return "";
}

int GeometricLattice::atom_index(std::string_view label) const {
  for (int a = 0; a < num_atoms(); ++a)
    if (atoms_[a] == label) return a;
  return -1;
}

FlatId GeometricLattice::find(Mask m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

FlatId GeometricLattice::closure(Mask s) const {
  if (auto it = index_.find(s); it != index_.end()) return it->second;
  // The first flat in (rank, mask) order containing s is the closure: any
  // flat containing s contains the closure, and a containing flat of equal
  // rank must equal it.
  const int lo = rank_start_[std::min<int>(rank(), 1)];
  for (FlatId f = lo; f < num_flats(); ++f)
    if ((masks_[f] & s) == s) return f;
  throw Error(ErrorKind::ForeignFlat, "atom set outside the lattice");
}

std::pair<FlatId, FlatId> GeometricLattice::rank_range(int r) const {
  if (r < 0 || r > rank()) return {0, 0};
  return {rank_start_[r], rank_start_[r + 1]};
}

std::vector<FlatId> GeometricLattice::flats_of_rank(int r) const {
  auto [a, b] = rank_range(r);
  std::vector<FlatId> out;
  for (FlatId f = a; f < b; ++f) out.push_back(f);
  return out;
}

std::vector<FlatId> GeometricLattice::upper_covers(FlatId f) const {
  std::vector<FlatId> out;
  auto [a, b] = rank_range(ranks_[f] + 1);
  for (FlatId g = a; g < b; ++g)
    if (leq(f, g)) out.push_back(g);
  return out;
}

std::string GeometricLattice::set_label(Mask m) const {
  std::string s = "{";
  bool first = true;
  for (int a : bits_of(m)) {
    if (!first) s += ",";
    s += atoms_[a];
    first = false;
  }
  return s + "}";
}

std::string GeometricLattice::flat_label(FlatId f) const { return set_label(masks_[f]); }

// ---------------------------------------------------------------------------

Mask Embedding::map_mask(Mask m) const {
  Mask out = 0;
  for (int a : bits_of(m)) out |= bit(atom_map[a]);
  return out;
}

FlatId Embedding::preimage(FlatId g) const {
  Mask m = 0;
  const Mask gm = target->mask(g);
  for (int a = 0; a < source->num_atoms(); ++a)
    if (gm & bit(atom_map[a])) m |= bit(a);
  FlatId f = source->closure(m);
  return map_flat(f) == g ? f : -1;
}

bool Embedding::valid() const {
  if (static_cast<int>(atom_map.size()) != source->num_atoms()) return false;
  Mask image = 0;
  for (int a : atom_map) {
    if (a < 0 || a >= target->num_atoms() || (image & bit(a))) return false;
    image |= bit(a);
  }
  for (FlatId f = 0; f < source->num_flats(); ++f) {
    FlatId g = map_flat(f);
    if (target->rank(g) != source->rank(f)) return false;
    if ((target->mask(g) & image) != map_mask(source->mask(f))) return false;
  }
  return true;
}

Embedding identity_embedding(const LatticePtr& l) {
  Embedding e{l, l, {}};
  e.atom_map.resize(l->num_atoms());
  std::iota(e.atom_map.begin(), e.atom_map.end(), 0);
  return e;
}

Embedding compose(const Embedding& outer, const Embedding& inner) {
  if (outer.source.get() != inner.target.get() && !outer.source->same_table(*inner.target))
    throw Error(ErrorKind::MismatchedBase, "embeddings do not compose");
  Embedding e{inner.source, outer.target, {}};
  for (int a : inner.atom_map) e.atom_map.push_back(outer.atom_map[a]);
  return e;
}

LatticePtr make_lattice(GeometricLattice l) {
  return std::make_shared<const GeometricLattice>(std::move(l));
}

// ---------------------------------------------------------------------------

LatticePtr build_from_flats(const std::vector<std::string>& atoms,
                            const std::vector<std::vector<std::string>>& flats) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < atoms.size(); ++i) idx[atoms[i]] = static_cast<int>(i);
  std::vector<Mask> masks;
  for (const auto& f : flats) {
    Mask m = 0;
    for (const auto& a : f) {
      auto it = idx.find(a);
      if (it == idx.end()) throw Error(ErrorKind::SpecParse, "unknown atom " + a + " in flat");
      m |= bit(it->second);
    }
    masks.push_back(m);
  }
  return make_lattice(GeometricLattice::from_flats(atoms, masks));
}

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[b] = a;
    return true;
  }
};

LatticePtr graph_lattice(const std::vector<std::pair<int, int>>& edges, int nv,
                         std::vector<std::string> labels) {
  auto closure = [&](Mask s) {
    UnionFind uf(nv);
    for (int e : bits_of(s)) uf.unite(edges[e].first, edges[e].second);
    Mask c = 0;
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (uf.find(edges[e].first) == uf.find(edges[e].second)) c |= bit(static_cast<int>(e));
    return c;
  };
  return make_lattice(GeometricLattice::from_closure(std::move(labels), closure));
}

}  // namespace

LatticePtr build_from_graph(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, int> vid;
  std::vector<std::pair<int, int>> es;
  std::vector<std::string> labels;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw Error(ErrorKind::SelfLoop, "edge " + u + "-" + v);
    if (v < u) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw Error(ErrorKind::DuplicateEdge, "edge " + u + "-" + v);
    for (const auto& x : {u, v})
      if (!vid.count(x)) vid.emplace(x, static_cast<int>(vid.size()));
    es.push_back({vid[u], vid[v]});
    labels.push_back(u + "-" + v);
  }
  if (es.size() > static_cast<std::size_t>(kMaxAtoms))
    throw Error(ErrorKind::ResourceLimit, "more than 64 edges");
  return graph_lattice(es, static_cast<int>(vid.size()), std::move(labels));
}

LatticePtr build_partition_lattice(int n) {
  if (n < 2) throw Error(ErrorKind::SpecParse, "partition lattice needs n >= 2");
  std::vector<std::pair<int, int>> es;
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      es.push_back({i - 1, j - 1});
      labels.push_back(n <= 9 ? std::to_string(i) + std::to_string(j)
                              : std::to_string(i) + "." + std::to_string(j));
    }
  if (es.size() > static_cast<std::size_t>(kMaxAtoms))
    throw Error(ErrorKind::ResourceLimit, "partition lattice too large");
  return graph_lattice(es, n, std::move(labels));
}

LatticePtr build_boolean(int n) {
  if (n < 0 || n > 20) throw Error(ErrorKind::ResourceLimit, "boolean lattice size out of range");
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  std::vector<std::pair<Mask, int>> fl;
  for (Mask m = 0; m < bit(n); ++m) fl.push_back({m, popcount(m)});
  return make_lattice(GeometricLattice::from_ranked(std::move(labels), std::move(fl)));
}

LatticePtr build_uniform(int rank, int n) {
  if (rank < 1 || rank > n || n > 20) throw Error(ErrorKind::SpecParse, "bad uniform matroid parameters");
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  std::vector<std::pair<Mask, int>> fl;
  for (Mask m = 0; m < bit(n); ++m)
    if (popcount(m) < rank) fl.push_back({m, popcount(m)});
  fl.push_back({bit(n) - 1, rank});
  return make_lattice(GeometricLattice::from_ranked(std::move(labels), std::move(fl), true));
}

LatticePtr trivial_lattice() {
  return make_lattice(GeometricLattice::from_ranked({}, {{0, 0}}));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> ground_of(const std::string& label) {
  if (label.size() >= 2 && label.front() == '{' && label.back() == '}') {
    std::vector<std::string> out;
    std::string cur;
    for (std::size_t i = 1; i + 1 < label.size(); ++i) {
      if (label[i] == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += label[i];
      }
    }
    out.push_back(cur);
    return out;
  }
  return {label};
}

}  // namespace

IntervalResult interval(const LatticePtr& l, FlatId lower, FlatId upper) {
  if (lower < 0 || upper < 0 || lower >= l->num_flats() || upper >= l->num_flats())
    throw Error(ErrorKind::ForeignFlat, "interval bounds outside the lattice");
  if (!l->leq(lower, upper)) throw Error(ErrorKind::NotComparable, "interval bounds not comparable");
  IntervalResult res;
  res.lower = lower;
  res.upper = upper;
  std::vector<FlatId> members;
  for (FlatId f = 0; f < l->num_flats(); ++f)
    if (l->leq(lower, f) && l->leq(f, upper)) members.push_back(f);
  std::vector<FlatId> atom_flats;
  for (FlatId f : members)
    if (l->rank(f) == l->rank(lower) + 1) atom_flats.push_back(f);
  std::vector<std::string> labels;
  if (lower == l->bottom()) {
    for (FlatId a : atom_flats) labels.push_back(l->atom(lowest(l->mask(a))));
  } else {
    std::vector<std::pair<std::string, FlatId>> lab;
    for (FlatId a : atom_flats) {
      std::vector<std::string> g;
      for (int x : bits_of(l->mask(a))) {
        auto gx = ground_of(l->atom(x));
        g.insert(g.end(), gx.begin(), gx.end());
      }
      std::sort(g.begin(), g.end());
      std::string s = "{";
      for (std::size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + g[i];
      lab.push_back({s + "}", a});
    }
    std::sort(lab.begin(), lab.end());
    atom_flats.clear();
    for (auto& [s, a] : lab) {
      labels.push_back(s);
      atom_flats.push_back(a);
    }
  }
  std::vector<std::pair<Mask, int>> fl;
  for (FlatId f : members) {
    Mask m = 0;
    for (std::size_t i = 0; i < atom_flats.size(); ++i)
      if (l->leq(atom_flats[i], f)) m |= bit(static_cast<int>(i));
    fl.push_back({m, l->rank(f) - l->rank(lower)});
  }
  auto lat = make_lattice(GeometricLattice::from_ranked(labels, fl));
  res.from_parent.assign(l->num_flats(), -1);
  res.to_parent.assign(lat->num_flats(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    FlatId g = lat->find(fl[i].first);
    res.to_parent[g] = members[i];
    res.from_parent[members[i]] = g;
  }
  res.lattice = lat;
  return res;
}

RestrictionResult restriction(const LatticePtr& l, Mask atoms) {
  atoms &= l->all_atoms();
  std::vector<int> keep = bits_of(atoms);
  std::vector<std::string> labels;
  for (int a : keep) labels.push_back(l->atom(a));
  auto compress = [&](Mask m) {
    Mask out = 0;
    for (std::size_t i = 0; i < keep.size(); ++i)
      if (m & bit(keep[i])) out |= bit(static_cast<int>(i));
    return out;
  };
  std::unordered_map<Mask, int> seen;
  std::vector<std::pair<Mask, int>> fl;
  for (FlatId f = 0; f < l->num_flats(); ++f) {
    Mask m = l->mask(f) & atoms;
    if (seen.count(m)) continue;
    int r = l->rank_of(m);
    seen.emplace(m, r);
    fl.push_back({compress(m), r});
  }
  RestrictionResult res;
  res.lattice = make_lattice(GeometricLattice::from_ranked(std::move(labels), std::move(fl)));
  res.inclusion = Embedding{res.lattice, l, keep};
  return res;
}

LatticePtr direct_product(const LatticePtr& a, const LatticePtr& b) {
  const int na = a->num_atoms();
  if (na + b->num_atoms() > kMaxAtoms) throw Error(ErrorKind::ResourceLimit, "product too large");
  std::vector<std::string> labels = a->atoms();
  std::set<std::string> used(labels.begin(), labels.end());
  for (auto s : b->atoms()) {
    while (used.count(s)) s += "'";
    used.insert(s);
    labels.push_back(s);
  }
  std::vector<std::pair<Mask, int>> fl;
  for (FlatId f = 0; f < a->num_flats(); ++f)
    for (FlatId g = 0; g < b->num_flats(); ++g)
      fl.push_back({a->mask(f) | (b->mask(g) << na), a->rank(f) + b->rank(g)});
  return make_lattice(GeometricLattice::from_ranked(std::move(labels), std::move(fl)));
}

std::vector<Mask> connected_components(const GeometricLattice& l) {
  const int n = l.num_atoms();
  Mask basis = 0;
  for (int a = 0; a < n; ++a)
    if (l.independent(basis | bit(a))) basis |= bit(a);
  UnionFind uf(n);
  for (int x = 0; x < n; ++x) {
    if (basis & bit(x)) continue;
    for (int b : bits_of(basis))
      if (l.independent((basis & ~bit(b)) | bit(x))) uf.unite(x, b);
  }
  std::map<int, Mask> comp;
  for (int a = 0; a < n; ++a) comp[uf.find(a)] |= bit(a);
  std::vector<Mask> out;
  for (auto& [r, m] : comp) out.push_back(m);
  std::sort(out.begin(), out.end(), [](Mask x, Mask y) { return lowest(x) < lowest(y); });
  return out;
}

Factorization irreducible_factors(const LatticePtr& l) {
  if (l->trivial()) throw Error(ErrorKind::TrivialLattice, "the one-point lattice has no factors");
  Factorization f;
  f.supports = connected_components(*l);
  for (Mask m : f.supports) f.factors.push_back(restriction(l, m).lattice);
  return f;
}

std::vector<Mask> circuits(const GeometricLattice& l) {
  const int n = l.num_atoms();
  std::vector<Mask> out;
  // Depth-first over independent sets in increasing order; a dependent
  // one-step extension is a circuit when all its hyperplanes are independent.
  std::vector<Mask> stack{0};
  while (!stack.empty()) {
    Mask s = stack.back();
    stack.pop_back();
    int start = s ? 64 - __builtin_clzll(s) : 0;
    for (int x = start; x < n; ++x) {
      Mask t = s | bit(x);
      if (l.independent(t)) {
        stack.push_back(t);
        continue;
      }
      // Every circuit C is reached from C minus its largest element.
      bool minimal = true;
      for (int y : bits_of(s))
        if (!l.independent(t & ~bit(y))) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
    int pa = popcount(a), pb = popcount(b);
    return pa != pb ? pa < pb : lex_less(a, b);
  });
  return out;
}

}  // namespace mdg
