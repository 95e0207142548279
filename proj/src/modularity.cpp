#include "mdg/modularity.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace mdg {

ModularityResult is_modular(const GeometricLattice& l, FlatId f) {
  if (f < 0 || f >= l.num_flats()) throw Error(ErrorKind::ForeignFlat, "flat id out of range");
  ModularityResult res;
  // Flats are ordered by rank; within the first failing rank pick the
  // lexicographically smallest atom list.
  for (int r = 0; r <= l.rank(); ++r) {
    auto [lo, hi] = l.rank_range(r);
    for (FlatId g = lo; g < hi; ++g) {
      if (l.rank(l.meet(f, g)) + l.rank(l.join(f, g)) == l.rank(f) + l.rank(g)) continue;
      if (res.modular || lex_less(l.mask(g), l.mask(res.witness))) {
        res.modular = false;
        res.witness = g;
      }
    }
    if (!res.modular) return res;
  }
  return res;
}

namespace {

struct JoinTable {
  int n;
  std::vector<FlatId> t;
  explicit JoinTable(const GeometricLattice& l) : n(l.num_flats()), t(n * n) {
    for (FlatId a = 0; a < n; ++a)
      for (FlatId b = a; b < n; ++b) t[a * n + b] = t[b * n + a] = l.join(a, b);
  }
  FlatId operator()(FlatId a, FlatId b) const { return t[a * n + b]; }
};

}  // namespace

bool modular_by_rank(const GeometricLattice& l, FlatId f) {
  for (FlatId g = 0; g < l.num_flats(); ++g)
    if (l.rank(l.meet(f, g)) + l.rank(l.join(f, g)) != l.rank(f) + l.rank(g)) return false;
  return true;
}

bool modular_by_lower_law(const GeometricLattice& l, FlatId f) {
  JoinTable j(l);
  for (FlatId a = 0; a < l.num_flats(); ++a) {
    if (!l.leq(a, f)) continue;
    for (FlatId b = 0; b < l.num_flats(); ++b)
      if (l.meet(f, j(a, b)) != j(a, l.meet(f, b))) return false;
  }
  return true;
}

bool modular_by_upper_law(const GeometricLattice& l, FlatId f) {
  JoinTable j(l);
  for (FlatId a = 0; a < l.num_flats(); ++a)
    for (FlatId b = 0; b < l.num_flats(); ++b) {
      if (!l.leq(a, b)) continue;
      if (l.meet(b, j(a, f)) != j(a, l.meet(b, f))) return false;
    }
  return true;
}

bool modular_characterizations_agree(const GeometricLattice& l, FlatId f) {
  bool c1 = modular_by_rank(l, f);
  return c1 == modular_by_lower_law(l, f) && c1 == modular_by_upper_law(l, f);
}

FlatId DiamondIso::forward(FlatId x) const {
  for (auto& [a, b] : pairs)
    if (a == x) return b;
  return -1;
}

FlatId DiamondIso::backward(FlatId y) const {
  for (auto& [a, b] : pairs)
    if (b == y) return a;
  return -1;
}

DiamondIso diamond_iso(const GeometricLattice& l, FlatId f_modular, FlatId g) {
  if (!is_modular(l, f_modular).modular)
    throw Error(ErrorKind::NotModular, "diamond isomorphism needs a modular flat");
  DiamondIso d;
  d.f = f_modular;
  d.g = g;
  FlatId low = l.meet(f_modular, g);
  for (FlatId x = 0; x < l.num_flats(); ++x) {
    if (!l.leq(low, x) || !l.leq(x, f_modular)) continue;
    FlatId y = l.join(x, g);
    if (l.meet(y, f_modular) != x)
      throw Error(ErrorKind::NotModular, "join with the second flat is not inverted by the meet");
    d.pairs.push_back({x, y});
  }
  return d;
}

std::vector<FlatId> modular_flats(const GeometricLattice& l) {
  std::vector<FlatId> out;
  for (FlatId f = 0; f < l.num_flats(); ++f)
    if (is_modular(l, f).modular) out.push_back(f);
  return out;
}

std::vector<FlatId> modular_coatoms(const GeometricLattice& l) {
  std::vector<FlatId> out;
  if (l.rank() == 0) return out;
  for (FlatId f : l.flats_of_rank(l.rank() - 1))
    if (is_modular(l, f).modular) out.push_back(f);
  return out;
}

std::vector<int> ModularChain::j_sizes() const {
  std::vector<int> out;
  for (Mask m : j_sets) out.push_back(popcount(m));
  return out;
}

namespace {

struct SupersolvableSearch {
  // Canonical certificates of lower intervals known to admit no chain.
  std::set<Certificate> dead;

  // Returns the chain inside `l` (ids of `l`) from bottom to top, or empty.
  std::vector<FlatId> search(const LatticePtr& l) {
    if (l->rank() <= 1) {
      std::vector<FlatId> c{l->bottom()};
      if (l->rank() == 1) c.push_back(l->top());
      return c;
    }
    Certificate cert = canonical_form(*l).cert;
    if (dead.count(cert)) return {};
    for (FlatId g : modular_coatoms(*l)) {
      IntervalResult sub = interval(l, l->bottom(), g);
      std::vector<FlatId> inner = search(sub.lattice);
      if (inner.empty()) continue;
      std::vector<FlatId> chain;
      for (FlatId x : inner) chain.push_back(sub.to_parent[x]);
      chain.push_back(l->top());
      return chain;
    }
    dead.insert(cert);
    return {};
  }
};

}  // namespace

std::optional<ModularChain> is_supersolvable(const LatticePtr& l) {
  if (l->trivial()) throw Error(ErrorKind::TrivialLattice, "supersolvability of the one-point lattice");
  SupersolvableSearch s;
  std::vector<FlatId> chain = s.search(l);
  if (chain.empty()) return std::nullopt;
  ModularChain mc;
  mc.chain = chain;
  for (std::size_t i = 1; i < chain.size(); ++i)
    mc.j_sets.push_back(l->mask(chain[i]) & ~l->mask(chain[i - 1]));
  return mc;
}

bool is_chordal(const Graph& g) {
  std::map<std::string, int> vid;
  for (auto& [u, v] : g)
    for (const auto& x : {u, v})
      if (!vid.count(x)) vid.emplace(x, static_cast<int>(vid.size()));
  const int n = static_cast<int>(vid.size());
  std::vector<std::set<int>> adj(n);
  for (auto& [u, v] : g) {
    if (u == v) continue;
    adj[vid[u]].insert(vid[v]);
    adj[vid[v]].insert(vid[u]);
  }
  // Maximum cardinality search yields a reverse perfect elimination
  // ordering exactly when the graph is chordal.
  std::vector<int> weight(n, 0), order;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!done[v] && (best < 0 || weight[v] > weight[best])) best = v;
    done[best] = true;
    order.push_back(best);
    for (int w : adj[best])
      if (!done[w]) ++weight[w];
  }
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  // For each v, its earlier neighbours must form a clique; it suffices that
  // they are all adjacent to the latest of them.
  for (int v = 0; v < n; ++v) {
    int parent = -1;
    std::vector<int> earlier;
    for (int w : adj[v])
      if (pos[w] < pos[v]) {
        earlier.push_back(w);
        if (parent < 0 || pos[w] > pos[parent]) parent = w;
      }
    for (int w : earlier)
      if (w != parent && !adj[parent].count(w)) return false;
  }
  return true;
}

ChordalityCheck chordality_crosscheck(const Graph& g) {
  ChordalityCheck c;
  c.chordal = is_chordal(g);
  c.supersolvable = is_supersolvable(build_from_graph(g)).has_value();
  return c;
}

}  // namespace mdg
