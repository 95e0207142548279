#include <random>

#include "doctest.h"
#include "mdg/modularity.hpp"
#include "oracles.hpp"

using namespace mdg;

namespace {

// Rank identity against every flat, using oracle ranks.
bool modular_oracle(const GeometricLattice& l, FlatId f) {
  auto flats = oracle::flat_masks(l);
  const Mask m = l.mask(f);
  for (Mask g : flats) {
    int lhs = oracle::rank(flats, m & g) + oracle::rank(flats, m | g);
    if (lhs != oracle::rank(flats, m) + oracle::rank(flats, g)) return false;
  }
  return true;
}

FlatId span(const GeometricLattice& l, std::initializer_list<const char*> atoms) {
  Mask m = 0;
  for (const char* a : atoms) m |= bit(l.atom_index(a));
  return l.closure(m);
}

}  // namespace

TEST_CASE("modular lines of the eight point configuration") {
  auto l = oracle::load("exgeolatt");
  FlatId abcd = span(*l, {"a", "b", "c", "d"});
  CHECK(l->rank(abcd) == 2);
  CHECK(is_modular(*l, abcd).modular);
  FlatId ae = span(*l, {"a", "e"});
  CHECK(l->mask(ae) == (bit(l->atom_index("a")) | bit(l->atom_index("e"))));
  ModularityResult r = is_modular(*l, ae);
  CHECK_FALSE(r.modular);
  REQUIRE(r.witness >= 0);
  // The witness misses {a,e} entirely while spanning the plane with it.
  CHECK(l->meet(ae, r.witness) == l->bottom());
  CHECK(l->join(ae, r.witness) == l->top());
  CHECK(l->rank(r.witness) == 2);
  // The line through d' and b is another witness.
  FlatId bd = span(*l, {"b", "d'"});
  CHECK(l->meet(ae, bd) == l->bottom());
}

TEST_CASE("modularity agrees with the rank-identity oracle") {
  for (const char* name : {"pi3", "pi4", "b3", "c4", "c5", "k4", "u24", "exgeolatt", "exgeolattres", "diamond"}) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    for (FlatId f = 0; f < l->num_flats(); ++f) {
      CAPTURE(l->flat_label(f));
      CHECK(is_modular(*l, f).modular == modular_oracle(*l, f));
    }
  }
}

TEST_CASE("the three characterisations agree on every flat of the corpus") {
  for (const char* name : {"pi2", "pi3", "pi4", "pi5", "b1", "b2", "b3", "b4", "c4", "c5", "c6", "k4", "path3",
                           "path4", "diamond", "u24", "wheel5", "fan7", "exgeolatt", "exgeolattres"}) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    for (FlatId f = 0; f < l->num_flats(); ++f) {
      bool a = modular_by_rank(*l, f), b = modular_by_lower_law(*l, f), c = modular_by_upper_law(*l, f);
      CHECK(a == b);
      CHECK(b == c);
      CHECK(modular_characterizations_agree(*l, f));
    }
  }
}

TEST_CASE("atoms, bottom and top are modular") {
  auto l = oracle::load("c5");
  CHECK(is_modular(*l, l->bottom()).modular);
  CHECK(is_modular(*l, l->top()).modular);
  for (int a = 0; a < l->num_atoms(); ++a) CHECK(is_modular(*l, l->atom_flat(a)).modular);
}

TEST_CASE("diamond isomorphism is an order isomorphism shifting rank") {
  auto l = build_partition_lattice(4);
  for (FlatId f : modular_flats(*l)) {
    for (FlatId g = 0; g < l->num_flats(); ++g) {
      DiamondIso d = diamond_iso(*l, f, g);
      const int shift = l->rank(l->join(f, g)) - l->rank(f);
      for (auto [x, y] : d.pairs) {
        CHECK(y == l->join(x, g));
        CHECK(d.backward(y) == x);
        CHECK(d.forward(x) == y);
        CHECK(l->rank(y) == l->rank(x) + shift);
      }
    }
  }
  FlatId c = l->closure(bit(0) | bit(5));  // 12|34, not modular
  CHECK_FALSE(is_modular(*l, c).modular);
  CHECK_THROWS_AS(diamond_iso(*l, c, l->atom_flat(1)), Error);
}

TEST_CASE("supersolvable chains") {
  auto chain_sizes = [](const LatticePtr& l) {
    auto c = is_supersolvable(l);
    REQUIRE(c);
    for (std::size_t i = 1; i < c->chain.size(); ++i) {
      CHECK(is_modular(*l, c->chain[i]).modular);
      CHECK(l->covers(c->chain[i], c->chain[i - 1]));
    }
    auto s = c->j_sizes();
    std::sort(s.begin(), s.end());
    return s;
  };
  CHECK(chain_sizes(build_partition_lattice(3)) == std::vector<int>{1, 2});
  CHECK(chain_sizes(build_partition_lattice(4)) == std::vector<int>{1, 2, 3});
  CHECK(chain_sizes(build_partition_lattice(5)) == std::vector<int>{1, 2, 3, 4});
  CHECK(chain_sizes(build_boolean(3)) == std::vector<int>{1, 1, 1});
  CHECK(chain_sizes(oracle::load("exgeolatt")) == std::vector<int>{1, 3, 4});
  CHECK_FALSE(is_supersolvable(oracle::load("c4")));
  CHECK_FALSE(is_supersolvable(oracle::load("c5")));
}

TEST_CASE("supersolvable iff chordal on corpus graphs and random small graphs") {
  for (const char* name : {"c4", "c5", "c6", "k3", "k4", "path3", "path4", "diamond", "wheel5", "fan7"}) {
    CAPTURE(std::string(name));
    LatticeSpec s = load_lattice(oracle::corpus(name));
    REQUIRE(s.graph);
    std::map<std::string, int> vid;
    std::vector<std::pair<int, int>> edges;
    for (auto& [u, v] : *s.graph) {
      int a = vid.emplace(u, static_cast<int>(vid.size())).first->second;
      int b = vid.emplace(v, static_cast<int>(vid.size())).first->second;
      edges.push_back({a, b});
    }
    ChordalityCheck cc = chordality_crosscheck(*s.graph);
    CHECK(cc.chordal == oracle::chordal(static_cast<int>(vid.size()), edges));
    CHECK(cc.agree());
  }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 4;
    Graph g;
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 2) {
          g.push_back({std::to_string(u), std::to_string(v)});
          edges.push_back({u, v});
        }
    if (g.empty()) continue;
    // Isolated vertices are invisible to the edge list; count only used ones.
    std::set<int> used;
    for (auto [u, v] : edges) used.insert(u), used.insert(v);
    CAPTURE(trial);
    ChordalityCheck cc = chordality_crosscheck(g);
    CHECK(cc.chordal == oracle::chordal(n, edges));
    CHECK(cc.agree());
  }
}
