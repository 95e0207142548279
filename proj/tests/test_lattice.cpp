#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace mdg;

namespace {

const char* kSmall[] = {"pi2", "pi3", "pi4", "b1", "b2", "b3", "b4", "c4", "c5", "k4",
                        "path3", "path4", "diamond", "u24", "exgeolatt", "exgeolattres"};

}  // namespace

TEST_CASE("closure and rank agree with the intersection oracle") {
  for (const char* name : kSmall) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    auto flats = oracle::flat_masks(*l);
    const int n = l->num_atoms();
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
      CHECK(l->mask(l->closure(s)) == oracle::closure(flats, s));
      CHECK(l->rank_of(s) == oracle::rank(flats, s));
    }
  }
}

TEST_CASE("lattice invariants hold on the corpus") {
  for (const char* name : kSmall) {
    CAPTURE(std::string(name));
    CHECK(oracle::load(name)->check_invariants().empty());
  }
}

TEST_CASE("partition lattices have Bell many flats") {
  const int bell[] = {1, 1, 2, 5, 15, 52};
  for (int n = 2; n <= 5; ++n) {
    auto l = build_partition_lattice(n);
    CHECK(l->num_flats() == bell[n]);
    CHECK(l->num_atoms() == n * (n - 1) / 2);
    CHECK(l->rank() == n - 1);
  }
  CHECK(build_partition_lattice(3)->atoms() == std::vector<std::string>{"12", "13", "23"});
}

TEST_CASE("boolean and uniform builders") {
  for (int n = 1; n <= 4; ++n) CHECK(build_boolean(n)->num_flats() == (1 << n));
  auto u = build_uniform(2, 4);
  CHECK(u->num_flats() == 6);
  CHECK(u->rank() == 2);
}

TEST_CASE("graphic lattices match the closed-edge-set oracle") {
  for (const char* name : {"c4", "c5", "k4", "diamond", "path4", "c6"}) {
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
    // Atom order of the lattice may differ from the edge order.
    std::vector<int> to_atom;
    for (auto& [u, v] : *s.graph) {
      int i = s.lattice->atom_index(u + "-" + v);
      if (i < 0) i = s.lattice->atom_index(v + "-" + u);
      REQUIRE(i >= 0);
      to_atom.push_back(i);
    }
    std::set<Mask> want;
    for (Mask m : oracle::graphic_flats(edges, static_cast<int>(vid.size()))) want.insert(oracle::permute(m, to_atom));
    auto got = oracle::flat_masks(*s.lattice);
    CHECK(std::set<Mask>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("invalid flat families are rejected") {
  // Not closed under intersection.
  CHECK_THROWS_AS(build_from_flats({"a", "b", "c"}, {{}, {"a"}, {"b"}, {"c"}, {"a", "b"}, {"b", "c"}, {"a", "b", "c"}}),
                  Error);
  // Missing singleton flat for c.
  CHECK_THROWS_AS(build_from_flats({"a", "b", "c"}, {{}, {"a"}, {"b"}, {"a", "b", "c"}}), Error);
  // Not semimodular: a line of three points next to a point off it at the same height.
  CHECK_THROWS_AS(build_from_flats({"a", "b", "c", "d"},
                                   {{}, {"a"}, {"b"}, {"c"}, {"d"}, {"a", "b", "c"}, {"a", "b", "c", "d"}}),
                  Error);
  CHECK_THROWS_AS(build_from_graph({{"1", "1"}}), Error);
  CHECK_THROWS_AS(build_from_graph({{"1", "2"}, {"2", "1"}}), Error);
}

TEST_CASE("point-line spec builds the eight point configuration") {
  auto l = oracle::load("exgeolatt");
  CHECK(l->num_atoms() == 8);
  CHECK(l->rank() == 3);
  // 5 drawn lines, plus all pairs not on one of them.
  int covered = 6 + 6 + 3 + 3 + 3;
  CHECK(static_cast<int>(l->flats_of_rank(2).size()) == 5 + (28 - covered));
}

TEST_CASE("restriction to seven points gives the two-line configuration") {
  auto l = oracle::load("exgeolatt");
  auto res = oracle::load("exgeolattres");
  Mask keep = l->all_atoms() & ~bit(l->atom_index("e"));
  RestrictionResult r = restriction(l, keep);
  CHECK(r.inclusion.valid());
  CHECK(r.lattice->atoms() == res->atoms());
  CHECK(r.lattice->same_table(*res));
}

TEST_CASE("intervals") {
  auto p4 = build_partition_lattice(4);
  // [12, top] of Pi_4 is Pi_3.
  FlatId a = p4->atom_flat(p4->atom_index("12"));
  IntervalResult up = interval(p4, a, p4->top());
  CHECK(oracle::isomorphic(*up.lattice, *build_partition_lattice(3)));
  CHECK(up.lattice->check_invariants().empty());
  // Lower interval keeps labels.
  FlatId f = p4->closure(bit(p4->atom_index("12")) | bit(p4->atom_index("13")));
  IntervalResult lo = interval(p4, p4->bottom(), f);
  CHECK(lo.lattice->atoms() == std::vector<std::string>{"12", "13", "23"});
  for (FlatId x = 0; x < lo.lattice->num_flats(); ++x) CHECK(lo.from_parent[lo.to_parent[x]] == x);
  CHECK_THROWS_AS(interval(p4, f, a), Error);
}

TEST_CASE("direct products and irreducible factors") {
  auto b1 = build_boolean(1);
  auto prod = direct_product(b1, b1);
  CHECK(oracle::isomorphic(*prod, *build_boolean(2)));
  auto pp = direct_product(build_partition_lattice(3), b1);
  CHECK(pp->num_flats() == 10);
  CHECK(pp->check_invariants().empty());
  CHECK(irreducible_factors(build_boolean(3)).factors.size() == 3);
  CHECK(irreducible_factors(build_partition_lattice(4)).factors.size() == 1);
  Factorization f = irreducible_factors(pp);
  CHECK(f.factors.size() == 2);
  CHECK(connected_components(*oracle::load("path4")).size() == 3);
}

TEST_CASE("circuits agree with the brute-force oracle") {
  for (const char* name : kSmall) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    auto want = oracle::circuits(oracle::flat_masks(*l), l->num_atoms());
    auto got = circuits(*l);
    CHECK(std::set<Mask>(got.begin(), got.end()) == std::set<Mask>(want.begin(), want.end()));
    for (std::size_t i = 1; i < got.size(); ++i) CHECK(popcount(got[i - 1]) <= popcount(got[i]));
  }
  // Four triangles and three 4-cycles in K4.
  CHECK(circuits(*build_partition_lattice(4)).size() == 7);
}

TEST_CASE("canonical certificates are invariant under relabelling") {
  std::mt19937_64 rng(7);
  for (const char* name : kSmall) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    const int n = l->num_atoms();
    CanonicalForm cf = canonical_form(*l);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      std::vector<int> order(n);
      for (int a = 0; a < n; ++a) order[p[a]] = a;
      auto shuffled = relabel(l, order, l->atoms());
      CHECK(canonical_form(*shuffled).cert == cf.cert);
    }
  }
}

TEST_CASE("automorphism groups match permutation counting") {
  for (const char* name : {"pi3", "pi4", "b3", "c4", "u24", "exgeolatt", "exgeolattres", "diamond"}) {
    CAPTURE(std::string(name));
    auto l = oracle::load(name);
    auto flats = oracle::flat_masks(*l);
    CanonicalForm cf = canonical_form(*l);
    CHECK(static_cast<long long>(cf.automorphisms.size()) == oracle::count_isos(flats, flats, l->num_atoms()));
  }
}

TEST_CASE("fixed atoms separate otherwise isomorphic lattices") {
  auto b2 = build_boolean(2);
  CHECK(canonical_form(*b2, {0}).cert != canonical_form(*b2, {0, 1}).cert);
  CHECK(canonical_form(*b2, {0}).cert == canonical_form(*b2, {1}).cert);
  CHECK(isomorphic(*oracle::load("k4"), *build_partition_lattice(4)));
  CHECK_FALSE(isomorphic(*oracle::load("c4"), *build_boolean(4)));
}
