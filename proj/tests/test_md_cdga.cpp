#include <climits>

#include "doctest.h"
#include "mdg/md_cdga.hpp"
#include "oracles.hpp"

using namespace mdg;

namespace {

// A diagram over `s` given by an extension lattice containing the base atoms
// under the same labels, and a word of labels.
std::optional<SignedKey> diagram(MDSpace& s, const LatticePtr& e, std::vector<std::string> word) {
  std::vector<int> amap, w;
  for (const std::string& a : s.base()->atoms()) amap.push_back(e->atom_index(a));
  for (const std::string& x : word) {
    REQUIRE(e->atom_index(x) >= 0);
    w.push_back(e->atom_index(x));
  }
  return s.normalize(e, amap, w);
}

DiagramVector base_vector(MDSpace& s, std::initializer_list<std::pair<std::vector<std::string>, int>> terms) {
  DiagramVector v;
  for (auto& [labels, c] : terms) {
    std::vector<int> atoms;
    for (auto& x : labels) atoms.push_back(s.base()->atom_index(x));
    auto k = s.base_diagram(atoms);
    REQUIRE(k);
    add_to(v, k->key, mpq_class(c * k->sign));
  }
  return v;
}

DiagramVector as_vector(const SignedKey& k) {
  DiagramVector v;
  v[k.key] = k.sign;
  return v;
}

struct Trident {
  MDContext ctx;
  MDSpace* s;
  SignedKey key;
  Trident() {
    s = &ctx.space(build_partition_lattice(3));
    auto k = diagram(*s, build_partition_lattice(4), {"14", "24", "34"});
    REQUIRE(k);
    key = *k;
  }
};

}  // namespace

TEST_CASE("differential of the trident over Pi_3") {
  Trident t;
  MDSpace& s = *t.s;
  CHECK(s.degree(t.key.key) == 1);
  CHECK(s.grading(t.key.key) == s.base()->top());
  CHECK(popcount(s.contractible_atoms(t.key.key)) == 3);
  DiagramVector d = s.differential(as_vector(t.key));
  CHECK(d == base_vector(s, {{{"12", "13"}, 1}, {{"12", "23"}, -1}, {{"13", "23"}, 1}}));
  CHECK(s.differential(d).empty());
  // The image of d under I is the Arnold relation.
  CHECK(s.to_os(d).zero());
  // Reordering the word only changes the sign.
  auto swapped = diagram(s, build_partition_lattice(4), {"24", "14", "34"});
  REQUIRE(swapped);
  CHECK(swapped->key == t.key.key);
  CHECK(swapped->sign == -t.key.sign);
}

TEST_CASE("differential of the eight point diagram over a four point line") {
  MDContext ctx;
  auto e = oracle::load("exgeolatt");
  Mask line = 0;
  for (const char* a : {"a", "b", "c", "d"}) line |= bit(e->atom_index(a));
  LatticePtr l = restriction(e, line).lattice;
  CHECK(oracle::isomorphic(*l, *build_uniform(2, 4)));
  MDSpace& s = ctx.space(l);
  auto k = diagram(s, e, {"e", "b'", "c'"});
  REQUIRE(k);
  CHECK(s.degree(k->key) == 1);
  DiagramVector d = s.differential(as_vector(*k));
  CHECK(d == base_vector(s, {{{"b", "c"}, 1}, {{"b", "a"}, -1}, {{"c", "a"}, 1}}));
  // Each contraction separately, up to the position sign.
  std::set<DiagramKey> want;
  for (auto p : {std::pair{"b", "c"}, std::pair{"b", "a"}, std::pair{"c", "a"}})
    want.insert(s.base_diagram({l->atom_index(p.first), l->atom_index(p.second)})->key);
  std::set<DiagramKey> got;
  for (int h : bits_of(s.contractible_atoms(k->key))) {
    auto c = s.contract(k->key, h);
    REQUIRE(c);
    CHECK(s.degree(c->key) == s.degree(k->key) + 1);
    got.insert(c->key);
  }
  CHECK(got == want);
  CHECK_THROWS_AS(s.contract(k->key, 0), Error);
}

TEST_CASE("vanishing diagrams") {
  MDContext ctx;
  LatticePtr k3 = build_from_graph({{"1", "2"}, {"1", "3"}, {"2", "3"}});
  MDSpace& s = ctx.space(k3);
  // A pendant edge is a bridge.
  LatticePtr pendant = build_from_graph({{"1", "2"}, {"1", "3"}, {"2", "3"}, {"3", "4"}});
  CHECK_FALSE(diagram(s, pendant, {"3-4"}));
  // Two triangles joined by a bridge: the far triangle is a separate factor.
  LatticePtr two = build_from_graph({{"1", "2"}, {"1", "3"}, {"2", "3"}, {"3", "4"}, {"4", "5"}, {"4", "6"}, {"5", "6"}});
  CHECK_FALSE(diagram(s, two, {"3-4", "4-5", "4-6", "5-6"}));
  CHECK_FALSE(diagram(s, two, {"4-5", "4-6"}));
  // Repeated atoms.
  CHECK_FALSE(s.base_diagram({0, 0}));
  CHECK(s.base_diagram({0, 1}));
}

TEST_CASE("bases of small gradings") {
  MDContext ctx;
  MDSpace& s = ctx.space(build_partition_lattice(3));
  CHECK(s.basis(s.base()->top(), 2, Bounds{0, 0}).size() == 3);
  auto bottom = s.basis(s.base()->bottom(), INT_MIN, Bounds{1, 1});
  REQUIRE(bottom.size() == 1);
  CHECK(bottom[0] == s.unit());
  Trident t;
  auto deg1 = t.s->basis(t.s->base()->top(), 1, Bounds{3, 1});
  CHECK(std::find(deg1.begin(), deg1.end(), t.key.key) != deg1.end());
}

TEST_CASE("product and the map to the Orlik-Solomon algebra") {
  MDContext ctx;
  MDSpace& s = ctx.space(build_partition_lattice(3));
  auto h1 = *s.base_diagram({0}), h2 = *s.base_diagram({1});
  DiagramVector u;
  u[s.unit()] = 1;
  CHECK(s.product(u, as_vector(h1)) == as_vector(h1));
  CHECK(s.product(as_vector(h1), u) == as_vector(h1));
  CHECK(s.product(as_vector(h1), as_vector(h2)) == as_vector(*s.base_diagram({0, 1})));
  CHECK(s.product(as_vector(h2), as_vector(h1)) == base_vector(s, {{{"12", "13"}, -1}}));
  CHECK(s.to_os(s.base_diagram({0, 1})->key) == s.os().monomial(0b011));
  CHECK(s.to_os(s.base_diagram({1, 2})->key) == s.os().reduce(0b110));
  Trident t;
  CHECK(t.s->to_os(t.key.key).zero());
}

TEST_CASE("coproduct of base diagrams") {
  MDContext ctx;
  auto p3 = build_partition_lattice(3);
  MDSpace& s = ctx.space(p3);
  const FlatId f = p3->atom_flat(0);  // 12
  const auto& sp = ctx.split(s, f);
  TensorVector unit = coproduct(s, s.unit(), f);
  REQUIRE(unit.size() == 1);
  CHECK(unit.begin()->first == std::pair{sp.lower_space->unit(), sp.upper_space->unit()});
  CHECK(unit.begin()->second == 1);
  // H <= F: (H) -> (H) (x) 1.
  TensorVector h = coproduct(s, s.base_diagram({0})->key, f);
  REQUIRE(h.size() == 1);
  CHECK(h.begin()->first.first == sp.lower_space->base_diagram({0})->key);
  CHECK(h.begin()->first.second == sp.upper_space->unit());
  // H not below F goes to 1 (x) (F v H).
  TensorVector g = coproduct(s, s.base_diagram({1})->key, f);
  REQUIRE(g.size() == 1);
  CHECK(g.begin()->first.first == sp.lower_space->unit());
  CHECK(sp.upper_space->degree(g.begin()->first.second) == 1);
  CHECK_THROWS_AS(coproduct(s, s.unit(), p3->top()), Error);
}

TEST_CASE("relabelling by the three-cycle") {
  Trident t;
  MDSpace& s = *t.s;
  // 1 -> 2 -> 3 -> 1 sends 12 -> 23, 13 -> 12, 23 -> 13.
  const std::vector<int> cyc{2, 0, 1};
  auto r = s.relabel(t.key.key, cyc);
  REQUIRE(r);
  DiagramVector lhs = s.differential(as_vector(*r));
  DiagramVector rhs;
  for (auto& [k, c] : s.differential(t.key.key)) {
    auto rk = s.relabel(k, cyc);
    REQUIRE(rk);
    add_to(rhs, rk->key, c * rk->sign);
  }
  CHECK(lhs == rhs);
  // The cube of the cycle is the identity.
  SignedKey x = t.key;
  for (int i = 0; i < 3; ++i) {
    auto y = s.relabel(x.key, cyc);
    REQUIRE(y);
    x = SignedKey{y->key, x.sign * y->sign};
  }
  CHECK(x.key == t.key.key);
  CHECK(x.sign == t.key.sign);
  CHECK_THROWS_AS(s.relabel(t.key.key, {0, 0, 1}), Error);
}

TEST_CASE("coproduct commutes with automorphisms fixing the flat") {
  MDContext ctx;
  auto p4 = build_partition_lattice(4);
  MDSpace& s = ctx.space(p4);
  // Swapping vertices 1 and 2 fixes 12|34 and 123|4.
  std::vector<int> perm(p4->num_atoms());
  auto swap12 = [](std::string a) {
    for (char& c : a) c = c == '1' ? '2' : c == '2' ? '1' : c;
    if (a[0] > a[1]) std::swap(a[0], a[1]);
    return a;
  };
  for (int a = 0; a < p4->num_atoms(); ++a) perm[a] = p4->atom_index(swap12(p4->atom(a)));
  for (FlatId f : {p4->closure(bit(p4->atom_index("12")) | bit(p4->atom_index("34"))),
                   p4->closure(bit(p4->atom_index("12")) | bit(p4->atom_index("13")))}) {
    const auto& sp = ctx.split(s, f);
    const GeometricLattice &lo = *sp.lower.lattice, &up = *sp.upper.lattice;
    std::vector<int> plo(lo.num_atoms()), pup(up.num_atoms());
    for (int a = 0; a < lo.num_atoms(); ++a) plo[a] = lo.atom_index(p4->atom(perm[p4->atom_index(lo.atom(a))]));
    for (int a = 0; a < up.num_atoms(); ++a) {
      Mask m = 0;
      for (int x : bits_of(p4->mask(sp.upper.to_parent[up.atom_flat(a)]))) m |= bit(perm[x]);
      pup[a] = lowest(up.mask(sp.upper.from_parent[p4->find(m)]));
    }
    for (const DiagramKey& k : s.basis(f, INT_MIN, Bounds{2, 1})) {
      auto rk = s.relabel(k, perm);
      TensorVector lhs;
      if (rk)
        for (auto& [kk, c] : coproduct(s, rk->key, f)) add_to(lhs, kk, c * rk->sign);
      TensorVector rhs;
      for (auto& [kk, c] : coproduct(s, k, f)) {
        auto a = sp.lower_space->relabel(kk.first, plo);
        auto b = sp.upper_space->relabel(kk.second, pup);
        if (a && b) add_to(rhs, {a->key, b->key}, c * a->sign * b->sign);
      }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("grading isomorphism matches bases over the lower interval") {
  MDContext ctx;
  auto p4 = build_partition_lattice(4);
  MDSpace& s = ctx.space(p4);
  const FlatId f = p4->closure(bit(p4->atom_index("12")) | bit(p4->atom_index("13")));
  const auto& sp = ctx.split(s, f);
  MDSpace& lower = *sp.lower_space;
  CHECK(oracle::isomorphic(*lower.base(), *build_partition_lattice(3)));
  const Bounds b{2, 2};
  std::map<std::pair<int, int>, int> whole, part;
  for (const DiagramKey& k : s.basis(f, INT_MIN, b)) {
    ++whole[{s.degree(k), s.num_new(k)}];
    auto fw = grading_forward(s, k);
    REQUIRE(fw);
    CHECK(lower.grading(fw->key) == lower.base()->top());
    auto bw = grading_backward(s, f, fw->key);
    REQUIRE(bw);
    CHECK(bw->key == k);
    CHECK(bw->sign * fw->sign == 1);
  }
  for (const DiagramKey& k : lower.basis(lower.base()->top(), INT_MIN, b)) ++part[{lower.degree(k), lower.num_new(k)}];
  CHECK(whole == part);
}

TEST_CASE("modular diagrams of a product convolve") {
  MDContext ctx;
  auto b1 = build_boolean(1), p3 = build_partition_lattice(3);
  auto prod = direct_product(b1, p3);
  const Bounds b{2, 1};
  using Index = std::tuple<int, int, int>;  // degree, new atoms, extra rank
  auto counts = [&](const LatticePtr& l) {
    MDSpace& s = ctx.space(l);
    std::map<Index, long long> out;
    for (const DiagramKey& k : s.basis(l->top(), INT_MIN, b)) ++out[{s.degree(k), s.num_new(k), s.extra_rank(k)}];
    return out;
  };
  auto c1 = counts(b1), c2 = counts(p3), cp = counts(prod);
  std::map<Index, long long> conv;
  for (auto& [i, x] : c1)
    for (auto& [j, y] : c2) {
      Index k{std::get<0>(i) + std::get<0>(j), std::get<1>(i) + std::get<1>(j), std::get<2>(i) + std::get<2>(j)};
      if (std::get<1>(k) <= b.max_new_atoms && std::get<2>(k) <= b.max_extra_rank) conv[k] += x * y;
    }
  CHECK(cp == conv);
}

TEST_CASE("freeness: diagrams refactor into irreducible pieces") {
  MDContext ctx;
  MDSpace& s = ctx.space(build_partition_lattice(3));
  for (const DiagramKey& k : s.basis(-1, INT_MIN, Bounds{3, 1})) {
    Factoring f = refactor(s, k);
    CHECK(f.reproduces);
    CHECK(f.factors_irreducible);
  }
}

TEST_CASE("one-point lattice is rejected") {
  MDContext ctx;
  CHECK_THROWS_AS(ctx.space(trivial_lattice()), Error);
}

TEST_CASE("transport between relabelled copies of a base") {
  MDContext ctx;
  auto p3 = build_partition_lattice(3);
  // Same lattice with the atom order reversed and new labels.
  auto rev = relabel(p3, {2, 1, 0}, {"x", "y", "z"});
  MDSpace &a = ctx.space(p3), &b = ctx.space(rev);
  const std::vector<int> phi{2, 1, 0};  // atom j of rev is atom 2-j of p3
  for (const DiagramKey& k : a.basis(-1, INT_MIN, Bounds{2, 1})) {
    auto there = transport(a, k, b, phi);
    REQUIRE(there);
    CHECK(b.degree(there->key) == a.degree(k));
    auto back = transport(b, there->key, a, phi);
    REQUIRE(back);
    CHECK(back->key == k);
    CHECK(back->sign * there->sign == 1);
  }
  auto h = *a.base_diagram({0, 2});
  auto moved = transport(a, h.key, b, phi);
  REQUIRE(moved);
  CHECK(moved->key == b.base_diagram({2, 0})->key);
  CHECK_THROWS_AS(transport(a, h.key, ctx.space(build_boolean(3)), {0, 1, 2}), Error);
}
