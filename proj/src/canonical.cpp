// Canonical labelling of geometric lattices by colour refinement on the
// atom/flat incidence structure, with individualisation and exhaustive
// leaf search (no automorphism pruning; the lattices here are small).
#include <algorithm>
#include <map>
#include <numeric>

#include "mdg/lattice.hpp"

namespace mdg {

std::size_t Certificate::hash() const {
  std::size_t h = static_cast<std::size_t>(n) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (int c : colors) mix(static_cast<std::uint64_t>(c));
  for (Mask m : flats) mix(m);
  return h;
}

namespace {

// Replace arbitrary sortable signatures by dense ranks 0..k-1.
template <class Sig>
std::vector<int> dense_ranks(const std::vector<Sig>& sig, int* count) {
  std::vector<Sig> uniq(sig);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  std::vector<int> out(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    out[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[i]) - uniq.begin());
  *count = static_cast<int>(uniq.size());
  return out;
}

class Refiner {
 public:
  explicit Refiner(const GeometricLattice& l) : l_(l) {
    // Containment lists per atom, reused across refinements.
    contains_.resize(l.num_atoms());
    for (FlatId f = 0; f < l.num_flats(); ++f)
      for (int a : bits_of(l.mask(f))) contains_[a].push_back(f);
  }

  // Refine to the coarsest equitable colouring finer than `c`.
  std::vector<int> refine(std::vector<int> c) const {
    int count = 0;
    c = dense_ranks(c, &count);
    const int nf = l_.num_flats();
    while (true) {
      std::vector<std::vector<int>> fsig(nf);
      for (FlatId f = 0; f < nf; ++f) {
        auto& s = fsig[f];
        s.push_back(l_.rank(f));
        for (int a : bits_of(l_.mask(f))) s.push_back(c[a] + 1);
        std::sort(s.begin() + 1, s.end());
      }
      int fcount = 0;
      std::vector<int> fc = dense_ranks(fsig, &fcount);
      std::vector<std::vector<int>> asig(c.size());
      for (std::size_t a = 0; a < c.size(); ++a) {
        auto& s = asig[a];
        s.push_back(c[a]);
        for (FlatId f : contains_[a]) s.push_back(fc[f]);
        std::sort(s.begin() + 1, s.end());
      }
      int ncount = 0;
      std::vector<int> nc = dense_ranks(asig, &ncount);
      if (ncount == count) return nc;
      c = std::move(nc);
      count = ncount;
    }
  }

 private:
  const GeometricLattice& l_;
  std::vector<std::vector<FlatId>> contains_;
};

struct Search {
  const GeometricLattice& l;
  const Refiner& ref;
  bool have = false;
  Certificate best;
  std::vector<int> best_position;
  std::vector<std::vector<int>> best_leaves;  // positions of every leaf achieving best

  Certificate leaf_cert(const std::vector<int>& pos, const std::vector<int>& init) const {
    Certificate c;
    c.n = l.num_atoms();
    c.colors.assign(c.n, 0);
    for (int a = 0; a < c.n; ++a) c.colors[pos[a]] = init[a];
    c.flats.reserve(l.num_flats());
    for (FlatId f = 0; f < l.num_flats(); ++f) {
      Mask m = 0;
      for (int a : bits_of(l.mask(f))) m |= bit(pos[a]);
      c.flats.push_back(m);
    }
    std::sort(c.flats.begin(), c.flats.end());
    return c;
  }

  void run(const std::vector<int>& colors, const std::vector<int>& init) {
    std::vector<int> c = ref.refine(colors);
    const int n = static_cast<int>(c.size());
    std::vector<int> size(n, 0);
    for (int x : c) ++size[x];
    int cell = -1;
    for (int k = 0; k < n; ++k)
      if (size[k] > 1) {
        cell = k;
        break;
      }
    if (cell < 0) {
      Certificate cert = leaf_cert(c, init);
      if (!have || cert < best) {
        have = true;
        best = std::move(cert);
        best_position = c;
        best_leaves.assign(1, c);
      } else if (cert == best) {
        best_leaves.push_back(c);
      }
      return;
    }
    for (int a = 0; a < n; ++a) {
      if (c[a] != cell) continue;
      std::vector<int> d(n);
      for (int x = 0; x < n; ++x) d[x] = 2 * c[x] + ((c[x] == cell && x != a) ? 1 : 0);
      run(d, init);
    }
  }
};

}  // namespace

CanonicalForm canonical_form_colored(const GeometricLattice& l, const std::vector<int>& colors) {
  const int n = l.num_atoms();
  CanonicalForm out;
  if (n == 0) {
    out.cert.flats = {0};
    out.automorphisms.push_back({});
    return out;
  }
  int count = 0;
  std::vector<int> init = dense_ranks(colors, &count);
  Refiner ref(l);
  Search s{l, ref, false, {}, {}, {}};
  s.run(init, init);
  out.cert = s.best;
  out.position = s.best_position;
  out.order.assign(n, 0);
  for (int a = 0; a < n; ++a) out.order[out.position[a]] = a;
  for (const auto& leaf : s.best_leaves) {
    std::vector<int> perm(n);
    for (int a = 0; a < n; ++a) perm[a] = out.order[leaf[a]];
    if (std::find(out.automorphisms.begin(), out.automorphisms.end(), perm) ==
        out.automorphisms.end())
      out.automorphisms.push_back(std::move(perm));
  }
  return out;
}

CanonicalForm canonical_form(const GeometricLattice& l, const std::vector<int>& fixed) {
  const int n = l.num_atoms();
  const int k = static_cast<int>(fixed.size());
  std::vector<int> colors(n, k);
  for (int i = 0; i < k; ++i) colors[fixed[i]] = i;
  CanonicalForm cf = canonical_form_colored(l, colors);
  // Colours are recorded by listed position so that certificates compare
  // across lattices; unlisted atoms get -1 so the number of fixed atoms is
  // part of the certificate.
  for (int p = 0; p < n; ++p) cf.cert.colors[p] = colors[cf.order[p]] < k ? colors[cf.order[p]] : -1;
  return cf;
}

bool isomorphic(const GeometricLattice& a, const GeometricLattice& b) {
  if (a.num_atoms() != b.num_atoms() || a.num_flats() != b.num_flats()) return false;
  return canonical_form(a).cert == canonical_form(b).cert;
}

LatticePtr relabel(const LatticePtr& l, const std::vector<int>& order,
                   const std::vector<std::string>& labels) {
  const int n = l->num_atoms();
  std::vector<int> pos(n);
  for (int p = 0; p < n; ++p) pos[order[p]] = p;
  std::vector<std::pair<Mask, int>> fl;
  fl.reserve(l->num_flats());
  for (FlatId f = 0; f < l->num_flats(); ++f) {
    Mask m = 0;
    for (int a : bits_of(l->mask(f))) m |= bit(pos[a]);
    fl.push_back({m, l->rank(f)});
  }
  return make_lattice(GeometricLattice::from_ranked(labels, std::move(fl)));
}

}  // namespace mdg
