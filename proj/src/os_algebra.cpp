#include "mdg/os_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace mdg {

void OSElement::add(Mask m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

OSElement& OSElement::operator+=(const OSElement& o) {
  for (auto& [m, c] : o.terms) add(m, c);
  return *this;
}

OSElement OSElement::operator*(const mpq_class& c) const {
  OSElement out;
  if (c == 0) return out;
  for (auto& [m, x] : terms) out.terms.emplace(m, x * c);
  return out;
}

namespace {

inline Mask above(int b) { return b >= 63 ? 0 : ~Mask{0} << (b + 1); }

}  // namespace

int shuffle_sign(Mask first, Mask second) {
  int inv = 0;
  for (int b : bits_of(second)) inv += popcount(first & above(b));
  return inv % 2 ? -1 : 1;
}

int word_sign(const std::vector<int>& word) {
  int inv = 0;
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t j = i + 1; j < word.size(); ++j) {
      if (word[i] == word[j]) return 0;
      if (word[i] > word[j]) ++inv;
    }
  return inv % 2 ? -1 : 1;
}

OSAlgebra::OSAlgebra(LatticePtr l) : l_(std::move(l)) {
  circuits_ = circuits(*l_);
  for (Mask c : circuits_) broken_.push_back(c & (c - 1));
  std::sort(broken_.begin(), broken_.end(), lex_less);
  broken_.erase(std::unique(broken_.begin(), broken_.end()), broken_.end());
}

bool OSAlgebra::is_nbc(Mask m) const {
  for (Mask b : broken_)
    if ((b & m) == b) return false;
  return true;
}

std::vector<std::vector<Mask>> OSAlgebra::nbc_basis() const {
  std::vector<std::vector<Mask>> out(l_->rank() + 1);
  const int n = l_->num_atoms();
  // nbc sets are closed under taking subsets, so grow them in increasing order.
  std::vector<Mask> stack{0};
  while (!stack.empty()) {
    Mask s = stack.back();
    stack.pop_back();
    out[popcount(s)].push_back(s);
    int start = s ? 64 - __builtin_clzll(s) : 0;
    for (int x = start; x < n; ++x) {
      Mask t = s | bit(x);
      if (l_->independent(t) && is_nbc(t)) stack.push_back(t);
    }
  }
  for (auto& v : out) std::sort(v.begin(), v.end(), lex_less);
  return out;
}

OSElement OSAlgebra::reduce(Mask s) const {
  if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  OSElement out;
  if (!l_->independent(s)) {
    // Contains a circuit C, and e_C = +-e_c * (delta e_C) lies in the ideal.
  } else {
    Mask bc = 0;
    for (Mask b : broken_)
      if ((b & s) == b) {
        bc = b;
        break;
      }
    if (bc == 0) {
      out.add(s, 1);
    } else {
      // The circuit is bc plus one smaller atom c0; find it.
      Mask circuit = 0;
      for (Mask c : circuits_)
        if ((c & (c - 1)) == bc) {
          circuit = c;
          break;
        }
      const Mask rest = s & ~bc;
      const int sign = shuffle_sign(bc, rest);
      // e_{C - c0} = sum_{j>=1} (-1)^{j+1} e_{C - c_j}.
      std::vector<int> cs = bits_of(circuit);
      for (std::size_t j = 1; j < cs.size(); ++j) {
        Mask term = circuit & ~bit(cs[j]);
        if (term & rest) continue;
        int sg = sign * (j % 2 ? 1 : -1) * shuffle_sign(term, rest);
        out += reduce(term | rest) * mpq_class(sg);
      }
    }
  }
  memo_.emplace(s, out);
  return out;
}

OSElement OSAlgebra::reduce_word(const std::vector<int>& word) const {
  int sg = word_sign(word);
  if (sg == 0) return {};
  Mask m = 0;
  for (int a : word) m |= bit(a);
  return reduce(m) * mpq_class(sg);
}

OSElement OSAlgebra::monomial(Mask m, const mpq_class& c) const { return reduce(m) * c; }

OSElement OSAlgebra::multiply(const OSElement& a, const OSElement& b) const {
  OSElement out;
  for (auto& [ma, ca] : a.terms)
    for (auto& [mb, cb] : b.terms) {
      if (ma & mb) continue;
      out += reduce(ma | mb) * mpq_class(ca * cb * shuffle_sign(ma, mb));
    }
  return out;
}

std::vector<long long> OSAlgebra::hilbert_series() const {
  std::vector<long long> h;
  for (auto& v : nbc_basis()) h.push_back(static_cast<long long>(v.size()));
  return h;
}

std::vector<long long> OSAlgebra::graded_dims() const {
  std::vector<long long> d(l_->num_flats(), 0);
  for (auto& v : nbc_basis())
    for (Mask m : v) ++d[l_->closure(m)];
  return d;
}

bool OSAlgebra::top_concentrated() const {
  for (auto& v : nbc_basis())
    for (Mask m : v)
      if (l_->closure(m) == l_->top() && popcount(m) != l_->rank()) return false;
  return true;
}

std::string OSAlgebra::format(const OSElement& e) const {
  if (e.zero()) return "0";
  std::vector<std::pair<Mask, mpq_class>> t(e.terms.begin(), e.terms.end());
  std::sort(t.begin(), t.end(), [](auto& x, auto& y) {
    int px = popcount(x.first), py = popcount(y.first);
    return px != py ? px < py : lex_less(x.first, y.first);
  });
  std::ostringstream os;
  bool first = true;
  for (auto& [m, c] : t) {
    mpq_class a = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (a != 1 || m == 0) os << a.get_str() << (m ? " " : "");
    bool inner = false;
    for (int x : bits_of(m)) {
      os << (inner ? " " : "") << "e" << l_->atom(x);
      inner = true;
    }
    first = false;
  }
  return os.str();
}

HolonomyPresentation holonomy_presentation(const GeometricLattice& l) {
  HolonomyPresentation p;
  p.generators = l.atoms();
  if (l.rank() < 2) return p;
  for (FlatId f : l.flats_of_rank(2)) {
    std::vector<int> atoms = bits_of(l.mask(f));
    for (int h : atoms) p.relations.push_back({h, f, atoms});
  }
  return p;
}

KoszulSeries koszul_series_check(const std::vector<long long>& hilbert, int order) {
  KoszulSeries k;
  k.coefficients.push_back(1);
  for (int n = 1; n <= order; ++n) {
    mpz_class a = 0;
    for (int j = 1; j <= n && j < static_cast<int>(hilbert.size()); ++j) {
      mpz_class hj = static_cast<long>(hilbert[j]);
      // Hilb(-t) has coefficient (-1)^j h_j.
      a -= (j % 2 ? -hj : hj) * k.coefficients[n - j];
    }
    k.coefficients.push_back(a);
    if (a < 0 && k.pass) {
      k.pass = false;
      k.fail_index = n;
    }
  }
  return k;
}

OSTensor os_coproduct(const OSAlgebra& whole, const IntervalResult& lower, const OSAlgebra& lower_os,
                      const IntervalResult& upper, const OSAlgebra& upper_os, const OSElement& x) {
  const GeometricLattice& l = *whole.lattice();
  const FlatId f = lower.upper;
  OSTensor out;
  for (auto& [m, c] : x.terms) {
    Mask below = m & l.mask(f), outside = m & ~l.mask(f);
    // Unshuffle sign: atoms below F move in front, relative orders kept.
    const int sg = shuffle_sign(below, outside);
    Mask lo = 0;
    for (int a : bits_of(below)) lo |= bit(lowest(lower.lattice->mask(lower.from_parent[l.atom_flat(a)])));
    std::vector<int> word;
    for (int a : bits_of(outside)) {
      FlatId g = upper.from_parent[l.join(f, l.atom_flat(a))];
      word.push_back(lowest(upper.lattice->mask(g)));
    }
    OSElement left = lower_os.reduce(lo);
    OSElement right = upper_os.reduce_word(word);
    for (auto& [ml, cl] : left.terms)
      for (auto& [mr, cr] : right.terms) {
        mpq_class v = c * cl * cr * sg;
        auto [it, fresh] = out.emplace(std::make_pair(ml, mr), v);
        if (!fresh) {
          it->second += v;
          if (it->second == 0) out.erase(it);
        }
      }
  }
  return out;
}

}  // namespace mdg
