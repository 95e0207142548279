#include "mdg/exact_linalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mdg/lattice.hpp"

namespace mdg {

void RationalMatrix::add(int r, int c, const mpq_class& v) {
  if (r < 0 || c < 0 || r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
  if (v != 0) entries_.push_back({r, c, v});
}

void RationalMatrix::compress() {
  std::map<std::pair<int, int>, mpq_class> acc;
  for (auto& t : entries_) acc[{t.row, t.col}] += t.value;
  entries_.clear();
  for (auto& [rc, v] : acc)
    if (v != 0) entries_.push_back({rc.first, rc.second, v});
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (auto& e : entries_) t.entries_.push_back({e.col, e.row, e.value});
  return t;
}

std::string RationalMatrix::dump() const {
  RationalMatrix c = *this;
  c.compress();
  std::ostringstream os;
  os << rows_ << " " << cols_ << " " << c.entries_.size() << "\n";
  for (auto& e : c.entries_) os << e.row << " " << e.col << " " << e.value.get_num().get_str() << "/"
                                << e.value.get_den().get_str() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

// Non-negative remainder; unsigned long is 64-bit on the supported targets.
u64 mpz_mod(const mpz_class& z, u64 p) { return mpz_fdiv_ui(z.get_mpz_t(), p); }

}  // namespace

int rank_mod_p(const RationalMatrix& m, u64 p) {
  // Rows as sparse maps; elimination in row order with the sparsest pivot row.
  std::vector<std::map<int, u64>> rows(m.rows());
  for (auto& e : m.entries()) {
    u64 num = mpz_mod(e.value.get_num(), p), den = mpz_mod(e.value.get_den(), p);
    if (den == 0) return -1;
    u64 v = mulmod(num, powmod(den, p - 2, p), p);
    auto& slot = rows[e.row][e.col];
    slot = (slot + v) % p;
    if (slot == 0) rows[e.row].erase(e.col);
  }
  std::map<int, std::map<int, u64>> pivots;  // column -> normalized row
  int r = 0;
  for (auto& row : rows) {
    while (!row.empty()) {
      auto [c, v] = *row.begin();
      auto it = pivots.find(c);
      if (it == pivots.end()) {
        u64 inv = powmod(v, p - 2, p);
        for (auto& [cc, vv] : row) vv = mulmod(vv, inv, p);
        pivots.emplace(c, std::move(row));
        ++r;
        break;
      }
      for (auto& [cc, vv] : it->second) {
        u64 sub = mulmod(vv, v, p);
        auto& slot = row[cc];
        slot = (slot + p - sub) % p;
        if (slot == 0) row.erase(cc);
      }
    }
  }
  return r;
}

namespace {

using SparseRow = std::vector<std::pair<int, mpz_class>>;  // sorted by column

void make_primitive(SparseRow& row) {
  mpz_class g = 0;
  for (auto& [c, v] : row) g = gcd(g, v);
  if (g > 1)
    for (auto& [c, v] : row) v /= g;
}

// target := a * target - b * pivot, with a, b chosen to clear column c.
SparseRow eliminate(const SparseRow& target, const SparseRow& pivot, const mpz_class& a,
                    const mpz_class& b) {
  SparseRow out;
  out.reserve(target.size() + pivot.size());
  std::size_t i = 0, j = 0;
  while (i < target.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
      out.push_back({target[i].first, a * target[i].second});
      ++i;
    } else if (i == target.size() || pivot[j].first < target[i].first) {
      out.push_back({pivot[j].first, -b * pivot[j].second});
      ++j;
    } else {
      mpz_class v = a * target[i].second - b * pivot[j].second;
      if (v != 0) out.push_back({target[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  return out;
}

int rank_sparse(const RationalMatrix& m) {
  // Clear denominators row by row, then fraction-free elimination with
  // Markowitz pivot choice (fewest fill-in candidates).
  std::vector<std::map<int, mpq_class>> acc(m.rows());
  for (auto& e : m.entries()) acc[e.row][e.col] += e.value;
  std::vector<SparseRow> rows;
  for (auto& r : acc) {
    mpz_class l = 1;
    for (auto& [c, v] : r)
      if (v != 0) l = lcm(l, v.get_den());
    SparseRow sr;
    for (auto& [c, v] : r)
      if (v != 0) sr.push_back({c, mpz_class(v * l)});
    if (!sr.empty()) {
      make_primitive(sr);
      rows.push_back(std::move(sr));
    }
  }
  std::vector<std::set<int>> col_rows(m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (auto& [c, v] : rows[i]) col_rows[c].insert(static_cast<int>(i));
  std::vector<char> active(rows.size(), 1);
  int rank = 0;
  while (true) {
    // Markowitz cost (r_i - 1)(c_j - 1) over active rows' entries.
    long best = -1;
    int br = -1, bc = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!active[i] || rows[i].empty()) continue;
      const long ri = static_cast<long>(rows[i].size()) - 1;
      for (auto& [c, v] : rows[i]) {
        long cost = ri * (static_cast<long>(col_rows[c].size()) - 1);
        if (best < 0 || cost < best) {
          best = cost;
          br = static_cast<int>(i);
          bc = c;
        }
      }
      if (best == 0) break;
    }
    if (br < 0) break;
    ++rank;
    active[br] = 0;
    const SparseRow pivot = rows[br];
    mpz_class pv;
    for (auto& [c, v] : pivot)
      if (c == bc) pv = v;
    for (auto& [c, v] : pivot) col_rows[c].erase(br);
    std::vector<int> targets(col_rows[bc].begin(), col_rows[bc].end());
    for (int t : targets) {
      mpz_class tv;
      for (auto& [c, v] : rows[t])
        if (c == bc) tv = v;
      mpz_class g = gcd(pv, tv);
      for (auto& [c, v] : rows[t]) col_rows[c].erase(t);
      rows[t] = eliminate(rows[t], pivot, mpz_class(pv / g), mpz_class(tv / g));
      for (auto& [c, v] : rows[t]) col_rows[c].insert(t);
    }
  }
  return rank;
}

int rank_dense(const RationalMatrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (auto& e : m.entries()) a[e.row][e.col] += e.value;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int p = -1;
    for (int i = r; i < m.rows(); ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    for (int i = r + 1; i < m.rows(); ++i) {
      if (a[i][c] == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (int j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

int rank_exact(const RationalMatrix& m) {
  if (m.rows() < 64 && m.cols() < 64) return rank_dense(m);
  return rank_sparse(m);
}

RankInfo rank_info(const RationalMatrix& m) {
  RankInfo info;
  info.modular_rank = rank_mod_p(m, kScreenPrime);
  // The rank mod p never exceeds the rational rank, so a maximal value is final.
  if (info.modular_rank == std::min(m.rows(), m.cols())) {
    info.rank = info.modular_rank;
    return info;
  }
  info.exact_elimination = true;
  info.rank = rank_exact(m);
  return info;
}

int rank(const RationalMatrix& m) { return rank_info(m).rank; }

std::vector<long long> betti_from_ranks(const std::vector<long long>& dims,
                                        const std::vector<long long>& ranks) {
  std::vector<long long> out(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    long long rk = k < ranks.size() ? ranks[k] : 0;
    long long prev = k > 0 && k - 1 < ranks.size() ? ranks[k - 1] : 0;
    out[k] = dims[k] - rk - prev;
    if (out[k] < 0)
      throw Error(ErrorKind::InconsistentChain,
                  "negative Betti number in degree " + std::to_string(k));
  }
  return out;
}

}  // namespace mdg
