// Exact rank of sparse rational matrices.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace mdg {

struct Triplet {
  int row, col;
  mpq_class value;
};

class RationalMatrix {
 public:
  RationalMatrix(int rows = 0, int cols = 0) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  // Accumulates into an existing entry; entries that cancel are dropped
  // by compress().
  void add(int r, int c, const mpq_class& v);
  void compress();
  const std::vector<Triplet>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  RationalMatrix transpose() const;

  // "rows cols nnz" then one "r c num/den" line per entry.
  std::string dump() const;

 private:
  int rows_, cols_;
  std::vector<Triplet> entries_;
};

struct RankInfo {
  int rank = 0;
  int modular_rank = 0;   // rank modulo the screening prime
  bool exact_elimination = false;  // false when the modular rank was already maximal
};

RankInfo rank_info(const RationalMatrix& m);
int rank(const RationalMatrix& m);

// Rank modulo a prime below 2^62.
int rank_mod_p(const RationalMatrix& m, std::uint64_t p);
constexpr std::uint64_t kScreenPrime = 4611686018427387847ULL;  // 2^62 - 57

// Exact rank by elimination over the rationals (no screening).
int rank_exact(const RationalMatrix& m);

// h_k = dims[k] - ranks[k] - ranks[k-1], where ranks[k] is the rank of
// d: C^k -> C^{k+1}. Throws InconsistentChain on a negative value.
std::vector<long long> betti_from_ranks(const std::vector<long long>& dims,
                                        const std::vector<long long>& ranks);

}  // namespace mdg
