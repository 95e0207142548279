// Truncated cohomology of MD(L, F).
//
// The bounded complex splits into blocks (k, r) with k the degree and
// r = rk(vJ) - rk(vJ ^ F_i); d maps (k, r) to (k+1, r-1). Row r is only
// complete when the rows above it are, so Betti numbers are reported for
// r < max_extra_rank; the top row is listed but flagged.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mdg/md_cdga.hpp"

namespace mdg {

using Block = std::pair<int, int>;  // (degree, r)

struct CohomologyResult {
  FlatId grading = -1;
  Bounds bounds;
  std::map<Block, long long> dims;
  std::map<Block, long long> ranks;        // rank of d leaving the block
  std::map<Block, long long> block_betti;  // reliable rows only
  std::map<int, long long> betti;          // per degree, summed over reliable rows
  std::size_t catalogue_size = 0;
  int exact_eliminations = 0;
  double seconds = 0;
};

CohomologyResult md_cohomology(MDSpace& s, FlatId grading, const Bounds& b,
                               const std::string& dump_dir = "");

struct StabilityReport {
  CohomologyResult at, next;  // bounds and bounds with one more atom
  std::map<int, bool> stable;  // per degree
  bool all_stable = true;
};

StabilityReport cohomology_with_stability(MDSpace& s, FlatId grading, const Bounds& b,
                                          const std::string& dump_dir = "");

}  // namespace mdg
