#include "mdg/cohomology.hpp"

#include <chrono>
#include <climits>
#include <filesystem>
#include <fstream>

#include "mdg/exact_linalg.hpp"

namespace mdg {

CohomologyResult md_cohomology(MDSpace& s, FlatId grading, const Bounds& b,
                               const std::string& dump_dir) {
  auto t0 = std::chrono::steady_clock::now();
  CohomologyResult res;
  res.grading = grading;
  res.bounds = b;
  res.catalogue_size = s.catalogue(b).size();
  std::map<Block, std::vector<DiagramKey>> blocks;
  for (const DiagramKey& k : s.basis(grading, INT_MIN, b)) {
    int deg = s.degree(k);
    int r = (static_cast<int>(s.word(k).size()) - deg) / 2;
    blocks[{deg, r}].push_back(k);
  }
  for (auto& [blk, keys] : blocks) res.dims[blk] = static_cast<long long>(keys.size());

  for (auto& [blk, keys] : blocks) {
    const Block target{blk.first + 1, blk.second - 1};
    auto it = blocks.find(target);
    std::map<DiagramKey, int> row_of;
    if (it != blocks.end())
      for (std::size_t i = 0; i < it->second.size(); ++i) row_of[it->second[i]] = static_cast<int>(i);
    RationalMatrix m(static_cast<int>(row_of.size()), static_cast<int>(keys.size()));
    for (std::size_t j = 0; j < keys.size(); ++j)
      for (auto& [k2, c] : s.differential(keys[j])) {
        auto r = row_of.find(k2);
        if (r == row_of.end())
          throw Error(ErrorKind::InconsistentChain,
                      "differential leaves the bounded complex at " + s.describe(k2));
        m.add(r->second, static_cast<int>(j), c);
      }
    RankInfo ri = rank_info(m);
    res.ranks[blk] = ri.rank;
    if (ri.exact_elimination) ++res.exact_eliminations;
    if (!dump_dir.empty() && m.rows() > 0 && m.cols() > 0) {
      std::filesystem::create_directories(dump_dir);
      std::ofstream out(dump_dir + "/d_grading" + std::to_string(grading) + "_k" +
                        std::to_string(blk.first) + "_r" + std::to_string(blk.second) + ".txt");
      out << m.dump();
    }
  }
  for (auto& [blk, dim] : res.dims) {
    if (blk.second >= b.max_extra_rank) continue;
    long long in = 0;
    if (auto it = res.ranks.find({blk.first - 1, blk.second + 1}); it != res.ranks.end()) in = it->second;
    long long h = dim - res.ranks[blk] - in;
    if (h < 0) throw Error(ErrorKind::InconsistentChain, "negative Betti number");
    res.block_betti[blk] = h;
    res.betti[blk.first] += h;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

StabilityReport cohomology_with_stability(MDSpace& s, FlatId grading, const Bounds& b,
                                          const std::string& dump_dir) {
  StabilityReport rep;
  rep.at = md_cohomology(s, grading, b, dump_dir);
  Bounds nb = b;
  ++nb.max_new_atoms;
  rep.next = md_cohomology(s, grading, nb);
  std::map<int, bool> seen;
  for (auto& [k, h] : rep.at.betti) seen[k] = true;
  for (auto& [k, h] : rep.next.betti) seen[k] = true;
  for (auto& [k, unused] : seen) {
    long long a = rep.at.betti.count(k) ? rep.at.betti.at(k) : 0;
    long long c = rep.next.betti.count(k) ? rep.next.betti.at(k) : 0;
    rep.stable[k] = a == c;
    if (a != c) rep.all_stable = false;
  }
  return rep;
}

}  // namespace mdg
