// Verification campaigns and golden reports.
#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "mdg/cohomology.hpp"
#include "mdg/io.hpp"

namespace mdg {

struct CheckResult {
  std::string name;
  std::string status;  // "pass", "fail" or "info"
  json counters = json::object();
  json witness;        // null unless failed
  std::string reproduce;
};

struct VerificationReport {
  std::string lattice;
  Bounds bounds;
  std::deque<CheckResult> checks;  // stable references while adding
  json tables = json::object();
  json stability = json::object();
  std::vector<std::pair<std::string, double>> phases;  // wall-clock seconds

  bool pass() const;
  CheckResult& add(const std::string& name, bool ok);
  json to_json(bool with_timings = true) const;
  std::string table() const;  // human-readable summary
};

struct HarnessOptions {
  Bounds bounds;
  std::uint64_t seed = 1;
  std::string spec_path;   // used for the reproduce commands
  std::string dump_dir;    // matrices of d, when non-empty
  bool all_gradings = false;
  // Pair laws run exhaustively up to this many pairs, sampled beyond.
  std::size_t pair_budget = 20000;
  std::size_t coproduct_budget = 4000;
};

VerificationReport run_verify_qiso(const LatticeSpec& spec, const HarnessOptions& opt);
VerificationReport run_axiom_suite(const LatticeSpec& spec, const HarnessOptions& opt);

// One canonical JSON report per lattice file in corpus_dir, written to
// out_dir/<name>.json. Returns the written paths.
std::vector<std::string> emit_golden(const std::string& corpus_dir, const std::string& out_dir);
json golden_report(const LatticeSpec& spec);

}  // namespace mdg
