#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrsc/model.hpp"
#include "lrsc/solvers.hpp"

namespace lrsc::harness {

// Config file grammar: one `key = value` per line, `#` starts a comment,
// blank lines ignored, lists are comma-separated. Unknown keys are errors,
// reported with file and line. Sweep keys:
//   n              node count
//   k              cluster sizes, comma list (clusters occupy [0,k1), [k1,k1+k2), ...)
//   q              background edge probability
//   p_grid         in-cluster probability grid, comma list, each in (q, 1]
//   lambda_mode    simulation | intelligent_theorem | blind_theorem | theorem
//                  (theorem resolves per method)
//   lambda         optional explicit value; wins over lambda_mode
//   trials         trials per grid point (default 20)
//   base_seed      root seed (default 0)
//   method         blind | intelligent | both
//   region_size_mode  truth | explicit (default truth)
//   region_size    required when region_size_mode = explicit
//   max_iter       solver iteration cap (default 5000)
//   workers        worker threads (default: LRSC_WORKERS env, then hardware)
//   out            optional output path (CLI --out wins)

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name = "<config>");

  bool has(const std::string& key) const;
  std::string require_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  long long require_int(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  double require_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::vector<int> require_int_list(const std::string& key);
  std::vector<double> require_double_list(const std::string& key);

  // Errors on the first key that was never consumed by a getter.
  void finish();

  const std::string& name() const { return name_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
  };
  std::string name_;
  std::map<std::string, Entry> entries_;

  Entry& lookup(const std::string& key);
  [[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& msg) const;
};

enum class RegionSizeMode { truth, explicit_size };

struct SweepConfig {
  int n = 0;
  std::vector<int> k;
  double q = 0.0;
  std::vector<double> p_grid;
  LambdaMode lambda_mode = LambdaMode::simulation;
  bool per_method_theorem = false;  // lambda_mode = theorem
  double lambda_override = 0.0;     // > 0 wins over lambda_mode
  int trials = 20;
  std::uint64_t base_seed = 0;
  bool run_blind = true;
  bool run_intelligent = true;
  RegionSizeMode region_size_mode = RegionSizeMode::truth;
  long long region_size = -1;
  int max_iter = 5000;
  int workers = 0;  // 0 = resolve from env / hardware
  std::string out;
};

// Consumes the sweep keys from cfg and validates; calls cfg.finish().
SweepConfig sweep_config_from(Config& cfg);

struct SweepRow {
  Method method = Method::blind;
  double p = 0.0;
  int trials = 0;
  int successes = 0;
  double mean_iterations = 0.0;
  double mean_mismatch = 0.0;
  double mean_solve_seconds = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

ClusterLayout contiguous_layout(int n, const std::vector<int>& k);

// Stable seed derivation; distinct (point, trial) pairs get distinct seeds.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index,
                          std::uint64_t trial_index);

// Explicit value (> 0) wins, then the LRSC_WORKERS env var, then hardware.
int resolve_workers(int explicit_value);

// One graph per (point, trial); both methods, when enabled, see the same graph.
// Solver non-convergence counts as failure; it never aborts the sweep.
SweepResult run_sweep(const SweepConfig& cfg);

// CSV column order: method,p,trials,successes,mean_iterations,mean_mismatch,
// mean_solve_seconds. Everything but the timing column is deterministic for a
// fixed config and base_seed.
std::string sweep_csv_header();
std::string sweep_csv(const SweepResult& r);
SweepResult parse_sweep_csv(const std::string& text);

// Drops the final (timing) column from every line, for determinism checks.
std::string strip_timing_column(const std::string& csv);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lrsc::harness
