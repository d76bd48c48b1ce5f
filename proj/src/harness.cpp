#include "lrsc/harness.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lrsc/recovery.hpp"
#include "lrsc/rng.hpp"

namespace lrsc::harness {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(k[0])) && k[0] != '_') return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      return parts;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

double parse_double(const std::string& s, bool& ok) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  ok = end == c + s.size() && !s.empty();
  return v;
}

long long parse_int(const std::string& s, bool& ok) {
  const char* c = s.c_str();
  char* end = nullptr;
  long long v = std::strtoll(c, &end, 10);
  ok = end == c + s.size() && !s.empty();
  return v;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  return parse_string(read_file(path), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw config_error(name + ":" + std::to_string(line) + ": expected `key = value`");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!valid_key(key))
      throw config_error(name + ":" + std::to_string(line) + ": bad key `" + key + "`");
    if (value.empty())
      throw config_error(name + ":" + std::to_string(line) + ": key `" + key +
                         "` has an empty value");
    if (cfg.entries_.count(key))
      throw config_error(name + ":" + std::to_string(line) + ": duplicate key `" + key +
                         "` (first set on line " + std::to_string(cfg.entries_[key].line) + ")");
    cfg.entries_[key] = Entry{value, line, false};
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

Config::Entry& Config::lookup(const std::string& key) {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw config_error(name_ + ": missing required key `" + key + "`");
  it->second.used = true;
  return it->second;
}

void Config::fail(const Entry& e, const std::string& key, const std::string& msg) const {
  throw config_error(name_ + ":" + std::to_string(e.line) + ": key `" + key + "`: " + msg);
}

std::string Config::require_string(const std::string& key) { return lookup(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  return has(key) ? require_string(key) : fallback;
}

long long Config::require_int(const std::string& key) {
  Entry& e = lookup(key);
  bool ok = false;
  long long v = parse_int(e.value, ok);
  if (!ok) fail(e, key, "expected an integer, got `" + e.value + "`");
  return v;
}

long long Config::get_int(const std::string& key, long long fallback) {
  return has(key) ? require_int(key) : fallback;
}

double Config::require_double(const std::string& key) {
  Entry& e = lookup(key);
  bool ok = false;
  double v = parse_double(e.value, ok);
  if (!ok) fail(e, key, "expected a number, got `" + e.value + "`");
  return v;
}

double Config::get_double(const std::string& key, double fallback) {
  return has(key) ? require_double(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  Entry& e = lookup(key);
  const char* c = e.value.c_str();
  char* end = nullptr;
  unsigned long long v = std::strtoull(c, &end, 10);
  if (end != c + e.value.size() || e.value.empty() || e.value[0] == '-')
    fail(e, key, "expected an unsigned integer, got `" + e.value + "`");
  return v;
}

std::vector<int> Config::require_int_list(const std::string& key) {
  Entry& e = lookup(key);
  std::vector<int> out;
  for (const std::string& part : split(e.value, ',')) {
    std::string item = trim(part);
    bool ok = false;
    long long v = parse_int(item, ok);
    if (!ok) fail(e, key, "expected a comma list of integers, got `" + e.value + "`");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> Config::require_double_list(const std::string& key) {
  Entry& e = lookup(key);
  std::vector<double> out;
  for (const std::string& part : split(e.value, ',')) {
    std::string item = trim(part);
    bool ok = false;
    double v = parse_double(item, ok);
    if (!ok) fail(e, key, "expected a comma list of numbers, got `" + e.value + "`");
    out.push_back(v);
  }
  return out;
}

void Config::finish() {
  for (const auto& [key, e] : entries_)
    if (!e.used)
      throw config_error(name_ + ":" + std::to_string(e.line) + ": unknown key `" + key + "`");
}

ClusterLayout contiguous_layout(int n, const std::vector<int>& k) {
  ClusterLayout layout;
  layout.n = n;
  int at = 0;
  for (int size : k) {
    if (size < 1) throw std::invalid_argument("contiguous_layout: cluster sizes must be >= 1");
    std::vector<int> members(size);
    for (int i = 0; i < size; ++i) members[i] = at + i;
    at += size;
    layout.clusters.push_back(std::move(members));
  }
  layout.validate();
  return layout;
}

SweepConfig sweep_config_from(Config& cfg) {
  SweepConfig sc;
  sc.n = static_cast<int>(cfg.require_int("n"));
  sc.k = cfg.require_int_list("k");
  sc.q = cfg.require_double("q");
  sc.p_grid = cfg.require_double_list("p_grid");

  std::string mode = cfg.get_string("lambda_mode", "simulation");
  if (mode == "simulation")
    sc.lambda_mode = LambdaMode::simulation;
  else if (mode == "intelligent_theorem")
    sc.lambda_mode = LambdaMode::intelligent_theorem;
  else if (mode == "blind_theorem")
    sc.lambda_mode = LambdaMode::blind_theorem;
  else if (mode == "theorem")
    sc.per_method_theorem = true;
  else
    throw config_error(cfg.name() + ": lambda_mode must be simulation, intelligent_theorem, "
                       "blind_theorem, or theorem");
  sc.lambda_override = cfg.get_double("lambda", 0.0);

  sc.trials = static_cast<int>(cfg.get_int("trials", 20));
  sc.base_seed = cfg.get_u64("base_seed", 0);

  std::string method = cfg.get_string("method", "both");
  if (method == "blind")
    sc.run_intelligent = false;
  else if (method == "intelligent")
    sc.run_blind = false;
  else if (method != "both")
    throw config_error(cfg.name() + ": method must be blind, intelligent, or both");

  std::string rmode = cfg.get_string("region_size_mode", "truth");
  if (rmode == "truth")
    sc.region_size_mode = RegionSizeMode::truth;
  else if (rmode == "explicit")
    sc.region_size_mode = RegionSizeMode::explicit_size;
  else
    throw config_error(cfg.name() + ": region_size_mode must be truth or explicit");
  if (sc.region_size_mode == RegionSizeMode::explicit_size) {
    if (!cfg.has("region_size"))
      throw config_error(cfg.name() +
                         ": region_size_mode = explicit requires a region_size key — the "
                         "intelligent method needs the union-of-clusters size as side "
                         "information");
    sc.region_size = cfg.require_int("region_size");
  }

  sc.max_iter = static_cast<int>(cfg.get_int("max_iter", 5000));
  sc.workers = static_cast<int>(cfg.get_int("workers", 0));
  sc.out = cfg.get_string("out", "");
  cfg.finish();

  if (sc.n < 1) throw config_error(cfg.name() + ": n must be >= 1");
  long long total = 0;
  for (int size : sc.k) {
    if (size < 1) throw config_error(cfg.name() + ": cluster sizes must be >= 1");
    total += size;
  }
  if (sc.k.empty() || total > sc.n)
    throw config_error(cfg.name() + ": k must be a nonempty list with sum <= n");
  if (sc.q < 0.0 || sc.q >= 1.0) throw config_error(cfg.name() + ": q must be in [0, 1)");
  if (sc.p_grid.empty()) throw config_error(cfg.name() + ": p_grid must be nonempty");
  for (double p : sc.p_grid)
    if (!(p > sc.q) || p > 1.0)
      throw config_error(cfg.name() + ": p_grid values must lie in (q, 1]");
  if (sc.lambda_override < 0.0) throw config_error(cfg.name() + ": lambda must be positive");
  if (sc.trials < 1) throw config_error(cfg.name() + ": trials must be >= 1");
  if (sc.max_iter < 1) throw config_error(cfg.name() + ": max_iter must be >= 1");
  if (sc.workers < 0) throw config_error(cfg.name() + ": workers must be >= 0");
  long long n2 = static_cast<long long>(sc.n) * sc.n;
  if (sc.region_size_mode == RegionSizeMode::explicit_size &&
      (sc.region_size < 0 || sc.region_size > n2))
    throw config_error(cfg.name() + ": region_size must be in [0, n^2]");
  return sc;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t point_index,
                          std::uint64_t trial_index) {
  return mix_seed(mix_seed(base_seed, point_index), trial_index);
}

int resolve_workers(int explicit_value) {
  if (explicit_value > 0) return explicit_value;
  if (const char* env = std::getenv("LRSC_WORKERS")) {
    bool ok = false;
    long long v = parse_int(env, ok);
    if (ok && v > 0) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct TrialSlot {
  bool ran = false;
  bool success = false;
  int iterations = 0;
  long long mismatch = 0;
  double seconds = 0.0;
};

SweepRow reduce_point(Method method, double p, const TrialSlot* slots, int trials) {
  SweepRow row;
  row.method = method;
  row.p = p;
  row.trials = trials;
  double iters = 0.0, mism = 0.0, secs = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TrialSlot& s = slots[t];
    if (s.success) ++row.successes;
    iters += s.iterations;
    mism += static_cast<double>(s.mismatch);
    secs += s.seconds;
  }
  row.mean_iterations = iters / trials;
  row.mean_mismatch = mism / trials;
  row.mean_solve_seconds = secs / trials;
  return row;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  ClusterLayout layout = contiguous_layout(cfg.n, cfg.k);
  const int points = static_cast<int>(cfg.p_grid.size());
  const int trials = cfg.trials;
  const long long tasks = static_cast<long long>(points) * trials;
  if (tasks == 0) throw std::invalid_argument("run_sweep: empty grid");

  long long region = cfg.region_size_mode == RegionSizeMode::explicit_size
                         ? cfg.region_size
                         : layout.region_size();

  auto lambda_for = [&](Method m) {
    if (cfg.lambda_override > 0.0) return cfg.lambda_override;
    LambdaMode mode = cfg.lambda_mode;
    if (cfg.per_method_theorem)
      mode = m == Method::blind ? LambdaMode::blind_theorem : LambdaMode::intelligent_theorem;
    return default_lambda(cfg.n, mode);
  };
  const double lambda_blind = lambda_for(Method::blind);
  const double lambda_intel = lambda_for(Method::intelligent);

  std::vector<TrialSlot> blind_slots(tasks), intel_slots(tasks);
  std::atomic<long long> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto solve_one = [&](Method m, const PlantedGraph& g, TrialSlot& slot) {
    SolverConfig sc;
    sc.lambda = m == Method::blind ? lambda_blind : lambda_intel;
    sc.max_iter = cfg.max_iter;
    auto t0 = std::chrono::steady_clock::now();
    Decomposition dec = m == Method::blind ? solve_blind(g.a, sc)
                                           : solve_intelligent(g.a, region, sc);
    auto t1 = std::chrono::steady_clock::now();
    RecoveryOutcome outcome = score_recovery(dec.l, g.layout);
    slot.ran = true;
    slot.success = dec.converged && outcome.exact;
    slot.iterations = dec.iterations;
    slot.mismatch = outcome.mismatch;
    slot.seconds = std::chrono::duration<double>(t1 - t0).count();
  };

  auto work = [&] {
    for (;;) {
      long long idx = next.fetch_add(1);
      if (idx >= tasks || stop.load()) return;
      try {
        int point = static_cast<int>(idx / trials);
        int trial = static_cast<int>(idx % trials);
        ModelParams params;
        params.p.assign(cfg.k.size(), cfg.p_grid[point]);
        params.q = cfg.q;
        std::uint64_t seed = derive_seed(cfg.base_seed, point, trial);
        SplitMix64 rng(seed);
        PlantedGraph g = generate(layout, params, rng);
        g.seed = seed;
        if (cfg.run_blind) solve_one(Method::blind, g, blind_slots[idx]);
        if (cfg.run_intelligent) solve_one(Method::intelligent, g, intel_slots[idx]);
      } catch (...) {
        std::scoped_lock lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };

  int workers = resolve_workers(cfg.workers);
  if (workers > tasks) workers = static_cast<int>(tasks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SweepResult result;
  if (cfg.run_blind)
    for (int point = 0; point < points; ++point)
      result.rows.push_back(reduce_point(Method::blind, cfg.p_grid[point],
                                         &blind_slots[static_cast<long long>(point) * trials],
                                         trials));
  if (cfg.run_intelligent)
    for (int point = 0; point < points; ++point)
      result.rows.push_back(reduce_point(Method::intelligent, cfg.p_grid[point],
                                         &intel_slots[static_cast<long long>(point) * trials],
                                         trials));
  return result;
}

std::string sweep_csv_header() {
  return "method,p,trials,successes,mean_iterations,mean_mismatch,mean_solve_seconds";
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << sweep_csv_header() << '\n';
  for (const SweepRow& row : r.rows)
    os << method_name(row.method) << ',' << fmt(row.p) << ',' << row.trials << ','
       << row.successes << ',' << fmt(row.mean_iterations) << ',' << fmt(row.mean_mismatch)
       << ',' << fmt(row.mean_solve_seconds) << '\n';
  return os.str();
}

SweepResult parse_sweep_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> io_error {
    return io_error("sweep csv:" + std::to_string(lineno) + ": " + msg);
  };
  if (!std::getline(is, line)) throw io_error("sweep csv: empty input");
  ++lineno;
  if (line != sweep_csv_header()) throw fail("unexpected header `" + line + "`");

  SweepResult result;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 7) throw fail("expected 7 fields, got " + std::to_string(f.size()));
    SweepRow row;
    try {
      row.method = method_from_name(f[0]);
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
    bool ok = true, all_ok = true;
    row.p = parse_double(f[1], ok);
    all_ok &= ok;
    row.trials = static_cast<int>(parse_int(f[2], ok));
    all_ok &= ok;
    row.successes = static_cast<int>(parse_int(f[3], ok));
    all_ok &= ok;
    row.mean_iterations = parse_double(f[4], ok);
    all_ok &= ok;
    row.mean_mismatch = parse_double(f[5], ok);
    all_ok &= ok;
    row.mean_solve_seconds = parse_double(f[6], ok);
    all_ok &= ok;
    if (!all_ok) throw fail("malformed numeric field in `" + line + "`");
    if (row.successes > row.trials || row.successes < 0)
      throw fail("successes out of range in `" + line + "`");
    result.rows.push_back(row);
  }
  return result;
}

std::string strip_timing_column(const std::string& csv) {
  std::istringstream is(csv);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    std::size_t comma = line.rfind(',');
    os << (comma == std::string::npos ? line : line.substr(0, comma)) << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw io_error(path + ": read failed");
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path + ": cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw io_error(path + ": write failed");
}

}  // namespace lrsc::harness
