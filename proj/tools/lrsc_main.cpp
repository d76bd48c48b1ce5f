#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrsc/certificate.hpp"
#include "lrsc/harness.hpp"
#include "lrsc/model.hpp"
#include "lrsc/recovery.hpp"
#include "lrsc/solvers.hpp"

namespace {

using namespace lrsc;
namespace hn = lrsc::harness;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    hn::write_file(out_path, text);
}

struct ModelSpec {
  ClusterLayout layout;
  ModelParams params;
  double rate = 1.0;
};

// Consumes n, k, q, p, r from a config; p may be a single value for all
// clusters or one value per cluster.
ModelSpec model_spec_from(hn::Config& cfg) {
  ModelSpec spec;
  int n = static_cast<int>(cfg.require_int("n"));
  std::vector<int> k = cfg.require_int_list("k");
  spec.layout = hn::contiguous_layout(n, k);
  spec.params.q = cfg.require_double("q");
  spec.params.p = cfg.require_double_list("p");
  if (spec.params.p.size() == 1 && k.size() > 1)
    spec.params.p.assign(k.size(), spec.params.p[0]);
  if (spec.params.p.size() != k.size())
    throw hn::config_error(cfg.name() + ": p must have one value or one per cluster");
  spec.rate = cfg.get_double("r", 1.0);
  return spec;
}

// lambda key wins; otherwise lambda_mode (default: the method's theorem value).
double lambda_from(hn::Config& cfg, Method method, int n) {
  if (cfg.has("lambda")) {
    double v = cfg.require_double("lambda");
    if (!(v > 0.0)) throw hn::config_error(cfg.name() + ": lambda must be positive");
    return v;
  }
  std::string mode = cfg.get_string("lambda_mode", "theorem");
  if (mode == "simulation") return default_lambda(n, LambdaMode::simulation);
  if (mode == "intelligent_theorem") return default_lambda(n, LambdaMode::intelligent_theorem);
  if (mode == "blind_theorem") return default_lambda(n, LambdaMode::blind_theorem);
  if (mode == "theorem")
    return default_lambda(n, method == Method::blind ? LambdaMode::blind_theorem
                                                     : LambdaMode::intelligent_theorem);
  throw hn::config_error(cfg.name() + ": lambda_mode must be simulation, intelligent_theorem, "
                         "blind_theorem, or theorem");
}

std::string dense_text(const SymMatrix& m) {
  std::ostringstream os;
  os << m.order() << '\n';
  for (int i = 0; i < m.order(); ++i) {
    for (int j = 0; j < m.order(); ++j) os << (j ? " " : "") << fmt(m(i, j));
    os << '\n';
  }
  return os.str();
}

void run_generate(const std::string& config_path, std::uint64_t seed, bool seed_given,
                  bool complement_reduction, const std::string& out_cli) {
  hn::Config cfg = hn::Config::parse_file(config_path);
  ModelSpec spec = model_spec_from(cfg);
  std::uint64_t base = cfg.get_u64("base_seed", 0);
  std::string out = out_cli.empty() ? cfg.get_string("out", "") : out_cli;
  cfg.finish();
  if (seed_given) base = seed;

  if (complement_reduction) {
    for (double& p : spec.params.p) {
      if (!(p < spec.params.q))
        throw hn::config_error(
            "generate --complement expects a sparse-cluster model (every p < q); this config "
            "already has p > q, so generate it directly");
      p = 1.0 - p;
    }
    spec.params.q = 1.0 - spec.params.q;
  } else if (!(spec.params.p_min() > spec.params.q)) {
    throw hn::config_error(
        "in-cluster probability must exceed the background (p > q); for sparse-cluster "
        "instances pass --complement to emit the complement-graph reduction, which maps "
        "(p, q) to (1-p, 1-q)");
  }

  SplitMix64 rng(base);
  PlantedGraph g = generate(spec.layout, spec.params, rng);
  if (spec.rate < 1.0) g = observe_partial(g, spec.rate, rng);
  g.seed = base;

  std::ostringstream os;
  write_edge_list(g, os);
  emit(out, os.str());
}

void run_solve(const std::string& in_path, const std::string& method_name_arg,
               const std::string& config_path, const std::string& out,
               const std::string& dump_l, const std::string& dump_s) {
  Method method = method_from_name(method_name_arg);
  std::ifstream in(in_path);
  if (!in) throw io_error(in_path + ": cannot open for reading");
  LoadedGraph loaded = read_edge_list(in, in_path);
  const int n = loaded.a.order();

  hn::Config cfg = config_path.empty() ? hn::Config::parse_string("", "<no config>")
                                       : hn::Config::parse_file(config_path);
  SolverConfig sc;
  sc.lambda = cfg.has("lambda") || cfg.has("lambda_mode")
                  ? lambda_from(cfg, method, n)
                  : default_lambda(n, LambdaMode::simulation);
  sc.max_iter = static_cast<int>(cfg.get_int("max_iter", sc.max_iter));

  double region = 0.0;
  if (method == Method::intelligent) {
    if (!cfg.has("region_size_mode"))
      throw hn::config_error(
          "the intelligent method needs side information: the total size of the union of "
          "cluster regions, sum of k_l^2. Provide a config with region_size_mode = truth "
          "(use the cluster layout stored in the graph file) or region_size_mode = explicit "
          "plus region_size = <count>");
    std::string rmode = cfg.require_string("region_size_mode");
    if (rmode == "truth") {
      region = static_cast<double>(loaded.layout.region_size());
    } else if (rmode == "explicit") {
      if (!cfg.has("region_size"))
        throw hn::config_error(cfg.name() +
                               ": region_size_mode = explicit requires region_size = <count>");
      region = static_cast<double>(cfg.require_int("region_size"));
    } else {
      throw hn::config_error(cfg.name() + ": region_size_mode must be truth or explicit");
    }
  } else {
    // consume if present so mixed configs work for both methods
    if (cfg.has("region_size_mode")) cfg.require_string("region_size_mode");
    if (cfg.has("region_size")) cfg.require_int("region_size");
  }
  cfg.finish();

  Decomposition dec = method == Method::blind ? solve_blind(loaded.a, sc)
                                              : solve_intelligent(loaded.a, region, sc);
  RecoveryOutcome outcome = score_recovery(dec.l, loaded.layout);

  std::ostringstream os;
  os << "method = " << method_name(method) << '\n';
  os << "n = " << n << '\n';
  os << "lambda = " << fmt(sc.lambda) << '\n';
  os << "iterations = " << dec.iterations << '\n';
  os << "converged = " << (dec.converged ? "true" : "false") << '\n';
  os << "objective = " << fmt(dec.objective) << '\n';
  os << "primal_residual = " << fmt(dec.primal_residual) << '\n';
  os << "dual_residual = " << fmt(dec.dual_residual) << '\n';
  os << "exact = " << (outcome.exact ? "true" : "false") << '\n';
  os << "mismatch = " << outcome.mismatch << '\n';
  os << "ambiguous = " << outcome.ambiguous << '\n';
  os << "extraction_ok = " << (outcome.extraction_ok ? "true" : "false") << '\n';
  if (outcome.extraction_ok) {
    os << "clusters_recovered = " << outcome.recovered.t() << '\n';
    os << "cluster_sizes =";
    for (int s : outcome.recovered.sizes()) os << ' ' << s;
    os << '\n';
  } else {
    os << "extraction_error = " << outcome.extraction_error << '\n';
  }
  emit(out, os.str());

  if (!dump_l.empty()) hn::write_file(dump_l, dense_text(dec.l));
  if (!dump_s.empty()) hn::write_file(dump_s, dense_text(dec.s));
}

void run_certify(const std::string& config_path, std::uint64_t seed, bool seed_given,
                 const std::string& out_cli) {
  hn::Config cfg = hn::Config::parse_file(config_path);
  ModelSpec spec = model_spec_from(cfg);
  Method method = method_from_name(cfg.get_string("method", "intelligent"));
  double lambda = lambda_from(cfg, method, spec.layout.n);
  int samples = static_cast<int>(cfg.get_int("samples", 1000));
  std::uint64_t base = cfg.get_u64("base_seed", 0);
  std::string out = out_cli.empty() ? cfg.get_string("out", "") : out_cli;
  cfg.finish();
  if (seed_given) base = seed;
  if (samples < 0) throw hn::config_error(cfg.name() + ": samples must be >= 0");

  SplitMix64 rng(base);
  PlantedGraph g = generate(spec.layout, spec.params, rng);
  if (spec.rate < 1.0) g = observe_partial(g, spec.rate, rng);
  g.seed = base;
  certificate::CertificateReport rep =
      certificate::certify(g, lambda, method, samples, mix_seed(base, 1));
  emit(out, certificate::to_key_value(rep));
}

void run_converse(const std::string& config_path, std::uint64_t seed, bool seed_given,
                  const std::string& out_cli) {
  hn::Config cfg = hn::Config::parse_file(config_path);
  ModelSpec spec = model_spec_from(cfg);
  double lambda;
  if (cfg.has("lambda")) {
    lambda = cfg.require_double("lambda");
    if (!(lambda > 0.0)) throw hn::config_error(cfg.name() + ": lambda must be positive");
  } else {
    lambda = default_lambda(spec.layout.n, LambdaMode::simulation);
  }
  std::uint64_t base = cfg.get_u64("base_seed", 0);
  std::string out = out_cli.empty() ? cfg.get_string("out", "") : out_cli;
  cfg.finish();
  if (seed_given) base = seed;

  SplitMix64 rng(base);
  PlantedGraph g = generate(spec.layout, spec.params, rng);
  if (spec.rate < 1.0) g = observe_partial(g, spec.rate, rng);
  g.seed = base;
  certificate::TheoremCheck tc = certificate::check_theorem(g.layout, g.params);
  certificate::ConverseResult cr = certificate::converse_gap(g, lambda);

  std::ostringstream os;
  os << "n = " << g.n() << '\n';
  os << "t = " << g.layout.t() << '\n';
  os << "lambda = " << fmt(lambda) << '\n';
  os << "gap = " << fmt(cr.gap) << '\n';
  os << "used_all_ones = " << (cr.used_all_ones ? "true" : "false") << '\n';
  os << "converse_flag = " << (tc.converse_flag ? "true" : "false") << '\n';
  os << "intelligent_ok = " << (tc.intelligent_ok ? "true" : "false") << '\n';
  os << "blind_ok = " << (tc.blind_ok ? "true" : "false") << '\n';
  os << "e_intelligent = " << fmt(tc.e_intelligent) << '\n';
  os << "e_blind = " << fmt(tc.e_blind) << '\n';
  emit(out, os.str());
}

void run_sweep_cmd(const std::string& config_path, std::uint64_t seed, bool seed_given,
                   const std::string& out_cli, int workers_cli) {
  hn::Config cfg = hn::Config::parse_file(config_path);
  hn::SweepConfig sc = hn::sweep_config_from(cfg);
  if (seed_given) sc.base_seed = seed;
  if (workers_cli > 0) sc.workers = workers_cli;
  hn::SweepResult result = hn::run_sweep(sc);
  std::string out = out_cli.empty() ? sc.out : out_cli;
  emit(out, hn::sweep_csv(result));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planted dense-cluster recovery via low-rank + sparse decomposition"};
  app.require_subcommand(1);

  struct {
    std::string config, out;
    std::uint64_t seed = 0;
    bool complement = false;
  } gen;
  CLI::App* generate_cmd = app.add_subcommand("generate", "sample a planted graph (edge list)");
  generate_cmd->add_option("--config", gen.config, "model config (n, k, q, p, [r])")
      ->required();
  CLI::Option* gen_seed = generate_cmd->add_option("--seed", gen.seed, "seed (wins over base_seed)");
  generate_cmd->add_option("--out", gen.out, "output path (default stdout)");
  generate_cmd->add_flag("--complement", gen.complement,
                         "emit the complement-graph reduction of a sparse-cluster model");
  generate_cmd->callback(
      [&] { run_generate(gen.config, gen.seed, gen_seed->count() > 0, gen.complement, gen.out); });

  struct {
    std::string in, method, config, out, dump_l, dump_s;
    std::uint64_t seed = 0;
  } sol;
  CLI::App* solve_cmd = app.add_subcommand("solve", "decompose a graph and score recovery");
  solve_cmd->add_option("--in", sol.in, "edge-list graph file")->required();
  solve_cmd->add_option("--method", sol.method, "blind | intelligent")->required();
  solve_cmd->add_option("--config", sol.config,
                        "solver config (lambda, lambda_mode, max_iter, region_size_mode, "
                        "region_size)");
  solve_cmd->add_option("--seed", sol.seed, "accepted for interface symmetry; solves are "
                        "deterministic");
  solve_cmd->add_option("--out", sol.out, "report path (default stdout)");
  solve_cmd->add_option("--dump-l", sol.dump_l, "write the low-rank matrix here");
  solve_cmd->add_option("--dump-s", sol.dump_s, "write the sparse matrix here");
  solve_cmd->callback(
      [&] { run_solve(sol.in, sol.method, sol.config, sol.out, sol.dump_l, sol.dump_s); });

  struct {
    std::string config, out;
    std::uint64_t seed = 0;
  } cert;
  CLI::App* certify_cmd = app.add_subcommand("certify", "build and check the dual certificate");
  certify_cmd->add_option("--config", cert.config,
                          "model config (n, k, q, p, method, lambda | lambda_mode, samples)")
      ->required();
  CLI::Option* cert_seed = certify_cmd->add_option("--seed", cert.seed, "seed");
  certify_cmd->add_option("--out", cert.out, "report path (default stdout)");
  certify_cmd->callback(
      [&] { run_certify(cert.config, cert.seed, cert_seed->count() > 0, cert.out); });

  struct {
    std::string config, out;
    std::uint64_t seed = 0;
  } conv;
  CLI::App* converse_cmd =
      app.add_subcommand("converse", "objective gap of the planted solution vs a cheaper point");
  converse_cmd->add_option("--config", conv.config, "model config (n, k, q, p, lambda)")
      ->required();
  CLI::Option* conv_seed = converse_cmd->add_option("--seed", conv.seed, "seed");
  converse_cmd->add_option("--out", conv.out, "report path (default stdout)");
  converse_cmd->callback(
      [&] { run_converse(conv.config, conv.seed, conv_seed->count() > 0, conv.out); });

  struct {
    std::string config, out;
    std::uint64_t seed = 0;
    int workers = 0;
  } sw;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "phase-transition experiment, CSV output");
  sweep_cmd->add_option("--config", sw.config, "sweep config")->required();
  CLI::Option* sw_seed = sweep_cmd->add_option("--seed", sw.seed, "wins over base_seed");
  sweep_cmd->add_option("--out", sw.out, "CSV path (default: config `out`, then stdout)");
  sweep_cmd->add_option("--workers", sw.workers, "worker threads (wins over LRSC_WORKERS)");
  sweep_cmd->callback(
      [&] { run_sweep_cmd(sw.config, sw.seed, sw_seed->count() > 0, sw.out, sw.workers); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
