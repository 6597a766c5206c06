#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhls/cli.hpp"

namespace {

struct Flags {
  int n = 1;
  std::vector<int> N;
  std::string convention;
  double tol = 1e-10;
  int max_iter = 100000;
  double shift = 1.0;
  long long dense_limit = dhls::kDefaultDenseLimit;
  unsigned seed = 1;
  bool deterministic = true;
  std::string format = "json";
  std::string output;
  std::string config;
  std::string vector_out;
  std::string plot_out;
  bool with_lambda = false;
};

struct OptRefs {
  CLI::Option* n = nullptr;
  CLI::Option* N = nullptr;
  CLI::Option* convention = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* max_iter = nullptr;
  CLI::Option* shift = nullptr;
  CLI::Option* dense_limit = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* deterministic = nullptr;
  CLI::Option* format = nullptr;
  CLI::Option* output = nullptr;
  CLI::Option* config = nullptr;
};

OptRefs add_common(CLI::App* sub, Flags& f, bool n_list) {
  OptRefs refs;
  refs.n = sub->add_option("-n,--dimension", f.n, "grid dimension (1-4)");
  if (n_list)
    refs.N = sub->add_option("-N,--side", f.N,
                             "grid side lengths, strictly increasing")
                 ->delimiter(',');
  else
    refs.N = sub->add_option("-N,--side", f.N, "grid side length")
                 ->expected(1)
                 ->delimiter(',');
  refs.convention =
      sub->add_option("--convention", f.convention, "unit or centered")
          ->check(CLI::IsMember({"unit", "centered"}));
  refs.tol = sub->add_option("--tol", f.tol, "solver tolerance");
  refs.max_iter = sub->add_option("--max-iter", f.max_iter, "iteration budget");
  refs.shift = sub->add_option("--shift", f.shift, "power iteration shift");
  refs.dense_limit = sub->add_option("--dense-limit", f.dense_limit,
                                     "largest L using the dense kernel path");
  refs.seed = sub->add_option("--seed", f.seed, "random seed");
  refs.deterministic =
      sub->add_flag("--deterministic,!--no-deterministic", f.deterministic,
                    "reproducible output (timings emitted as 0)");
  refs.format = sub->add_option("--format", f.format, "json or csv");
  refs.output = sub->add_option("-o,--output", f.output, "output file path");
  refs.config = sub->add_option("--config", f.config,
                                "flat key-value JSON config file");
  return refs;
}

dhls::RunConfig effective_config(const Flags& f, const OptRefs& refs,
                                 const std::string& command) {
  dhls::RunConfig cfg;
  if (command == "decay") cfg.convention = dhls::Convention::Centered;
  if (refs.config->count() > 0) dhls::apply_config_file(cfg, f.config);

  if (refs.n->count()) cfg.n = f.n;
  if (refs.N->count()) cfg.N_values = f.N;
  if (refs.convention->count()) {
    cfg.convention = f.convention == "centered" ? dhls::Convention::Centered
                                                : dhls::Convention::Unit;
  }
  if (refs.tol->count()) cfg.tol = f.tol;
  if (refs.max_iter->count()) cfg.max_iter = f.max_iter;
  if (refs.shift->count()) cfg.shift = f.shift;
  if (refs.dense_limit->count()) cfg.dense_limit = f.dense_limit;
  if (refs.seed->count()) cfg.seed = f.seed;
  if (refs.deterministic->count()) cfg.deterministic = f.deterministic;
  if (refs.format->count()) cfg.format = f.format;
  if (refs.output->count()) cfg.output = f.output;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dhls: sharp constant and optimizer of the discrete critical "
      "Hardy-Littlewood-Sobolev inequality on n-dimensional grids"};
  app.require_subcommand(1);

  Flags f;
  CLI::App* compute =
      app.add_subcommand("compute", "solve for lambda_N and the optimizer");
  OptRefs compute_refs = add_common(compute, f, false);
  CLI::Option* vec_opt = compute->add_option(
      "--vector-out", f.vector_out, "write the optimizer vector to a file");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "lambda_N, bounds, and slopes over an N list");
  OptRefs sweep_refs = add_common(sweep_cmd, f, true);
  CLI::Option* plot_opt = sweep_cmd->add_option(
      "--plot-out", f.plot_out, "write (ln N, lambda, lower, upper) columns");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run every certification suite");
  OptRefs verify_refs = add_common(verify_cmd, f, false);

  CLI::App* decay_cmd = app.add_subcommand(
      "decay", "monotone decay certificate on a centered grid");
  OptRefs decay_refs = add_common(decay_cmd, f, false);

  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "uniform lower and central-row upper bounds");
  OptRefs bounds_refs = add_common(bounds_cmd, f, false);
  CLI::Option* lam_opt = bounds_cmd->add_flag("--with-lambda", f.with_lambda,
                                              "also solve for lambda_N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (compute->parsed()) {
      dhls::RunConfig cfg = effective_config(f, compute_refs, "compute");
      if (vec_opt->count()) cfg.vector_out = f.vector_out;
      return dhls::run_compute(cfg, std::cout, std::cerr);
    }
    if (sweep_cmd->parsed()) {
      dhls::RunConfig cfg = effective_config(f, sweep_refs, "sweep");
      cfg.format = "csv";
      if (plot_opt->count()) cfg.plot_out = f.plot_out;
      return dhls::run_sweep(cfg, std::cout, std::cerr);
    }
    if (verify_cmd->parsed()) {
      dhls::RunConfig cfg = effective_config(f, verify_refs, "verify");
      return dhls::run_verify(cfg, std::cout, std::cerr);
    }
    if (decay_cmd->parsed()) {
      dhls::RunConfig cfg = effective_config(f, decay_refs, "decay");
      return dhls::run_decay(cfg, std::cout, std::cerr);
    }
    if (bounds_cmd->parsed()) {
      dhls::RunConfig cfg = effective_config(f, bounds_refs, "bounds");
      if (lam_opt->count()) cfg.with_lambda = f.with_lambda;
      return dhls::run_bounds(cfg, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
