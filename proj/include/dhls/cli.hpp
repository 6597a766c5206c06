#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dhls/bounds.hpp"
#include "dhls/grid.hpp"
#include "dhls/maxprinciple.hpp"
#include "dhls/optimizer.hpp"
#include "dhls/verify.hpp"

namespace dhls {

/// Effective configuration of one CLI invocation. Flags override config-file
/// values, which override the defaults below.
struct RunConfig {
  int n = 1;
  std::vector<int> N_values = {8};
  Convention convention = Convention::Unit;
  double tol = 1e-10;
  int max_iter = 100000;
  double shift = 1.0;
  std::int64_t dense_limit = kDefaultDenseLimit;
  unsigned seed = 1;
  bool deterministic = true;  // fixed reduction order; timings emitted as 0
  std::string format = "json";
  std::string output;      // report file; empty writes to stdout only
  std::string vector_out;  // compute: optimizer vector dump
  std::string plot_out;    // sweep: (ln N, lambda, lower, upper) columns
  bool with_lambda = false;  // bounds: also solve for lambda
};

/// One aggregated message describing every invalid field, empty when valid.
std::string validate_config(const RunConfig& cfg, const std::string& command);

/// Overlay of a flat key-value JSON config file; throws std::runtime_error
/// with a parse/typing message on malformed input.
void apply_config_file(RunConfig& cfg, const std::string& path);

int run_compute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_decay(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Serialization surface (exposed for tests).

/// Shortest exact decimal: %.17g round-trips every finite double.
std::string format_double(double x);

std::string config_json(const RunConfig& cfg);
std::string sweep_csv(const SweepTable& table, const RunConfig& cfg);
SweepTable parse_sweep_csv(const std::string& text);
std::string verify_report_json(const CertificationReport& rep,
                               const RunConfig& cfg);
std::string decay_report_json(const DecayReport& rep, const RunConfig& cfg);
std::string compute_report_json(const OptimizerResult& res,
                                const RunConfig& cfg);
std::string bounds_report_json(const BoundsReport& rep, const RunConfig& cfg);

/// Resolves bare filenames against DHLS_OUTPUT_DIR when set.
std::string resolve_output_path(const std::string& path);

/// Temp-file-plus-rename write; creates parent directories as needed.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace dhls
