#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dhls/grid.hpp"
#include "dhls/optimizer.hpp"

namespace dhls {

/// Analytic bounds on lambda_N: the uniform trial vector from below, the
/// central row sum from above, plus the sphere-area constant driving the
/// |S^(n-1)| ln N asymptotics.
struct BoundsReport {
  GridSpec grid;
  double lower_uniform = 0.0;
  double upper_center = 0.0;
  double sphere_area = 0.0;
  double log_N = 0.0;
  // |S^(n-1)| (ln N + ln(2)/2): the integral majorization of the central row
  // sum. Reported for comparison, never asserted as a bound.
  double upper_integral_estimate = 0.0;
  std::optional<double> lambda;
};

/// Surface area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2).
/// Throws std::domain_error for n < 1.
double sphere_area(int n);

/// L^(-1) sum_{r != s} |r-s|^(-n): the value of J at the uniform unit
/// vector, computed through the offset-count identity.
double lower_bound_uniform(const GridSpec& g);

/// Maximum row sum, attained at the most central lattice point(s).
double upper_bound_center(const GridSpec& g);

BoundsReport bounds_report(const GridSpec& g,
                           std::optional<double> lambda = std::nullopt);

struct SweepRow {
  int n = 0;
  int N = 0;
  double lambda = 0.0;
  double lower_uniform = 0.0;
  double upper_center = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  double ln_N = 0.0;
  std::optional<double> slope_prev;  // vs previous row; empty on first row
  std::string error;                 // empty when the row succeeded
};

struct SweepTable {
  int dimension = 0;
  std::vector<SweepRow> rows;
};

/// Solves the optimizer and evaluates both bounds for each N. N_values must
/// be strictly increasing. With keep_going, per-row failures are recorded in
/// the row's error field instead of thrown.
SweepTable sweep(int n, const std::vector<int>& N_values,
                 const SolveOptions& opt = {}, bool keep_going = false);

/// Doubling-difference slope (lambda_{N2} - lambda_{N1}) / (ln N2 - ln N1).
/// Throws std::out_of_range when either N is missing from the table.
double slope_estimate(const SweepTable& table, int N1, int N2);

}  // namespace dhls
