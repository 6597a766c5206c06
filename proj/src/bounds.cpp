#include "dhls/bounds.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dhls/errors.hpp"
#include "dhls/kernel.hpp"

namespace dhls {

double sphere_area(int n) {
  if (n < 1) throw std::domain_error("sphere_area: dimension must be >= 1");
  switch (n) {  // closed forms; the Gamma formula below loses a few ulps
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    case 4: return 2.0 * std::numbers::pi * std::numbers::pi;
    default:
      return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  }
}

double lower_bound_uniform(const GridSpec& g) {
  return offset_pair_sum(g) / static_cast<double>(g.num_points());
}

double upper_bound_center(const GridSpec& g) {
  // The row sum is maximal at the most central point(s); for even-sided
  // Unit grids the 2^n central candidates are equivalent under reflection.
  LatticePoint center;
  for (int i = 0; i < g.dimension; ++i)
    center[i] = g.convention == Convention::Unit ? (g.side + 1) / 2 : 0;
  return row_sum(g, center);
}

BoundsReport bounds_report(const GridSpec& g, std::optional<double> lambda) {
  BoundsReport rep{g};
  rep.lower_uniform = lower_bound_uniform(g);
  rep.upper_center = upper_bound_center(g);
  rep.sphere_area = sphere_area(g.dimension);
  rep.log_N = std::log(static_cast<double>(g.side));
  rep.upper_integral_estimate =
      rep.sphere_area * (rep.log_N + 0.5 * std::numbers::ln2);
  rep.lambda = lambda;
  return rep;
}

SweepTable sweep(int n, const std::vector<int>& N_values,
                 const SolveOptions& opt, bool keep_going) {
  if (N_values.empty()) throw std::invalid_argument("sweep: empty N list");
  for (std::size_t i = 1; i < N_values.size(); ++i)
    if (N_values[i] <= N_values[i - 1])
      throw std::invalid_argument("sweep: N values must be strictly increasing");

  SweepTable table;
  table.dimension = n;
  for (int N : N_values) {
    SweepRow row;
    row.n = n;
    row.N = N;
    row.ln_N = std::log(static_cast<double>(N));
    const GridSpec g(n, N);
    row.lower_uniform = lower_bound_uniform(g);
    row.upper_center = upper_bound_center(g);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const OptimizerResult res = solve_optimizer(g, opt);
      row.lambda = res.lambda;
      row.iterations = res.iterations;
      const double slack = 1e-9 * std::max(1.0, res.lambda);
      if (res.lambda < row.lower_uniform - slack ||
          res.lambda > row.upper_center + slack)
        throw std::runtime_error("sweep: bound sandwich violated at N=" +
                                 std::to_string(N));
    } catch (const std::exception& e) {
      if (!keep_going) throw;
      row.error = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (row.error.empty()) {
      for (auto it = table.rows.rbegin(); it != table.rows.rend(); ++it) {
        if (it->error.empty()) {
          row.slope_prev = (row.lambda - it->lambda) / (row.ln_N - it->ln_N);
          break;
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double slope_estimate(const SweepTable& table, int N1, int N2) {
  if (N1 >= N2)
    throw std::invalid_argument("slope_estimate: require N1 < N2");
  const SweepRow* r1 = nullptr;
  const SweepRow* r2 = nullptr;
  for (const SweepRow& r : table.rows) {
    if (r.N == N1) r1 = &r;
    if (r.N == N2) r2 = &r;
  }
  if (!r1 || !r2)
    throw std::out_of_range("slope_estimate: N not present in sweep table");
  return (r2->lambda - r1->lambda) / (r2->ln_N - r1->ln_N);
}

}  // namespace dhls
