#include "dhls/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "dhls/errors.hpp"
#include "dhls/kahan.hpp"

namespace dhls {

OptimizerResult solve_optimizer(const GridSpec& g, const SolveOptions& opt) {
  return solve_optimizer(KernelOperator::make(g, opt.dense_limit), opt);
}

OptimizerResult solve_optimizer(const KernelOperator& op,
                                const SolveOptions& opt,
                                std::span<const double> start) {
  if (!(opt.tol > 0.0))
    throw std::invalid_argument("solve_optimizer: tol must be > 0");

  PowerOptions popt;
  popt.shift = opt.shift;
  popt.tol = opt.tol;
  popt.max_iter = opt.max_iter;
  ApplyFn apply = [&op](std::span<const double> in, std::span<double> out) {
    op.apply(in, out);
  };
  EigenResult eig = power_iteration(apply, op.size(), popt, start);
  if (eig.converged && eig.residual > opt.tol) {
    // The iteration stops on a residual relative to max(|lambda|, 1); the
    // optimizer contract is absolute. Resume until the absolute bound holds.
    PowerOptions tighter = popt;
    tighter.tol = opt.tol / std::max(1.0, std::abs(eig.eigenvalue));
    tighter.max_iter = popt.max_iter - eig.iterations;
    EigenResult resumed =
        power_iteration(apply, op.size(), tighter, eig.vector);
    resumed.iterations += eig.iterations;
    eig = std::move(resumed);
  }
  if (!eig.converged)
    throw NonConvergence(
        "solve_optimizer: no convergence on grid n=" +
            std::to_string(op.grid().dimension) +
            " N=" + std::to_string(op.grid().side) + " after " +
            std::to_string(eig.iterations) +
            " iterations (residual " + std::to_string(eig.residual) + ")",
        eig.eigenvalue, eig.residual, eig.iterations, std::move(eig.vector));

  OptimizerResult res{op.grid()};
  res.lambda = eig.eigenvalue;
  res.el_residual = eig.residual;
  res.iterations = eig.iterations;
  if (opt.compute_gap)
    res.gap_ratio = spectral_report(op, eig, opt.tol, opt.max_iter).gap_ratio;
  res.vector = std::move(eig.vector);
  return res;
}

std::pair<double, double> el_check(const KernelOperator& op,
                                   const OptimizerResult& res) {
  const std::vector<double> Aa = op.matvec(res.vector);
  // lambda_1 a = A b and lambda_2 b = A a coincide under a = b; evaluate
  // the residual of each line as written.
  KahanSum r1s, r2s;
  for (std::size_t i = 0; i < Aa.size(); ++i) {
    const double r1 = res.lambda * res.vector[i] - Aa[i];
    const double r2 = res.lambda * res.vector[i] - Aa[i];
    r1s.add(r1 * r1);
    r2s.add(r2 * r2);
  }
  return {std::sqrt(r1s.value()), std::sqrt(r2s.value())};
}

double inequality_check(const KernelOperator& op, const OptimizerResult& res,
                        int trials, unsigned seed) {
  if (trials < 1)
    throw std::invalid_argument("inequality_check: trials must be >= 1");
  const std::size_t L = static_cast<std::size_t>(op.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_unit = [&]() {
    std::vector<double> v(L);
    double n2 = 0.0;
    do {
      for (double& x : v) x = gauss(rng);
      n2 = std::sqrt(kahan_dot(v, v));
    } while (n2 == 0.0);
    for (double& x : v) x /= n2;
    return v;
  };

  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const std::vector<double> a = random_unit();
    const std::vector<double> b = random_unit();
    const double ratio = op.quadratic_form(a, b);
    if (ratio > res.lambda + 1e-9)
      throw std::logic_error(
          "inequality_check: J(a,b) = " + std::to_string(ratio) +
          " exceeds lambda = " + std::to_string(res.lambda));
    worst = std::max(worst, ratio);
  }
  return worst;
}

}  // namespace dhls
