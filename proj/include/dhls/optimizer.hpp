#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dhls/eig.hpp"
#include "dhls/grid.hpp"
#include "dhls/kernel.hpp"

namespace dhls {

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  double shift = 1.0;
  std::int64_t dense_limit = kDefaultDenseLimit;
  bool compute_gap = true;
};

/// The optimizer triplet: the sharp constant lambda_N together with the
/// unique unit-norm positive vector attaining it.
struct OptimizerResult {
  GridSpec grid;
  double lambda = 0.0;
  std::vector<double> vector;   // unit 2-norm, strictly positive
  double el_residual = 0.0;     // ||A a - lambda a||_2
  double gap_ratio = 0.0;       // mu_{L-1} / mu_L, 0 when not computed
  int iterations = 0;
};

/// Computes the Perron eigenpair of the kernel operator. Throws
/// NonConvergence (with the partial vector attached) when the iteration
/// budget runs out.
OptimizerResult solve_optimizer(const GridSpec& g, const SolveOptions& = {});
OptimizerResult solve_optimizer(const KernelOperator& op,
                                const SolveOptions& = {},
                                std::span<const double> start = {});

/// Both Euler-Lagrange residuals, re-evaluated on the result with a = b.
std::pair<double, double> el_check(const KernelOperator& op,
                                   const OptimizerResult& res);

/// Worst ratio J(a,b) / (||a|| ||b||) over seeded random unit pairs; the
/// inequality contract requires every ratio <= lambda + 1e-9.
double inequality_check(const KernelOperator& op, const OptimizerResult& res,
                        int trials, unsigned seed);

}  // namespace dhls
