#pragma once

#include <cstdint>
#include <vector>

#include "dhls/grid.hpp"
#include "dhls/optimizer.hpp"

namespace dhls {

/// u = A u + f with a nonnegative contraction A and nonnegative forcing f;
/// ||A||_2 < 1 is required before solving.
struct FixedPointSystem {
  std::int64_t size = 0;
  std::vector<double> matrix;   // row-major size x size, entries >= 0
  std::vector<double> forcing;  // length size, entries >= 0
  double norm_estimate = 0.0;   // ||A||_2
};

/// Contraction iteration u <- A u + f from u0 = f, stopping when
/// ||u_{k+1} - u_k||_2 <= tol * (1 - norm_estimate). The solution is
/// entrywise nonnegative (discrete maximum principle).
std::vector<double> solve_fixed_point(const FixedPointSystem& sys,
                                      double tol = 1e-12,
                                      int max_iter = 100000);

/// The first-difference system d = A d + F along one axis of a centered
/// grid, assembled from an optimizer. Row indices run over r1 in [1, N],
/// r' in [-N, N]^(n-1), with the chosen axis relabeled to the front.
struct DecaySystem {
  int axis = 1;  // 1-based
  GridSpec grid;
  std::int64_t size = 0;        // N * (2N+1)^(n-1)
  std::vector<double> matrix;   // A, row-major, zero diagonal, entries >= 0
  std::vector<double> forcing;  // F, entries >= 0
  std::vector<double> d;        // first differences of the optimizer
  double lambda = 0.0;
  double delta_N = 0.0;         // (2N-1)^(-n), smallest row prefactor addend
  double norm_estimate = 0.0;   // ||A||_2
};

/// Throws ContractViolation unless opt.grid is Centered and axis in [1, n].
DecaySystem build_decay_system(const OptimizerResult& opt, int axis);

struct AxisDecayReport {
  int axis = 1;
  double min_d = 0.0;     // min first difference, both halves of the axis
  double min_F = 0.0;
  double opnorm_A = 0.0;
  double residual = 0.0;  // ||d - (A d + F)||_inf
  bool pass = false;
};

struct DecayReport {
  GridSpec grid;
  std::vector<AxisDecayReport> axes;
  bool pass = false;
};

/// Checks the monotone decay inequalities directly on the optimizer for
/// every axis, and certifies each axis's difference system: an axis passes
/// when min_d >= -tol and ||A||_2 < 1.
DecayReport verify_decay(const OptimizerResult& opt, double tol = 1e-10);

}  // namespace dhls
