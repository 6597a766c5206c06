#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dhls/kernel.hpp"

namespace dhls {

using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

struct EigenResult {
  double eigenvalue = 0.0;
  std::vector<double> vector;
  double residual = 0.0;  // ||A v - eigenvalue v||_2
  int iterations = 0;
  bool converged = false;
};

/// Top of the spectrum of C = A^T A: mu_L and the runner-up, whose strict
/// separation witnesses uniqueness of the positive optimizer.
struct SpectralReport {
  double mu_L = 0.0;
  double mu_L_minus_1 = 0.0;
  double gap_ratio = 0.0;  // mu_L_minus_1 / mu_L
};

struct PowerOptions {
  double shift = 1.0;
  double tol = 1e-10;
  int max_iter = 100000;
};

/// Shifted power iteration v <- normalize((A + shift I) v). Reports the
/// Rayleigh quotient of A itself (shift removed) and converges when
/// ||A v - lambda v||_2 <= tol * max(|lambda|, 1). A non-converged run is
/// returned with converged = false, never silently.
/// Default start is the uniform positive vector L^(-1/2) (1, ..., 1).
EigenResult power_iteration(const ApplyFn& apply, std::int64_t size,
                            const PowerOptions& opt,
                            std::span<const double> start = {});

/// Second-largest (in magnitude) eigenvalue of A by power iteration on the
/// deflated operator v -> A v - lambda (xi^T v) xi.
EigenResult second_eigenpair(const KernelOperator& op,
                             const EigenResult& perron, double tol,
                             int max_iter = 100000);
double second_eigenvalue(const KernelOperator& op, const EigenResult& perron,
                         double tol, int max_iter = 100000);

/// Entrywise absolute value; preserves the 2-norm.
std::vector<double> abs_map(std::span<const double> v);

/// ||A||_2 via power iteration on v -> A^T (A v). Throws NonConvergence if
/// the iteration budget runs out.
double operator_norm(const ApplyFn& apply, const ApplyFn& apply_transpose,
                     std::int64_t size, double tol = 1e-10,
                     int max_iter = 100000);

/// Spectral data for a kernel operator: mu_L = lambda^2 and mu_{L-1} from
/// the deflated second eigenvalue.
SpectralReport spectral_report(const KernelOperator& op,
                               const EigenResult& perron, double tol,
                               int max_iter = 100000);

}  // namespace dhls
