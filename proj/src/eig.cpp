#include "dhls/eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dhls/errors.hpp"
#include "dhls/kahan.hpp"

namespace dhls {

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(kahan_dot(v, v));
}

// Scale so the entry sum is positive; on an exactly balanced sum, make the
// largest-magnitude entry positive instead.
void sign_normalize(std::vector<double>& v) {
  KahanSum s;
  for (double x : v) s.add(x);
  double sign = s.value();
  if (sign == 0.0) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    sign = v[imax];
  }
  if (sign < 0.0)
    for (double& x : v) x = -x;
}

}  // namespace

EigenResult power_iteration(const ApplyFn& apply, std::int64_t size,
                            const PowerOptions& opt,
                            std::span<const double> start) {
  if (size <= 0) throw std::invalid_argument("power_iteration: empty operator");
  if (opt.shift < 0.0)
    throw std::invalid_argument("power_iteration: shift must be >= 0");
  if (!(opt.tol > 0.0))
    throw std::invalid_argument("power_iteration: tol must be > 0");

  const std::size_t L = static_cast<std::size_t>(size);
  std::vector<double> v;
  if (start.empty()) {
    v.assign(L, 1.0 / std::sqrt(static_cast<double>(L)));
  } else {
    if (start.size() != L)
      throw std::invalid_argument("power_iteration: start length mismatch");
    v.assign(start.begin(), start.end());
    const double nv = norm2(v);
    if (nv == 0.0)
      throw std::invalid_argument("power_iteration: start vector is zero");
    for (double& x : v) x /= nv;
  }

  std::vector<double> Av(L);
  EigenResult res;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    apply(v, Av);
    const double lambda = kahan_dot(v, Av);
    KahanSum rs;
    for (std::size_t i = 0; i < L; ++i) {
      const double ri = Av[i] - lambda * v[i];
      rs.add(ri * ri);
    }
    const double residual = std::sqrt(rs.value());

    res.eigenvalue = lambda;
    res.residual = residual;
    res.iterations = iter;
    if (residual <= opt.tol * std::max(std::abs(lambda), 1.0)) {
      res.converged = true;
      break;
    }
    if (iter == opt.max_iter) break;  // keep the iterate the residual measured

    for (std::size_t i = 0; i < L; ++i) Av[i] += opt.shift * v[i];
    const double nw = norm2(Av);
    if (nw == 0.0) break;  // operator annihilated the iterate; lambda = 0
    for (std::size_t i = 0; i < L; ++i) v[i] = Av[i] / nw;
  }

  res.vector = std::move(v);
  sign_normalize(res.vector);
  return res;
}

EigenResult second_eigenpair(const KernelOperator& op,
                             const EigenResult& perron, double tol,
                             int max_iter) {
  if (!perron.converged)
    throw std::invalid_argument(
        "second_eigenpair: Perron pair has not converged");
  const std::int64_t L = op.size();
  const std::vector<double>& xi = perron.vector;
  const double lambda = perron.eigenvalue;

  ApplyFn deflated = [&op, &xi, lambda](std::span<const double> in,
                                        std::span<double> out) {
    op.apply(in, out);
    const double proj = kahan_dot(xi, in);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= lambda * proj * xi[i];
  };

  // Start orthogonal to xi; the uniform vector can coincide with xi exactly
  // (constant Perron vector) and would be deflated to zero.
  std::vector<double> start(static_cast<std::size_t>(L), 0.0);
  start[0] = 1.0;
  const double c = xi[0];
  for (std::size_t i = 0; i < start.size(); ++i) start[i] -= c * xi[i];

  PowerOptions opt;
  opt.shift = 0.0;  // magnitude-dominant eigenvalue of the deflated operator
  opt.tol = tol;
  opt.max_iter = max_iter;
  return power_iteration(deflated, L, opt, start);
}

double second_eigenvalue(const KernelOperator& op, const EigenResult& perron,
                         double tol, int max_iter) {
  return second_eigenpair(op, perron, tol, max_iter).eigenvalue;
}

std::vector<double> abs_map(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
  return out;
}

double operator_norm(const ApplyFn& apply, const ApplyFn& apply_transpose,
                     std::int64_t size, double tol, int max_iter) {
  const std::size_t L = static_cast<std::size_t>(size);
  std::vector<double> tmp(L);
  ApplyFn gram = [&apply, &apply_transpose, &tmp](std::span<const double> in,
                                                  std::span<double> out) {
    apply(in, tmp);
    apply_transpose(tmp, out);
  };
  PowerOptions opt;
  opt.shift = 0.0;  // A^T A is PSD; no shift needed for dominance
  opt.tol = tol;
  opt.max_iter = max_iter;
  const EigenResult res = power_iteration(gram, size, opt);
  if (!res.converged)
    throw NonConvergence("operator_norm: power iteration on A^T A did not converge",
                         res.eigenvalue, res.residual, res.iterations,
                         res.vector);
  return std::sqrt(std::max(res.eigenvalue, 0.0));
}

SpectralReport spectral_report(const KernelOperator& op,
                               const EigenResult& perron, double tol,
                               int max_iter) {
  SpectralReport rep;
  rep.mu_L = perron.eigenvalue * perron.eigenvalue;
  if (op.size() < 2) {
    rep.mu_L_minus_1 = 0.0;
    rep.gap_ratio = 0.0;
    return rep;
  }
  const double lambda2 = second_eigenvalue(op, perron, tol, max_iter);
  rep.mu_L_minus_1 = lambda2 * lambda2;
  rep.gap_ratio = rep.mu_L > 0.0 ? rep.mu_L_minus_1 / rep.mu_L : 0.0;
  return rep;
}

}  // namespace dhls
