// Test-side oracles, independent of the library's computational paths:
// Eigen dense factorizations, brute-force pair sums, and a bisection root
// finder. Everything here is deterministic for fixed seeds.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "dhls/grid.hpp"

namespace oracle {

/// Dense kernel matrix assembled with independent arithmetic (std::pow on
/// the squared distance rather than the library's kernel evaluation).
inline Eigen::MatrixXd dense_kernel(const dhls::GridSpec& g) {
  const auto L = g.num_points();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(L, L);
  for (std::int64_t i = 0; i < L; ++i) {
    for (std::int64_t j = 0; j < L; ++j) {
      if (i == j) continue;
      const auto d2 = dhls::squared_distance(dhls::point_of(i, g),
                                             dhls::point_of(j, g),
                                             g.dimension);
      A(i, j) = std::pow(static_cast<double>(d2), -0.5 * g.dimension);
    }
  }
  return A;
}

struct TopPair {
  double lambda;
  Eigen::VectorXd vector;     // sign-normalized: positive entry sum
  double lambda_second_abs;   // second-largest |eigenvalue|
  double lambda_second_signed;
};

inline TopPair top_eigenpair(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const auto& vals = es.eigenvalues();  // ascending
  const auto L = vals.size();
  TopPair out;
  out.lambda = vals(L - 1);
  out.vector = es.eigenvectors().col(L - 1);
  if (out.vector.sum() < 0) out.vector = -out.vector;
  // second-largest in magnitude among the remaining eigenvalues
  double best = 0.0;
  for (Eigen::Index i = 0; i < L - 1; ++i)
    if (std::abs(vals(i)) > std::abs(best)) best = vals(i);
  out.lambda_second_signed = best;
  out.lambda_second_abs = std::abs(best);
  return out;
}

/// Direct double-loop evaluation of J(a, b) = sum_{r != s} a_r b_s / |r-s|^n.
inline double brute_bilinear(const dhls::GridSpec& g,
                             const std::vector<double>& a,
                             const std::vector<double>& b) {
  const auto L = g.num_points();
  long double acc = 0.0L;
  for (std::int64_t i = 0; i < L; ++i) {
    const dhls::LatticePoint p = dhls::point_of(i, g);
    for (std::int64_t j = 0; j < L; ++j) {
      if (i == j) continue;
      const auto d2 =
          dhls::squared_distance(p, dhls::point_of(j, g), g.dimension);
      acc += static_cast<long double>(a[static_cast<std::size_t>(i)]) *
             static_cast<long double>(b[static_cast<std::size_t>(j)]) *
             std::pow(static_cast<long double>(d2), -0.5L * g.dimension);
    }
  }
  return static_cast<double>(acc);
}

/// sum_{r != s} 1/|r-s|^n by brute force over all index pairs.
inline double brute_pair_sum(const dhls::GridSpec& g) {
  const std::vector<double> ones(static_cast<std::size_t>(g.num_points()), 1.0);
  return brute_bilinear(g, ones, ones);
}

/// Largest root of x^3 - 2.25 x - 1 by bisection (the n=1, N=3 constant).
inline double cubic_root_bisect() {
  auto f = [](double x) { return x * x * x - 2.25 * x - 1.0; };
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline Eigen::VectorXd solve_fixed_point_dense(const Eigen::MatrixXd& A,
                                               const Eigen::VectorXd& f) {
  const auto L = A.rows();
  return (Eigen::MatrixXd::Identity(L, L) - A).partialPivLu().solve(f);
}

inline double spectral_norm(const Eigen::MatrixXd& A) {
  return A.jacobiSvd().singularValues()(0);
}

inline std::vector<double> random_unit_vector(std::mt19937_64& rng,
                                              std::size_t L) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(L);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      n2 += x * x;
    }
  } while (n2 == 0.0);
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return v;
}

inline std::vector<double> random_positive_vector(std::mt19937_64& rng,
                                                  std::size_t L) {
  std::uniform_real_distribution<double> uni(0.5, 1.5);
  std::vector<double> v(L);
  for (double& x : v) x = uni(rng);
  return v;
}

}  // namespace oracle
