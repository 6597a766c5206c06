#include <doctest.h>

#include <cmath>
#include <random>

#include "dhls/errors.hpp"
#include "dhls/maxprinciple.hpp"
#include "oracles.hpp"

using namespace dhls;

namespace {

// Random nonnegative system rescaled to a prescribed spectral norm.
FixedPointSystem random_system(std::mt19937_64& rng, int size,
                               double target_norm) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::MatrixXd M(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) M(i, j) = uni(rng);
  M *= target_norm / oracle::spectral_norm(M);

  FixedPointSystem sys;
  sys.size = size;
  sys.matrix.resize(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      sys.matrix[static_cast<std::size_t>(i * size + j)] = M(i, j);
  sys.forcing.resize(static_cast<std::size_t>(size));
  for (double& x : sys.forcing) x = uni(rng);
  sys.norm_estimate = target_norm;
  return sys;
}

Eigen::MatrixXd to_eigen(const FixedPointSystem& sys) {
  Eigen::MatrixXd M(sys.size, sys.size);
  for (std::int64_t i = 0; i < sys.size; ++i)
    for (std::int64_t j = 0; j < sys.size; ++j)
      M(i, j) = sys.matrix[static_cast<std::size_t>(i * sys.size + j)];
  return M;
}

Eigen::MatrixXd to_eigen_decay(const DecaySystem& sys) {
  Eigen::MatrixXd M(sys.size, sys.size);
  for (std::int64_t i = 0; i < sys.size; ++i)
    for (std::int64_t j = 0; j < sys.size; ++j)
      M(i, j) = sys.matrix[static_cast<std::size_t>(i * sys.size + j)];
  return M;
}

}  // namespace

TEST_CASE("fixed point iteration: closed-form cases") {
  FixedPointSystem zero;
  zero.size = 3;
  zero.matrix.assign(9, 0.0);
  zero.forcing = {1.0, 0.0, 2.5};
  zero.norm_estimate = 0.0;
  CHECK(solve_fixed_point(zero) == zero.forcing);

  FixedPointSystem half;
  half.size = 1;
  half.matrix = {0.5};
  half.forcing = {1.0};
  half.norm_estimate = 0.5;
  CHECK(solve_fixed_point(half, 1e-13)[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fixed point iteration matches the dense linear solve") {
  std::mt19937_64 rng(2024);
  const FixedPointSystem sys = random_system(rng, 50, 0.9);
  const std::vector<double> u = solve_fixed_point(sys, 1e-12);
  const Eigen::VectorXd f =
      Eigen::Map<const Eigen::VectorXd>(sys.forcing.data(), sys.size);
  const Eigen::VectorXd expected =
      oracle::solve_fixed_point_dense(to_eigen(sys), f);
  for (std::int64_t i = 0; i < sys.size; ++i) {
    REQUIRE(u[static_cast<std::size_t>(i)] >= 0.0);
    REQUIRE(u[static_cast<std::size_t>(i)] ==
            doctest::Approx(expected(i)).epsilon(1e-8));
  }
}

TEST_CASE("contract violations are rejected") {
  FixedPointSystem sys;
  sys.size = 2;
  sys.matrix = {0.0, 1.0, 1.0, 0.0};
  sys.forcing = {1.0, 1.0};
  sys.norm_estimate = 1.0;
  CHECK_THROWS_AS(solve_fixed_point(sys), ContractViolation);

  sys.norm_estimate = 0.5;
  sys.forcing = {1.0, -0.1};
  CHECK_THROWS_AS(solve_fixed_point(sys), ContractViolation);
}

TEST_CASE("maximum principle across contraction strengths") {
  std::mt19937_64 rng(7);
  for (double norm : {0.3, 0.9, 0.99}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int size = 20 + static_cast<int>(rng() % 30);
      const FixedPointSystem sys = random_system(rng, size, norm);
      const std::vector<double> u = solve_fixed_point(sys, 1e-12);
      const Eigen::VectorXd expected = oracle::solve_fixed_point_dense(
          to_eigen(sys),
          Eigen::Map<const Eigen::VectorXd>(sys.forcing.data(), sys.size));
      for (std::int64_t i = 0; i < sys.size; ++i) {
        REQUIRE(u[static_cast<std::size_t>(i)] >= -1e-12);
        REQUIRE(std::abs(u[static_cast<std::size_t>(i)] - expected(i)) <=
                1e-8 * std::max(1.0, std::abs(expected(i))));
      }
    }
  }
}

TEST_CASE("comparison property: larger forcing, larger solution") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    FixedPointSystem sys = random_system(rng, 25, 0.8);
    const std::vector<double> u1 = solve_fixed_point(sys, 1e-12);
    FixedPointSystem smaller = sys;
    for (double& x : smaller.forcing) x *= uni(rng);  // f2 <= f1 entrywise
    const std::vector<double> u2 = solve_fixed_point(smaller, 1e-12);
    for (std::size_t i = 0; i < u1.size(); ++i) REQUIRE(u1[i] >= u2[i] - 1e-12);
  }
}

TEST_CASE("decay system on the smallest centered grid") {
  const GridSpec g(1, 1, Convention::Centered);
  SolveOptions opt;
  opt.tol = 1e-12;
  const OptimizerResult res = solve_optimizer(g, opt);
  const DecaySystem sys = build_decay_system(res, 1);
  REQUIRE(sys.size == 1);

  // d = a_0 - a_1 from the dense 3x3 oracle; symmetry makes the center maximal
  const auto top = oracle::top_eigenpair(oracle::dense_kernel(g));
  const double expected_d = top.vector(1) - top.vector(2);
  CHECK(sys.d[0] == doctest::Approx(expected_d).epsilon(1e-9));
  CHECK(sys.d[0] >= 0.0);
  CHECK(sys.matrix[0] == 0.0);
  CHECK(sys.forcing[0] > 0.0);
}

TEST_CASE("decay system structure: nonnegative A and F") {
  SolveOptions opt;
  opt.tol = 1e-11;

  const OptimizerResult r1 =
      solve_optimizer(GridSpec(1, 4, Convention::Centered), opt);
  const DecaySystem s1 = build_decay_system(r1, 1);
  for (double x : s1.matrix) REQUIRE(x >= 0.0);
  for (std::int64_t i = 0; i < s1.size; ++i)
    REQUIRE(s1.matrix[static_cast<std::size_t>(i * s1.size + i)] == 0.0);

  const OptimizerResult r2 =
      solve_optimizer(GridSpec(2, 3, Convention::Centered), opt);
  for (int axis = 1; axis <= 2; ++axis) {
    const DecaySystem s2 = build_decay_system(r2, axis);
    for (double x : s2.forcing) REQUIRE(x >= 0.0);
    for (double x : s2.matrix) REQUIRE(x >= 0.0);
  }

  CHECK_THROWS_AS(build_decay_system(r2, 3), ContractViolation);
  const OptimizerResult unit = solve_optimizer(GridSpec(1, 3), opt);
  CHECK_THROWS_AS(build_decay_system(unit, 1), ContractViolation);
}

TEST_CASE("decay system consistency and norm chain") {
  SolveOptions opt;
  opt.tol = 1e-11;
  for (const GridSpec& g : {GridSpec(1, 4, Convention::Centered),
                            GridSpec(2, 3, Convention::Centered)}) {
    const OptimizerResult res = solve_optimizer(g, opt);
    const DecaySystem sys = build_decay_system(res, 1);

    // d = A d + F holds with residual at the solver-accuracy scale
    double dmax = 0.0;
    for (double x : sys.d) dmax = std::max(dmax, std::abs(x));
    Eigen::Map<const Eigen::VectorXd> d(sys.d.data(), sys.size);
    Eigen::Map<const Eigen::VectorXd> F(sys.forcing.data(), sys.size);
    const Eigen::VectorXd resid = d - (to_eigen_decay(sys) * d + F);
    CHECK(resid.lpNorm<Eigen::Infinity>() <= 1e-8 * dmax);

    // ||A|| <= lambda / (lambda + delta) < 1
    const double bound = sys.lambda / (sys.lambda + sys.delta_N);
    CHECK(sys.norm_estimate <= bound + 1e-10);
    CHECK(sys.norm_estimate < 1.0);
    CHECK(sys.norm_estimate ==
          doctest::Approx(oracle::spectral_norm(to_eigen_decay(sys)))
              .epsilon(1e-8));
  }
}

TEST_CASE("norm monotonicity under entrywise domination") {
  // ||C|| <= ||C + D|| for the split of the decay matrix into its two
  // kernel pieces, n = 1, N <= 4.
  SolveOptions opt;
  opt.tol = 1e-11;
  for (int N = 1; N <= 4; ++N) {
    const GridSpec g(1, N, Convention::Centered);
    const OptimizerResult res = solve_optimizer(g, opt);
    const DecaySystem sys = build_decay_system(res, 1);
    const std::int64_t L = sys.size;

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(L, L);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(L, L);
    for (std::int64_t r = 0; r < L; ++r) {
      const int r1 = static_cast<int>(r) + 1;
      const double pre = sys.lambda + 1.0 / std::abs(2.0 * r1 - 1.0);
      for (std::int64_t t = 0; t < L; ++t) {
        if (r == t) continue;
        const int t1 = static_cast<int>(t) + 1;
        C(r, t) = 1.0 / std::abs(static_cast<double>(t1 - r1)) / pre;
        D(r, t) = 1.0 / std::abs(static_cast<double>(-t1 + 1 - r1)) / pre;
      }
    }
    CHECK(oracle::spectral_norm(C) <=
          oracle::spectral_norm(C + D) + 1e-12);
    // A = C - D entrywise, so ||A|| <= ||A + D|| = ||C||
    CHECK(sys.norm_estimate <= oracle::spectral_norm(C) + 1e-8);
  }
}

TEST_CASE("verify_decay certificates") {
  SolveOptions opt;
  opt.tol = 1e-11;
  for (const GridSpec& g : {GridSpec(1, 4, Convention::Centered),
                            GridSpec(1, 6, Convention::Centered),
                            GridSpec(2, 3, Convention::Centered),
                            GridSpec(2, 6, Convention::Centered),
                            GridSpec(3, 2, Convention::Centered)}) {
    const OptimizerResult res = solve_optimizer(g, opt);
    const DecayReport rep = verify_decay(res);
    REQUIRE(rep.pass);
    REQUIRE(rep.axes.size() == static_cast<std::size_t>(g.dimension));
    for (const AxisDecayReport& ar : rep.axes) {
      CHECK(ar.min_d >= -1e-10);
      CHECK(ar.min_F >= 0.0);
      CHECK(ar.opnorm_A < 1.0);
      CHECK(ar.residual <= 1e-8);
    }
  }
}
