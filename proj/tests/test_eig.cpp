#include <doctest.h>

#include <cmath>
#include <random>

#include "dhls/eig.hpp"
#include "dhls/errors.hpp"
#include "oracles.hpp"

using namespace dhls;

namespace {

ApplyFn kernel_apply(const KernelOperator& op) {
  return [&op](std::span<const double> in, std::span<double> out) {
    op.apply(in, out);
  };
}

}  // namespace

TEST_CASE("power iteration on the 2x2 exchange matrix") {
  ApplyFn exchange = [](std::span<const double> in, std::span<double> out) {
    out[0] = in[1];
    out[1] = in[0];
  };
  PowerOptions opt;
  opt.shift = 1.0;
  const EigenResult res = power_iteration(exchange, 2, opt);
  CHECK(res.converged);
  CHECK(res.iterations == 1);  // the default start is the exact eigenvector
  CHECK(res.eigenvalue == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(res.vector[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(res.vector[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("power iteration argument validation") {
  ApplyFn id = [](std::span<const double> in, std::span<double> out) {
    out[0] = in[0];
  };
  PowerOptions bad;
  bad.shift = -1.0;
  CHECK_THROWS_AS(power_iteration(id, 1, bad), std::invalid_argument);
  PowerOptions bad2;
  bad2.tol = 0.0;
  CHECK_THROWS_AS(power_iteration(id, 1, bad2), std::invalid_argument);
}

TEST_CASE("kernel Perron pairs match the dense eigensolver oracle") {
  const GridSpec grids[] = {GridSpec(1, 3),  GridSpec(1, 7),
                            GridSpec(2, 2),  GridSpec(2, 5),
                            GridSpec(3, 3),  GridSpec(1, 5, Convention::Centered)};
  for (const GridSpec& g : grids) {
    const KernelOperator op = KernelOperator::make(g);
    PowerOptions opt;
    opt.tol = 1e-12;
    const EigenResult res = power_iteration(kernel_apply(op), op.size(), opt);
    REQUIRE(res.converged);

    const auto top = oracle::top_eigenpair(oracle::dense_kernel(g));
    REQUIRE(res.eigenvalue ==
            doctest::Approx(top.lambda).epsilon(1e-10));
    for (std::size_t i = 0; i < res.vector.size(); ++i)
      REQUIRE(std::abs(res.vector[i] - top.vector(static_cast<Eigen::Index>(i))) <=
              1e-7);
    // Perron positivity
    for (double x : res.vector) REQUIRE(x > 0.0);
    // unit norm within 1e-12
    double n2 = 0.0;
    for (double x : res.vector) n2 += x * x;
    REQUIRE(std::abs(std::sqrt(n2) - 1.0) <= 1e-12);
  }
}

TEST_CASE("n=1, N=3: lambda is the top root of the cubic") {
  const KernelOperator op = KernelOperator::dense(GridSpec(1, 3));
  PowerOptions opt;
  opt.tol = 1e-12;
  const EigenResult res = power_iteration(kernel_apply(op), 3, opt);
  CHECK(res.eigenvalue ==
        doctest::Approx(oracle::cubic_root_bisect()).epsilon(1e-10));
}

TEST_CASE("second eigenvalue by deflation") {
  PowerOptions opt;
  opt.tol = 1e-12;

  const KernelOperator a = KernelOperator::dense(GridSpec(1, 2));
  const EigenResult pa = power_iteration(kernel_apply(a), 2, opt);
  CHECK(second_eigenvalue(a, pa, 1e-12) == doctest::Approx(-1.0).epsilon(1e-10));

  const KernelOperator b = KernelOperator::dense(GridSpec(1, 3));
  const EigenResult pb = power_iteration(kernel_apply(b), 3, opt);
  const auto top_b = oracle::top_eigenpair(oracle::dense_kernel(GridSpec(1, 3)));
  CHECK(second_eigenvalue(b, pb, 1e-12) ==
        doctest::Approx(top_b.lambda_second_signed).epsilon(1e-9));

  const KernelOperator c = KernelOperator::dense(GridSpec(2, 2));
  const EigenResult pc = power_iteration(kernel_apply(c), 4, opt);
  CHECK(second_eigenvalue(c, pc, 1e-12) ==
        doctest::Approx(-1.5).epsilon(1e-9));

  // spectral report squares: mu_L = 6.25, mu_{L-1} = 2.25
  const SpectralReport rep = spectral_report(c, pc, 1e-12);
  CHECK(rep.mu_L == doctest::Approx(6.25).epsilon(1e-10));
  CHECK(rep.mu_L_minus_1 == doctest::Approx(2.25).epsilon(1e-9));
  CHECK(rep.gap_ratio == doctest::Approx(0.36).epsilon(1e-9));
}

TEST_CASE("abs_map") {
  const std::vector<double> v{1.0, -2.0};
  CHECK(abs_map(v) == std::vector<double>{1.0, 2.0});
  const std::vector<double> w{0.5, 0.25, 0.0};
  CHECK(abs_map(w) == w);

  std::mt19937_64 rng(3);
  const auto u = oracle::random_unit_vector(rng, 40);
  const auto au = abs_map(u);
  double nu = 0.0, nau = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu += u[i] * u[i];
    nau += au[i] * au[i];
  }
  CHECK(nu == doctest::Approx(nau).epsilon(1e-15));
}

TEST_CASE("operator norm") {
  const KernelOperator op = KernelOperator::dense(GridSpec(1, 6));
  PowerOptions popt;
  popt.tol = 1e-12;
  const EigenResult perron = power_iteration(kernel_apply(op), 6, popt);
  const double norm =
      operator_norm(kernel_apply(op), kernel_apply(op), 6, 1e-12);
  CHECK(norm == doctest::Approx(perron.eigenvalue).epsilon(1e-9));

  ApplyFn zero = [](std::span<const double>, std::span<double> out) {
    for (double& x : out) x = 0.0;
  };
  CHECK(operator_norm(zero, zero, 5) == 0.0);

  // generic nonnegative matrix vs SVD oracle
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::MatrixXd M(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) M(i, j) = uni(rng);
  ApplyFn fwd = [&M](std::span<const double> in, std::span<double> out) {
    Eigen::Map<const Eigen::VectorXd> x(in.data(), 30);
    Eigen::Map<Eigen::VectorXd> y(out.data(), 30);
    y = M * x;
  };
  ApplyFn bwd = [&M](std::span<const double> in, std::span<double> out) {
    Eigen::Map<const Eigen::VectorXd> x(in.data(), 30);
    Eigen::Map<Eigen::VectorXd> y(out.data(), 30);
    y = M.transpose() * x;
  };
  CHECK(operator_norm(fwd, bwd, 30, 1e-12) ==
        doctest::Approx(oracle::spectral_norm(M)).epsilon(1e-8));
}

TEST_CASE("abs map strictly raises the C = A^2 quadratic form on mixed vectors") {
  std::mt19937_64 rng(17);
  for (const GridSpec& g : {GridSpec(1, 5), GridSpec(2, 3)}) {
    const KernelOperator op = KernelOperator::dense(g);
    const std::size_t L = static_cast<std::size_t>(g.num_points());
    auto quad_C = [&op, L](const std::vector<double>& v) {
      std::vector<double> Av(L), AAv(L);
      op.apply(v, Av);
      op.apply(Av, AAv);
      double s = 0.0;
      for (std::size_t i = 0; i < L; ++i) s += v[i] * AAv[i];
      return s;
    };
    int tested = 0;
    while (tested < 100) {
      auto v = oracle::random_unit_vector(rng, L);
      bool pos = false, neg = false;
      for (double x : v) {
        pos = pos || x > 0;
        neg = neg || x < 0;
      }
      if (!pos || !neg) continue;
      ++tested;
      REQUIRE(quad_C(abs_map(v)) > quad_C(v));
    }
  }
}

TEST_CASE("eigenvector is independent of the shift") {
  const GridSpec g(1, 6);
  const KernelOperator op = KernelOperator::dense(g);
  PowerOptions o1;
  o1.shift = 0.5;
  o1.tol = 1e-12;
  PowerOptions o2;
  o2.shift = 2.0;
  o2.tol = 1e-12;
  const EigenResult r1 = power_iteration(kernel_apply(op), op.size(), o1);
  const EigenResult r2 = power_iteration(kernel_apply(op), op.size(), o2);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  for (std::size_t i = 0; i < r1.vector.size(); ++i)
    CHECK(std::abs(r1.vector[i] - r2.vector[i]) <= 1e-8);
}

TEST_CASE("non-convergence is reported, never silent") {
  const KernelOperator op = KernelOperator::dense(GridSpec(1, 16));
  PowerOptions opt;
  opt.tol = 1e-14;
  opt.max_iter = 2;
  const EigenResult res = power_iteration(kernel_apply(op), op.size(), opt);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 2);
  CHECK(res.residual > 0.0);
}
