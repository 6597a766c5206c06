#include "dhls/maxprinciple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dhls/eig.hpp"
#include "dhls/errors.hpp"
#include "dhls/kahan.hpp"
#include "dhls/kernel.hpp"

namespace dhls {

namespace {

void dense_apply(const std::vector<double>& m, std::int64_t size,
                 std::span<const double> v, std::span<double> out,
                 bool transpose) {
  const std::size_t L = static_cast<std::size_t>(size);
  for (std::size_t i = 0; i < L; ++i) {
    KahanSum row;
    for (std::size_t j = 0; j < L; ++j)
      row.add((transpose ? m[j * L + i] : m[i * L + j]) * v[j]);
    out[i] = row.value();
  }
}

}  // namespace

std::vector<double> solve_fixed_point(const FixedPointSystem& sys, double tol,
                                      int max_iter) {
  if (!(sys.norm_estimate < 1.0))
    throw ContractViolation(
        "solve_fixed_point: ||A||_2 = " + std::to_string(sys.norm_estimate) +
        " violates the contraction requirement ||A||_2 < 1");
  for (double x : sys.forcing)
    if (x < 0.0)
      throw ContractViolation("solve_fixed_point: forcing has a negative entry");
  for (double x : sys.matrix)
    if (x < 0.0)
      throw ContractViolation("solve_fixed_point: matrix has a negative entry");

  const std::size_t L = static_cast<std::size_t>(sys.size);
  std::vector<double> u(sys.forcing);
  std::vector<double> next(L);
  const double stop = tol * (1.0 - sys.norm_estimate);
  for (int iter = 0; iter < max_iter; ++iter) {
    dense_apply(sys.matrix, sys.size, u, next, false);
    for (std::size_t i = 0; i < L; ++i) next[i] += sys.forcing[i];
    KahanSum diff;
    for (std::size_t i = 0; i < L; ++i) {
      const double d = next[i] - u[i];
      diff.add(d * d);
    }
    u.swap(next);
    if (std::sqrt(diff.value()) <= stop) return u;
  }
  throw NonConvergence("solve_fixed_point: no convergence in " +
                           std::to_string(max_iter) + " iterations",
                       0.0, 0.0, max_iter, std::move(u));
}

namespace {

// Axis relabeling for the difference system: system coordinate 0 is the
// chosen axis, the remaining original axes follow in ascending order.
struct AxisFrame {
  GridSpec grid;
  int axis;                                // 0-based original axis
  std::array<int, kMaxDimension> to_orig;  // system coord -> original axis

  explicit AxisFrame(const GridSpec& g, int axis1based)
      : grid(g), axis(axis1based - 1) {
    int k = 1;
    to_orig[0] = axis;
    for (int i = 0; i < g.dimension; ++i)
      if (i != axis) to_orig[static_cast<std::size_t>(k++)] = i;
  }

  // Optimizer value at system coordinates (x1, x').
  double value(const std::vector<double>& a, int x1,
               const std::array<int, kMaxDimension>& xp) const {
    LatticePoint q;
    q[to_orig[0]] = x1;
    for (int k = 1; k < grid.dimension; ++k)
      q[to_orig[static_cast<std::size_t>(k)]] = xp[static_cast<std::size_t>(k - 1)];
    return a[static_cast<std::size_t>(linear_index(q, grid))];
  }
};

// Rows of the system: r1 in [1, N] slowest, then r' row-major over
// [-N, N]^(n-1).
struct SystemIndex {
  int N;
  int n;
  std::int64_t tail;  // (2N+1)^(n-1)

  SystemIndex(int N, int n) : N(N), n(n) {
    tail = 1;
    for (int i = 1; i < n; ++i) tail *= 2 * N + 1;
  }

  std::int64_t size() const { return static_cast<std::int64_t>(N) * tail; }

  void decode(std::int64_t idx, int& r1,
              std::array<int, kMaxDimension>& rp) const {
    r1 = static_cast<int>(idx / tail) + 1;
    std::int64_t rest = idx % tail;
    for (int k = n - 2; k >= 0; --k) {
      rp[static_cast<std::size_t>(k)] = static_cast<int>(rest % (2 * N + 1)) - N;
      rest /= 2 * N + 1;
    }
  }
};

std::int64_t transverse_sq(const std::array<int, kMaxDimension>& a,
                           const std::array<int, kMaxDimension>& b, int m) {
  std::int64_t s = 0;
  for (int k = 0; k < m; ++k) {
    const std::int64_t d = a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)];
    s += d * d;
  }
  return s;
}

}  // namespace

DecaySystem build_decay_system(const OptimizerResult& opt, int axis) {
  const GridSpec& g = opt.grid;
  if (g.convention != Convention::Centered)
    throw ContractViolation(
        "build_decay_system: requires a Centered grid (coordinates -N..N)");
  if (axis < 1 || axis > g.dimension)
    throw ContractViolation("build_decay_system: axis " + std::to_string(axis) +
                            " outside [1, " + std::to_string(g.dimension) + "]");

  const int n = g.dimension;
  const int N = g.side;
  const AxisFrame frame(g, axis);
  const SystemIndex sys(N, n);
  const std::int64_t L = sys.size();

  DecaySystem out{axis, g};
  out.size = L;
  out.lambda = opt.lambda;
  out.delta_N = kernel_value_sq(
      static_cast<std::int64_t>(2 * N - 1) * (2 * N - 1), n);
  out.matrix.assign(static_cast<std::size_t>(L * L), 0.0);
  out.forcing.resize(static_cast<std::size_t>(L));
  out.d.resize(static_cast<std::size_t>(L));

  std::array<int, kMaxDimension> rp{}, tp{};
  for (std::int64_t ri = 0; ri < L; ++ri) {
    int r1 = 0;
    sys.decode(ri, r1, rp);
    const double prefactor =
        opt.lambda + kernel_value_sq(static_cast<std::int64_t>(2 * r1 - 1) *
                                         (2 * r1 - 1), n);

    out.d[static_cast<std::size_t>(ri)] =
        frame.value(opt.vector, r1 - 1, rp) - frame.value(opt.vector, r1, rp);

    // A(r,t) = (k(|(t1,t')-r|) - k(|(-t1+1,t')-r|)) / prefactor, zero diagonal.
    for (std::int64_t ti = 0; ti < L; ++ti) {
      if (ti == ri) continue;
      int t1 = 0;
      sys.decode(ti, t1, tp);
      const std::int64_t cross = transverse_sq(tp, rp, n - 1);
      const std::int64_t d1 = static_cast<std::int64_t>(t1 - r1) * (t1 - r1);
      const std::int64_t d2 =
          static_cast<std::int64_t>(-t1 + 1 - r1) * (-t1 + 1 - r1);
      out.matrix[static_cast<std::size_t>(ri * L + ti)] =
          (kernel_value_sq(d1 + cross, n) - kernel_value_sq(d2 + cross, n)) /
          prefactor;
    }

    // Boundary forcing: the t1 = N+1 terms of the shifted sum carry a(N, t'),
    // the t1 = -N terms of the plain sum carry a(-N, t').
    KahanSum f;
    std::array<int, kMaxDimension> tprime{};
    for (int k = 0; k < n - 1; ++k) tprime[static_cast<std::size_t>(k)] = -N;
    while (true) {
      const std::int64_t cross = transverse_sq(tprime, rp, n - 1);
      const std::int64_t dplus =
          static_cast<std::int64_t>(N + 1 - r1) * (N + 1 - r1);
      const std::int64_t dminus =
          static_cast<std::int64_t>(-N - r1) * (-N - r1);
      f.add(frame.value(opt.vector, N, tprime) *
            kernel_value_sq(dplus + cross, n));
      f.add(-frame.value(opt.vector, -N, tprime) *
            kernel_value_sq(dminus + cross, n));

      int k = n - 2;
      while (k >= 0 && tprime[static_cast<std::size_t>(k)] == N) {
        tprime[static_cast<std::size_t>(k)] = -N;
        --k;
      }
      if (k < 0) break;
      ++tprime[static_cast<std::size_t>(k)];
    }
    out.forcing[static_cast<std::size_t>(ri)] = f.value() / prefactor;
  }

  const std::vector<double>& m = out.matrix;
  ApplyFn fwd = [&m, L](std::span<const double> v, std::span<double> o) {
    dense_apply(m, L, v, o, false);
  };
  ApplyFn bwd = [&m, L](std::span<const double> v, std::span<double> o) {
    dense_apply(m, L, v, o, true);
  };
  out.norm_estimate = operator_norm(fwd, bwd, L);
  return out;
}

DecayReport verify_decay(const OptimizerResult& opt, double tol) {
  const GridSpec& g = opt.grid;
  if (g.convention != Convention::Centered)
    throw ContractViolation("verify_decay: requires a Centered grid");

  DecayReport report{g};
  report.pass = true;
  const std::int64_t L = g.num_points();

  for (int axis = 1; axis <= g.dimension; ++axis) {
    AxisDecayReport ar;
    ar.axis = axis;

    // Direct first differences on the optimizer, both halves of the axis:
    // decreasing for 1 <= r_i <= N, increasing for -N+1 <= r_i <= 0.
    double min_d = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < L; ++i) {
      LatticePoint p = point_of(i, g);
      const int c = p[axis - 1];
      if (c < -g.side + 1) continue;
      LatticePoint q = p;
      q[axis - 1] = c - 1;
      const double ap = opt.vector[static_cast<std::size_t>(i)];
      const double aq = opt.vector[static_cast<std::size_t>(linear_index(q, g))];
      min_d = std::min(min_d, c >= 1 ? aq - ap : ap - aq);
    }
    ar.min_d = min_d;

    const DecaySystem sys = build_decay_system(opt, axis);
    ar.opnorm_A = sys.norm_estimate;
    ar.min_F = *std::min_element(sys.forcing.begin(), sys.forcing.end());

    std::vector<double> Ad(static_cast<std::size_t>(sys.size));
    dense_apply(sys.matrix, sys.size, sys.d, Ad, false);
    double resid = 0.0;
    for (std::size_t i = 0; i < Ad.size(); ++i)
      resid = std::max(resid,
                       std::abs(sys.d[i] - (Ad[i] + sys.forcing[i])));
    ar.residual = resid;

    ar.pass = ar.min_d >= -tol && ar.opnorm_A < 1.0;
    report.pass = report.pass && ar.pass;
    report.axes.push_back(ar);
  }
  return report;
}

}  // namespace dhls
