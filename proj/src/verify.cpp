#include "dhls/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "dhls/errors.hpp"
#include "dhls/kahan.hpp"

namespace dhls {

SymmetryReport check_symmetry(const OptimizerResult& opt, double tolerance) {
  const GridSpec& g = opt.grid;
  const std::vector<Isometry> group = isometry_group(g);
  const std::int64_t L = g.num_points();

  double dev = 0.0;
  for (const Isometry& phi : group) {
    for (std::int64_t i = 0; i < L; ++i) {
      const LatticePoint p = point_of(i, g);
      const std::int64_t j = linear_index(apply_isometry(phi, p, g), g);
      dev = std::max(dev, std::abs(opt.vector[static_cast<std::size_t>(j)] -
                                   opt.vector[static_cast<std::size_t>(i)]));
    }
  }

  SymmetryReport rep{g};
  rep.group_order = static_cast<int>(group.size());
  rep.max_deviation = dev;
  rep.tolerance = tolerance;
  rep.pass = dev <= tolerance;
  return rep;
}

SpectralReport check_gap(const GridSpec& g, double tol, int max_iter) {
  const KernelOperator op = KernelOperator::make(g);
  PowerOptions popt;
  popt.tol = tol;
  popt.max_iter = max_iter;
  ApplyFn apply = [&op](std::span<const double> in, std::span<double> out) {
    op.apply(in, out);
  };
  const EigenResult perron = power_iteration(apply, op.size(), popt);
  if (!perron.converged)
    throw NonConvergence("check_gap: Perron iteration did not converge",
                         perron.eigenvalue, perron.residual, perron.iterations);
  return spectral_report(op, perron, tol, max_iter);
}

namespace {

// True when some cross product a_r b_s with r != s is negative; this is the
// hypothesis under which the absolute value map strictly increases J.
bool has_negative_cross(const std::vector<double>& a,
                        const std::vector<double>& b) {
  auto scan = [](const std::vector<double>& v, bool positive) {
    int count = 0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (positive ? v[i] > 0.0 : v[i] < 0.0) {
        ++count;
        idx = i;
      }
    return std::pair<int, std::size_t>{count, idx};
  };
  const auto [pa, ia] = scan(a, true);
  const auto [nb, ib] = scan(b, false);
  if (pa > 0 && nb > 0 && (pa > 1 || nb > 1 || ia != ib)) return true;
  const auto [na, ja] = scan(a, false);
  const auto [pb, jb] = scan(b, true);
  return na > 0 && pb > 0 && (na > 1 || pb > 1 || ja != jb);
}

bool mixed_sign(const std::vector<double>& v) {
  bool pos = false, neg = false;
  for (double x : v) {
    pos = pos || x > 0.0;
    neg = neg || x < 0.0;
  }
  return pos && neg;
}

}  // namespace

SignLemmaReport check_sign_lemma(const GridSpec& g, int samples,
                                 unsigned seed) {
  if (samples < 1)
    throw std::invalid_argument("check_sign_lemma: samples must be >= 1");
  const KernelOperator op = KernelOperator::make(g);
  const std::size_t L = static_cast<std::size_t>(op.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_mixed_unit = [&]() {
    std::vector<double> v(L);
    while (true) {
      for (double& x : v) x = gauss(rng);
      if (!mixed_sign(v)) continue;
      const double n2 = std::sqrt(kahan_dot(v, v));
      for (double& x : v) x /= n2;
      return v;
    }
  };

  SignLemmaReport rep;
  rep.samples = samples;
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.all_strict = true;
  for (int s = 0; s < samples; ++s) {
    const std::vector<double> a = random_mixed_unit();
    const std::vector<double> b = random_mixed_unit();
    const double J = op.quadratic_form(a, b);
    const double J_abs = op.quadratic_form(abs_map(a), abs_map(b));

    std::vector<double> na(a), nb(b);
    for (double& x : na) x = -x;
    for (double& x : nb) x = -x;
    rep.max_sign_pair_deviation =
        std::max(rep.max_sign_pair_deviation,
                 std::abs(op.quadratic_form(na, nb) - J));

    if (has_negative_cross(a, b)) {
      ++rep.engaged;
      rep.min_margin = std::min(rep.min_margin, J_abs - J);
      if (!(J_abs > J)) rep.all_strict = false;
    }
  }
  if (rep.engaged == 0) rep.min_margin = 0.0;
  return rep;
}

MonotoneReport check_monotone_lambda(int n, int N_max, double tol) {
  if (N_max < 3)
    throw std::invalid_argument("check_monotone_lambda: N_max must be >= 3");

  MonotoneReport rep;
  rep.dimension = n;
  rep.N_to = N_max;
  rep.min_step = std::numeric_limits<double>::infinity();
  rep.embedding_leq = true;

  SolveOptions opt;
  opt.tol = tol;
  opt.compute_gap = false;

  OptimizerResult prev = solve_optimizer(GridSpec(n, 2), opt);
  rep.lambdas.push_back(prev.lambda);
  for (int N = 3; N <= N_max; ++N) {
    const GridSpec g(n, N);
    const KernelOperator op = KernelOperator::make(g, opt.dense_limit);
    const OptimizerResult cur = solve_optimizer(op, opt);
    rep.lambdas.push_back(cur.lambda);
    rep.min_step = std::min(rep.min_step, cur.lambda - prev.lambda);

    // Zero-pad the previous optimizer into the N-grid and evaluate J there;
    // the embedded value reproduces lambda_{N-1} and sits below lambda_N.
    std::vector<double> padded(static_cast<std::size_t>(g.num_points()), 0.0);
    const GridSpec& gp = prev.grid;
    for (std::int64_t i = 0; i < gp.num_points(); ++i)
      padded[static_cast<std::size_t>(linear_index(point_of(i, gp), g))] =
          prev.vector[static_cast<std::size_t>(i)];
    const double embedded = op.quadratic_form(padded, padded);
    rep.max_embedding_error =
        std::max(rep.max_embedding_error, std::abs(embedded - prev.lambda));
    if (embedded > cur.lambda + 1e-12) rep.embedding_leq = false;

    prev = cur;
  }
  rep.pass = rep.min_step > 0.0 && rep.max_embedding_error <= 1e-9 &&
             rep.embedding_leq;
  return rep;
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

int decay_side_cap(int n) {
  switch (n) {
    case 1: return 8;
    case 2: return 5;
    case 3: return 2;
    default: return 1;
  }
}

}  // namespace

CertificationReport certify_all(int n, int N, double tol, unsigned seed) {
  CertificationReport report;
  report.n = n;
  report.N = N;
  report.tol = tol;
  report.seed = seed;

  const GridSpec g(n, N);
  SolveOptions opt;
  opt.tol = tol;

  auto add = [&report](CertEntry e) { report.entries.push_back(std::move(e)); };

  OptimizerResult unit_opt{g};
  bool unit_ok = false;
  std::string unit_error;
  try {
    unit_opt = solve_optimizer(g, opt);
    unit_ok = true;
  } catch (const std::exception& e) {
    unit_error = e.what();
  }

  {
    Timer t;
    CertEntry e;
    e.id = "symmetry";
    if (unit_ok) {
      const SymmetryReport sym = check_symmetry(unit_opt);
      e.pass = sym.pass;
      e.metrics = {{"group_order", static_cast<double>(sym.group_order)},
                   {"max_deviation", sym.max_deviation},
                   {"tolerance", sym.tolerance}};
    } else {
      e.pass = false;
      e.note = unit_error;
    }
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  {
    Timer t;
    CertEntry e;
    e.id = "gap";
    try {
      const SpectralReport gap = check_gap(g, tol);
      e.metrics = {{"mu_L", gap.mu_L},
                   {"mu_L_minus_1", gap.mu_L_minus_1},
                   {"gap_ratio", gap.gap_ratio},
                   {"threshold", 1.0 - 1e-8}};
      if (g.num_points() == 2) {
        // A has spectrum {1, -1}: C = A^2 is the identity and the top
        // eigenvalue of C is not simple. The only such grid.
        e.pass = true;
        e.note = "known degenerate L=2";
      } else {
        e.pass = gap.gap_ratio < 1.0 - 1e-8;
      }
    } catch (const std::exception& ex) {
      e.pass = false;
      e.note = ex.what();
    }
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  {
    Timer t;
    CertEntry e;
    e.id = "sign_lemma";
    const SignLemmaReport sl = check_sign_lemma(g, 100, seed);
    e.pass = sl.all_strict && sl.max_sign_pair_deviation <= 1e-12;
    e.metrics = {{"samples", static_cast<double>(sl.samples)},
                 {"engaged", static_cast<double>(sl.engaged)},
                 {"min_margin", sl.min_margin},
                 {"max_sign_pair_deviation", sl.max_sign_pair_deviation},
                 {"tolerance", 1e-12}};
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  {
    Timer t;
    CertEntry e;
    e.id = "decay";
    const int N_dec = std::min(N, decay_side_cap(n));
    try {
      const GridSpec gc(n, N_dec, Convention::Centered);
      const OptimizerResult copt = solve_optimizer(gc, opt);
      const DecayReport dr = verify_decay(copt);
      double min_d = std::numeric_limits<double>::infinity();
      double min_F = std::numeric_limits<double>::infinity();
      double max_norm = 0.0;
      double max_resid = 0.0;
      for (const AxisDecayReport& ar : dr.axes) {
        min_d = std::min(min_d, ar.min_d);
        min_F = std::min(min_F, ar.min_F);
        max_norm = std::max(max_norm, ar.opnorm_A);
        max_resid = std::max(max_resid, ar.residual);
      }
      e.pass = dr.pass;
      e.metrics = {{"N_used", static_cast<double>(N_dec)},
                   {"min_d", min_d},
                   {"min_F", min_F},
                   {"max_opnorm_A", max_norm},
                   {"max_residual", max_resid},
                   {"tolerance", 1e-10}};
    } catch (const std::exception& ex) {
      e.pass = false;
      e.note = ex.what();
    }
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  {
    Timer t;
    CertEntry e;
    e.id = "bounds_sandwich";
    const BoundsReport b = bounds_report(g);
    if (unit_ok) {
      const double lam = unit_opt.lambda;
      const double slack = 1e-9 * std::max(1.0, lam);
      bool ok = b.lower_uniform <= lam + slack && lam <= b.upper_center + slack;
      if (N >= 3)  // strict part of the sandwich
        ok = ok && b.lower_uniform < lam - 1e-9 && lam < b.upper_center - 1e-9;
      e.pass = ok;
      e.metrics = {{"lower_uniform", b.lower_uniform},
                   {"lambda", lam},
                   {"upper_center", b.upper_center},
                   {"tolerance", 1e-9}};
    } else {
      e.pass = false;
      e.note = unit_error;
    }
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  {
    Timer t;
    CertEntry e;
    e.id = "monotonicity";
    const int N_mono = std::clamp(N, 3, 16);
    try {
      const MonotoneReport mono = check_monotone_lambda(n, N_mono, tol);
      e.pass = mono.pass;
      e.metrics = {{"N_from", 2.0},
                   {"N_to", static_cast<double>(mono.N_to)},
                   {"min_step", mono.min_step},
                   {"max_embedding_error", mono.max_embedding_error},
                   {"tolerance", 1e-9}};
    } catch (const std::exception& ex) {
      e.pass = false;
      e.note = ex.what();
    }
    e.wall_ms = t.ms();
    add(std::move(e));
  }

  report.pass = std::all_of(report.entries.begin(), report.entries.end(),
                            [](const CertEntry& e) { return e.pass; });
  return report;
}

}  // namespace dhls
