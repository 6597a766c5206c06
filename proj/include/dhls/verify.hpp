#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dhls/bounds.hpp"
#include "dhls/eig.hpp"
#include "dhls/grid.hpp"
#include "dhls/maxprinciple.hpp"
#include "dhls/optimizer.hpp"

namespace dhls {

struct SymmetryReport {
  GridSpec grid;
  int group_order = 0;
  double max_deviation = 0.0;  // max over group elements and indices
  double tolerance = 1e-8;
  bool pass = false;
};

/// Deviation of the optimizer from invariance under the full signed
/// permutation group of the box.
SymmetryReport check_symmetry(const OptimizerResult& opt,
                              double tolerance = 1e-8);

/// mu_L = lambda^2 and mu_{L-1} for C = A^T A on the grid's kernel operator.
SpectralReport check_gap(const GridSpec& g, double tol = 1e-10,
                         int max_iter = 100000);

struct SignLemmaReport {
  int samples = 0;
  int engaged = 0;          // samples with a negative cross product a_r b_s
  double min_margin = 0.0;  // min of J(|a|,|b|) - J(a,b) over engaged samples
  double max_sign_pair_deviation = 0.0;  // max |J(-a,-b) - J(a,b)|
  bool all_strict = false;
};

/// Random mixed-sign unit pairs: J strictly increases under the absolute
/// value map whenever some cross product a_r b_s (r != s) is negative, and
/// J is invariant under the joint sign flip (a,b) -> (-a,-b).
SignLemmaReport check_sign_lemma(const GridSpec& g, int samples, unsigned seed);

struct MonotoneReport {
  int dimension = 0;
  int N_from = 2;
  int N_to = 0;
  std::vector<double> lambdas;        // lambda_N for N = N_from..N_to
  double min_step = 0.0;              // min lambda_{N+1} - lambda_N
  double max_embedding_error = 0.0;   // max |J_{N+1}(padded a_N) - lambda_N|
  bool embedding_leq = false;         // padded value <= lambda_{N+1} throughout
  bool pass = false;
};

/// lambda_N strictly increasing on Unit grids, plus the zero-padding
/// embedding identity behind the monotonicity proof.
MonotoneReport check_monotone_lambda(int n, int N_max, double tol = 1e-10);

struct CertEntry {
  std::string id;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string note;  // e.g. the documented degenerate L=2 gap exception
  double wall_ms = 0.0;
};

struct CertificationReport {
  int n = 0;
  int N = 0;
  double tol = 0.0;
  unsigned seed = 0;
  std::vector<CertEntry> entries;
  bool pass = false;
};

/// Runs every certification suite at desk scale: symmetry, spectral gap,
/// sign lemma, monotone decay (centered grid), bound sandwich, and lambda
/// monotonicity. Failures are recorded per entry, never thrown.
CertificationReport certify_all(int n, int N, double tol = 1e-10,
                                unsigned seed = 1);

}  // namespace dhls
