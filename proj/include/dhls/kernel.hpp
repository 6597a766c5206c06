#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dhls/grid.hpp"

namespace dhls {

namespace detail {
struct ConvPlan;
}

enum class KernelMode { Dense, FastConvolution };

inline constexpr std::int64_t kDefaultDenseLimit = 4096;

/// k(x) = |x|^(-n) for x != 0, k(0) = 0. |x| is the Euclidean norm of the
/// integer offset; the value is computed from the exact squared distance.
double kernel_value(const LatticePoint& offset, int dimension);
double kernel_value_sq(std::int64_t squared_distance, int dimension);

/// The zero-diagonal symmetric operator A(r,s) = 1/|r-s|^n on a grid box.
/// Dense mode stores the full matrix (oracle path); FastConvolution applies
/// A via zero-padded multidimensional FFT convolution in O(L log L).
class KernelOperator {
public:
  static KernelOperator dense(const GridSpec& g,
                              std::int64_t dense_limit = kDefaultDenseLimit);
  static KernelOperator fast(const GridSpec& g);
  /// Dense when L <= dense_limit, FastConvolution otherwise.
  static KernelOperator make(const GridSpec& g,
                             std::int64_t dense_limit = kDefaultDenseLimit);

  const GridSpec& grid() const { return grid_; }
  KernelMode mode() const { return mode_; }
  std::int64_t size() const { return size_; }

  /// out = A v. Throws std::invalid_argument on length mismatch.
  void apply(std::span<const double> v, std::span<double> out) const;
  std::vector<double> matvec(std::span<const double> v) const;

  /// a^T (A b), the bilinear form J(a, b).
  double quadratic_form(std::span<const double> a,
                        std::span<const double> b) const;

  /// Matrix entry A(i, j), recomputed from lattice points in fast mode.
  double entry(std::int64_t i, std::int64_t j) const;

  /// Dense storage, row-major; only valid in Dense mode.
  const std::vector<double>& dense_data() const;

private:
  KernelOperator(const GridSpec& g, KernelMode mode);

  void apply_dense(std::span<const double> v, std::span<double> out) const;
  void apply_fast(std::span<const double> v, std::span<double> out) const;

  GridSpec grid_;
  KernelMode mode_;
  std::int64_t size_;

  std::vector<double> dense_;  // L x L, Dense mode

  // FastConvolution workspace: per-axis padded lengths, their FFTs, and the
  // transformed kernel tensor. Immutable after construction.
  std::shared_ptr<const detail::ConvPlan> plan_;
};

/// Exact compensated sum of kernel values from s0 to every other grid point.
/// Throws std::out_of_range when s0 lies outside the box.
double row_sum(const GridSpec& g, const LatticePoint& s0);

/// Closed-form pair sum over offsets:
///   sum_{x != 0} prod_i (span - |x_i|) * |x|^(-n)
/// equals sum_{r != s} 1/|r-s|^n on the box.
double offset_pair_sum(const GridSpec& g);

}  // namespace dhls
