#include "dhls/kernel.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dhls/errors.hpp"
#include "dhls/kahan.hpp"
#include "fft.hpp"

namespace dhls {

double kernel_value_sq(std::int64_t squared_distance, int dimension) {
  if (squared_distance == 0) return 0.0;
  const double r2 = static_cast<double>(squared_distance);
  switch (dimension) {
    case 1:
      return 1.0 / std::sqrt(r2);
    case 2:
      return 1.0 / r2;
    case 3:
      return 1.0 / (r2 * std::sqrt(r2));
    case 4:
      return 1.0 / (r2 * r2);
    default:
      return std::pow(r2, -0.5 * dimension);
  }
}

double kernel_value(const LatticePoint& offset, int dimension) {
  static const LatticePoint origin{};
  return kernel_value_sq(squared_distance(offset, origin, dimension),
                         dimension);
}

struct detail::ConvPlan {
  std::array<std::size_t, kMaxDimension> dims{};   // padded length per axis
  std::array<std::size_t, kMaxDimension> stride{}; // row-major strides
  std::size_t total = 1;
  std::vector<detail::Radix2Fft> ffts;             // one per axis
  std::vector<std::complex<double>> khat;          // transformed kernel tensor
  std::vector<std::size_t> embed;                  // grid index -> padded index
};

namespace {

void fft_axis(std::complex<double>* field, std::size_t total, std::size_t len,
              std::size_t stride, const detail::Radix2Fft& fft, bool invert,
              std::vector<std::complex<double>>& line) {
  const std::size_t block = len * stride;
  for (std::size_t b = 0; b < total; b += block) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = b + s;
      for (std::size_t k = 0; k < len; ++k) line[k] = field[base + k * stride];
      if (invert)
        fft.inverse(line.data());
      else
        fft.forward(line.data());
      for (std::size_t k = 0; k < len; ++k) field[base + k * stride] = line[k];
    }
  }
}

void fft_all_axes(std::complex<double>* field,
                  const detail::ConvPlan& plan, int dimension,
                  bool invert) {
  std::vector<std::complex<double>> line;
  for (int axis = 0; axis < dimension; ++axis) {
    line.resize(plan.dims[static_cast<std::size_t>(axis)]);
    fft_axis(field, plan.total, plan.dims[static_cast<std::size_t>(axis)],
             plan.stride[static_cast<std::size_t>(axis)],
             plan.ffts[static_cast<std::size_t>(axis)], invert, line);
  }
}

}  // namespace

KernelOperator::KernelOperator(const GridSpec& g, KernelMode mode)
    : grid_(g), mode_(mode), size_(g.num_points()) {}

KernelOperator KernelOperator::dense(const GridSpec& g,
                                     std::int64_t dense_limit) {
  const std::int64_t L = g.num_points();
  if (L > dense_limit)
    throw CapacityError("KernelOperator::dense: L = " + std::to_string(L) +
                        " exceeds dense_limit " + std::to_string(dense_limit) +
                        "; use the FastConvolution mode");
  KernelOperator op(g, KernelMode::Dense);
  std::vector<LatticePoint> pts(static_cast<std::size_t>(L));
  for (std::int64_t i = 0; i < L; ++i)
    pts[static_cast<std::size_t>(i)] = point_of(i, g);

  op.dense_.assign(static_cast<std::size_t>(L * L), 0.0);
  for (std::int64_t i = 0; i < L; ++i) {
    for (std::int64_t j = i + 1; j < L; ++j) {
      const double v = kernel_value_sq(
          squared_distance(pts[static_cast<std::size_t>(i)],
                           pts[static_cast<std::size_t>(j)], g.dimension),
          g.dimension);
      op.dense_[static_cast<std::size_t>(i * L + j)] = v;
      op.dense_[static_cast<std::size_t>(j * L + i)] = v;
    }
  }
  return op;
}

KernelOperator KernelOperator::fast(const GridSpec& g) {
  KernelOperator op(g, KernelMode::FastConvolution);
  auto plan = std::make_shared<detail::ConvPlan>();

  const int n = g.dimension;
  const std::size_t span = static_cast<std::size_t>(g.axis_points());
  for (int i = 0; i < n; ++i) {
    plan->dims[static_cast<std::size_t>(i)] = detail::next_pow2(2 * span - 1);
    plan->total *= plan->dims[static_cast<std::size_t>(i)];
  }
  for (int i = n - 1; i >= 0; --i) {
    plan->stride[static_cast<std::size_t>(i)] =
        (i == n - 1) ? 1
                     : plan->stride[static_cast<std::size_t>(i + 1)] *
                           plan->dims[static_cast<std::size_t>(i + 1)];
  }
  for (int i = 0; i < n; ++i)
    plan->ffts.emplace_back(plan->dims[static_cast<std::size_t>(i)]);

  // Kernel tensor on offsets x in (-span, span)^n, wrapped cyclically.
  plan->khat.assign(plan->total, {0.0, 0.0});
  std::array<int, kMaxDimension> x{};
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = -(static_cast<int>(span) - 1);
  while (true) {
    std::int64_t sq = 0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const int xi = x[static_cast<std::size_t>(i)];
      sq += static_cast<std::int64_t>(xi) * xi;
      const std::size_t wrapped =
          xi >= 0 ? static_cast<std::size_t>(xi)
                  : plan->dims[static_cast<std::size_t>(i)] +
                        static_cast<std::size_t>(xi);
      idx += wrapped * plan->stride[static_cast<std::size_t>(i)];
    }
    if (sq != 0) plan->khat[idx] = kernel_value_sq(sq, n);

    int axis = n - 1;
    while (axis >= 0 &&
           x[static_cast<std::size_t>(axis)] == static_cast<int>(span) - 1) {
      x[static_cast<std::size_t>(axis)] = -(static_cast<int>(span) - 1);
      --axis;
    }
    if (axis < 0) break;
    ++x[static_cast<std::size_t>(axis)];
  }
  fft_all_axes(plan->khat.data(), *plan, n, /*invert=*/false);

  // Embedding of grid indices into the padded tensor (coordinates shifted
  // to zero base occupy the low corner).
  const std::int64_t L = g.num_points();
  plan->embed.resize(static_cast<std::size_t>(L));
  for (std::int64_t i = 0; i < L; ++i) {
    const LatticePoint p = point_of(i, g);
    std::size_t idx = 0;
    for (int a = 0; a < n; ++a)
      idx += static_cast<std::size_t>(p[a] - g.coord_min()) *
             plan->stride[static_cast<std::size_t>(a)];
    plan->embed[static_cast<std::size_t>(i)] = idx;
  }

  op.plan_ = std::move(plan);
  return op;
}

KernelOperator KernelOperator::make(const GridSpec& g,
                                    std::int64_t dense_limit) {
  return g.num_points() <= dense_limit ? dense(g, dense_limit) : fast(g);
}

void KernelOperator::apply(std::span<const double> v,
                           std::span<double> out) const {
  if (static_cast<std::int64_t>(v.size()) != size_ ||
      static_cast<std::int64_t>(out.size()) != size_)
    throw std::invalid_argument(
        "KernelOperator::apply: vector length " + std::to_string(v.size()) +
        " does not match grid size " + std::to_string(size_));
  if (mode_ == KernelMode::Dense)
    apply_dense(v, out);
  else
    apply_fast(v, out);
}

void KernelOperator::apply_dense(std::span<const double> v,
                                 std::span<double> out) const {
  const std::size_t L = static_cast<std::size_t>(size_);
  for (std::size_t i = 0; i < L; ++i) {
    KahanSum row;
    const double* a = dense_.data() + i * L;
    for (std::size_t j = 0; j < L; ++j) row.add(a[j] * v[j]);
    out[i] = row.value();
  }
}

void KernelOperator::apply_fast(std::span<const double> v,
                                std::span<double> out) const {
  const detail::ConvPlan& plan = *plan_;
  std::vector<std::complex<double>> buf(plan.total, {0.0, 0.0});
  for (std::size_t i = 0; i < v.size(); ++i) buf[plan.embed[i]] = v[i];

  fft_all_axes(buf.data(), plan, grid_.dimension, /*invert=*/false);
  for (std::size_t j = 0; j < plan.total; ++j) buf[j] *= plan.khat[j];
  fft_all_axes(buf.data(), plan, grid_.dimension, /*invert=*/true);

  const double scale = 1.0 / static_cast<double>(plan.total);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = buf[plan.embed[i]].real() * scale;
}

std::vector<double> KernelOperator::matvec(std::span<const double> v) const {
  std::vector<double> out(static_cast<std::size_t>(size_));
  apply(v, out);
  return out;
}

double KernelOperator::quadratic_form(std::span<const double> a,
                                      std::span<const double> b) const {
  if (static_cast<std::int64_t>(a.size()) != size_ ||
      static_cast<std::int64_t>(b.size()) != size_)
    throw std::invalid_argument(
        "KernelOperator::quadratic_form: vector length mismatch");
  const std::vector<double> Ab = matvec(b);
  return kahan_dot(a, Ab);
}

double KernelOperator::entry(std::int64_t i, std::int64_t j) const {
  if (mode_ == KernelMode::Dense)
    return dense_[static_cast<std::size_t>(i * size_ + j)];
  return kernel_value_sq(
      squared_distance(point_of(i, grid_), point_of(j, grid_),
                       grid_.dimension),
      grid_.dimension);
}

const std::vector<double>& KernelOperator::dense_data() const {
  if (mode_ != KernelMode::Dense)
    throw std::logic_error("dense_data: operator is in FastConvolution mode");
  return dense_;
}

double row_sum(const GridSpec& g, const LatticePoint& s0) {
  if (!g.contains(s0))
    throw std::out_of_range("row_sum: point outside grid box");
  const std::int64_t L = g.num_points();
  KahanSum sum;
  for (std::int64_t i = 0; i < L; ++i) {
    const LatticePoint p = point_of(i, g);
    sum.add(kernel_value_sq(squared_distance(p, s0, g.dimension), g.dimension));
  }
  return sum.value();  // the s0 term contributes k(0) = 0
}

double offset_pair_sum(const GridSpec& g) {
  const int n = g.dimension;
  const int span = g.axis_points();
  std::array<int, kMaxDimension> x{};
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = -(span - 1);
  KahanSum sum;
  while (true) {
    std::int64_t sq = 0;
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      const int xi = x[static_cast<std::size_t>(i)];
      sq += static_cast<std::int64_t>(xi) * xi;
      weight *= static_cast<double>(span - std::abs(xi));
    }
    if (sq != 0) sum.add(weight * kernel_value_sq(sq, n));

    int axis = n - 1;
    while (axis >= 0 && x[static_cast<std::size_t>(axis)] == span - 1) {
      x[static_cast<std::size_t>(axis)] = -(span - 1);
      --axis;
    }
    if (axis < 0) break;
    ++x[static_cast<std::size_t>(axis)];
  }
  return sum.value();
}

}  // namespace dhls
