#include "rdopt/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "rdopt/sobol_directions.hpp"

namespace rdopt {

namespace {

// Rational approximation for the central and tail regions (Acklam).
double quantile_estimate(double u) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double ulow = 0.02425;
  if (u < ulow) {
    double q = std::sqrt(-2.0 * std::log(u));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = u - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * 0.3989422804014326779;
}

// Valid for u <= 0.5; the public function reduces to this half-line.
double quantile_lower_half(double u) {
  double x = quantile_estimate(u);
  double err = normal_cdf(x) - u;
  double px = normal_pdf(x);
  if (px > 0.0) x -= err / px;
  return x;
}

}  // namespace

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw EvalError("normal_quantile: argument must be in (0,1)");
  // For u >= 0.5 the reflection 1-u is exact in floating point, so the
  // antisymmetry identity holds to the last bit.
  if (u > 0.5) return -quantile_lower_half(1.0 - u);
  return quantile_lower_half(u);
}

SobolGenerator::SobolGenerator(int dimension, std::int64_t skip)
    : d_(dimension), index_(0) {
  using namespace detail;
  if (dimension < 1) throw ConfigError("sobol dimension must be >= 1");
  if (dimension > kSobolMaxDim)
    throw ConfigError("sobol dimension exceeds tabulated direction numbers (" +
                      std::to_string(kSobolMaxDim) + ")");
  if (skip < 0) throw ConfigError("sobol skip must be >= 0");
  constexpr int kBits = 31;
  directions_.assign(static_cast<std::size_t>(d_) * kBits, 0);
  for (int dim = 0; dim < d_; ++dim) {
    std::uint32_t* v = directions_.data() + static_cast<std::size_t>(dim) * kBits;
    if (dim == 0) {
      for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
      continue;
    }
    const unsigned poly = kSobolPoly[dim];
    const int s = std::bit_width(poly) - 1;
    const unsigned* m = kSobolInit + kSobolInitOffset[dim];
    for (int k = 0; k < kBits; ++k) {
      if (k < s) {
        v[k] = m[k] << (kBits - 1 - k);
      } else {
        std::uint32_t val = v[k - s] ^ (v[k - s] >> s);
        for (int i = 1; i < s; ++i)
          if ((poly >> (s - i)) & 1u) val ^= v[k - i];
        v[k] = val;
      }
    }
  }
  state_.assign(d_, 0);
  double dummy[1];
  for (std::int64_t i = 0; i < skip; ++i) next(d_ == 1 ? dummy : nullptr);
}

void SobolGenerator::next(double* out) {
  constexpr int kBits = 31;
  constexpr double kScale = 0x1.0p-31;
  // Gray-code step: point k flips the bit at ctz(k), k starting from 1
  // so the all-zero point never appears.
  ++index_;
  const int bit = std::countr_zero(static_cast<std::uint64_t>(index_));
  for (int dim = 0; dim < d_; ++dim) {
    state_[dim] ^= directions_[static_cast<std::size_t>(dim) * kBits + bit];
    if (out) out[dim] = static_cast<double>(state_[dim]) * kScale;
  }
}

int SobolGenerator::max_dimension() { return detail::kSobolMaxDim; }

std::vector<double> sobol_unit_points(const SobolSet& set) {
  if (set.count < 1) throw ConfigError("sobol count must be >= 1");
  if (set.count > (std::int64_t{1} << 31))
    throw ConfigError("sobol count must be <= 2^31");
  SobolGenerator gen(set.dimension, set.skip);
  std::vector<double> pts(static_cast<std::size_t>(set.count) * set.dimension);
  for (std::int64_t i = 0; i < set.count; ++i)
    gen.next(pts.data() + static_cast<std::size_t>(i) * set.dimension);
  return pts;
}

void unit_to_normal(std::vector<double>& points, const Vec& mean,
                    const Vec& sigmas) {
  const std::size_t d = mean.size();
  if (sigmas.size() != d) throw ConfigError("unit_to_normal: size mismatch");
  if (d == 0 || points.size() % d != 0)
    throw ConfigError("unit_to_normal: point buffer not a multiple of d");
  for (std::size_t i = 0; i < points.size(); i += d)
    for (std::size_t j = 0; j < d; ++j)
      points[i + j] = mean[j] + sigmas[j] * normal_quantile(points[i + j]);
}

std::vector<Vec> latin_hypercube(int n, const DesignSpace& space,
                                 SeededStream& stream) {
  if (n < 1) throw ConfigError("latin_hypercube: n must be >= 1");
  const int d = space.dim();
  std::vector<Vec> pts(n, Vec(d));
  std::vector<int> perm(n);
  for (int axis = 0; axis < d; ++axis) {
    for (int i = 0; i < n; ++i) perm[i] = i;
    // Fisher-Yates driven by the stream, high-to-low for determinism.
    for (int i = n - 1; i > 0; --i) {
      int j = static_cast<int>(stream.uniform() * (i + 1));
      if (j > i) j = i;
      std::swap(perm[i], perm[j]);
    }
    const double w = space.internal_width(axis);
    for (int i = 0; i < n; ++i)
      pts[i][axis] = (perm[i] + stream.uniform()) / n * w;
  }
  return pts;
}

std::vector<Vec> sample_truncated_normal(const Vec& mean, const Vec& sigmas,
                                         int n, const ExtendedBox& box,
                                         const DesignSpace& space,
                                         SeededStream& stream) {
  const int d = space.dim();
  if (static_cast<int>(mean.size()) != d || static_cast<int>(sigmas.size()) != d)
    throw ConfigError("sample_truncated_normal: size mismatch");
  std::vector<Vec> out(n, Vec(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      if (space.periodic(j)) {
        out[i][j] = space.wrap(j, mean[j] + sigmas[j] * stream.standard_normal());
        continue;
      }
      bool accepted = false;
      for (int attempt = 0; attempt < 1000; ++attempt) {
        double v = mean[j] + sigmas[j] * stream.standard_normal();
        if (v >= box.lo(j) && v <= box.hi(j)) {
          out[i][j] = v;
          accepted = true;
          break;
        }
      }
      if (!accepted)
        throw ConfigError(
            "truncated-normal rejection budget exhausted; delta*sigma is "
            "inconsistent with the box width on axis " + std::to_string(j));
    }
  }
  return out;
}

}  // namespace rdopt
