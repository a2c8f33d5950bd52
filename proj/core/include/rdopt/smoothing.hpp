#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rdopt/design_space.hpp"
#include "rdopt/sampling.hpp"

namespace rdopt {

struct SmoothingConfig {
  Vec sigmas;
  std::int64_t M = 1 << 16;
  std::int64_t skip = 0;
  double delta = 3.0;
};

double gaussian_pdf(const Vec& y, const Vec& x, const Vec& sigmas);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct Moments {
  double value = 0.0;
  Vec gradient;
  std::vector<double> hessian;  // d x d row-major, symmetric
};

// Monte-Carlo estimators of the Gaussian-smoothed objective and its
// score-function gradient/Hessian, all over one shared quasi-random
// point set: z_i = x + sigmas .* W_i with W = quantile(Sobol). Sharing W
// across every (x, sigmas) evaluation makes the estimates smooth,
// deterministic functions of x, which is what the sub-problem solver
// differentiates. Reductions run in a fixed pairwise tree so results do
// not depend on evaluation batching.
class SmoothedEstimator {
 public:
  SmoothedEstimator(int d, std::int64_t M, std::int64_t skip = 0);

  int dim() const { return d_; }
  std::int64_t samples() const { return M_; }

  // w offsets of sample i (length d).
  const double* offsets(std::int64_t i) const { return W_.data() + i * d_; }

  template <class Field>
  Estimate value(const Vec& x, const Vec& sigmas, Field&& field) const;

  template <class Field>
  Vec gradient(const Vec& x, const Vec& sigmas, Field&& field) const;

  template <class Field>
  std::vector<double> hessian(const Vec& x, const Vec& sigmas,
                              Field&& field) const;

  // Value, gradient and Hessian from one sweep over the shared points.
  template <class Field>
  Moments moments(const Vec& x, const Vec& sigmas, Field&& field) const;

 private:
  template <class Acc>
  void reduce_blocks(std::int64_t lo, std::int64_t hi, Acc& acc) const;

  int d_;
  std::int64_t M_;
  std::vector<double> W_;  // M x d, row-major
};

namespace detail {

constexpr std::int64_t kReduceBase = 1024;

// Fixed-shape pairwise sum over vals[lo, hi): recursive halving down to
// the base block, serial within it. The shape depends only on (lo, hi),
// never on threading, so sums are bit-stable.
inline double pairwise_sum(const double* vals, std::int64_t lo, std::int64_t hi) {
  if (hi - lo <= kReduceBase) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += vals[i];
    return s;
  }
  std::int64_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(vals, lo, mid) + pairwise_sum(vals, mid, hi);
}

inline double pairwise_sqdev(const double* vals, std::int64_t lo,
                             std::int64_t hi, double mean) {
  if (hi - lo <= kReduceBase) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      double dv = vals[i] - mean;
      s += dv * dv;
    }
    return s;
  }
  std::int64_t mid = lo + (hi - lo) / 2;
  return pairwise_sqdev(vals, lo, mid, mean) + pairwise_sqdev(vals, mid, hi, mean);
}

// Pairwise reduction of per-sample moment contributions. Acc must have
// init(k), block(lo,hi,out) computing the serial sum of a block into
// out[0..k), and length k.
template <class Block>
void pairwise_block(std::int64_t lo, std::int64_t hi, int k, double* out,
                    Block&& block) {
  if (hi - lo <= kReduceBase) {
    block(lo, hi, out);
    return;
  }
  std::int64_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(k, 0.0);
  pairwise_block(lo, mid, k, out, block);
  pairwise_block(mid, hi, k, right.data(), block);
  for (int i = 0; i < k; ++i) out[i] += right[i];
}

}  // namespace detail

template <class Field>
Estimate SmoothedEstimator::value(const Vec& x, const Vec& sigmas,
                                  Field&& field) const {
  // Local buffer keeps const calls safe to run from several threads at once.
  std::vector<double> vals(M_);
  Vec z(d_);
  for (std::int64_t i = 0; i < M_; ++i) {
    const double* w = offsets(i);
    for (int j = 0; j < d_; ++j) z[j] = x[j] + sigmas[j] * w[j];
    vals[i] = field(z.data());
  }
  double mean = detail::pairwise_sum(vals.data(), 0, M_) / static_cast<double>(M_);
  double var = M_ > 1 ? detail::pairwise_sqdev(vals.data(), 0, M_, mean) /
                            static_cast<double>(M_ - 1)
                      : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(M_))};
}

template <class Field>
Moments SmoothedEstimator::moments(const Vec& x, const Vec& sigmas,
                                   Field&& field) const {
  const int d = d_;
  const int ng = d;
  const int nh = d * (d + 1) / 2;
  const int k = 1 + ng + nh;
  std::vector<double> sums(k, 0.0);
  Vec z(d);
  auto block = [&](std::int64_t lo, std::int64_t hi, double* out) {
    Vec zz(d);
    for (std::int64_t i = lo; i < hi; ++i) {
      const double* w = offsets(i);
      for (int j = 0; j < d; ++j) zz[j] = x[j] + sigmas[j] * w[j];
      double v = field(zz.data());
      out[0] += v;
      int h = 1 + ng;
      for (int a = 0; a < d; ++a) {
        out[1 + a] += v * w[a] / sigmas[a];
        for (int b = a; b < d; ++b) {
          double t = w[a] * w[b] / (sigmas[a] * sigmas[b]);
          if (a == b) t -= 1.0 / (sigmas[a] * sigmas[a]);
          out[h++] += v * t;
        }
      }
    }
  };
  detail::pairwise_block(0, M_, k, sums.data(), block);

  Moments m;
  const double inv_M = 1.0 / static_cast<double>(M_);
  m.value = sums[0] * inv_M;
  m.gradient.resize(d);
  for (int a = 0; a < d; ++a) m.gradient[a] = sums[1 + a] * inv_M;
  m.hessian.assign(static_cast<std::size_t>(d) * d, 0.0);
  int h = 1 + ng;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double v = sums[h++] * inv_M;
      m.hessian[static_cast<std::size_t>(a) * d + b] = v;
      m.hessian[static_cast<std::size_t>(b) * d + a] = v;
    }
  return m;
}

template <class Field>
Vec SmoothedEstimator::gradient(const Vec& x, const Vec& sigmas,
                                Field&& field) const {
  const int d = d_;
  std::vector<double> sums(d, 0.0);
  auto block = [&](std::int64_t lo, std::int64_t hi, double* out) {
    Vec zz(d);
    for (std::int64_t i = lo; i < hi; ++i) {
      const double* w = offsets(i);
      for (int j = 0; j < d; ++j) zz[j] = x[j] + sigmas[j] * w[j];
      double v = field(zz.data());
      for (int a = 0; a < d; ++a) out[a] += v * w[a] / sigmas[a];
    }
  };
  detail::pairwise_block(0, M_, d, sums.data(), block);
  Vec g(d);
  for (int a = 0; a < d; ++a) g[a] = sums[a] / static_cast<double>(M_);
  return g;
}

template <class Field>
std::vector<double> SmoothedEstimator::hessian(const Vec& x, const Vec& sigmas,
                                               Field&& field) const {
  Moments m = moments(x, sigmas, std::forward<Field>(field));
  return std::move(m.hessian);
}

}  // namespace rdopt
