#include "rdopt/smoothing.hpp"

namespace rdopt {

double gaussian_pdf(const Vec& y, const Vec& x, const Vec& sigmas) {
  const std::size_t d = x.size();
  if (y.size() != d || sigmas.size() != d)
    throw ConfigError("gaussian_pdf: dimension mismatch");
  double quad = 0.0;
  double norm = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    double t = (y[i] - x[i]) / sigmas[i];
    quad += t * t;
    norm *= sigmas[i];
  }
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  double amp = 1.0;
  for (std::size_t i = 0; i < d; ++i) amp *= kInvSqrt2Pi;
  return amp / norm * std::exp(-0.5 * quad);
}

SmoothedEstimator::SmoothedEstimator(int d, std::int64_t M, std::int64_t skip)
    : d_(d), M_(M) {
  if (M < 2) throw ConfigError("estimator needs M >= 2");
  SobolSet set{d, M, skip};
  W_ = sobol_unit_points(set);
  for (double& u : W_) u = normal_quantile(u);
}

}  // namespace rdopt
