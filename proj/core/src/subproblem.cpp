#include "rdopt/subproblem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rdopt {

namespace {

// Largest-magnitude-relative eigenvalue floor keeps the model convex
// while scaling exactly with the field, so affine rescalings of the
// objective reproduce identical iterates.
std::vector<double> floor_eigenvalues(const std::vector<double>& H, int d) {
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      A(i, j) = 0.5 * (H[static_cast<std::size_t>(i) * d + j] +
                       H[static_cast<std::size_t>(j) * d + i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  Eigen::VectorXd w = es.eigenvalues();
  double wmax = 0.0;
  for (int i = 0; i < d; ++i) wmax = std::max(wmax, std::fabs(w(i)));
  double floor = 1e-8 * wmax;
  for (int i = 0; i < d; ++i) w(i) = std::max(w(i), floor);
  Eigen::MatrixXd R = es.eigenvectors() * w.asDiagonal() *
                      es.eigenvectors().transpose();
  std::vector<double> out(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(i) * d + j] = R(i, j);
  return out;
}

// min 1/2 p'Hp + g'p over lo <= p <= hi by cyclic coordinate descent
// with exact clipped one-dimensional minimization.
Vec solve_box_qp(const Vec& g, const std::vector<double>& H, const Vec& lo,
                 const Vec& hi) {
  const int d = static_cast<int>(g.size());
  Vec p(d, 0.0);
  for (int i = 0; i < d; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
  for (int pass = 0; pass < 60; ++pass) {
    double moved = 0.0;
    for (int i = 0; i < d; ++i) {
      const double* Hi = H.data() + static_cast<std::size_t>(i) * d;
      double r = g[i];
      for (int j = 0; j < d; ++j)
        if (j != i) r += Hi[j] * p[j];
      double pn;
      if (Hi[i] > 0.0) {
        pn = std::clamp(-r / Hi[i], lo[i], hi[i]);
      } else if (r > 0.0) {
        pn = lo[i];
      } else if (r < 0.0) {
        pn = hi[i];
      } else {
        pn = p[i];
      }
      moved = std::max(moved, std::fabs(pn - p[i]));
      p[i] = pn;
    }
    if (moved < 1e-14) break;
  }
  return p;
}

}  // namespace

SubproblemResult solve_subproblem(const Vec& center, const Vec& roi_lo,
                                  const Vec& roi_hi, const MomentsFn& moments,
                                  const ValueFn& value,
                                  const SubproblemConfig& config) {
  const int d = static_cast<int>(center.size());
  SubproblemResult res;
  res.minimizer = center;

  Moments m = moments(center);
  res.center_value = m.value;
  double F = m.value;

  double half_width = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i)
    half_width = std::min(half_width, 0.5 * (roi_hi[i] - roi_lo[i]));
  double trust = 0.5 * half_width;

  Vec x = center;
  for (int it = 0; it < config.budget; ++it) {
    double gmax = 0.0;
    for (double gi : m.gradient) gmax = std::max(gmax, std::fabs(gi));
    if (gmax <= config.grad_tol) break;
    res.iterations = it + 1;

    std::vector<double> Hf = floor_eigenvalues(m.hessian, d);
    Vec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = std::max(roi_lo[i] - x[i], -trust);
      hi[i] = std::min(roi_hi[i] - x[i], trust);
    }
    Vec p = solve_box_qp(m.gradient, Hf, lo, hi);
    double pmax = 0.0;
    for (double pi : p) pmax = std::max(pmax, std::fabs(pi));
    if (pmax <= config.step_tol) break;

    Vec xt(d);
    for (int i = 0; i < d; ++i) xt[i] = x[i] + p[i];
    double Ft = value(xt);

    double pred = 0.0;
    for (int i = 0; i < d; ++i) {
      double hp = 0.0;
      const double* Hi = Hf.data() + static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) hp += Hi[j] * p[j];
      pred -= (m.gradient[i] + 0.5 * hp) * p[i];
    }
    double rho = pred > 0.0 ? (F - Ft) / pred : -1.0;

    if (Ft < F) {
      x = xt;
      F = Ft;
      m = moments(x);
    }
    if (rho < 0.25)
      trust *= 0.25;
    else if (rho > 0.75)
      trust *= 2.0;
  }

  res.minimizer = x;
  res.value = F;
  return res;
}

}  // namespace rdopt
