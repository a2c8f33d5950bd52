#pragma once

#include <functional>

#include "rdopt/smoothing.hpp"

namespace rdopt {

struct SubproblemConfig {
  int budget = 5;
  double grad_tol = 1e-8;   // infinity norm, internal units
  double step_tol = 1e-10;  // infinity norm, internal units
};

struct SubproblemResult {
  Vec minimizer;
  double value = 0.0;         // smoothed objective at the minimizer
  double center_value = 0.0;  // smoothed objective at the center
  int iterations = 0;
};

using MomentsFn = std::function<Moments(const Vec&)>;
using ValueFn = std::function<double(const Vec&)>;

// Minimizes a smooth deterministic function (the shared-point smoothed
// estimate) over the box [roi_lo, roi_hi] by trust-region Newton steps.
// The Hessian is symmetrized and eigenvalue-floored to stay positive
// definite; each step solves a small box-constrained quadratic by cyclic
// coordinate descent. Only strict decreases are accepted, so
// result.value <= result.center_value holds exactly.
SubproblemResult solve_subproblem(const Vec& center, const Vec& roi_lo,
                                  const Vec& roi_hi, const MomentsFn& moments,
                                  const ValueFn& value,
                                  const SubproblemConfig& config = {});

}  // namespace rdopt
