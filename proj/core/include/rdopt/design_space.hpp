#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rdopt {

using Vec = std::vector<double>;

// Thrown for invalid configuration (CLI maps it to exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an objective evaluation or solver fails (exit code 3).
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AxisSpec {
  double lower = 0.0;
  double upper = 1.0;
  bool periodic = false;
  double sigma = 1.0;  // target perturbation scale, physical units
};

// Feasible box B plus the affine map onto internal units, where every
// axis has target standard deviation exactly 1. scale_i = 1/sigma_i, so
// heterogeneous physical variables share one Euclidean metric.
class DesignSpace {
 public:
  explicit DesignSpace(std::vector<AxisSpec> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int i) const { return axes_[i]; }
  bool periodic(int i) const { return axes_[i].periodic; }
  double scale(int i) const { return scale_[i]; }
  // Box width of axis i in internal units (also the wrap period).
  double internal_width(int i) const { return width_[i]; }

  Vec to_internal(const Vec& physical) const;
  Vec to_physical(const Vec& internal) const;

  // Reduce a periodic coordinate into [0, width); identity otherwise.
  double wrap(int i, double v) const;

  // Projection onto B (internal units): clamp bounded axes, wrap
  // periodic ones.
  Vec clamp(Vec x) const;
  bool contains(const Vec& x) const;

  // Minimal axis difference a-b respecting periodicity, internal units.
  double axis_distance(int i, double a, double b) const;

 private:
  std::vector<AxisSpec> axes_;
  Vec scale_;
  Vec width_;
};

// Sampling box B_delta: B extended by delta*sigma_i per axis in internal
// units. Periodic axes are unbounded. sigmas may vary per axis because
// the optimizer adapts them independently.
class ExtendedBox {
 public:
  ExtendedBox(const DesignSpace& space, double delta, Vec sigmas);
  ExtendedBox(const DesignSpace& space, double delta, double sigma);

  double lo(int i) const { return lo_[i]; }
  double hi(int i) const { return hi_[i]; }
  bool periodic(int i) const { return space_->periodic(i); }
  int dim() const { return space_->dim(); }
  bool contains(const Vec& x) const;

 private:
  const DesignSpace* space_;
  Vec lo_, hi_;
};

}  // namespace rdopt
