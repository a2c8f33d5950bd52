#include "rdopt/design_space.hpp"

#include <cmath>

namespace rdopt {

DesignSpace::DesignSpace(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw ConfigError("design space needs at least one axis");
  scale_.reserve(axes_.size());
  width_.reserve(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    const AxisSpec& a = axes_[i];
    if (!(a.lower < a.upper))
      throw ConfigError("axis " + std::to_string(i) + ": lower must be < upper");
    if (!(a.sigma > 0.0))
      throw ConfigError("axis " + std::to_string(i) + ": sigma must be > 0");
    scale_.push_back(1.0 / a.sigma);
    width_.push_back((a.upper - a.lower) / a.sigma);
  }
}

Vec DesignSpace::to_internal(const Vec& physical) const {
  if (static_cast<int>(physical.size()) != dim())
    throw ConfigError("dimension mismatch in to_internal");
  Vec r(physical.size());
  for (int i = 0; i < dim(); ++i) {
    r[i] = (physical[i] - axes_[i].lower) * scale_[i];
    if (axes_[i].periodic) r[i] = wrap(i, r[i]);
  }
  return r;
}

Vec DesignSpace::to_physical(const Vec& internal) const {
  if (static_cast<int>(internal.size()) != dim())
    throw ConfigError("dimension mismatch in to_physical");
  Vec r(internal.size());
  for (int i = 0; i < dim(); ++i)
    r[i] = internal[i] / scale_[i] + axes_[i].lower;
  return r;
}

double DesignSpace::wrap(int i, double v) const {
  if (!axes_[i].periodic) return v;
  double w = width_[i];
  double r = std::fmod(v, w);
  if (r < 0.0) r += w;
  return r;
}

Vec DesignSpace::clamp(Vec x) const {
  for (int i = 0; i < dim(); ++i) {
    if (axes_[i].periodic) {
      x[i] = wrap(i, x[i]);
    } else {
      if (x[i] < 0.0) x[i] = 0.0;
      if (x[i] > width_[i]) x[i] = width_[i];
    }
  }
  return x;
}

bool DesignSpace::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (axes_[i].periodic) continue;
    if (x[i] < 0.0 || x[i] > width_[i]) return false;
  }
  return true;
}

double DesignSpace::axis_distance(int i, double a, double b) const {
  double d = a - b;
  if (!axes_[i].periodic) return d;
  double w = width_[i];
  d = std::fmod(d, w);
  if (d > 0.5 * w) d -= w;
  if (d < -0.5 * w) d += w;
  return d;
}

ExtendedBox::ExtendedBox(const DesignSpace& space, double delta, Vec sigmas)
    : space_(&space) {
  if (static_cast<int>(sigmas.size()) != space.dim())
    throw ConfigError("sigma vector dimension mismatch");
  if (!(delta > 0.0)) throw ConfigError("delta must be > 0");
  lo_.resize(sigmas.size());
  hi_.resize(sigmas.size());
  for (int i = 0; i < space.dim(); ++i) {
    if (!(sigmas[i] > 0.0)) throw ConfigError("sigma must be > 0");
    lo_[i] = -delta * sigmas[i];
    hi_[i] = space.internal_width(i) + delta * sigmas[i];
  }
}

ExtendedBox::ExtendedBox(const DesignSpace& space, double delta, double sigma)
    : ExtendedBox(space, delta, Vec(space.dim(), sigma)) {}

bool ExtendedBox::contains(const Vec& x) const {
  for (int i = 0; i < dim(); ++i) {
    if (space_->periodic(i)) continue;
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  }
  return true;
}

}  // namespace rdopt
