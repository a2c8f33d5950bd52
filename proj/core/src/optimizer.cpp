#include "rdopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rdopt/sampling.hpp"

namespace rdopt {
namespace {

constexpr double kCacheDist2 = 1e-28;  // (1e-14)^2 reuse radius, internal units

std::string num(double v) { return std::to_string(v); }

}  // namespace

void MoveLimitConfig::validate() const {
  if (!(gamma_osc > 0.0))
    throw ConfigError("invariant violated: gamma_osc > 0 (gamma_osc=" +
                      num(gamma_osc) + ")");
  if (!(gamma_osc <= eta))
    throw ConfigError("invariant violated: gamma_osc <= eta (gamma_osc=" +
                      num(gamma_osc) + ", eta=" + num(eta) + ")");
  if (!(eta <= 1.0))
    throw ConfigError("invariant violated: eta <= 1 (eta=" + num(eta) + ")");
  if (!(gamma_pan >= 1.0))
    throw ConfigError("invariant violated: gamma_pan >= 1 (gamma_pan=" +
                      num(gamma_pan) + ")");
  if (!(beta >= 1.0 && beta <= 3.0))
    throw ConfigError("invariant violated: beta in [1, 3] (beta=" + num(beta) +
                      ")");
  if (!(alpha >= 2 && alpha <= 10))
    throw ConfigError("invariant violated: alpha in [2, 10] (alpha=" +
                      std::to_string(alpha) + ")");
  if (!(sigma_target > 0.0))
    throw ConfigError("invariant violated: sigma_target > 0 (sigma_target=" +
                      num(sigma_target) + ")");
  if (!(sigma_target <= sigma_max))
    throw ConfigError(
        "invariant violated: sigma_target <= sigma_max (sigma_target=" +
        num(sigma_target) + ", sigma_max=" + num(sigma_max) + ")");
  if (k_max < 1)
    throw ConfigError("invariant violated: k_max >= 1 (k_max=" +
                      std::to_string(k_max) + ")");
  if (n0 < 0)
    throw ConfigError("invariant violated: n0 >= 0 (n0=" + std::to_string(n0) +
                      ")");
  if (!(delta > 0.0))
    throw ConfigError("invariant violated: delta > 0 (delta=" + num(delta) +
                      ")");
}

void move_limit_update(const Vec& step, const Vec* prev_step, Vec& ranges,
                       Vec& sigmas, const MoveLimitConfig& cfg) {
  const std::size_t d = step.size();
  for (std::size_t i = 0; i < d; ++i) {
    double chat = 1.0;
    if (prev_step) {
      const double c = step[i] * (*prev_step)[i];
      chat = std::copysign(std::sqrt(std::fabs(c)), c);
      if (c == 0.0) chat = 0.0;
    }
    const double gamma =
        0.5 * (cfg.gamma_pan * (1.0 + chat) + cfg.gamma_osc * (1.0 - chat));
    const double lambda = cfg.eta + std::fabs(step[i]) * (gamma - cfg.eta);
    ranges[i] *= lambda;
    sigmas[i] = std::min(std::max(ranges[i] / cfg.beta, cfg.sigma_target),
                         cfg.sigma_max);
  }
}

OptimizationRun::OptimizationRun(const DesignSpace& space,
                                 const MoveLimitConfig& cfg,
                                 std::int64_t samples, std::int64_t skip,
                                 std::uint64_t seed)
    : space_(&space),
      cfg_(cfg),
      seed_(seed),
      estimator_(static_cast<int>(space.dim()), samples, skip),
      index_(space) {
  if (cfg_.n0 <= 0) cfg_.n0 = 3 * static_cast<int>(space.dim());
  cfg_.validate();
}

void OptimizationRun::note_raw(const Vec& site, double value) {
  if (!have_best_ || value < best_value_) {
    best_value_ = value;
    best_x_ = site;
    have_best_ = true;
  }
}

std::vector<double> OptimizationRun::evaluate_batch(
    const std::vector<Vec>& sites, const BatchEvaluator& evaluate,
    int tag_iteration, RecordTag tag) {
  const std::size_t n = sites.size();
  std::vector<double> values(n, 0.0);
  std::vector<std::size_t> pending;
  pending.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool cached = false;
    if (!index_.empty()) {
      const NNResult hit = index_.nearest(sites[i]);
      if (hit.dist2 <= kCacheDist2) {
        values[i] = index_.record(hit.index).value;
        cached = true;
      }
    }
    if (!cached) pending.push_back(i);
  }
  if (!pending.empty()) {
    std::vector<Vec> physical;
    physical.reserve(pending.size());
    for (std::size_t i : pending)
      physical.push_back(space_->to_physical(sites[i]));
    const std::vector<double> fresh = evaluate(physical);
    if (fresh.size() != pending.size())
      throw EvalError("batch evaluator returned " +
                      std::to_string(fresh.size()) + " values for " +
                      std::to_string(pending.size()) + " designs");
    for (std::size_t j = 0; j < pending.size(); ++j)
      values[pending[j]] = fresh[j];
  }
  last_batch_.clear();
  last_batch_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    EvaluationRecord rec{sites[i], values[i], tag_iteration, tag};
    index_.insert(rec);
    last_batch_.push_back(index_.record(index_.size() - 1));
    note_raw(sites[i], values[i]);
  }
  return values;
}

void OptimizationRun::initialize(const BatchEvaluator& evaluate) {
  if (initialized_) throw std::logic_error("run already initialized");
  SeededStream stream(seed_, 0);
  const std::vector<Vec> sites = latin_hypercube(cfg_.n0, *space_, stream);
  const std::vector<double> values =
      evaluate_batch(sites, evaluate, 0, RecordTag::doe);

  std::size_t arg = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[arg]) arg = i;
  x_ = sites[arg];
  doe_best_x_ = x_;

  const std::size_t d = space_->dim();
  ranges_.assign(d, cfg_.beta * cfg_.sigma_max);
  sigmas_.assign(d, cfg_.sigma_max);
  k_ = 1;
  initialized_ = true;
}

void OptimizationRun::restore(const std::vector<EvaluationRecord>& records,
                              const IterationRecord* last) {
  if (initialized_) throw std::logic_error("run already initialized");
  if (records.size() < static_cast<std::size_t>(cfg_.n0))
    throw ConfigError("dataset holds fewer records than the planned " +
                      std::to_string(cfg_.n0) + " space-filling evaluations");
  for (const EvaluationRecord& rec : records) {
    index_.insert(rec);
    note_raw(rec.site, rec.value);
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < static_cast<std::size_t>(cfg_.n0); ++i)
    if (records[i].value < records[arg].value) arg = i;
  doe_best_x_ = records[arg].site;

  const std::size_t d = space_->dim();
  if (last) {
    k_ = last->k + 1;
    x_ = last->x;
    ranges_ = last->ranges;
    sigmas_ = last->sigmas;
    prev_step_ = last->step;
    have_prev_step_ = true;
    best_value_ = last->best_value;
    best_x_ = last->best_x;
    have_best_ = true;
  } else {
    k_ = 1;
    x_ = doe_best_x_;
    ranges_.assign(d, cfg_.beta * cfg_.sigma_max);
    sigmas_.assign(d, cfg_.sigma_max);
  }
  initialized_ = true;
}

double OptimizationRun::smoothed_value(const Vec& x, const Vec& sigmas) const {
  index_.prepare();
  const NNIndex& index = index_;
  return estimator_
      .value(x, sigmas, [&index](const double* z) { return index.nn_predict(z); })
      .mean;
}

IterationRecord OptimizationRun::iterate(const BatchEvaluator& evaluate) {
  if (!initialized_) throw std::logic_error("run not initialized");
  if (finished()) throw std::logic_error("iteration cap already reached");

  const std::size_t d = space_->dim();
  SeededStream stream(seed_, static_cast<std::uint64_t>(k_));
  const ExtendedBox box(*space_, cfg_.delta, sigmas_);
  const int n_new = cfg_.alpha * static_cast<int>(d);
  const std::vector<Vec> sites =
      sample_truncated_normal(x_, sigmas_, n_new, box, *space_, stream);
  evaluate_batch(sites, evaluate, k_, RecordTag::perturbation);
  index_.prepare();

  Vec roi_lo(d), roi_hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (space_->periodic(i)) {
      const double half = std::min(ranges_[i], 0.5 * space_->internal_width(i));
      roi_lo[i] = x_[i] - half;
      roi_hi[i] = x_[i] + half;
    } else {
      roi_lo[i] = std::max(x_[i] - ranges_[i], 0.0);
      roi_hi[i] = std::min(x_[i] + ranges_[i], space_->internal_width(i));
    }
  }

  const NNIndex& index = index_;
  const auto field = [&index](const double* z) { return index.nn_predict(z); };
  const MomentsFn moments = [this, &field](const Vec& p) {
    return estimator_.moments(p, sigmas_, field);
  };
  const ValueFn value = [this, &field](const Vec& p) {
    return estimator_.value(p, sigmas_, field).mean;
  };
  const SubproblemResult sub =
      solve_subproblem(x_, roi_lo, roi_hi, moments, value, cfg_.subproblem);

  Vec step(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double s = (sub.minimizer[i] - x_[i]) / ranges_[i];
    step[i] = std::clamp(s, -1.0, 1.0);
  }
  x_ = space_->clamp(sub.minimizer);
  move_limit_update(step, have_prev_step_ ? &prev_step_ : nullptr, ranges_,
                    sigmas_, cfg_);
  prev_step_ = step;
  have_prev_step_ = true;

  IterationRecord rec;
  rec.k = k_;
  rec.x = x_;
  rec.f_center = sub.center_value;
  rec.f_accepted = sub.value;
  rec.step = step;
  rec.ranges = ranges_;
  rec.sigmas = sigmas_;
  rec.best_value = best_value_;
  rec.best_x = best_x_;
  trace_.push_back(rec);
  ++k_;
  return rec;
}

RunReport OptimizationRun::report() const {
  RunReport rep;
  rep.x_final = x_;
  rep.f_final = trace_.empty() ? 0.0 : trace_.back().f_accepted;
  rep.sigmas_final = sigmas_;
  rep.best_value = best_value_;
  rep.best_x = best_x_;
  rep.trace = trace_;
  return rep;
}

}  // namespace rdopt
