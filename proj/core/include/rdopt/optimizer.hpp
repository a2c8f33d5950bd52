#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "rdopt/dataset.hpp"
#include "rdopt/design_space.hpp"
#include "rdopt/smoothing.hpp"
#include "rdopt/subproblem.hpp"

namespace rdopt {

// Hyperparameters of the adaptive move-limit search loop.  sigma_target and
// sigma_max are expressed in internal units, where the per-axis target
// deviation equals 1 by construction.
struct MoveLimitConfig {
  double gamma_pan = 1.2;
  double gamma_osc = 0.8;
  double eta = 0.8;
  double beta = 2.0;
  int alpha = 3;
  int n0 = 0;  // 0: resolved to 3*d at run construction
  double sigma_target = 1.0;
  double sigma_max = 10.0;
  int k_max = 100;
  double delta = 3.0;  // sampling box extension, in units of current sigma
  SubproblemConfig subproblem;

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Per-axis range factor and deviation update.  step entries must already be
// normalized by the range factors and clipped to [-1, 1]; prev_step is null
// on the first iteration.
void move_limit_update(const Vec& step, const Vec* prev_step, Vec& ranges,
                       Vec& sigmas, const MoveLimitConfig& cfg);

// Evaluates a batch of designs given in physical units, preserving order.
using BatchEvaluator =
    std::function<std::vector<double>(const std::vector<Vec>&)>;

struct IterationRecord {
  int k = 0;
  Vec x;  // accepted iterate, internal units
  double f_center = 0.0;
  double f_accepted = 0.0;
  Vec step;
  Vec ranges;
  Vec sigmas;
  double best_value = 0.0;
  Vec best_x;
};

struct RunReport {
  Vec x_final;
  double f_final = 0.0;
  Vec sigmas_final;
  double best_value = 0.0;
  Vec best_x;
  std::vector<IterationRecord> trace;
};

// One seeded optimization run.  Construction allocates the quasi-random point
// set; initialize() performs the space-filling stage, then iterate() advances
// one iteration at a time until finished().  All designs handled here are in
// internal units; the evaluator alone sees physical coordinates.
class OptimizationRun {
 public:
  OptimizationRun(const DesignSpace& space, const MoveLimitConfig& cfg,
                  std::int64_t samples, std::int64_t skip, std::uint64_t seed);

  void initialize(const BatchEvaluator& evaluate);

  // Rebuilds state from persisted evaluation records and, when present, the
  // last persisted iteration record.  Records must be supplied in their
  // original insertion order.
  void restore(const std::vector<EvaluationRecord>& records,
               const IterationRecord* last);

  bool initialized() const { return initialized_; }
  bool finished() const { return k_ > cfg_.k_max; }
  int next_iteration() const { return k_; }

  IterationRecord iterate(const BatchEvaluator& evaluate);

  RunReport report() const;

  const NNIndex& data() const { return index_; }
  const DesignSpace& space() const { return *space_; }
  const MoveLimitConfig& config() const { return cfg_; }
  std::uint64_t seed() const { return seed_; }
  const Vec& doe_best() const { return doe_best_x_; }
  const std::vector<IterationRecord>& trace() const { return trace_; }

  // Records appended by the most recent initialize()/iterate() call.
  const std::vector<EvaluationRecord>& last_batch() const {
    return last_batch_;
  }

  // Mean of the smoothed objective at x for the current dataset, using the
  // supplied deviations (internal units).
  double smoothed_value(const Vec& x, const Vec& sigmas) const;

 private:
  std::vector<double> evaluate_batch(const std::vector<Vec>& sites,
                                     const BatchEvaluator& evaluate, int tag_iteration,
                                     RecordTag tag);
  void note_raw(const Vec& site, double value);

  const DesignSpace* space_;
  MoveLimitConfig cfg_;
  std::uint64_t seed_;
  SmoothedEstimator estimator_;
  NNIndex index_;

  bool initialized_ = false;
  int k_ = 1;
  Vec x_;
  Vec ranges_;
  Vec sigmas_;
  Vec prev_step_;
  bool have_prev_step_ = false;
  double best_value_ = 0.0;
  Vec best_x_;
  bool have_best_ = false;
  Vec doe_best_x_;
  std::vector<IterationRecord> trace_;
  std::vector<EvaluationRecord> last_batch_;
};

}  // namespace rdopt
