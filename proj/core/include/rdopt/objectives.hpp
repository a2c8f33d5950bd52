#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rdopt/cohesive_chain.hpp"
#include "rdopt/design_space.hpp"

namespace rdopt {

enum class FailurePolicy { abort, penalty };

struct ObjectiveConfig {
  std::string kind = "herbie_step";

  // herbie_step / step
  double c_step = 0.5;
  double x_step = 0.0;

  // quadratic: value x'Ax + b'x + c with A row-major symmetric
  std::vector<double> quad_a;
  Vec quad_b;
  double quad_c = 0.0;

  // external
  std::string command;
  double timeout_seconds = 30.0;
  FailurePolicy failure_policy = FailurePolicy::abort;
  double penalty_value = 0.0;

  // cohesive_chain
  ChainConfig chain;

  void validate() const;
};

// Product of per-axis two-well profiles plus one additive step on the first
// coordinate.
double herbie_step(const Vec& x, double c_step, double x_step);

// Deterministic scalar objective over physical design vectors.  Evaluations
// are safe to issue concurrently from several threads.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double evaluate(const Vec& x) const = 0;
  // Dimension the objective requires, or 0 when any dimension works.
  virtual int dimension() const { return 0; }
};

std::unique_ptr<Objective> make_objective(const ObjectiveConfig& cfg);

// Runs the configured command once: the design goes to its standard input as
// one space-separated line, the quantity of interest comes back as a single
// number on standard output.  Nonzero exit, timeout, or unparsable output
// raises EvalError.
double external_eval(const std::string& command, const Vec& x,
                     double timeout_seconds);

}  // namespace rdopt
