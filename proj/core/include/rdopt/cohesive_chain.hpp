#pragma once

#include <vector>

#include "rdopt/design_space.hpp"

namespace rdopt {

// Exponential traction-separation law parameters.  q = phi_s / phi_n is
// derived; the coupling parameter r must stay away from 1 (pole in the
// potential).
struct CohesiveParams {
  double phi_n = 2.718e-5;
  double phi_s = 1.166e-5;
  double r = 0.0;
  double delta_n_star = 1e-4;
  double delta_s_star = 1e-4;

  double q() const { return phi_s / phi_n; }
  void validate() const;
};

// Potential per unit interface area as a function of normal and tangential
// opening.  Zero at zero opening; tends to phi_n for pure normal separation.
double cohesive_potential(double delta_n, double delta_s,
                          const CohesiveParams& p);

struct Traction {
  double normal = 0.0;
  double shear = 0.0;
};

// Exact gradient of cohesive_potential.
Traction cohesive_traction(double delta_n, double delta_s,
                           const CohesiveParams& p);

// Second derivative of the potential with respect to the normal opening.
double cohesive_normal_stiffness(double delta_n, double delta_s,
                                 const CohesiveParams& p);

struct ChainConfig {
  int n_nodes = 101;
  double k_bend = 8192.0;
  double load_displacement = 0.1;  // final prescribed displacement
  int load_steps = 100;
  CohesiveParams cohesive;
  double strength_floor = 0.05;
  bool rigid_interface = false;

  void validate() const;
};

struct StepRecord {
  double t = 0.0;
  double displacement = 0.0;
  double reaction = 0.0;
};

struct SimulationHistory {
  std::vector<StepRecord> steps;      // includes the unloaded state at t = 0
  std::vector<double> final_opening;  // deflection profile after the last step
  long newton_iterations = 0;
};

// Work done against the reaction force, trapezoid rule over the load steps,
// negated so that minimization favors high dissipation.
double mechanical_work(const SimulationHistory& history);

// Half-beam bonded to a cohesive foundation: bending resistance enters as a
// second-difference penalty, the interface as a per-node traction law with
// opening twice the deflection.  Node 0 carries the prescribed displacement;
// each load step is solved by damped Newton warm-started from the previous
// converged state, with a banded Cholesky factorization of the pentadiagonal
// stiffness.  All solver constants are fixed: results depend only on the
// configuration and the design vector.
class ChainModel {
 public:
  explicit ChainModel(const ChainConfig& cfg);

  const ChainConfig& config() const { return cfg_; }
  int n_nodes() const { return cfg_.n_nodes; }
  double element_length() const { return h_; }

  // Maps a design vector (one multiplier per contiguous block of nodes) to a
  // per-node strength field, clipped from below at the configured floor.
  std::vector<double> strength_field(const Vec& design) const;

  double total_energy(const std::vector<double>& u,
                      const std::vector<double>& s) const;
  void energy_gradient(const std::vector<double>& u,
                       const std::vector<double>& s,
                       std::vector<double>& g) const;

  // Reaction force at the loaded node: derivative of the total energy with
  // respect to the prescribed displacement.
  double reaction(const std::vector<double>& u,
                  const std::vector<double>& s) const;

  // Minimizes the total energy over the free nodes with u[0] = displacement
  // fixed, starting from the current u.  Returns the Newton iteration count.
  // Throws EvalError when the iteration cap is hit.
  int solve_time_step(std::vector<double>& u, double displacement,
                      const std::vector<double>& s, int step_index) const;

  SimulationHistory simulate(const Vec& design) const;

 private:
  ChainConfig cfg_;
  double h_;
  std::vector<double> weights_;    // trapezoid weights per node
  std::vector<double> bend_diag_;  // bending stiffness band, full node set
  std::vector<double> bend_off1_;
  std::vector<double> bend_off2_;
};

}  // namespace rdopt
