#include "rdopt/cohesive_chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace rdopt {
namespace {

// Banded Cholesky (lower, bandwidth 2) of a symmetric positive definite
// pentadiagonal matrix given by its diagonal and first two subdiagonals.
// Factors in place; returns false on a non-positive pivot.
bool band_cholesky(std::vector<double>& diag, std::vector<double>& off1,
                   std::vector<double>& off2) {
  const std::size_t m = diag.size();
  for (std::size_t j = 0; j < m; ++j) {
    double v = diag[j];
    if (j >= 1) v -= off1[j - 1] * off1[j - 1];
    if (j >= 2) v -= off2[j - 2] * off2[j - 2];
    if (!(v > 0.0)) return false;
    const double l = std::sqrt(v);
    diag[j] = l;
    if (j + 1 < m) {
      double s = off1[j];
      if (j >= 1) s -= off1[j - 1] * off2[j - 1];
      off1[j] = s / l;
    }
    if (j + 2 < m) off2[j] = off2[j] / l;
  }
  return true;
}

void band_solve(const std::vector<double>& diag,
                const std::vector<double>& off1,
                const std::vector<double>& off2, std::vector<double>& b) {
  const std::size_t m = diag.size();
  for (std::size_t i = 0; i < m; ++i) {
    double v = b[i];
    if (i >= 1) v -= off1[i - 1] * b[i - 1];
    if (i >= 2) v -= off2[i - 2] * b[i - 2];
    b[i] = v / diag[i];
  }
  for (std::size_t ir = 0; ir < m; ++ir) {
    const std::size_t i = m - 1 - ir;
    double v = b[i];
    if (i + 1 < m) v -= off1[i] * b[i + 1];
    if (i + 2 < m) v -= off2[i] * b[i + 2];
    b[i] = v / diag[i];
  }
}

}  // namespace

void CohesiveParams::validate() const {
  if (!(phi_n > 0.0)) throw ConfigError("cohesive phi_n must be positive");
  if (!(delta_n_star > 0.0))
    throw ConfigError("cohesive delta_n_star must be positive");
  if (!(delta_s_star > 0.0))
    throw ConfigError("cohesive delta_s_star must be positive");
  if (r == 1.0) throw ConfigError("cohesive coupling r = 1 is a pole");
}

double cohesive_potential(double delta_n, double delta_s,
                          const CohesiveParams& p) {
  const double q = p.q();
  const double dn = delta_n / p.delta_n_star;
  const double ds = delta_s / p.delta_s_star;
  const double a = (1.0 - q) / (p.r - 1.0);
  const double b = (p.r - q) / (p.r - 1.0);
  const double e = std::exp(-ds * ds);
  const double inner = (1.0 - p.r + dn) * a - (q + b * dn) * e;
  return p.phi_n + p.phi_n * std::exp(-dn) * inner;
}

Traction cohesive_traction(double delta_n, double delta_s,
                           const CohesiveParams& p) {
  const double q = p.q();
  const double dn = delta_n / p.delta_n_star;
  const double ds = delta_s / p.delta_s_star;
  const double a = (1.0 - q) / (p.r - 1.0);
  const double b = (p.r - q) / (p.r - 1.0);
  const double e = std::exp(-ds * ds);
  const double expn = std::exp(-dn);
  const double inner = (1.0 - p.r + dn) * a - (q + b * dn) * e;
  const double inner_dn = a - b * e;
  Traction t;
  t.normal = p.phi_n * expn * (inner_dn - inner) / p.delta_n_star;
  t.shear = p.phi_n * expn * (q + b * dn) * e * 2.0 * ds / p.delta_s_star;
  return t;
}

double cohesive_normal_stiffness(double delta_n, double delta_s,
                                 const CohesiveParams& p) {
  const double q = p.q();
  const double dn = delta_n / p.delta_n_star;
  const double ds = delta_s / p.delta_s_star;
  const double a = (1.0 - q) / (p.r - 1.0);
  const double b = (p.r - q) / (p.r - 1.0);
  const double e = std::exp(-ds * ds);
  const double inner = (1.0 - p.r + dn) * a - (q + b * dn) * e;
  const double inner_dn = a - b * e;
  return p.phi_n * std::exp(-dn) * (inner - 2.0 * inner_dn) /
         (p.delta_n_star * p.delta_n_star);
}

void ChainConfig::validate() const {
  if (n_nodes < 3) throw ConfigError("chain needs at least 3 nodes");
  if (!(k_bend > 0.0)) throw ConfigError("k_bend must be positive");
  if (!(load_displacement > 0.0))
    throw ConfigError("load_displacement must be positive");
  if (load_steps < 1) throw ConfigError("load_steps must be at least 1");
  if (!(strength_floor > 0.0))
    throw ConfigError("strength_floor must be positive");
  cohesive.validate();
}

ChainModel::ChainModel(const ChainConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const int n = cfg_.n_nodes;
  h_ = 1.0 / (n - 1);
  weights_.assign(n, h_);
  weights_.front() = 0.5 * h_;
  weights_.back() = 0.5 * h_;

  bend_diag_.assign(n, 0.0);
  bend_off1_.assign(n - 1, 0.0);
  bend_off2_.assign(n - 2, 0.0);
  const double c[3] = {1.0, -2.0, 1.0};
  for (int i = 0; i + 2 < n; ++i) {
    for (int ja = 0; ja < 3; ++ja) {
      for (int jb = ja; jb < 3; ++jb) {
        const double v = cfg_.k_bend * c[ja] * c[jb];
        const int row = i + ja;
        const int shift = jb - ja;
        if (shift == 0)
          bend_diag_[row] += v;
        else if (shift == 1)
          bend_off1_[row] += v;
        else
          bend_off2_[row] += v;
      }
    }
  }
}

std::vector<double> ChainModel::strength_field(const Vec& design) const {
  const int n = cfg_.n_nodes;
  const int d = static_cast<int>(design.size());
  if (d < 1 || d > n)
    throw ConfigError("design dimension must lie in [1, n_nodes]");
  std::vector<double> s(n);
  const int block = n / d;
  for (int j = 0; j < d; ++j) {
    const int lo = j * block;
    const int hi = (j + 1 < d) ? (j + 1) * block : n;
    const double v = std::max(design[j], cfg_.strength_floor);
    for (int i = lo; i < hi; ++i) s[i] = v;
  }
  return s;
}

double ChainModel::total_energy(const std::vector<double>& u,
                                const std::vector<double>& s) const {
  const int n = cfg_.n_nodes;
  double bend = 0.0;
  for (int i = 0; i + 2 < n; ++i) {
    const double d2 = u[i] - 2.0 * u[i + 1] + u[i + 2];
    bend += d2 * d2;
  }
  double interface = 0.0;
  for (int i = 0; i < n; ++i)
    interface +=
        weights_[i] * s[i] * cohesive_potential(2.0 * u[i], 0.0, cfg_.cohesive);
  return 0.5 * cfg_.k_bend * bend + interface;
}

void ChainModel::energy_gradient(const std::vector<double>& u,
                                 const std::vector<double>& s,
                                 std::vector<double>& g) const {
  const int n = cfg_.n_nodes;
  g.assign(n, 0.0);
  for (int i = 0; i + 2 < n; ++i) {
    const double d2 = cfg_.k_bend * (u[i] - 2.0 * u[i + 1] + u[i + 2]);
    g[i] += d2;
    g[i + 1] -= 2.0 * d2;
    g[i + 2] += d2;
  }
  for (int i = 0; i < n; ++i)
    g[i] += weights_[i] * s[i] * 2.0 *
            cohesive_traction(2.0 * u[i], 0.0, cfg_.cohesive).normal;
}

double ChainModel::reaction(const std::vector<double>& u,
                            const std::vector<double>& s) const {
  if (cfg_.rigid_interface) return cfg_.k_bend * u[0];
  const double bend = cfg_.k_bend * (u[0] - 2.0 * u[1] + u[2]);
  return bend + weights_[0] * s[0] * 2.0 *
                    cohesive_traction(2.0 * u[0], 0.0, cfg_.cohesive).normal;
}

int ChainModel::solve_time_step(std::vector<double>& u, double displacement,
                                const std::vector<double>& s,
                                int step_index) const {
  const int n = cfg_.n_nodes;
  const std::size_t m = static_cast<std::size_t>(n - 1);  // free nodes 1..n-1
  const double tol =
      1e-10 * std::max(1.0, cfg_.cohesive.phi_n / cfg_.cohesive.delta_n_star);
  constexpr int kCap = 200;
  constexpr double kArmijoC = 1e-4;

  u[0] = displacement;
  double energy = total_energy(u, s);
  double tau = 0.0;

  std::vector<double> g, diag(m), off1(m - 1), off2(m - 2), p(m);
  std::vector<double> fd(m), f1(m - 1), f2(m - 2);
  std::vector<double> trial(u.size());

  for (int it = 0; it < kCap; ++it) {
    energy_gradient(u, s, g);
    double res = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      res = std::max(res, std::fabs(g[i + 1]));
    if (res <= tol) return it;

    double base = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const int node = static_cast<int>(i) + 1;
      diag[i] = bend_diag_[node] +
                weights_[node] * s[node] * 4.0 *
                    cohesive_normal_stiffness(2.0 * u[node], 0.0, cfg_.cohesive);
      base = std::max(base, std::fabs(diag[i]));
    }
    for (std::size_t i = 0; i + 1 < m; ++i) off1[i] = bend_off1_[i + 1];
    for (std::size_t i = 0; i + 2 < m; ++i) off2[i] = bend_off2_[i + 1];

    double slope = 0.0;
    for (;;) {
      fd = diag;
      for (std::size_t i = 0; i < m; ++i) fd[i] += tau;
      f1 = off1;
      f2 = off2;
      if (band_cholesky(fd, f1, f2)) {
        for (std::size_t i = 0; i < m; ++i) p[i] = -g[i + 1];
        band_solve(fd, f1, f2, p);
        slope = 0.0;
        for (std::size_t i = 0; i < m; ++i) slope += g[i + 1] * p[i];
        if (slope < 0.0) break;
      }
      tau = std::max(tau * 10.0, 1e-8 * base);
    }

    // Once the predicted decrease falls below evaluation noise the Armijo
    // test becomes meaningless; take the full step and let the residual
    // check decide.
    if (kArmijoC * std::fabs(slope) < 1e-14 * std::max(1.0, std::fabs(energy))) {
      for (std::size_t i = 0; i < m; ++i) u[i + 1] += p[i];
      energy = total_energy(u, s);
      tau *= 0.1;
      continue;
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = u;
      for (std::size_t i = 0; i < m; ++i) trial[i + 1] += alpha * p[i];
      const double trial_energy = total_energy(trial, s);
      if (trial_energy <= energy + kArmijoC * alpha * slope) {
        u.swap(trial);
        energy = trial_energy;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (accepted)
      tau *= 0.1;
    else
      tau = std::max(tau * 10.0, 1e-8 * base);
  }
  throw EvalError("chain solver failed to converge at load step " +
                  std::to_string(step_index));
}

SimulationHistory ChainModel::simulate(const Vec& design) const {
  const int n = cfg_.n_nodes;
  const std::vector<double> s = strength_field(design);
  SimulationHistory hist;
  hist.steps.reserve(cfg_.load_steps + 1);
  hist.steps.push_back({0.0, 0.0, 0.0});

  std::vector<double> u(n, 0.0);
  const double dt = cfg_.load_displacement / cfg_.load_steps;
  for (int k = 1; k <= cfg_.load_steps; ++k) {
    const double bd = k * dt;
    if (cfg_.rigid_interface) {
      u.assign(n, 0.0);
      u[0] = bd;
    } else {
      hist.newton_iterations += solve_time_step(u, bd, s, k);
    }
    hist.steps.push_back({bd, bd, reaction(u, s)});
  }
  hist.final_opening = u;
  return hist;
}

double mechanical_work(const SimulationHistory& history) {
  double w = 0.0;
  for (std::size_t k = 1; k < history.steps.size(); ++k) {
    const StepRecord& a = history.steps[k - 1];
    const StepRecord& b = history.steps[k];
    w += (b.reaction + a.reaction) * (b.displacement - a.displacement);
  }
  return -0.5 * w;
}

}  // namespace rdopt
