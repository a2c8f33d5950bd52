#include "rdopt/objectives.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace rdopt {
namespace {

void ignore_sigpipe() {
  static std::once_flag flag;
  std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string design_line(const Vec& x) {
  std::string line;
  char buf[40];
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", x[i]);
    if (i) line += ' ';
    line += buf;
  }
  line += '\n';
  return line;
}

class HerbieStepObjective final : public Objective {
 public:
  HerbieStepObjective(double c_step, double x_step)
      : c_step_(c_step), x_step_(x_step) {}
  double evaluate(const Vec& x) const override {
    return herbie_step(x, c_step_, x_step_);
  }

 private:
  double c_step_, x_step_;
};

class StepObjective final : public Objective {
 public:
  StepObjective(double c_step, double x_step)
      : c_step_(c_step), x_step_(x_step) {}
  double evaluate(const Vec& x) const override {
    if (x.empty()) throw EvalError("step objective needs at least one axis");
    return x[0] > x_step_ ? c_step_ : 0.0;
  }

 private:
  double c_step_, x_step_;
};

class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(std::vector<double> a, Vec b, double c)
      : a_(std::move(a)), b_(std::move(b)), c_(c) {}
  double evaluate(const Vec& x) const override {
    const std::size_t d = b_.size();
    if (x.size() != d)
      throw EvalError("quadratic objective expects dimension " +
                      std::to_string(d));
    double v = c_;
    for (std::size_t i = 0; i < d; ++i) {
      v += b_[i] * x[i];
      double row = 0.0;
      for (std::size_t j = 0; j < d; ++j) row += a_[i * d + j] * x[j];
      v += x[i] * row;
    }
    return v;
  }
  int dimension() const override { return static_cast<int>(b_.size()); }

 private:
  std::vector<double> a_;
  Vec b_;
  double c_;
};

class ExternalObjective final : public Objective {
 public:
  explicit ExternalObjective(const ObjectiveConfig& cfg)
      : command_(cfg.command),
        timeout_(cfg.timeout_seconds),
        policy_(cfg.failure_policy),
        penalty_(cfg.penalty_value) {}
  double evaluate(const Vec& x) const override {
    try {
      return external_eval(command_, x, timeout_);
    } catch (const EvalError&) {
      if (policy_ == FailurePolicy::abort) throw;
      return penalty_;
    }
  }

 private:
  std::string command_;
  double timeout_;
  FailurePolicy policy_;
  double penalty_;
};

class ChainObjective final : public Objective {
 public:
  explicit ChainObjective(const ChainConfig& cfg) : model_(cfg) {}
  double evaluate(const Vec& x) const override {
    return mechanical_work(model_.simulate(x));
  }

 private:
  ChainModel model_;
};

}  // namespace

double herbie_step(const Vec& x, double c_step, double x_step) {
  if (x.empty()) throw EvalError("herbie_step needs at least one axis");
  double prod = 1.0;
  for (double xi : x) {
    const double left = std::exp(-(xi - 1.0) * (xi - 1.0));
    const double right = std::exp(-0.8 * (xi + 1.0) * (xi + 1.0));
    prod *= left + right - 0.05 * std::sin(8.0 * (xi + 0.1));
  }
  double v = -prod;
  if (x[0] > x_step) v += c_step;
  return v;
}

void ObjectiveConfig::validate() const {
  if (kind == "herbie_step" || kind == "step") {
    if (!std::isfinite(c_step) || !std::isfinite(x_step))
      throw ConfigError("step parameters must be finite");
  } else if (kind == "quadratic") {
    const std::size_t d = quad_b.size();
    if (d == 0) throw ConfigError("quadratic objective needs coefficients b");
    if (quad_a.size() != d * d)
      throw ConfigError("quadratic matrix a must hold " + std::to_string(d * d) +
                        " row-major entries");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (quad_a[i * d + j] != quad_a[j * d + i])
          throw ConfigError("quadratic matrix a must be symmetric");
  } else if (kind == "external") {
    if (command.empty()) throw ConfigError("external objective needs a command");
    if (!(timeout_seconds > 0.0))
      throw ConfigError("external timeout must be positive");
    if (failure_policy == FailurePolicy::penalty &&
        !std::isfinite(penalty_value))
      throw ConfigError("penalty value must be finite");
  } else if (kind == "cohesive_chain") {
    chain.validate();
  } else {
    throw ConfigError("unknown objective kind '" + kind + "'");
  }
}

std::unique_ptr<Objective> make_objective(const ObjectiveConfig& cfg) {
  cfg.validate();
  if (cfg.kind == "herbie_step")
    return std::make_unique<HerbieStepObjective>(cfg.c_step, cfg.x_step);
  if (cfg.kind == "step")
    return std::make_unique<StepObjective>(cfg.c_step, cfg.x_step);
  if (cfg.kind == "quadratic")
    return std::make_unique<QuadraticObjective>(cfg.quad_a, cfg.quad_b,
                                                cfg.quad_c);
  if (cfg.kind == "external") return std::make_unique<ExternalObjective>(cfg);
  return std::make_unique<ChainObjective>(cfg.chain);
}

double external_eval(const std::string& command, const Vec& x,
                     double timeout_seconds) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0) throw EvalError("pipe failed");
  if (pipe(from_child) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw EvalError("pipe failed");
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    throw EvalError("fork failed");
  }
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);

  const std::string line = design_line(x);
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n =
        write(to_child[1], line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;  // a child that ignores its input is acceptable
    }
    written += static_cast<std::size_t>(n);
  }
  close(to_child[1]);

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds);
  std::string output;
  char buf[4096];
  bool timed_out = false;
  for (;;) {
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      timed_out = true;
      break;
    }
    struct pollfd pfd;
    pfd.fd = from_child[0];
    pfd.events = POLLIN;
    const int pr = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (pr < 0) {
      if (errno == EINTR) continue;
      timed_out = true;
      break;
    }
    if (pr == 0) {
      timed_out = true;
      break;
    }
    const ssize_t n = read(from_child[0], buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      timed_out = true;
      break;
    }
    if (n == 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  close(from_child[0]);

  if (timed_out) {
    kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);
    throw EvalError("external objective timed out after " +
                    std::to_string(timeout_seconds) + " s");
  }
  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw EvalError("external objective exited abnormally (status " +
                    std::to_string(status) + ")");

  const char* s = output.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(s, &end);
  if (end == s)
    throw EvalError("external objective produced no numeric output");
  for (const char* p = end; *p; ++p)
    if (!std::isspace(static_cast<unsigned char>(*p)))
      throw EvalError("external objective produced trailing output");
  if (!std::isfinite(value))
    throw EvalError("external objective produced a non-finite value");
  return value;
}

}  // namespace rdopt
