// Front end for the smoothed design-search toolkit: optimize runs the full
// loop, simulate evaluates one design, landscape exports grid scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdopt/config.hpp"
#include "rdopt/io.hpp"
#include "rdopt/objectives.hpp"
#include "rdopt/optimizer.hpp"
#include "rdopt/parallel.hpp"
#include "rdopt/smoothing.hpp"

namespace fs = std::filesystem;
using namespace rdopt;

namespace {

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

Vec parse_design(const std::string& text) {
  Vec out;
  const char* s = text.c_str();
  char* end = nullptr;
  while (*s) {
    while (*s == ' ' || *s == ',' || *s == '\t') ++s;
    if (!*s) break;
    const double v = std::strtod(s, &end);
    if (end == s) throw ConfigError("malformed design vector '" + text + "'");
    if (!std::isfinite(v))
      throw ConfigError("design vector entries must be finite");
    out.push_back(v);
    s = end;
  }
  if (out.empty()) throw ConfigError("design vector is empty");
  return out;
}

BatchEvaluator make_evaluator(const Objective& objective, int workers) {
  return [&objective, workers](const std::vector<Vec>& xs) {
    std::vector<double> out(xs.size(), 0.0);
    parallel_for_indexed(xs.size(), workers,
                         [&](std::size_t i) { out[i] = objective.evaluate(xs[i]); });
    return out;
  };
}

void run_single(const RunConfig& cfg, const DesignSpace& space,
                const Objective& objective, int run_index, int eval_workers,
                bool resume) {
  const fs::path run_dir =
      fs::path(cfg.out_dir) / ("run" + std::to_string(run_index));
  fs::create_directories(run_dir);
  JsonlWriter dataset((run_dir / "dataset.jsonl").string());
  JsonlWriter trace((run_dir / "trace.jsonl").string());

  OptimizationRun run(space, cfg.optimizer, cfg.samples, cfg.skip,
                      cfg.seed + static_cast<std::uint64_t>(run_index));
  const BatchEvaluator evaluate = make_evaluator(objective, eval_workers);

  if (resume && file_exists(dataset.path())) {
    const std::vector<EvaluationRecord> records = read_dataset(dataset.path());
    std::vector<IterationRecord> rows;
    if (file_exists(trace.path())) rows = read_trace(trace.path());
    run.restore(records, rows.empty() ? nullptr : &rows.back());
    dataset.load_existing();
    trace.load_existing();
  } else {
    run.initialize(evaluate);
    for (const EvaluationRecord& rec : run.last_batch())
      dataset.append(dataset_line(rec));
    dataset.flush();
  }

  while (!run.finished()) {
    const IterationRecord rec = run.iterate(evaluate);
    for (const EvaluationRecord& r : run.last_batch())
      dataset.append(dataset_line(r));
    dataset.flush();
    trace.append(trace_line(rec));
    trace.flush();
  }
}

int cmd_optimize(const RunConfig& cfg, bool resume) {
  fs::create_directories(cfg.out_dir);
  write_file_atomic((fs::path(cfg.out_dir) / "effective_config.ini").string(),
                    render_config(cfg));
  const DesignSpace space = cfg.make_space();
  const std::unique_ptr<Objective> objective = make_objective(cfg.objective);

  const bool outer_parallel = cfg.runs > 1 && cfg.workers > 1;
  const int eval_workers = outer_parallel ? 1 : cfg.workers;
  parallel_for_indexed(
      static_cast<std::size_t>(cfg.runs), outer_parallel ? cfg.workers : 1,
      [&](std::size_t i) {
        run_single(cfg, space, *objective, static_cast<int>(i), eval_workers,
                   resume);
      });

  // Summary over the persisted traces: final iterate, its smoothed value,
  // and the best raw evaluation of each run.
  const std::size_t d = space.dim();
  std::string summary = "run,seed,f_final,best_raw";
  for (std::size_t i = 0; i < d; ++i)
    summary += ",x" + std::to_string(i);
  summary += '\n';
  std::vector<double> finals;
  for (int i = 0; i < cfg.runs; ++i) {
    const fs::path run_dir =
        fs::path(cfg.out_dir) / ("run" + std::to_string(i));
    const std::vector<IterationRecord> rows =
        read_trace((run_dir / "trace.jsonl").string());
    if (rows.empty()) throw IoError("run " + std::to_string(i) + " left no trace");
    const IterationRecord& last = rows.back();
    finals.push_back(last.f_accepted);
    const Vec xp = space.to_physical(last.x);
    summary += std::to_string(i) + ',' +
               std::to_string(cfg.seed + static_cast<std::uint64_t>(i)) + ',' +
               format_double(last.f_accepted) + ',' +
               format_double(last.best_value);
    for (double v : xp) summary += ',' + format_double(v);
    summary += '\n';
  }
  write_file_atomic((fs::path(cfg.out_dir) / "summary.csv").string(), summary);

  const int bins = std::min<int>(10, static_cast<int>(finals.size()));
  const double lo = *std::min_element(finals.begin(), finals.end());
  const double hi = *std::max_element(finals.begin(), finals.end());
  std::string hist = "bin_lo,bin_hi,count\n";
  if (hi == lo) {
    hist += format_double(lo) + ',' + format_double(hi) + ',' +
            std::to_string(finals.size()) + '\n';
  } else {
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
      const double a = lo + b * width;
      const double z = (b + 1 == bins) ? hi : lo + (b + 1) * width;
      std::size_t count = 0;
      for (double v : finals)
        if ((v >= a && v < z) || (b + 1 == bins && v == hi)) ++count;
      hist += format_double(a) + ',' + format_double(z) + ',' +
              std::to_string(count) + '\n';
    }
  }
  write_file_atomic((fs::path(cfg.out_dir) / "histogram.csv").string(), hist);
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& design_text) {
  const Vec design = parse_design(design_text);
  if (design.size() != cfg.axes.size())
    throw ConfigError("design vector has " + std::to_string(design.size()) +
                      " entries but the design space has " +
                      std::to_string(cfg.axes.size()) + " axes");
  if (cfg.objective.kind == "cohesive_chain") {
    const ChainModel model(cfg.objective.chain);
    const SimulationHistory hist = model.simulate(design);
    const double qoi = mechanical_work(hist);
    std::printf("%.17g\n", qoi);
    fs::create_directories(cfg.out_dir);
    std::string csv = "t,displacement,reaction\n";
    for (const StepRecord& s : hist.steps)
      csv += format_double(s.t) + ',' + format_double(s.displacement) + ',' +
             format_double(s.reaction) + '\n';
    write_file_atomic(
        (fs::path(cfg.out_dir) / "load_displacement.csv").string(), csv);
    return 0;
  }
  if (cfg.objective.kind == "external") {
    const double qoi = external_eval(cfg.objective.command, design,
                                     cfg.objective.timeout_seconds);
    std::printf("%.17g\n", qoi);
    return 0;
  }
  throw ConfigError("simulate needs objective kind cohesive_chain or external");
}

int cmd_landscape(const RunConfig& cfg, std::vector<int> axes,
                  std::vector<int> grid, std::vector<double> sigma_list,
                  const std::string& at_text) {
  if (axes.empty() || axes.size() > 2)
    throw ConfigError("landscape scans one or two axes");
  const std::size_t d = cfg.axes.size();
  for (int a : axes)
    if (a < 0 || static_cast<std::size_t>(a) >= d)
      throw ConfigError("axis index " + std::to_string(a) + " out of range");
  if (axes.size() == 2 && axes[0] == axes[1])
    throw ConfigError("landscape axes must be distinct");
  if (grid.empty()) grid.assign(axes.size(), 401);
  if (grid.size() == 1 && axes.size() == 2) grid.push_back(grid[0]);
  if (grid.size() != axes.size())
    throw ConfigError("one grid count per scanned axis");
  for (int g : grid)
    if (g < 2) throw ConfigError("grid counts must be at least 2");
  for (double s : sigma_list)
    if (s < 0.0 || !std::isfinite(s))
      throw ConfigError("sigma list entries must be finite and nonnegative");

  Vec base(d);
  for (std::size_t i = 0; i < d; ++i)
    base[i] = 0.5 * (cfg.axes[i].lower + cfg.axes[i].upper);
  if (!at_text.empty()) {
    base = parse_design(at_text);
    if (base.size() != d)
      throw ConfigError("--at vector must have one entry per design axis");
  }

  const std::unique_ptr<Objective> objective = make_objective(cfg.objective);

  // Scan coordinates in the subspace of the chosen axes, physical units.
  const std::size_t m = axes.size();
  std::vector<std::vector<double>> ticks(m);
  for (std::size_t j = 0; j < m; ++j) {
    const AxisSpec& ax = cfg.axes[axes[j]];
    ticks[j].resize(grid[j]);
    for (int g = 0; g < grid[j]; ++g)
      ticks[j][g] = ax.lower + (ax.upper - ax.lower) * g / (grid[j] - 1);
  }
  const std::size_t n_points =
      m == 1 ? ticks[0].size() : ticks[0].size() * ticks[1].size();
  std::vector<Vec> scan(n_points, Vec(m));
  for (std::size_t p = 0; p < n_points; ++p) {
    if (m == 1) {
      scan[p][0] = ticks[0][p];
    } else {
      scan[p][0] = ticks[0][p / ticks[1].size()];
      scan[p][1] = ticks[1][p % ticks[1].size()];
    }
  }
  const auto to_full = [&](const double* z) {
    Vec x = base;
    for (std::size_t j = 0; j < m; ++j) x[axes[j]] = z[j];
    return x;
  };

  std::vector<double> raw(n_points);
  parallel_for_indexed(n_points, cfg.workers, [&](std::size_t p) {
    raw[p] = objective->evaluate(to_full(scan[p].data()));
  });

  // Smoothing runs in the scan subspace.  Cheap analytic objectives are
  // averaged directly; simulator-backed ones go through a nearest-neighbor
  // fit of the grid data so each smoothed column costs no extra evaluations.
  const bool direct = cfg.objective.kind == "herbie_step" ||
                      cfg.objective.kind == "step" ||
                      cfg.objective.kind == "quadratic";
  std::vector<AxisSpec> sub_axes;
  for (std::size_t j = 0; j < m; ++j) sub_axes.push_back(cfg.axes[axes[j]]);
  const DesignSpace sub_space(sub_axes);
  NNIndex grid_data(sub_space);
  if (!direct) {
    for (std::size_t p = 0; p < n_points; ++p)
      grid_data.insert({sub_space.to_internal(scan[p]), raw[p], 0,
                        RecordTag::external});
    grid_data.prepare();
  }

  std::vector<std::vector<double>> smoothed(sigma_list.size(),
                                            std::vector<double>(n_points));
  SmoothedEstimator estimator(static_cast<int>(m), cfg.samples, cfg.skip);
  for (std::size_t si = 0; si < sigma_list.size(); ++si) {
    const double sigma = sigma_list[si];
    if (sigma == 0.0) {
      smoothed[si] = raw;
      continue;
    }
    parallel_for_indexed(n_points, cfg.workers, [&](std::size_t p) {
      if (direct) {
        Vec sig(m, sigma);
        smoothed[si][p] = estimator
                              .value(scan[p], sig,
                                     [&](const double* z) {
                                       return objective->evaluate(to_full(z));
                                     })
                              .mean;
      } else {
        Vec sig(m);
        for (std::size_t j = 0; j < m; ++j)
          sig[j] = sigma * sub_space.scale(j);
        const Vec xi = sub_space.to_internal(scan[p]);
        smoothed[si][p] =
            estimator
                .value(xi, sig,
                       [&](const double* z) { return grid_data.nn_predict(z); })
                .mean;
      }
    });
  }

  std::string csv;
  for (std::size_t j = 0; j < m; ++j)
    csv += (j ? "," : "") + std::string("x") + std::to_string(axes[j]);
  csv += ",f";
  for (double s : sigma_list) csv += ",F_sigma_" + short_num(s);
  csv += '\n';
  for (std::size_t p = 0; p < n_points; ++p) {
    for (std::size_t j = 0; j < m; ++j)
      csv += (j ? "," : "") + format_double(scan[p][j]);
    csv += ',' + format_double(raw[p]);
    for (std::size_t si = 0; si < sigma_list.size(); ++si)
      csv += ',' + format_double(smoothed[si][p]);
    csv += '\n';
  }
  fs::create_directories(cfg.out_dir);
  write_file_atomic((fs::path(cfg.out_dir) / "landscape.csv").string(), csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed stochastic design optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string objective_kind;
  std::string seed_text, runs_text, workers_text, out_text;
  bool resume = false;

  app.add_option("--config", config_path, "Path to the INI configuration")
      ->required();
  app.add_option("--set", sets, "Override: section.key=value");
  app.add_option("--objective", objective_kind, "Objective kind shortcut");
  app.add_option("--seed", seed_text, "Base seed override");
  app.add_option("--runs", runs_text, "Run count override");
  app.add_option("--workers", workers_text, "Worker count override");
  app.add_option("--out", out_text, "Output directory override");

  CLI::App* optimize = app.add_subcommand("optimize", "Run the search loop");
  optimize->add_flag("--resume", resume,
                     "Continue from an existing dataset and trace");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Evaluate one design and export curves");
  std::string design_text;
  simulate->add_option("--design", design_text, "Design vector, physical units")
      ->required();

  CLI::App* landscape =
      app.add_subcommand("landscape", "Export grid scans of the objective");
  std::vector<int> axes;
  std::vector<int> grid;
  std::vector<double> sigma_list;
  std::string at_text;
  landscape->add_option("--axes", axes, "One or two axis indices")->required();
  landscape->add_option("--grid", grid, "Grid points per scanned axis");
  landscape->add_option("--sigma", sigma_list,
                        "Deviations for smoothed columns (0 = raw)");
  landscape->add_option("--at", at_text, "Base point, physical units");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!objective_kind.empty()) sets.push_back("objective.kind=" + objective_kind);
    if (!seed_text.empty()) sets.push_back("execution.seed=" + seed_text);
    if (!runs_text.empty()) sets.push_back("execution.runs=" + runs_text);
    if (!workers_text.empty())
      sets.push_back("execution.workers=" + workers_text);
    if (!out_text.empty()) sets.push_back("execution.out=" + out_text);
    const RunConfig cfg = load_config_file(config_path, sets);

    if (optimize->parsed()) return cmd_optimize(cfg, resume);
    if (simulate->parsed()) return cmd_simulate(cfg, design_text);
    return cmd_landscape(cfg, axes, grid, sigma_list, at_text);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
