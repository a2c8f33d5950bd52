#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "rdopt/config.hpp"
#include "rdopt/io.hpp"

using namespace rdopt;
namespace fs = std::filesystem;

namespace {

const char* kBase = R"(# comment line
; another comment
[design_space]
axis = -2 2 0.2

[optimizer]
k_max = 5

[smoothing]
samples = 1024

[objective]
kind = herbie_step
c_step = 0.5
x_step = 0

[execution]
seed = 3
runs = 2
workers = 2
out = scratch_cfg
)";

}  // namespace

TEST_CASE("a complete config file parses into the expected settings") {
  RunConfig cfg = load_config_text(kBase);
  REQUIRE(cfg.axes.size() == 1);
  CHECK(cfg.axes[0].lower == -2.0);
  CHECK(cfg.axes[0].upper == 2.0);
  CHECK(cfg.axes[0].sigma == 0.2);
  CHECK_FALSE(cfg.axes[0].periodic);
  CHECK(cfg.optimizer.k_max == 5);
  CHECK(cfg.optimizer.gamma_pan == 1.2);  // defaults survive
  CHECK(cfg.samples == 1024);
  CHECK(cfg.objective.kind == "herbie_step");
  CHECK(cfg.objective.c_step == 0.5);
  CHECK(cfg.seed == 3);
  CHECK(cfg.runs == 2);
  CHECK(cfg.workers == 2);
  CHECK(cfg.out_dir == "scratch_cfg");

  DesignSpace space = cfg.make_space();
  CHECK(space.dim() == 1);
  CHECK(space.internal_width(0) == 20.0);
}

TEST_CASE("axis lines repeat while scalar keys must not") {
  std::string text(kBase);
  text += "\n[design_space]\naxis = 0 6.28 0.5 periodic\n";
  RunConfig cfg = load_config_text(text);
  REQUIRE(cfg.axes.size() == 2);
  CHECK(cfg.axes[1].periodic);

  std::string dup(kBase);
  dup += "\n[optimizer]\nk_max = 9\n";
  CHECK_THROWS_WITH_AS(load_config_text(dup),
                       doctest::Contains("duplicate key"), ConfigError);
}

TEST_CASE("unknown sections, keys, and malformed lines are reported") {
  CHECK_THROWS_WITH_AS(load_config_text(std::string(kBase) + "[mystery]\nx = 1\n"),
                       doctest::Contains("unknown config section"), ConfigError);
  CHECK_THROWS_WITH_AS(
      load_config_text(std::string(kBase) + "[optimizer]\nturbo = 1\n"),
      doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config_text("k = 1\n"),
                       doctest::Contains("outside any section"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config_text("[design_space\naxis = 0 1 1\n"),
                       doctest::Contains("unterminated"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config_text("[design_space]\naxis 0 1 1\n"),
                       doctest::Contains("expected key = value"), ConfigError);
  CHECK_THROWS_AS(load_config_text("[design_space]\naxis = 0 1\n"), ConfigError);
  CHECK_THROWS_WITH_AS(
      load_config_text("[design_space]\naxis = 0 1 0.1 cyclic\n"),
      doctest::Contains("trailing token"), ConfigError);
  // no axes at all
  CHECK_THROWS_WITH_AS(load_config_text("[optimizer]\nk_max = 3\n"),
                       doctest::Contains("axis"), ConfigError);
}

TEST_CASE("overrides replace keys before interpretation") {
  RunConfig cfg = load_config_text(
      kBase, {"optimizer.k_max=9", "execution.seed=77", "objective.c_step=0.25"});
  CHECK(cfg.optimizer.k_max == 9);
  CHECK(cfg.seed == 77);
  CHECK(cfg.objective.c_step == 0.25);

  CHECK_THROWS_WITH_AS(load_config_text(kBase, {"k_max=9"}),
                       doctest::Contains("section.key=value"), ConfigError);
  CHECK_THROWS_AS(load_config_text(kBase, {"optimizer.k_max=zero"}), ConfigError);
  // switching the objective kind re-keys the section
  RunConfig stepped = load_config_text(
      "[design_space]\naxis = -1 1 0.1\n[objective]\nkind = herbie_step\n",
      {"objective.kind=step"});
  CHECK(stepped.objective.kind == "step");
  CHECK(stepped.objective.c_step == 1.0);  // kind-specific default
}

TEST_CASE("objective keys are scoped to their kind") {
  CHECK_THROWS_WITH_AS(
      load_config_text(std::string(kBase) + "[objective]\nk_bend = 2\n"),
      doctest::Contains("does not apply"), ConfigError);
  // sanity: the same key is fine under the right kind
  RunConfig cfg = load_config_text(
      "[design_space]\naxis = 0.5 2 0.05\n"
      "[objective]\nkind = cohesive_chain\nk_bend = 4096\nload_steps = 10\n");
  CHECK(cfg.objective.chain.k_bend == 4096.0);
  CHECK(cfg.objective.chain.load_steps == 10);
  CHECK(cfg.objective.chain.n_nodes == 101);
}

TEST_CASE("semantic validation runs on the assembled config") {
  CHECK_THROWS_WITH_AS(load_config_text(kBase, {"optimizer.gamma_osc=0.9"}),
                       doctest::Contains("gamma_osc <= eta"), ConfigError);
  CHECK_THROWS_AS(load_config_text(kBase, {"execution.runs=0"}), ConfigError);
  CHECK_THROWS_AS(load_config_text(kBase, {"execution.workers=0"}), ConfigError);
  CHECK_THROWS_AS(load_config_text(kBase, {"smoothing.samples=1"}), ConfigError);
  // a well-formed quadratic of the wrong dimension must name the mismatch
  CHECK_THROWS_WITH_AS(
      load_config_text(
          "[design_space]\naxis = -1 1 0.1\naxis = -1 1 0.1\n"
          "[objective]\nkind = quadratic\na = 1\nb = 0.5\nc = 0\n"),
      doctest::Contains("does not match"), ConfigError);
}

TEST_CASE("rendering and reloading a config is a fixed point") {
  std::string quad =
      "[design_space]\naxis = -1 1 0.1\naxis = 0 6.28 0.5 periodic\n"
      "[optimizer]\nk_max = 7\nsigma_max_factor = 8\n"
      "[smoothing]\nsamples = 2048\ndelta = 2.5\n"
      "[objective]\nkind = quadratic\na = 1 0.25 0.25 2\nb = 0.5 -0.125\nc = 1.5\n"
      "[execution]\nseed = 11\nout = q_out\n";
  RunConfig cfg = load_config_text(quad);
  std::string rendered = render_config(cfg);
  RunConfig reloaded = load_config_text(rendered);
  CHECK(render_config(reloaded) == rendered);
  CHECK(reloaded.optimizer.sigma_max == 8.0);
  CHECK(reloaded.optimizer.delta == 2.5);
  CHECK(reloaded.objective.quad_a == cfg.objective.quad_a);
  CHECK(reloaded.axes[1].periodic);
  // the resolved space-filling count is pinned in the render
  CHECK(rendered.find("n0 = 6") != std::string::npos);

  for (const char* kind_cfg :
       {"[design_space]\naxis = 0.5 2 0.05\n[objective]\nkind = cohesive_chain\n",
        "[design_space]\naxis = -2 2 0.2\n[objective]\nkind = external\n"
        "command = echo 1\ntimeout = 5\nfailure_policy = penalty\n"
        "penalty_value = 100\n"}) {
    RunConfig c = load_config_text(kind_cfg);
    std::string r = render_config(c);
    CHECK(render_config(load_config_text(r)) == r);
  }
}

TEST_CASE("doubles are serialized with enough digits to round-trip") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.6789, 0.0, 2.718e-5}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_json_array(Vec{0.5, -1.0}) == "[0.5,-1]");
}

TEST_CASE("dataset lines round-trip every field bit-exactly") {
  EvaluationRecord rec;
  rec.site = {0.1, -2.5e-7, 19.25};
  rec.value = -1.0 / 3.0;
  rec.iteration = 12;
  rec.tag = RecordTag::perturbation;
  std::string line = dataset_line(rec);
  CHECK(line.find("\"tag\":\"perturbation\"") != std::string::npos);
  EvaluationRecord back = parse_dataset_line(line);
  CHECK(back.site == rec.site);
  CHECK(back.value == rec.value);
  CHECK(back.iteration == rec.iteration);
  CHECK(back.tag == rec.tag);
  CHECK_THROWS_AS(parse_dataset_line("{not json"), IoError);
  CHECK_THROWS_AS(parse_dataset_line("{\"site\":[1]}"), IoError);
}

TEST_CASE("trace lines round-trip every field bit-exactly") {
  IterationRecord rec;
  rec.k = 4;
  rec.x = {0.5, 19.017263124};
  rec.f_center = 1.5e-5;
  rec.f_accepted = 1.25e-5;
  rec.step = {-0.25, 1.0};
  rec.ranges = {1.2, 0.96};
  rec.sigmas = {1.0, 1.0};
  rec.best_value = -2.5;
  rec.best_x = {0.25, 18.0};
  IterationRecord back = parse_trace_line(trace_line(rec));
  CHECK(back.k == rec.k);
  CHECK(back.x == rec.x);
  CHECK(back.f_center == rec.f_center);
  CHECK(back.f_accepted == rec.f_accepted);
  CHECK(back.step == rec.step);
  CHECK(back.ranges == rec.ranges);
  CHECK(back.sigmas == rec.sigmas);
  CHECK(back.best_value == rec.best_value);
  CHECK(back.best_x == rec.best_x);
}

TEST_CASE("atomic writes land complete and leave no temp file") {
  fs::path dir = fs::path("io_scratch");
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string path = (dir / "data.jsonl").string();

  write_file_atomic(path, "alpha\nbeta\n");
  CHECK(file_exists(path));
  CHECK_FALSE(file_exists(path + ".tmp"));
  CHECK(read_file(path) == "alpha\nbeta\n");

  std::vector<std::string> lines = read_lines(path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "alpha");
  CHECK(lines[1] == "beta");

  // blank lines are skipped when reading record files
  EvaluationRecord rec;
  rec.site = {1.0};
  rec.value = 2.0;
  write_file_atomic(path, dataset_line(rec) + "\n\n" + dataset_line(rec) + "\n");
  std::vector<EvaluationRecord> recs = read_dataset(path);
  CHECK(recs.size() == 2);

  CHECK_THROWS_AS(read_file((dir / "missing").string()), IoError);
  CHECK_FALSE(file_exists((dir / "missing").string()));

  JsonlWriter writer((dir / "w.jsonl").string());
  writer.append("one");
  writer.flush();
  writer.append("two");
  writer.flush();
  CHECK(read_file(writer.path()) == "one\ntwo\n");
  JsonlWriter resumed((dir / "w.jsonl").string());
  resumed.load_existing();
  resumed.append("three");
  resumed.flush();
  CHECK(read_file(writer.path()) == "one\ntwo\nthree\n");
  fs::remove_all(dir);
}
