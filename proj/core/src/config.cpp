#include "rdopt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rdopt {
namespace {

struct Entry {
  std::string section, key, value;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<Entry> parse_entries(const std::string& text) {
  std::vector<Entry> entries;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    if (section.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": key outside any section");
    Entry e;
    e.section = section;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    if (e.key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    entries.push_back(std::move(e));
  }
  return entries;
}

double parse_double(const std::string& v, const std::string& where) {
  const char* s = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw ConfigError(where + ": cannot parse number '" + v + "'");
  return x;
}

std::int64_t parse_int(const std::string& v, const std::string& where) {
  const char* s = v.c_str();
  char* end = nullptr;
  const long long x = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0')
    throw ConfigError(where + ": cannot parse integer '" + v + "'");
  return x;
}

std::uint64_t parse_uint(const std::string& v, const std::string& where) {
  const char* s = v.c_str();
  char* end = nullptr;
  const unsigned long long x = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v[0] == '-')
    throw ConfigError(where + ": cannot parse unsigned integer '" + v + "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(where + ": cannot parse boolean '" + v + "'");
}

std::vector<double> parse_numbers(const std::string& v,
                                  const std::string& where) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(tok, where));
  return out;
}

AxisSpec parse_axis(const std::string& v) {
  std::istringstream in(v);
  std::vector<std::string> toks;
  std::string t;
  while (in >> t) toks.push_back(t);
  if (toks.size() != 3 && toks.size() != 4)
    throw ConfigError("axis: expected 'lower upper sigma [periodic]', got '" +
                      v + "'");
  AxisSpec axis;
  axis.lower = parse_double(toks[0], "axis lower");
  axis.upper = parse_double(toks[1], "axis upper");
  axis.sigma = parse_double(toks[2], "axis sigma");
  axis.periodic = false;
  if (toks.size() == 4) {
    if (toks[3] != "periodic")
      throw ConfigError("axis: unexpected trailing token '" + toks[3] + "'");
    axis.periodic = true;
  }
  return axis;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"design_space", {"axis"}},
      {"optimizer",
       {"gamma_pan", "gamma_osc", "eta", "beta", "alpha", "n0", "k_max",
        "sigma_max_factor"}},
      {"smoothing", {"samples", "skip", "delta"}},
      {"objective",
       {"kind", "c_step", "x_step", "a", "b", "c", "command", "timeout",
        "failure_policy", "penalty_value", "n_nodes", "k_bend",
        "load_displacement", "load_steps", "phi_n", "phi_s", "r",
        "delta_n_star", "delta_s_star", "strength_floor", "rigid_interface"}},
      {"execution", {"seed", "runs", "workers", "out"}},
  };
  return s;
}

const std::set<std::string>& objective_keys_for(const std::string& kind) {
  static const std::set<std::string> herbie = {"kind", "c_step", "x_step"};
  static const std::set<std::string> quad = {"kind", "a", "b", "c"};
  static const std::set<std::string> external = {
      "kind", "command", "timeout", "failure_policy", "penalty_value"};
  static const std::set<std::string> chain = {
      "kind",        "n_nodes",      "k_bend",        "load_displacement",
      "load_steps",  "phi_n",        "phi_s",         "r",
      "delta_n_star", "delta_s_star", "strength_floor", "rigid_interface"};
  if (kind == "quadratic") return quad;
  if (kind == "external") return external;
  if (kind == "cohesive_chain") return chain;
  return herbie;
}

void apply_override(std::vector<Entry>& entries, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  const std::size_t dot = spec.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value, got '" +
                      spec + "'");
  Entry e;
  e.section = trim(spec.substr(0, dot));
  e.key = trim(spec.substr(dot + 1, eq - dot - 1));
  e.value = trim(spec.substr(eq + 1));
  if (e.section.empty() || e.key.empty())
    throw ConfigError("override must look like section.key=value, got '" +
                      spec + "'");
  // An override replaces every prior occurrence of the key.
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [&](const Entry& x) {
                                 return x.section == e.section &&
                                        x.key == e.key;
                               }),
                entries.end());
  entries.push_back(std::move(e));
}

RunConfig interpret(std::vector<Entry> entries) {
  for (const Entry& e : entries) {
    const auto sec = schema().find(e.section);
    if (sec == schema().end())
      throw ConfigError("unknown config section [" + e.section + "]");
    if (!sec->second.count(e.key))
      throw ConfigError("unknown key '" + e.key + "' in [" + e.section + "]");
  }
  // Repetition is meaningful only for axis lines.
  std::set<std::string> seen;
  for (const Entry& e : entries) {
    if (e.section == "design_space" && e.key == "axis") continue;
    const std::string id = e.section + "." + e.key;
    if (!seen.insert(id).second)
      throw ConfigError("duplicate key '" + id + "'");
  }

  RunConfig cfg;
  std::string kind = "herbie_step";
  for (const Entry& e : entries)
    if (e.section == "objective" && e.key == "kind") kind = e.value;
  cfg.objective.kind = kind;
  if (kind == "step") cfg.objective.c_step = 1.0;
  const std::set<std::string>& obj_keys = objective_keys_for(kind);

  bool have_axis = false;
  for (const Entry& e : entries) {
    const std::string where = e.section + "." + e.key;
    if (e.section == "design_space") {
      cfg.axes.push_back(parse_axis(e.value));
      have_axis = true;
    } else if (e.section == "optimizer") {
      MoveLimitConfig& o = cfg.optimizer;
      if (e.key == "gamma_pan")
        o.gamma_pan = parse_double(e.value, where);
      else if (e.key == "gamma_osc")
        o.gamma_osc = parse_double(e.value, where);
      else if (e.key == "eta")
        o.eta = parse_double(e.value, where);
      else if (e.key == "beta")
        o.beta = parse_double(e.value, where);
      else if (e.key == "alpha")
        o.alpha = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "n0")
        o.n0 = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "k_max")
        o.k_max = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "sigma_max_factor")
        o.sigma_max = parse_double(e.value, where);
    } else if (e.section == "smoothing") {
      if (e.key == "samples")
        cfg.samples = parse_int(e.value, where);
      else if (e.key == "skip")
        cfg.skip = parse_int(e.value, where);
      else if (e.key == "delta")
        cfg.optimizer.delta = parse_double(e.value, where);
    } else if (e.section == "objective") {
      if (!obj_keys.count(e.key))
        throw ConfigError("key '" + e.key + "' does not apply to objective kind '" +
                          kind + "'");
      ObjectiveConfig& ob = cfg.objective;
      if (e.key == "kind") {
        // handled above
      } else if (e.key == "c_step")
        ob.c_step = parse_double(e.value, where);
      else if (e.key == "x_step")
        ob.x_step = parse_double(e.value, where);
      else if (e.key == "a")
        ob.quad_a = parse_numbers(e.value, where);
      else if (e.key == "b")
        ob.quad_b = parse_numbers(e.value, where);
      else if (e.key == "c")
        ob.quad_c = parse_double(e.value, where);
      else if (e.key == "command")
        ob.command = e.value;
      else if (e.key == "timeout")
        ob.timeout_seconds = parse_double(e.value, where);
      else if (e.key == "failure_policy") {
        if (e.value == "abort")
          ob.failure_policy = FailurePolicy::abort;
        else if (e.value == "penalty")
          ob.failure_policy = FailurePolicy::penalty;
        else
          throw ConfigError(where + ": expected abort or penalty, got '" +
                            e.value + "'");
      } else if (e.key == "penalty_value")
        ob.penalty_value = parse_double(e.value, where);
      else if (e.key == "n_nodes")
        ob.chain.n_nodes = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "k_bend")
        ob.chain.k_bend = parse_double(e.value, where);
      else if (e.key == "load_displacement")
        ob.chain.load_displacement = parse_double(e.value, where);
      else if (e.key == "load_steps")
        ob.chain.load_steps = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "phi_n")
        ob.chain.cohesive.phi_n = parse_double(e.value, where);
      else if (e.key == "phi_s")
        ob.chain.cohesive.phi_s = parse_double(e.value, where);
      else if (e.key == "r")
        ob.chain.cohesive.r = parse_double(e.value, where);
      else if (e.key == "delta_n_star")
        ob.chain.cohesive.delta_n_star = parse_double(e.value, where);
      else if (e.key == "delta_s_star")
        ob.chain.cohesive.delta_s_star = parse_double(e.value, where);
      else if (e.key == "strength_floor")
        ob.chain.strength_floor = parse_double(e.value, where);
      else if (e.key == "rigid_interface")
        ob.chain.rigid_interface = parse_bool(e.value, where);
    } else if (e.section == "execution") {
      if (e.key == "seed")
        cfg.seed = parse_uint(e.value, where);
      else if (e.key == "runs")
        cfg.runs = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "workers")
        cfg.workers = static_cast<int>(parse_int(e.value, where));
      else if (e.key == "out")
        cfg.out_dir = e.value;
    }
  }
  if (!have_axis)
    throw ConfigError("config needs at least one design_space axis line");
  cfg.validate();
  return cfg;
}

}  // namespace

void RunConfig::validate() const {
  if (axes.empty()) throw ConfigError("design space has no axes");
  DesignSpace space(axes);  // validates bounds and sigmas
  MoveLimitConfig resolved = optimizer;
  if (resolved.n0 <= 0) resolved.n0 = 3 * static_cast<int>(axes.size());
  resolved.validate();
  if (samples < 2) throw ConfigError("smoothing samples must be at least 2");
  if (skip < 0) throw ConfigError("smoothing skip must be nonnegative");
  objective.validate();
  if (objective.kind == "quadratic" &&
      objective.quad_b.size() != axes.size())
    throw ConfigError("quadratic objective dimension " +
                      std::to_string(objective.quad_b.size()) +
                      " does not match design space dimension " +
                      std::to_string(axes.size()));
  if (objective.kind == "cohesive_chain" &&
      axes.size() > static_cast<std::size_t>(objective.chain.n_nodes))
    throw ConfigError("more design axes than chain nodes");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (out_dir.empty()) throw ConfigError("output directory must not be empty");
}

RunConfig load_config_text(const std::string& text,
                           const std::vector<std::string>& overrides) {
  std::vector<Entry> entries = parse_entries(text);
  for (const std::string& o : overrides) apply_override(entries, o);
  return interpret(std::move(entries));
}

RunConfig load_config_file(const std::string& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_text(ss.str(), overrides);
}

std::string render_config(const RunConfig& cfg) {
  char buf[40];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  out += "[design_space]\n";
  for (const AxisSpec& a : cfg.axes) {
    out += "axis = " + num(a.lower) + " " + num(a.upper) + " " + num(a.sigma);
    if (a.periodic) out += " periodic";
    out += '\n';
  }
  MoveLimitConfig o = cfg.optimizer;
  if (o.n0 <= 0) o.n0 = 3 * static_cast<int>(cfg.axes.size());
  out += "\n[optimizer]\n";
  out += "gamma_pan = " + num(o.gamma_pan) + '\n';
  out += "gamma_osc = " + num(o.gamma_osc) + '\n';
  out += "eta = " + num(o.eta) + '\n';
  out += "beta = " + num(o.beta) + '\n';
  out += "alpha = " + std::to_string(o.alpha) + '\n';
  out += "n0 = " + std::to_string(o.n0) + '\n';
  out += "k_max = " + std::to_string(o.k_max) + '\n';
  out += "sigma_max_factor = " + num(o.sigma_max) + '\n';
  out += "\n[smoothing]\n";
  out += "samples = " + std::to_string(cfg.samples) + '\n';
  out += "skip = " + std::to_string(cfg.skip) + '\n';
  out += "delta = " + num(o.delta) + '\n';
  out += "\n[objective]\n";
  const ObjectiveConfig& ob = cfg.objective;
  out += "kind = " + ob.kind + '\n';
  if (ob.kind == "herbie_step" || ob.kind == "step") {
    out += "c_step = " + num(ob.c_step) + '\n';
    out += "x_step = " + num(ob.x_step) + '\n';
  } else if (ob.kind == "quadratic") {
    out += "a =";
    for (double v : ob.quad_a) out += " " + num(v);
    out += '\n';
    out += "b =";
    for (double v : ob.quad_b) out += " " + num(v);
    out += '\n';
    out += "c = " + num(ob.quad_c) + '\n';
  } else if (ob.kind == "external") {
    out += "command = " + ob.command + '\n';
    out += "timeout = " + num(ob.timeout_seconds) + '\n';
    out += std::string("failure_policy = ") +
           (ob.failure_policy == FailurePolicy::abort ? "abort" : "penalty") +
           '\n';
    out += "penalty_value = " + num(ob.penalty_value) + '\n';
  } else if (ob.kind == "cohesive_chain") {
    const ChainConfig& ch = ob.chain;
    out += "n_nodes = " + std::to_string(ch.n_nodes) + '\n';
    out += "k_bend = " + num(ch.k_bend) + '\n';
    out += "load_displacement = " + num(ch.load_displacement) + '\n';
    out += "load_steps = " + std::to_string(ch.load_steps) + '\n';
    out += "phi_n = " + num(ch.cohesive.phi_n) + '\n';
    out += "phi_s = " + num(ch.cohesive.phi_s) + '\n';
    out += "r = " + num(ch.cohesive.r) + '\n';
    out += "delta_n_star = " + num(ch.cohesive.delta_n_star) + '\n';
    out += "delta_s_star = " + num(ch.cohesive.delta_s_star) + '\n';
    out += "strength_floor = " + num(ch.strength_floor) + '\n';
    out += std::string("rigid_interface = ") +
           (ch.rigid_interface ? "true" : "false") + '\n';
  }
  out += "\n[execution]\n";
  out += "seed = " + std::to_string(cfg.seed) + '\n';
  out += "runs = " + std::to_string(cfg.runs) + '\n';
  out += "workers = " + std::to_string(cfg.workers) + '\n';
  out += "out = " + cfg.out_dir + '\n';
  return out;
}

}  // namespace rdopt
