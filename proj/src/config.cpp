// SPDX-License-Identifier: Apache-2.0
#include "aircomp/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "aircomp/errors.hpp"

namespace aircomp {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  return static_cast<int>(to_integer(key, text));
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (text.empty() || text[0] == '-') throw ValidationError(key, "expected a non-negative integer");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError(key, "expected true|false, got '" + text + "'");
}

Vec3 to_vec3(const std::string& key, const std::string& text) {
  const auto parts = split_list(text);
  if (parts.size() != 3) throw ValidationError(key, "expected three comma-separated numbers");
  return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec3(const Vec3& v) { return num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()); }

void set_scenario(RunConfig& c, const std::string& key, const std::string& val) {
  ScenarioConfig& s = c.scenario;
  if (key == "ap_position") s.ap_position = to_vec3(key, val);
  else if (key == "ris_position") s.ris_position = to_vec3(key, val);
  else if (key == "device_region_center") s.device_region_center = to_vec3(key, val);
  else if (key == "device_region_side") s.device_region_side = to_double(key, val);
  else if (key == "K") s.devices = to_int(key, val);
  else if (key == "N") s.antennas = to_int(key, val);
  else if (key == "M") s.elements = to_int(key, val);
  else if (key == "p_dbm") c.p_dbm = to_double(key, val);
  else if (key == "sigma2_dbm") c.sigma2_dbm = to_double(key, val);
  else if (key == "L0") s.reference_loss = to_double(key, val);
  else if (key == "beta_direct") s.beta_direct = to_double(key, val);
  else if (key == "beta_ris_ap") s.beta_ris_ap = to_double(key, val);
  else if (key == "beta_dev_ris") s.beta_dev_ris = to_double(key, val);
  else if (key == "rician_factor") s.rician_factor = to_double(key, val);
  else throw ValidationError(key, "unknown key in [ScenarioConfig]");
}

void set_surrogate(RunConfig& c, const std::string& key, const std::string& val) {
  if (key == "tau_db") c.tau_db = to_double(key, val);
  else if (key == "temperature") c.solver.temperature = to_double(key, val);
  else throw ValidationError(key, "unknown key in [SurrogateParams]");
}

void set_solver(RunConfig& c, const std::string& key, const std::string& val) {
  SolverConfig& s = c.solver;
  if (key == "L") s.rounds = to_int(key, val);
  else if (key == "R") s.epochs = to_int(key, val);
  else if (key == "Q") s.inner_iterations = to_int(key, val);
  else if (key == "batch") s.batch_size = to_int(key, val);
  else if (key == "alpha_m") s.step_m = to_double(key, val);
  else if (key == "alpha_v") s.step_v = to_double(key, val);
  else if (key == "keep_best") s.keep_best = to_bool(key, val);
  else if (key == "deterministic") s.deterministic = to_bool(key, val);
  else throw ValidationError(key, "unknown key in [SolverConfig]");
}

void set_sweep(RunConfig& c, const std::string& key, const std::string& val) {
  SweepSection& s = *c.sweep;
  if (key == "parameter") {
    s.parameter = parse_sweep_parameter(val);
  } else if (key == "values") {
    s.values.clear();
    for (const auto& item : split_list(val)) s.values.push_back(to_double(key, item));
  } else if (key == "schemes") {
    s.schemes.clear();
    for (const auto& item : split_list(val)) s.schemes.push_back(parse_scheme(item));
  } else if (key == "realizations") {
    s.realizations = to_int(key, val);
  } else if (key == "eval_samples") {
    s.eval_samples = to_int(key, val);
  } else if (key == "resample_positions") {
    s.resample_positions = to_bool(key, val);
  } else {
    throw ValidationError(key, "unknown key in [SweepSpec]");
  }
}

void set_run(RunConfig& c, const std::string& key, const std::string& val) {
  if (key == "seed") c.seed = to_u64(key, val);
  else if (key == "T") c.train_samples = to_int(key, val);
  else if (key == "scheme") c.scheme = parse_scheme(val);
  else if (key == "format") c.format = parse_channel_format(val);
  else if (key == "threads") c.threads = to_int(key, val);
  else if (key == "channels") c.channels = val;
  else if (key == "out") c.out = val;
  else throw ValidationError(key, "unknown key in [RunConfig]");
}

bool same_scenario(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a.ap_position == b.ap_position && a.ris_position == b.ris_position &&
         a.device_region_center == b.device_region_center &&
         a.device_region_side == b.device_region_side && a.devices == b.devices &&
         a.antennas == b.antennas && a.elements == b.elements &&
         a.reference_loss == b.reference_loss && a.beta_direct == b.beta_direct &&
         a.beta_ris_ap == b.beta_ris_ap && a.beta_dev_ris == b.beta_dev_ris &&
         a.rician_factor == b.rician_factor;
}

bool same_solver(const SolverConfig& a, const SolverConfig& b) {
  return a.rounds == b.rounds && a.epochs == b.epochs && a.inner_iterations == b.inner_iterations &&
         a.step_m == b.step_m && a.step_v == b.step_v && a.batch_size == b.batch_size &&
         a.temperature == b.temperature && a.keep_best == b.keep_best &&
         a.deterministic == b.deterministic;
}

bool same_sweep(const std::optional<SweepSection>& a, const std::optional<SweepSection>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->parameter == b->parameter && a->values == b->values && a->schemes == b->schemes &&
         a->realizations == b->realizations && a->eval_samples == b->eval_samples &&
         a->resample_positions == b->resample_positions;
}

RunConfig desk_base() {
  RunConfig c;
  c.scenario.devices = 5;
  c.scenario.antennas = 4;
  c.scenario.elements = 8;
  c.train_samples = 100;
  c.solver.rounds = 10;
  c.solver.epochs = 20;
  c.solver.inner_iterations = 10;
  c.solver.batch_size = 20;
  c.solver.step_v = 100.0;
  c.tau_db = -6.0;
  return c;
}

RunConfig paper_base() {
  RunConfig c;
  c.scenario.devices = 20;
  c.scenario.antennas = 20;
  c.scenario.elements = 40;
  c.train_samples = 300;
  c.solver.rounds = 100;
  c.solver.epochs = 200;
  c.solver.inner_iterations = 25;
  c.solver.batch_size = 50;
  c.solver.step_m = 0.1;
  c.solver.step_v = 0.01;
  c.tau_db = -28.0;
  return c;
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return 1e-3 * db_to_linear(dbm); }

ScenarioConfig RunConfig::scenario_config() const {
  ScenarioConfig s = scenario;
  s.max_power = dbm_to_watts(p_dbm);
  s.noise_power = dbm_to_watts(sigma2_dbm);
  s.seed = seed;
  return s;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s = solver;
  s.seed = seed;
  return s;
}

double RunConfig::gamma() const {
  return gamma_from_tau_db(tau_db, scenario_config());
}

SweepSpec RunConfig::sweep_spec() const {
  if (!sweep) throw ValidationError("SweepSpec", "configuration has no [SweepSpec] section");
  SweepSpec spec;
  spec.parameter = sweep->parameter;
  spec.values = sweep->values;
  spec.scenario = scenario_config();
  spec.solver = solver_config();
  spec.tau_db = tau_db;
  spec.schemes = sweep->schemes;
  spec.train_samples = train_samples;
  spec.realizations = sweep->realizations;
  spec.eval_samples = sweep->eval_samples;
  spec.resample_positions = sweep->resample_positions;
  return spec;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return same_scenario(a.scenario, b.scenario) && a.p_dbm == b.p_dbm &&
         a.sigma2_dbm == b.sigma2_dbm && a.tau_db == b.tau_db && same_solver(a.solver, b.solver) &&
         a.train_samples == b.train_samples && a.seed == b.seed && a.scheme == b.scheme &&
         a.format == b.format && a.threads == b.threads && a.channels == b.channels &&
         a.out == b.out && same_sweep(a.sweep, b.sweep);
}

RunConfig parse_run_config(std::istream& in, const RunConfig& base) {
  RunConfig c = base;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("line " + std::to_string(lineno), "unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section == "SweepSpec" && !c.sweep) c.sweep.emplace();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(lineno), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section == "ScenarioConfig") set_scenario(c, key, val);
    else if (section == "SurrogateParams") set_surrogate(c, key, val);
    else if (section == "SolverConfig") set_solver(c, key, val);
    else if (section == "SweepSpec") set_sweep(c, key, val);
    else if (section == "RunConfig") set_run(c, key, val);
    else throw ValidationError("line " + std::to_string(lineno), "key outside a known section");
  }
  return c;
}

RunConfig load_run_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  return parse_run_config(in, base);
}

void print_run_config(std::ostream& out, const RunConfig& c) {
  const ScenarioConfig& s = c.scenario;
  out << "[ScenarioConfig]\n"
      << "ap_position = " << vec3(s.ap_position) << '\n'
      << "ris_position = " << vec3(s.ris_position) << '\n'
      << "device_region_center = " << vec3(s.device_region_center) << '\n'
      << "device_region_side = " << num(s.device_region_side) << '\n'
      << "K = " << s.devices << '\n'
      << "N = " << s.antennas << '\n'
      << "M = " << s.elements << '\n'
      << "p_dbm = " << num(c.p_dbm) << '\n'
      << "sigma2_dbm = " << num(c.sigma2_dbm) << '\n'
      << "L0 = " << num(s.reference_loss) << '\n'
      << "beta_direct = " << num(s.beta_direct) << '\n'
      << "beta_ris_ap = " << num(s.beta_ris_ap) << '\n'
      << "beta_dev_ris = " << num(s.beta_dev_ris) << '\n'
      << "rician_factor = " << num(s.rician_factor) << "\n\n";
  out << "[SurrogateParams]\n"
      << "tau_db = " << num(c.tau_db) << '\n'
      << "temperature = " << num(c.solver.temperature) << "\n\n";
  const SolverConfig& v = c.solver;
  out << "[SolverConfig]\n"
      << "L = " << v.rounds << '\n'
      << "R = " << v.epochs << '\n'
      << "Q = " << v.inner_iterations << '\n'
      << "batch = " << v.batch_size << '\n'
      << "alpha_m = " << num(v.step_m) << '\n'
      << "alpha_v = " << num(v.step_v) << '\n'
      << "keep_best = " << (v.keep_best ? "true" : "false") << '\n'
      << "deterministic = " << (v.deterministic ? "true" : "false") << "\n\n";
  if (c.sweep) {
    const SweepSection& w = *c.sweep;
    out << "[SweepSpec]\n"
        << "parameter = " << (w.parameter == SweepParameter::kTau ? "tau" : to_string(w.parameter))
        << '\n'
        << "values = ";
    for (std::size_t i = 0; i < w.values.size(); ++i) out << (i ? ", " : "") << num(w.values[i]);
    out << "\nschemes = ";
    for (std::size_t i = 0; i < w.schemes.size(); ++i) out << (i ? ", " : "") << to_string(w.schemes[i]);
    out << "\nrealizations = " << w.realizations << '\n'
        << "eval_samples = " << w.eval_samples << '\n'
        << "resample_positions = " << (w.resample_positions ? "true" : "false") << "\n\n";
  }
  out << "[RunConfig]\n"
      << "seed = " << c.seed << '\n'
      << "T = " << c.train_samples << '\n'
      << "scheme = " << to_string(c.scheme) << '\n'
      << "format = " << to_string(c.format) << '\n'
      << "threads = " << c.threads << '\n'
      << "channels = " << c.channels << '\n'
      << "out = " << c.out << '\n';
}

RunConfig preset(const std::string& name) {
  if (name == "desk" || name == "desk-fig1") {
    RunConfig c = desk_base();
    c.sweep = SweepSection{SweepParameter::kElements, {4, 8, 16},
                           {Scheme::kAlternatingSvrg, Scheme::kRandomPhase, Scheme::kNoRis}, 30,
                           1000, true};
    return c;
  }
  if (name == "desk-fig2") {
    RunConfig c = desk_base();
    c.scenario.elements = 16;
    c.sweep = SweepSection{SweepParameter::kAntennas, {2, 4, 8},
                           {Scheme::kAlternatingSvrg, Scheme::kRandomPhase}, 30, 1000, true};
    return c;
  }
  if (name == "desk-fig3") {
    RunConfig c = desk_base();
    c.scenario.elements = 16;
    c.sweep = SweepSection{SweepParameter::kTau, {-12, -9, -6, -3, 0},
                           {Scheme::kAlternatingSvrg, Scheme::kNoRis}, 30, 1000, true};
    return c;
  }
  if (name == "paper-fig1") {
    RunConfig c = paper_base();
    c.sweep = SweepSection{SweepParameter::kElements, {10, 20, 30, 40, 50},
                           {Scheme::kAlternatingSvrg, Scheme::kRandomPhase}, 100, 1000, true};
    return c;
  }
  if (name == "paper-fig2") {
    RunConfig c = paper_base();
    c.sweep = SweepSection{SweepParameter::kAntennas, {10, 15, 20, 25, 30},
                           {Scheme::kAlternatingSvrg, Scheme::kRandomPhase}, 100, 1000, true};
    return c;
  }
  if (name == "paper-fig3") {
    RunConfig c = paper_base();
    c.sweep = SweepSection{SweepParameter::kTau, {-34, -32, -30, -28, -26, -24},
                           {Scheme::kAlternatingSvrg, Scheme::kNoRis}, 100, 1000, true};
    return c;
  }
  throw ValidationError("preset", "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"desk", "desk-fig1", "desk-fig2", "desk-fig3", "paper-fig1", "paper-fig2", "paper-fig3"};
}

}  // namespace aircomp
