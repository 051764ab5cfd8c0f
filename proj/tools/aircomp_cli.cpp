// SPDX-License-Identifier: Apache-2.0
// aircomp: generate channel sets, solve, sweep and print configurations.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "aircomp/channel_io.hpp"
#include "aircomp/config.hpp"
#include "aircomp/errors.hpp"
#include "aircomp/evaluation.hpp"
#include "aircomp/optimizer.hpp"

namespace {

using namespace aircomp;

struct Overrides {
  std::string config;
  std::string preset = "desk";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> scheme;
  std::optional<std::string> format;
  std::optional<double> temperature;
  std::optional<int> K, N, M, T;
  std::optional<double> tau_db, p_dbm, sigma2_dbm;
  std::optional<int> L, R, Q, batch;
  std::optional<double> alpha_m, alpha_v;
  std::optional<std::string> out;
  std::optional<std::string> channels;
  std::optional<int> realizations, eval_samples;
  bool keep_best = false;
  bool unordered = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "configuration file");
  cmd->add_option("--preset", o.preset, "built-in configuration")->default_str("desk");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 = default)");
  cmd->add_option("--scheme", o.scheme, "alternating-svrg|sgd|random-phase|no-ris");
  cmd->add_option("--format", o.format, "channel-set encoding: text|binary");
  cmd->add_option("--temperature", o.temperature, "sigmoid temperature c");
  cmd->add_option("--K", o.K, "devices");
  cmd->add_option("--N", o.N, "AP antennas");
  cmd->add_option("--M", o.M, "RIS elements");
  cmd->add_option("--T", o.T, "training samples");
  cmd->add_option("--tau-db", o.tau_db, "MSE threshold (dB)");
  cmd->add_option("--p-dbm", o.p_dbm, "device power budget (dBm)");
  cmd->add_option("--sigma2-dbm", o.sigma2_dbm, "noise power (dBm)");
  cmd->add_option("--L", o.L, "alternation rounds");
  cmd->add_option("--R", o.R, "SVRG epochs per block");
  cmd->add_option("--Q", o.Q, "updates per epoch");
  cmd->add_option("--batch", o.batch, "mini-batch size");
  cmd->add_option("--alpha-m", o.alpha_m, "beamformer step size");
  cmd->add_option("--alpha-v", o.alpha_v, "phase step size");
  cmd->add_option("--out", o.out, "output file");
  cmd->add_option("--channels", o.channels, "channel-set file");
  cmd->add_option("--realizations", o.realizations, "sweep realizations");
  cmd->add_option("--eval-samples", o.eval_samples, "evaluation draws per realization");
  cmd->add_flag("--keep-best", o.keep_best, "return the best-on-training round");
  cmd->add_flag("--unordered", o.unordered, "allow non-deterministic reductions");
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = preset(o.preset);
  if (!o.config.empty()) c = load_run_config(o.config, c);
  if (o.seed) c.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  if (o.scheme) c.scheme = parse_scheme(*o.scheme);
  if (o.format) c.format = parse_channel_format(*o.format);
  if (o.temperature) c.solver.temperature = *o.temperature;
  if (o.K) c.scenario.devices = *o.K;
  if (o.N) c.scenario.antennas = *o.N;
  if (o.M) c.scenario.elements = *o.M;
  if (o.T) c.train_samples = *o.T;
  if (o.tau_db) c.tau_db = *o.tau_db;
  if (o.p_dbm) c.p_dbm = *o.p_dbm;
  if (o.sigma2_dbm) c.sigma2_dbm = *o.sigma2_dbm;
  if (o.L) c.solver.rounds = *o.L;
  if (o.R) c.solver.epochs = *o.R;
  if (o.Q) c.solver.inner_iterations = *o.Q;
  if (o.batch) c.solver.batch_size = *o.batch;
  if (o.alpha_m) c.solver.step_m = *o.alpha_m;
  if (o.alpha_v) c.solver.step_v = *o.alpha_v;
  if (o.out) c.out = *o.out;
  if (o.channels) c.channels = *o.channels;
  if (o.keep_best) c.solver.keep_best = true;
  if (o.unordered) c.solver.deterministic = false;
  if (o.realizations || o.eval_samples) {
    if (!c.sweep) c.sweep.emplace();
    if (o.realizations) c.sweep->realizations = *o.realizations;
    if (o.eval_samples) c.sweep->eval_samples = *o.eval_samples;
  }
  if (c.threads < 0) throw ValidationError("threads", "must be >= 0");
  if (c.threads > 0) omp_set_num_threads(c.threads);
  return c;
}

std::string require_out(const RunConfig& c) {
  if (c.out.empty()) throw ValidationError("out", "an output path is required");
  return c.out;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

std::string trace_path_for(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + "_trace.csv";
  }
  return out + "_trace.csv";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_generate(const Overrides& o) {
  const RunConfig c = resolve(o);
  if (c.train_samples <= 0) throw ValidationError("T", "number of samples must be >= 1");
  const std::string out = require_out(c);
  const ScenarioConfig scenario = c.scenario_config();
  const ChannelSet set = generate_channel_set(scenario, static_cast<std::size_t>(c.train_samples));
  write_channel_set(out, set, c.format);
  std::cout << "K=" << scenario.devices << " N=" << scenario.antennas << " M=" << scenario.elements
            << " T=" << set.size() << " seed=" << scenario.seed << '\n';
  return 0;
}

void check_dims(const Overrides& o, const ChannelSet& set) {
  const ScenarioConfig& s = set.scenario;
  if (o.K && *o.K != s.devices)
    throw ValidationError("K", "flag " + std::to_string(*o.K) + " != file " + std::to_string(s.devices));
  if (o.N && *o.N != s.antennas)
    throw ValidationError("N", "flag " + std::to_string(*o.N) + " != file " + std::to_string(s.antennas));
  if (o.M && *o.M != s.elements)
    throw ValidationError("M", "flag " + std::to_string(*o.M) + " != file " + std::to_string(s.elements));
  if (o.T && static_cast<std::size_t>(*o.T) != set.size())
    throw ValidationError("T", "flag " + std::to_string(*o.T) + " != file " + std::to_string(set.size()));
}

int cmd_solve(const Overrides& o, const std::optional<std::string>& trace_opt, bool timing) {
  RunConfig c = resolve(o);
  if (c.channels.empty()) throw ValidationError("channels", "a channel-set path is required");
  const std::string out = require_out(c);
  const ChannelSet set = read_channel_set(c.channels);
  check_dims(o, set);

  SolverConfig solver = c.solver_config();
  solver.record_time = timing;
  // The threshold is relative to the powers the set was drawn under.
  const double gamma = gamma_from_tau_db(c.tau_db, set.scenario);
  const SolveResult result = solve_scheme(c.scheme, set, solver, gamma);

  {
    std::ofstream f = open_out(out);
    f << "vector,index,real,imag\n";
    for (Eigen::Index i = 0; i < result.state.m.size(); ++i)
      f << "m," << i << ',' << fmt(result.state.m[i].real()) << ',' << fmt(result.state.m[i].imag()) << '\n';
    for (Eigen::Index i = 0; i < result.state.v.size(); ++i)
      f << "v," << i << ',' << fmt(result.state.v[i].real()) << ',' << fmt(result.state.v[i].imag()) << '\n';
    if (!f) throw IoError("write failed: " + out);
  }
  const std::string trace_path = trace_opt ? *trace_opt : trace_path_for(out);
  {
    std::ofstream f = open_out(trace_path);
    f << "outer_iteration,u1,u2,train_outage,elapsed_seconds\n";
    for (const auto& r : result.trace)
      f << r.round << ',' << fmt(r.u1) << ',' << fmt(r.u2) << ',' << fmt(r.train_outage) << ','
        << fmt(r.elapsed_seconds) << '\n';
    if (!f) throw IoError("write failed: " + trace_path);
  }
  const double final_outage = result.trace.empty() ? empirical_outage(result.state.m, result.state.v, set, gamma)
                                                   : result.trace.back().train_outage;
  std::cout << "scheme=" << to_string(c.scheme) << " rounds=" << result.trace.size()
            << " train_outage=" << fmt(final_outage) << '\n';
  return 0;
}

int cmd_sweep(const Overrides& o, const std::optional<std::string>& values) {
  RunConfig c = resolve(o);
  if (values) {
    if (!c.sweep) c.sweep.emplace();
    std::istringstream cfg("[SweepSpec]\nvalues = " + *values + "\n");
    c = parse_run_config(cfg, c);
  }
  const std::string out = require_out(c);
  const SweepSpec spec = c.sweep_spec();
  const SweepResult result = run_sweep(spec);
  {
    std::ofstream f = open_out(out);
    write_sweep_csv(f, result);
    if (!f) throw IoError("write failed: " + out);
  }
  std::cout << "rows=" << result.rows.size() << " out=" << out << '\n';
  if (result.all_failed()) {
    std::cerr << "error: sweep: every cell failed; first: " << result.rows.front().error << '\n';
    return 1;
  }
  return 0;
}

int cmd_print_config(const Overrides& o) {
  const RunConfig c = resolve(o);
  if (o.out) {
    std::ofstream f = open_out(*o.out);
    print_run_config(f, c);
  } else {
    print_run_config(std::cout, c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided AirComp stochastic beamforming simulator"};
  app.require_subcommand(1);

  Overrides o;
  std::optional<std::string> trace;
  std::optional<std::string> values;
  bool timing = false;

  auto* gen = app.add_subcommand("generate", "draw a training channel set");
  add_common(gen, o);
  auto* solve = app.add_subcommand("solve", "optimize (m, v) on a channel set");
  add_common(solve, o);
  solve->add_option("--trace", trace, "trace CSV path (default: <out>_trace.csv)");
  solve->add_flag("--timing", timing, "record wall-clock time per round");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo outage sweep");
  add_common(sweep, o);
  sweep->add_option("--values", values, "comma-separated sweep values");
  auto* print = app.add_subcommand("print-config", "echo the resolved configuration");
  add_common(print, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (solve->parsed()) return cmd_solve(o, trace, timing);
    if (sweep->parsed()) return cmd_sweep(o, values);
    if (print->parsed()) return cmd_print_config(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
