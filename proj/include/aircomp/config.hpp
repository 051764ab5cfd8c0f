// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aircomp/channel_io.hpp"
#include "aircomp/evaluation.hpp"
#include "aircomp/optimizer.hpp"
#include "aircomp/scenario.hpp"

namespace aircomp {

double db_to_linear(double db);
// dBm -> watts.
double dbm_to_watts(double dbm);

struct SweepSection {
  SweepParameter parameter = SweepParameter::kElements;
  std::vector<double> values;
  std::vector<Scheme> schemes{Scheme::kAlternatingSvrg};
  int realizations = 30;
  int eval_samples = 1000;
  bool resample_positions = true;
};

// Everything one CLI invocation needs. Powers and the threshold are kept in
// the units they were given in (dBm / dB); conversion to linear happens in
// scenario_config() and gamma() only.
struct RunConfig {
  ScenarioConfig scenario;  // max_power / noise_power / seed are ignored here
  double p_dbm = 0.0;
  double sigma2_dbm = -100.0;
  double tau_db = -28.0;

  SolverConfig solver;  // seed is ignored here
  int train_samples = 300;
  std::uint64_t seed = 1;  // master seed for every substream
  Scheme scheme = Scheme::kAlternatingSvrg;
  ChannelFormat format = ChannelFormat::kText;
  int threads = 0;  // 0 = OpenMP default
  std::string channels;
  std::string out;

  std::optional<SweepSection> sweep;

  ScenarioConfig scenario_config() const;
  SolverConfig solver_config() const;
  double gamma() const;
  SweepSpec sweep_spec() const;  // throws ValidationError if there is no sweep
};

bool operator==(const RunConfig& a, const RunConfig& b);

// Flat INI-style text: [Section] headers named after the config types, then
// `key = value` lines; '#' starts a comment. Keys may be given in any order
// and missing keys keep the values of `base`.
RunConfig parse_run_config(std::istream& in, const RunConfig& base = {});
RunConfig load_run_config(const std::string& path, const RunConfig& base = {});
void print_run_config(std::ostream& out, const RunConfig& cfg);

// desk, desk-fig1, desk-fig2, desk-fig3, paper-fig1, paper-fig2, paper-fig3.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace aircomp
