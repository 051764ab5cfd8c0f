// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "aircomp/objective.hpp"
#include "aircomp/optimizer.hpp"
#include "aircomp/scenario.hpp"

namespace aircomp {

struct OutageEstimate {
  double p_hat = 0.0;
  std::size_t samples = 0;
  double half_width_95 = 0.0;  // 1.96 sqrt(p (1 - p) / n)

  static OutageEstimate from_count(std::size_t outages, std::size_t n);
};

enum class Scheme { kAlternatingSvrg, kRandomPhase, kNoRis, kSgd };

Scheme parse_scheme(const std::string& name);
const char* to_string(Scheme scheme);

enum class SweepParameter { kElements, kAntennas, kTau };

SweepParameter parse_sweep_parameter(const std::string& name);
// Column label used in the sweep CSV: "M", "N" or "tau_db".
const char* to_string(SweepParameter parameter);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::kElements;
  std::vector<double> values;        // strictly monotone; tau in dB
  ScenarioConfig scenario;           // scenario.seed is the master seed
  SolverConfig solver;
  double tau_db = -28.0;             // used unless tau is swept
  std::vector<Scheme> schemes{Scheme::kAlternatingSvrg};
  int train_samples = 300;  // T
  int realizations = 100;
  int eval_samples = 1000;
  // Redraw device positions per realization; otherwise realization 0's
  // positions are reused everywhere.
  bool resample_positions = true;

  void validate() const;
};

// gamma = tau P / sigma^2 with tau in dB.
double gamma_from_tau_db(double tau_db, const ScenarioConfig& scenario);

// Outage of a fixed (m, v) over n fresh samples drawn under `plan`
// (plan.fading defaults to the evaluation stream). Samples are generated and
// scored one at a time, never stored; the draws are the ones
// generate_channel_set(cfg, n, plan) would produce.
OutageEstimate monte_carlo_outage(const BeamformingState& state, const ScenarioConfig& cfg,
                                  std::size_t n, double gamma, DrawPlan plan = {Stream::kEvalFading});

// Optimizes m only with the RIS -> AP link removed.
SolveResult no_ris_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma);

// Dispatches one scheme on a training set.
SolveResult solve_scheme(Scheme scheme, const ChannelSet& set, const SolverConfig& cfg, double gamma);

struct SweepRow {
  std::string parameter;
  double value = 0.0;
  Scheme scheme = Scheme::kAlternatingSvrg;
  double mean_outage = 0.0;
  double stderr_outage = 0.0;
  int realizations = 0;  // successful ones
  int eval_samples = 0;
  std::string error;     // first failure in the cell, empty if none
};

struct SweepResult {
  std::vector<SweepRow> rows;  // value-major, then scheme in spec order
  // outcomes[value][scheme][realization]; NaN where the solve failed.
  std::vector<std::vector<std::vector<double>>> outcomes;

  const SweepRow& row(std::size_t value_index, std::size_t scheme_index) const;
  bool all_failed() const;
};

SweepResult run_sweep(const SweepSpec& spec);

// Header: param,value,scheme,mean_outage,stderr,realizations,eval_samples,error
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace aircomp
