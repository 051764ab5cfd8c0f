// SPDX-License-Identifier: Apache-2.0
#include "aircomp/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "aircomp/errors.hpp"

namespace aircomp {

namespace {

ScenarioConfig scenario_for_value(const SweepSpec& spec, double value) {
  ScenarioConfig cfg = spec.scenario;
  switch (spec.parameter) {
    case SweepParameter::kElements:
      cfg.elements = static_cast<int>(value);
      break;
    case SweepParameter::kAntennas:
      cfg.antennas = static_cast<int>(value);
      break;
    case SweepParameter::kTau:
      break;
  }
  return cfg;
}

double tau_for_value(const SweepSpec& spec, double value) {
  return spec.parameter == SweepParameter::kTau ? value : spec.tau_db;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// CSV-safe: the error text goes into one quoted field.
std::string quoted(const std::string& s) {
  if (s.empty()) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out + "\"";
}

}  // namespace

OutageEstimate OutageEstimate::from_count(std::size_t outages, std::size_t n) {
  OutageEstimate e;
  e.samples = n;
  e.p_hat = static_cast<double>(outages) / static_cast<double>(n);
  e.half_width_95 = 1.96 * std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

Scheme parse_scheme(const std::string& name) {
  if (name == "alternating-svrg" || name == "svrg") return Scheme::kAlternatingSvrg;
  if (name == "random-phase") return Scheme::kRandomPhase;
  if (name == "no-ris") return Scheme::kNoRis;
  if (name == "sgd") return Scheme::kSgd;
  throw ValidationError("scheme", "expected alternating-svrg|random-phase|no-ris|sgd, got '" + name + "'");
}

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kAlternatingSvrg: return "alternating-svrg";
    case Scheme::kRandomPhase: return "random-phase";
    case Scheme::kNoRis: return "no-ris";
    case Scheme::kSgd: return "sgd";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "M") return SweepParameter::kElements;
  if (name == "N") return SweepParameter::kAntennas;
  if (name == "tau" || name == "tau_db") return SweepParameter::kTau;
  throw ValidationError("parameter", "expected M|N|tau, got '" + name + "'");
}

const char* to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::kElements: return "M";
    case SweepParameter::kAntennas: return "N";
    case SweepParameter::kTau: return "tau_db";
  }
  return "?";
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("values", "must not be empty");
  const bool up = values.size() < 2 || values[1] > values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
      throw ValidationError("values", "must be strictly monotone");
    }
  }
  if (parameter != SweepParameter::kTau) {
    for (double v : values) {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw ValidationError("values", "M/N values must be positive integers");
      }
    }
  }
  if (schemes.empty()) throw ValidationError("schemes", "must not be empty");
  if (realizations < 1) throw ValidationError("realizations", "must be >= 1");
  if (eval_samples < 1) throw ValidationError("eval_samples", "must be >= 1");
  if (train_samples < 1) throw ValidationError("T", "must be >= 1");
  for (double v : values) scenario_for_value(*this, v).validate();
  solver.validate(static_cast<std::size_t>(train_samples));
}

double gamma_from_tau_db(double tau_db, const ScenarioConfig& scenario) {
  return std::pow(10.0, tau_db / 10.0) * scenario.max_power / scenario.noise_power;
}

OutageEstimate monte_carlo_outage(const BeamformingState& state, const ScenarioConfig& cfg,
                                  std::size_t n, double gamma, DrawPlan plan) {
  cfg.validate();
  if (n < 1) throw ValidationError("n", "must be >= 1");
  if (plan.fading == Stream::kTrainFading) {
    throw ValidationError("stream", "evaluation draws must not reuse the training substreams");
  }
  if (state.m.size() != cfg.antennas || state.v.size() != cfg.elements) {
    throw ValidationError("state", "dimensions disagree with the scenario");
  }
  std::vector<Vec3> positions;
  if (plan.positions) {
    positions = *plan.positions;
  } else {
    Rng geo(derive_seed(cfg.seed, Stream::kGeometry, plan.realization));
    positions = sample_device_positions(cfg, geo);
  }
  const LinkGains gains = link_gains(cfg, positions);

  const auto total = static_cast<std::int64_t>(n);
  std::int64_t outages = 0;
#pragma omp parallel for schedule(static) reduction(+ : outages) if (total > 64)
  for (std::int64_t t = 0; t < total; ++t) {
    Rng rng(derive_seed(cfg.seed, plan.fading, plan.realization, static_cast<std::uint64_t>(t)));
    ChannelSample s = draw_channel_sample(cfg, gains, rng);
    if (!plan.ris_present) s.ris_to_ap.setZero();
    outages += in_outage(state.m, state.v, s, gamma) ? 1 : 0;
  }
  return OutageEstimate::from_count(static_cast<std::size_t>(outages), n);
}

SolveResult no_ris_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma) {
  const ChannelSet bare = without_ris(set);
  BeamformingState start;
  if (cfg.initial) {
    start = *cfg.initial;
  } else {
    Rng rng(derive_seed(cfg.seed, Stream::kSolverInit));
    start = initial_state(set.scenario.antennas, set.scenario.elements, rng);
  }
  return solve_beamformer_only(bare, cfg, gamma, start);
}

SolveResult solve_scheme(Scheme scheme, const ChannelSet& set, const SolverConfig& cfg, double gamma) {
  switch (scheme) {
    case Scheme::kAlternatingSvrg: return alternating_solve(set, cfg, gamma);
    case Scheme::kRandomPhase: return random_phase_baseline(set, cfg, gamma);
    case Scheme::kNoRis: return no_ris_baseline(set, cfg, gamma);
    case Scheme::kSgd: return sgd_solve(set, cfg, gamma);
  }
  throw ValidationError("scheme", "unknown scheme");
}

const SweepRow& SweepResult::row(std::size_t value_index, std::size_t scheme_index) const {
  const std::size_t schemes = outcomes.empty() ? 0 : outcomes.front().size();
  return rows.at(value_index * schemes + scheme_index);
}

bool SweepResult::all_failed() const {
  for (const SweepRow& r : rows) {
    if (r.realizations > 0) return false;
  }
  return true;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t V = spec.values.size();
  const std::size_t S = spec.schemes.size();
  const auto R = static_cast<std::size_t>(spec.realizations);
  const std::uint64_t master = spec.scenario.seed;

  SweepResult result;
  result.outcomes.assign(V, std::vector<std::vector<double>>(S, std::vector<double>(R)));
  std::vector<std::vector<std::vector<std::string>>> errors(
      V, std::vector<std::vector<std::string>>(S, std::vector<std::string>(R)));

  // Realization r shares its geometry, training draw, evaluation draw and
  // solver seed across all schemes and swept values (common random numbers).
  const auto tasks = static_cast<std::int64_t>(V * R);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t task = 0; task < tasks; ++task) {
    const std::size_t vi = static_cast<std::size_t>(task) / R;
    const std::size_t r = static_cast<std::size_t>(task) % R;
    const ScenarioConfig cfg = scenario_for_value(spec, spec.values[vi]);
    const double gamma = gamma_from_tau_db(tau_for_value(spec, spec.values[vi]), cfg);

    DrawPlan train_plan;
    train_plan.realization = r;
    if (!spec.resample_positions) {
      Rng geo(derive_seed(master, Stream::kGeometry, 0));
      train_plan.positions = sample_device_positions(cfg, geo);
    }
    SolverConfig solver = spec.solver;
    solver.seed = derive_seed(master, Stream::kSolverInit, r, 1);

    std::optional<ChannelSet> train;
    std::string setup_error;
    try {
      train = generate_channel_set(cfg, static_cast<std::size_t>(spec.train_samples), train_plan);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (std::size_t si = 0; si < S; ++si) {
      double& outcome = result.outcomes[vi][si][r];
      outcome = std::numeric_limits<double>::quiet_NaN();
      if (!train) {
        errors[vi][si][r] = setup_error;
        continue;
      }
      try {
        const Scheme scheme = spec.schemes[si];
        const SolveResult solved = solve_scheme(scheme, *train, solver, gamma);
        DrawPlan eval_plan{Stream::kEvalFading, r, train->device_positions,
                           scheme != Scheme::kNoRis};
        outcome = monte_carlo_outage(solved.state, cfg, static_cast<std::size_t>(spec.eval_samples),
                                     gamma, eval_plan)
                      .p_hat;
      } catch (const std::exception& e) {
        errors[vi][si][r] = e.what();
      }
    }
  }

  for (std::size_t vi = 0; vi < V; ++vi) {
    for (std::size_t si = 0; si < S; ++si) {
      SweepRow row;
      row.parameter = to_string(spec.parameter);
      row.value = spec.values[vi];
      row.scheme = spec.schemes[si];
      row.eval_samples = spec.eval_samples;
      double sum = 0.0;
      int ok = 0;
      for (std::size_t r = 0; r < R; ++r) {
        const double x = result.outcomes[vi][si][r];
        if (std::isnan(x)) {
          if (row.error.empty()) row.error = errors[vi][si][r];
          continue;
        }
        sum += x;
        ++ok;
      }
      row.realizations = ok;
      if (ok == 0) {
        row.mean_outage = row.stderr_outage = std::numeric_limits<double>::quiet_NaN();
      } else {
        row.mean_outage = sum / ok;
        double ss = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          const double x = result.outcomes[vi][si][r];
          if (!std::isnan(x)) ss += (x - row.mean_outage) * (x - row.mean_outage);
        }
        row.stderr_outage = ok > 1 ? std::sqrt(ss / (ok - 1) / ok) : 0.0;
      }
      if (!row.error.empty() && ok < spec.realizations) {
        row.error = std::to_string(spec.realizations - ok) + " failed: " + row.error;
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "param,value,scheme,mean_outage,stderr,realizations,eval_samples,error\n";
  char buf[64];
  for (const SweepRow& r : result.rows) {
    out << r.parameter << ',' << format_value(r.value) << ',' << to_string(r.scheme) << ',';
    std::snprintf(buf, sizeof buf, "%.10g,%.10g", r.mean_outage, r.stderr_outage);
    out << buf << ',' << r.realizations << ',' << r.eval_samples << ',' << quoted(r.error) << '\n';
  }
}

}  // namespace aircomp
