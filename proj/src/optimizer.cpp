// SPDX-License-Identifier: Apache-2.0
#include "aircomp/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aircomp/errors.hpp"

namespace aircomp {

namespace {

constexpr double kDivergenceNorm = 1e8;

enum class Method { kSvrg, kSgd };

// Pairs already on the circle up to rounding are copied, so projecting a
// projected vector returns it bit for bit.
void normalize_pair(const Eigen::VectorXd& y, Eigen::Index i, Eigen::Index M, double r,
                    Eigen::VectorXd& out) {
  constexpr double kOnCircle = 4.0 * std::numeric_limits<double>::epsilon();
  if (std::abs(r - 1.0) <= kOnCircle) {
    out(i) = y(i);
    out(i + M) = y(i + M);
  } else {
    out(i) = y(i) / r;
    out(i + M) = y(i + M) / r;
  }
}

using Clock = std::chrono::steady_clock;

void guard(const Eigen::VectorXd& x, const char* block, int epoch, int iteration, double step) {
  const double norm = x.norm();
  if (!std::isfinite(norm) || norm > kDivergenceNorm) {
    std::ostringstream msg;
    msg << block << " iterate diverged (norm " << norm << ") at epoch " << epoch << ", iteration "
        << iteration << " with step size " << step;
    throw DivergenceError(msg.str());
  }
}

Eigen::VectorXd epoch_m(Method method, const Eigen::VectorXd& start,
                        std::span<const RealSampleM> samples, const SolverConfig& cfg,
                        const SurrogateParams& params, Rng& batch_rng, int epoch,
                        SolveObserver* observer) {
  if (cfg.inner_iterations == 0) return start;
  const Reduction red = cfg.reduction();
  const Eigen::VectorXd anchor = start;
  Eigen::VectorXd full;
  if (method == Method::kSvrg) full = parallel::mean_gradient_m(anchor, samples, params, {}, red);
  Eigen::VectorXd cur = start;
  for (int q = 0; q < cfg.inner_iterations; ++q) {
    const auto batch =
        sample_minibatch(samples.size(), static_cast<std::size_t>(cfg.batch_size), batch_rng);
    const Eigen::VectorXd dir =
        method == Method::kSvrg
            ? svrg_direction_m(cur, anchor, full, batch, samples, params, red)
            : parallel::mean_gradient_m(cur, samples, params, batch, red);
    cur -= cfg.step_m * dir;
    guard(cur, "m", epoch, q, cfg.step_m);
    if (observer) observer->on_m_iterate(cur);
  }
  return cur;
}

Eigen::VectorXd epoch_v(Method method, const Eigen::VectorXd& start,
                        std::span<const RealSampleV> samples, double m_norm2,
                        const SolverConfig& cfg, const SurrogateParams& params, Rng& batch_rng,
                        int epoch, SolveObserver* observer) {
  if (cfg.inner_iterations == 0) return start;
  const Reduction red = cfg.reduction();
  const Eigen::VectorXd anchor = start;
  Eigen::VectorXd full;
  if (method == Method::kSvrg) {
    full = parallel::mean_gradient_v(anchor, samples, m_norm2, params, {}, red);
  }
  Eigen::VectorXd cur = start;
  for (int q = 0; q < cfg.inner_iterations; ++q) {
    const auto batch =
        sample_minibatch(samples.size(), static_cast<std::size_t>(cfg.batch_size), batch_rng);
    const Eigen::VectorXd dir =
        method == Method::kSvrg
            ? svrg_direction_v(cur, anchor, full, batch, samples, m_norm2, params, red)
            : parallel::mean_gradient_v(cur, samples, m_norm2, params, batch, red);
    const Eigen::VectorXd y = cur - cfg.step_v * dir;
    guard(y, "v", epoch, q, cfg.step_v);
    cur = project_unimodular(y, cur);
    if (observer) observer->on_v_iterate(cur);
  }
  return cur;
}

double outage_fraction(const ChannelSet& set, const BeamformingState& s, double gamma) {
  return static_cast<double>(parallel::count_outages(s.m, s.v, set.samples, gamma)) /
         static_cast<double>(set.samples.size());
}

BeamformingState starting_point(const ChannelSet& set, const SolverConfig& cfg) {
  const int N = set.scenario.antennas, M = set.scenario.elements;
  if (cfg.initial) {
    if (cfg.initial->m.size() != N || cfg.initial->v.size() != M) {
      throw ValidationError("initial", "dimensions disagree with the channel set");
    }
    return *cfg.initial;
  }
  Rng rng(derive_seed(cfg.seed, Stream::kSolverInit));
  return initial_state(N, M, rng);
}

// Tracks the returned state: last iterate, or best training outage.
class Selection {
 public:
  Selection(const BeamformingState& init, bool keep_best) : state_(init), keep_best_(keep_best) {}

  void offer(const BeamformingState& s, double outage) {
    if (!keep_best_ || !seen_ || outage < best_) {
      state_ = s;
      best_ = outage;
      seen_ = true;
    }
  }
  const BeamformingState& state() const { return state_; }

 private:
  BeamformingState state_;
  bool keep_best_;
  bool seen_ = false;
  double best_ = 0.0;
};

SolveResult solve_alternating(Method method, const ChannelSet& set, const SolverConfig& cfg,
                              double gamma, SolveObserver* observer) {
  set.validate();
  cfg.validate(set.size());
  const SurrogateParams params{gamma, cfg.temperature};
  params.validate();

  BeamformingState state = starting_point(set, cfg);
  Rng batch_rng(derive_seed(cfg.seed, Stream::kMinibatch));
  Eigen::VectorXd m_tilde = stack_real(state.m);
  Eigen::VectorXd v_tilde = stack_real(state.v);

  SolveResult result;
  Selection selection(state, cfg.keep_best);
  const auto t0 = Clock::now();
  for (int l = 0; l < cfg.rounds; ++l) {
    const auto hm = build_real_channels_m(set, state.v);
    for (int r = 0; r < cfg.epochs; ++r) {
      m_tilde = epoch_m(method, m_tilde, hm, cfg, params, batch_rng, l * cfg.epochs + r, observer);
    }
    TraceRecord rec;
    rec.round = l;
    rec.u1 = parallel::mean_objective_m(m_tilde, hm, params, cfg.reduction());
    state.m = unstack_real(m_tilde);

    const auto av = build_real_channels_v(set, state.m);
    const double m_norm2 = m_tilde.squaredNorm();
    for (int r = 0; r < cfg.epochs; ++r) {
      v_tilde = epoch_v(method, v_tilde, av, m_norm2, cfg, params, batch_rng, l * cfg.epochs + r,
                        observer);
    }
    rec.u2 = parallel::mean_objective_v(v_tilde, av, m_norm2, params, cfg.reduction());
    state.v = unstack_real(v_tilde);

    rec.train_outage = outage_fraction(set, state, gamma);
    if (cfg.record_time) rec.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    result.trace.push_back(rec);
    selection.offer(state, rec.train_outage);
  }
  result.state = selection.state();
  return result;
}

}  // namespace

void SolverConfig::validate(std::size_t T) const {
  if (rounds < 0) throw ValidationError("L", "must be >= 0");
  if (epochs < 0) throw ValidationError("R", "must be >= 0");
  if (inner_iterations < 0) throw ValidationError("Q", "must be >= 0");
  if (batch_size < 1) throw ValidationError("batch", "must be >= 1");
  if (static_cast<std::size_t>(batch_size) > T) {
    throw ValidationError("batch", "must be <= T (" + std::to_string(T) + ")");
  }
  if (!(step_m >= 0.0) || !std::isfinite(step_m)) throw ValidationError("alpha_m", "must be finite and >= 0");
  if (!(step_v >= 0.0) || !std::isfinite(step_v)) throw ValidationError("alpha_v", "must be finite and >= 0");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature", "must be finite and > 0");
  }
}

std::vector<std::size_t> sample_minibatch(std::size_t T, std::size_t batch_size, Rng& rng) {
  if (batch_size < 1 || batch_size > T) {
    throw ValidationError("batch", "must satisfy 1 <= batch <= T (T = " + std::to_string(T) + ")");
  }
  std::vector<std::size_t> pool(T);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < batch_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(T - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(batch_size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

BeamformingState initial_state(int antennas, int elements, Rng& rng) {
  BeamformingState s;
  s.m.resize(antennas);
  for (int i = 0; i < antennas; ++i) s.m(i) = rng.complex_normal(1.0);
  s.m /= s.m.norm();
  s.v.resize(elements);
  for (int i = 0; i < elements; ++i) s.v(i) = rng.unit_phase();
  return s;
}

Eigen::VectorXd svrg_direction_m(const Eigen::VectorXd& current, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& full_grad_anchor,
                                 std::span<const std::size_t> batch,
                                 std::span<const RealSampleM> samples, const SurrogateParams& params,
                                 Reduction reduction) {
  return parallel::mean_gradient_difference_m(current, anchor, samples, params, batch, reduction) +
         full_grad_anchor;
}

Eigen::VectorXd svrg_direction_v(const Eigen::VectorXd& current, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& full_grad_anchor,
                                 std::span<const std::size_t> batch,
                                 std::span<const RealSampleV> samples, double m_norm2,
                                 const SurrogateParams& params, Reduction reduction) {
  return parallel::mean_gradient_difference_v(current, anchor, samples, m_norm2, params, batch,
                                              reduction) +
         full_grad_anchor;
}

Eigen::VectorXd project_unimodular(const Eigen::VectorXd& y) {
  const Eigen::Index M = y.size() / 2;
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < M; ++i) {
    const double r = std::hypot(y(i), y(i + M));
    if (!(r > 0.0)) throw ProjectionUndefined(static_cast<std::size_t>(i));
    normalize_pair(y, i, M, r, out);
  }
  return out;
}

Eigen::VectorXd project_unimodular(const Eigen::VectorXd& y, const Eigen::VectorXd& fallback) {
  const Eigen::Index M = y.size() / 2;
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < M; ++i) {
    const double r = std::hypot(y(i), y(i + M));
    if (r > 0.0) {
      normalize_pair(y, i, M, r, out);
    } else {
      out(i) = fallback(i);
      out(i + M) = fallback(i + M);
    }
  }
  return out;
}

Eigen::VectorXd svrg_epoch_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                             const SolverConfig& cfg, const SurrogateParams& params, Rng& batch_rng,
                             int epoch, SolveObserver* observer) {
  return epoch_m(Method::kSvrg, m_tilde, samples, cfg, params, batch_rng, epoch, observer);
}

Eigen::VectorXd svrg_epoch_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                             double m_norm2, const SolverConfig& cfg, const SurrogateParams& params,
                             Rng& batch_rng, int epoch, SolveObserver* observer) {
  return epoch_v(Method::kSvrg, v_tilde, samples, m_norm2, cfg, params, batch_rng, epoch, observer);
}

SolveResult alternating_solve(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                              SolveObserver* observer) {
  return solve_alternating(Method::kSvrg, set, cfg, gamma, observer);
}

SolveResult sgd_solve(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                      SolveObserver* observer) {
  return solve_alternating(Method::kSgd, set, cfg, gamma, observer);
}

SolveResult solve_beamformer_only(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                                  const BeamformingState& start, SolveObserver* observer) {
  set.validate();
  cfg.validate(set.size());
  const SurrogateParams params{gamma, cfg.temperature};
  params.validate();
  if (start.m.size() != set.scenario.antennas || start.v.size() != set.scenario.elements) {
    throw ValidationError("initial", "dimensions disagree with the channel set");
  }

  BeamformingState state = start;
  Rng batch_rng(derive_seed(cfg.seed, Stream::kMinibatch));
  const auto hm = build_real_channels_m(set, state.v);
  const Eigen::VectorXd v_tilde = stack_real(state.v);
  Eigen::VectorXd m_tilde = stack_real(state.m);

  SolveResult result;
  Selection selection(state, cfg.keep_best);
  const auto t0 = Clock::now();
  for (int l = 0; l < cfg.rounds; ++l) {
    for (int r = 0; r < cfg.epochs; ++r) {
      m_tilde = epoch_m(Method::kSvrg, m_tilde, hm, cfg, params, batch_rng, l * cfg.epochs + r,
                        observer);
    }
    state.m = unstack_real(m_tilde);
    TraceRecord rec;
    rec.round = l;
    rec.u1 = parallel::mean_objective_m(m_tilde, hm, params, cfg.reduction());
    const auto av = build_real_channels_v(set, state.m);
    rec.u2 = parallel::mean_objective_v(v_tilde, av, m_tilde.squaredNorm(), params, cfg.reduction());
    rec.train_outage = outage_fraction(set, state, gamma);
    if (cfg.record_time) rec.elapsed_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    result.trace.push_back(rec);
    selection.offer(state, rec.train_outage);
  }
  result.state = selection.state();
  return result;
}

SolveResult random_phase_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                                  Rng& rng) {
  const BeamformingState start = initial_state(set.scenario.antennas, set.scenario.elements, rng);
  return solve_beamformer_only(set, cfg, gamma, start);
}

SolveResult random_phase_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma) {
  Rng rng(derive_seed(cfg.seed, Stream::kSolverInit));
  return random_phase_baseline(set, cfg, gamma, rng);
}

}  // namespace aircomp
