// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aircomp/kernels.hpp"
#include "aircomp/objective.hpp"
#include "aircomp/rng.hpp"
#include "aircomp/scenario.hpp"

namespace aircomp {

// Loop counts and step sizes of the alternating mini-batch SVRG solver.
struct SolverConfig {
  int rounds = 100;           // L, alternations between the m and v blocks
  int epochs = 200;           // R, SVRG epochs per block
  int inner_iterations = 25;  // Q, updates per epoch
  double step_m = 0.1;
  double step_v = 0.01;
  int batch_size = 50;
  double temperature = 1.0;
  std::uint64_t seed = 1;

  // User-supplied start; otherwise m ~ CN(0, I) normalized, v uniform phases.
  std::optional<BeamformingState> initial;
  // Return the round with the lowest training outage instead of the last.
  bool keep_best = false;
  // Ordered (bitwise reproducible) sample reductions.
  bool deterministic = true;
  // Record wall-clock per round; zero otherwise so traces are reproducible.
  bool record_time = false;

  // Throws ValidationError naming the field. T is the training-set size.
  void validate(std::size_t T) const;
  Reduction reduction() const { return deterministic ? Reduction::kOrdered : Reduction::kUnordered; }
};

struct TraceRecord {
  int round = 0;
  double u1 = 0.0;             // after the m block
  double u2 = 0.0;             // after the v block (v fixed for m-only schemes)
  double train_outage = 0.0;   // empirical outage on the training set
  double elapsed_seconds = 0.0;
};

struct SolveResult {
  BeamformingState state;
  std::vector<TraceRecord> trace;
};

// Receives every iterate; used for instrumentation.
class SolveObserver {
 public:
  virtual ~SolveObserver() = default;
  virtual void on_m_iterate(const Eigen::VectorXd& /*m_tilde*/) {}
  virtual void on_v_iterate(const Eigen::VectorXd& /*v_tilde*/) {}
};

// Uniform draw of batch_size distinct indices from [0, T), returned sorted.
std::vector<std::size_t> sample_minibatch(std::size_t T, std::size_t batch_size, Rng& rng);

// Unit-norm complex Gaussian m, then i.i.d. uniform phases v, from one stream.
BeamformingState initial_state(int antennas, int elements, Rng& rng);

// Variance-reduced direction:
//   mean_{i in batch}[g_i(current) - g_i(anchor)] + full_grad_anchor.
Eigen::VectorXd svrg_direction_m(const Eigen::VectorXd& current, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& full_grad_anchor,
                                 std::span<const std::size_t> batch,
                                 std::span<const RealSampleM> samples, const SurrogateParams& params,
                                 Reduction reduction = Reduction::kOrdered);

Eigen::VectorXd svrg_direction_v(const Eigen::VectorXd& current, const Eigen::VectorXd& anchor,
                                 const Eigen::VectorXd& full_grad_anchor,
                                 std::span<const std::size_t> batch,
                                 std::span<const RealSampleV> samples, double m_norm2,
                                 const SurrogateParams& params,
                                 Reduction reduction = Reduction::kOrdered);

// Normalizes each (y_i, y_{i+M}) pair onto the unit circle. Throws
// ProjectionUndefined for a zero pair.
Eigen::VectorXd project_unimodular(const Eigen::VectorXd& y);

// As above, but a zero pair keeps the corresponding pair of `fallback`.
Eigen::VectorXd project_unimodular(const Eigen::VectorXd& y, const Eigen::VectorXd& fallback);

// One SVRG epoch on u1: anchor at the incoming iterate, one full-batch
// gradient, then Q updates. `epoch` only labels divergence diagnostics.
Eigen::VectorXd svrg_epoch_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                             const SolverConfig& cfg, const SurrogateParams& params, Rng& batch_rng,
                             int epoch = 0, SolveObserver* observer = nullptr);

// One projected SVRG epoch on u2; every iterate stays feasible.
Eigen::VectorXd svrg_epoch_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                             double m_norm2, const SolverConfig& cfg, const SurrogateParams& params,
                             Rng& batch_rng, int epoch = 0, SolveObserver* observer = nullptr);

// Alternating SVRG over (m, v).
SolveResult alternating_solve(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                              SolveObserver* observer = nullptr);

// Same loop structure with the plain mini-batch gradient as direction.
SolveResult sgd_solve(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                      SolveObserver* observer = nullptr);

// Optimizes m only, for L * R epochs, with v held at start.v. The trace
// still reports u2 at the fixed v.
SolveResult solve_beamformer_only(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                                  const BeamformingState& start, SolveObserver* observer = nullptr);

// Random phases drawn from `rng` and held fixed; only m is optimized, for
// L * R epochs. With rng seeded from (cfg.seed, kSolverInit) the start point
// equals the one alternating_solve uses.
SolveResult random_phase_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma,
                                  Rng& rng);
SolveResult random_phase_baseline(const ChannelSet& set, const SolverConfig& cfg, double gamma);

}  // namespace aircomp
