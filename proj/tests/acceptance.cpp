// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: prints one PASS/FAIL line per criterion, exits nonzero if
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aircomp/config.hpp"
#include "aircomp/evaluation.hpp"
#include "aircomp/kernels.hpp"
#include "aircomp/optimizer.hpp"
#include "cli_support.hpp"
#include "support.hpp"

using namespace aircomp;
using testing::cd;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

template <class F>
Eigen::VectorXd central_diff(F f, const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, q = x;
    p(i) += h;
    q(i) -= h;
    g(i) = (f(p) - f(q)) / (2 * h);
  }
  return g;
}

// 1. Analytic gradients vs central differences, 200 desk-scale instances.
Outcome gradient_oracle() {
  Rng rng(derive_seed(101, Stream::kGeometry));
  double worst = 0.0;
  int accepted = 0, rejected = 0;
  while (accepted < 200) {
    const ChannelSample s = testing::random_sample(5, 4, 8, rng);
    const Eigen::VectorXcd m = testing::random_cvec(4, rng), v = testing::random_phases(8, rng);
    const SurrogateParams p{rng.uniform(0.01, 0.2), 1.0};
    if (testing::top_two_gap(testing::complex_d(s, m, v, p.gamma)) < 1e-6) {
      ++rejected;
      continue;
    }
    ++accepted;
    const RealSampleM hm = real_sample_m(s, v);
    const RealSampleV av = real_sample_v(s, m);
    const Eigen::VectorXd mt = stack_real(m), vt = stack_real(v);
    const double n2 = mt.squaredNorm();
    auto fm = [&](const Eigen::VectorXd& x) { return sigmoid(max_term_m(x, hm, p.gamma).value); };
    auto fv = [&](const Eigen::VectorXd& x) { return sigmoid(max_term_v(x, av, n2, p.gamma).value); };
    worst = std::max(worst, testing::rel_err(grad_sample_m(mt, hm, p), central_diff(fm, mt)));
    worst = std::max(worst, testing::rel_err(grad_sample_v(vt, av, n2, p), central_diff(fv, vt)));
  }
  return {worst < 1e-5, fmt("max relative error %.2e over 200 instances (%g tie draws rejected)", worst, rejected)};
}

// 2. d, u1, u2 via the real reformulation vs complex arithmetic.
Outcome complex_real_equivalence() {
  Rng rng(derive_seed(102, Stream::kGeometry));
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const ChannelSample s = testing::random_sample(5, 4, 8, rng);
    const Eigen::VectorXcd m = testing::random_cvec(4, rng), v = testing::random_phases(8, rng);
    const SurrogateParams p{rng.uniform(0.01, 0.2), 1.0};
    const auto d = testing::complex_d(s, m, v, p.gamma);
    const double dmax = *std::max_element(d.begin(), d.end());
    const RealSampleM hm = real_sample_m(s, v);
    const RealSampleV av = real_sample_v(s, m);
    const Eigen::VectorXd mt = stack_real(m), vt = stack_real(v);
    const double scale = std::max(std::abs(dmax), mt.squaredNorm());
    worst = std::max(worst, std::abs(max_term_m(mt, hm, p.gamma).value - dmax) / scale);
    worst = std::max(worst, std::abs(max_term_v(vt, av, mt.squaredNorm(), p.gamma).value - dmax) / scale);
    for (int k = 0; k < 5; ++k) {
      const double dk = mt.squaredNorm() - p.gamma * (hm.device(k).transpose() * mt).squaredNorm();
      worst = std::max(worst, std::abs(dk - d[k]) / std::max(std::abs(d[k]), mt.squaredNorm()));
    }
    const double u_ref = testing::logistic(dmax);
    const std::vector<RealSampleM> one_m{hm};
    const std::vector<RealSampleV> one_v{av};
    worst = std::max(worst, testing::rel_err(smoothed_objective_m(mt, one_m, p), u_ref));
    worst = std::max(worst, testing::rel_err(smoothed_objective_v(vt, one_v, mt.squaredNorm(), p), u_ref));
  }
  return {worst < 1e-12, fmt("max relative deviation %.2e over 1000 instances", worst)};
}

// 3. Anchor identity, unbiasedness, variance reduction.
Outcome svrg_structure() {
  const RunConfig c = preset("desk");
  const ChannelSet set = generate_channel_set(c.scenario_config(), 100);
  const SolverConfig cfg = c.solver_config();
  const double gamma = c.gamma();
  const SurrogateParams p{gamma, cfg.temperature};
  const SolveResult solved = alternating_solve(set, cfg, gamma);

  // (a) at q = 0 the direction is the stored full gradient, bit for bit
  const auto hm = build_real_channels_m(set, solved.state.v);
  const auto av = build_real_channels_v(set, solved.state.m);
  const Eigen::VectorXd am = stack_real(solved.state.m), avt = stack_real(solved.state.v);
  const double n2 = am.squaredNorm();
  const Eigen::VectorXd fm = parallel::mean_gradient_m(am, hm, p);
  const Eigen::VectorXd fv = parallel::mean_gradient_v(avt, av, n2, p);
  Rng br(7);
  bool anchor_ok = true;
  for (int i = 0; i < 100; ++i) {
    const auto b = sample_minibatch(100, 20, br);
    anchor_ok &= svrg_direction_m(am, am, fm, b, hm, p) == fm;
    anchor_ok &= svrg_direction_v(avt, avt, fv, b, av, n2, p) == fv;
  }
  anchor_ok &= fm == serial::mean_gradient_m(am, hm, p);

  // (b) exhaustive enumeration at T = 5, b = 2
  ChannelSet small = set;
  small.samples.resize(5);
  const auto hm5 = build_real_channels_m(small, solved.state.v);
  const auto av5 = build_real_channels_v(small, solved.state.m);
  Rng rng(8);
  const Eigen::VectorXd cm = am + 0.3 * stack_real(testing::random_cvec(4, rng));
  const Eigen::VectorXd cv = stack_real(testing::random_phases(8, rng));
  const Eigen::VectorXd fm5 = serial::mean_gradient_m(am, hm5, p);
  const Eigen::VectorXd fv5 = serial::mean_gradient_v(avt, av5, n2, p);
  Eigen::VectorXd em = Eigen::VectorXd::Zero(8), ev = Eigen::VectorXd::Zero(16);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) {
      const std::vector<std::size_t> b{i, j};
      em += svrg_direction_m(cm, am, fm5, b, hm5, p) / 10.0;
      ev += svrg_direction_v(cv, avt, fv5, b, av5, n2, p) / 10.0;
    }
  const double gm_scale = std::max(1.0, serial::mean_gradient_m(cm, hm5, p).cwiseAbs().maxCoeff());
  const double gv_scale = std::max(1.0, serial::mean_gradient_v(cv, av5, n2, p).cwiseAbs().maxCoeff());
  const double unbias = std::max((em - serial::mean_gradient_m(cm, hm5, p)).cwiseAbs().maxCoeff() / gm_scale,
                                 (ev - serial::mean_gradient_v(cv, av5, n2, p)).cwiseAbs().maxCoeff() / gv_scale);

  // (c) direction variance near the converged anchor, 10^4 batch draws
  const Eigen::VectorXd cur = am - cfg.step_m * fm;
  Eigen::VectorXd s1 = Eigen::VectorXd::Zero(8), q1 = s1, s2 = s1, q2 = s1;
  for (int i = 0; i < 10000; ++i) {
    const auto b = sample_minibatch(100, 20, br);
    const Eigen::VectorXd a = svrg_direction_m(cur, am, fm, b, hm, p);
    const Eigen::VectorXd g = parallel::mean_gradient_m(cur, hm, p, b);
    s1 += a, q1 += a.cwiseAbs2(), s2 += g, q2 += g.cwiseAbs2();
  }
  const double var_svrg = (q1 / 1e4 - (s1 / 1e4).cwiseAbs2()).sum();
  const double var_sgd = (q2 / 1e4 - (s2 / 1e4).cwiseAbs2()).sum();
  const bool pass = anchor_ok && unbias < 1e-12 && var_svrg <= var_sgd;
  return {pass, std::string("(a) anchor identity ") + (anchor_ok ? "bitwise" : "BROKEN") +
                    fmt("; (b) enumeration deviation %.2e; (c) variance svrg %.3e <= sgd %.3e", unbias, var_svrg, var_sgd)};
}

// 4. Every projected iterate of a full desk solve is feasible.
Outcome feasibility() {
  struct Watch : SolveObserver {
    double worst = 0.0;
    std::size_t count = 0;
    void on_v_iterate(const Eigen::VectorXd& v) override {
      const Eigen::Index M = v.size() / 2;
      for (Eigen::Index i = 0; i < M; ++i)
        worst = std::max(worst, std::abs(v(i) * v(i) + v(i + M) * v(i + M) - 1.0));
      ++count;
    }
  } watch;
  const RunConfig c = preset("desk");
  const ChannelSet set = generate_channel_set(c.scenario_config(), 100);
  SolverConfig cfg = c.solver_config();
  cfg.rounds = 10;
  cfg.epochs = 20;
  cfg.inner_iterations = 10;
  alternating_solve(set, cfg, c.gamma(), &watch);

  Rng rng(9);
  bool idempotent = true;
  for (int rep = 0; rep < 1000; ++rep) {
    Eigen::VectorXd y(16);
    for (int i = 0; i < 16; ++i) y(i) = rng.normal() * std::exp(rng.uniform(-4, 4));
    const Eigen::VectorXd once = project_unimodular(y);
    idempotent &= project_unimodular(once) == once;
  }
  const bool pass = watch.count == 2000 && watch.worst < 1e-12 && idempotent;
  return {pass, fmt("%g iterates, max |v_i^2 + v_{i+M}^2 - 1| = %.2e; idempotence ", watch.count, watch.worst) +
                    (idempotent ? "exact" : "BROKEN")};
}

// 5. Closed-form MSE vs simulated E|g_hat - g|^2.
Outcome mse_oracle() {
  Rng rng(derive_seed(105, Stream::kGeometry));
  const double P = 1.0, sigma2 = 0.1;
  const int K = 5, N = 4, M = 8, draws = 1000000;
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const ChannelSample s = testing::random_sample(K, N, M, rng);
    const Eigen::VectorXcd m = testing::random_cvec(N, rng), v = testing::random_phases(M, rng);
    const double eta = power_normalizer(m, v, s, P);
    Eigen::MatrixXcd HW(N, K);  // column k = h_k w_k
    for (int k = 0; k < K; ++k) {
      const Eigen::VectorXcd h = effective_channel(s, v, k);
      HW.col(k) = h * optimal_transmit_scalar(m, h, eta);
    }
    double acc = 0.0;
    Eigen::VectorXcd sym(K), y(N);
    for (int t = 0; t < draws; ++t) {
      for (int k = 0; k < K; ++k) sym(k) = rng.complex_normal(1.0);
      for (int i = 0; i < N; ++i) y(i) = rng.complex_normal(sigma2);
      y.noalias() += HW * sym;
      const cd ghat = m.dot(y) / std::sqrt(eta);
      acc += std::norm(ghat - sym.sum());
    }
    const double sim = acc / draws;
    worst = std::max(worst, std::abs(sim / closed_form_mse(m, v, s, P, sigma2) - 1.0));
  }
  return {worst < 0.01, fmt("max relative gap %.3f%% over 20 instances x 1e6 draws", 100 * worst)};
}

// 6. K = N = 1 Rayleigh scalar: P(out) = 1 - exp(-1/gamma).
Outcome outage_anchor() {
  ScenarioConfig cfg;
  cfg.devices = 1;
  cfg.antennas = 1;
  cfg.elements = 1;
  cfg.reference_loss = 1.0;  // unit-mean |h|^2 at distance 1
  cfg.ap_position = Vec3(0, 0, 1);
  cfg.device_region_center = Vec3(0, 0, 0);
  cfg.device_region_side = 0.0;
  cfg.ris_position = Vec3(5, 5, 5);
  DrawPlan plan;
  plan.fading = Stream::kEvalFading;
  plan.ris_present = false;
  const double gamma = 2.8;
  const BeamformingState s{Eigen::VectorXcd::Ones(1), Eigen::VectorXcd::Ones(1)};
  const OutageEstimate e = monte_carlo_outage(s, cfg, 100000, gamma, plan);
  const double exact = 1.0 - std::exp(-1.0 / gamma);
  const double z = std::abs(e.p_hat - exact) / e.half_width_95;
  return {z <= 3.0, fmt("p_hat %.5f vs %.5f, |diff| = %.2f half-widths", e.p_hat, exact, z)};
}

double diff_se(const SweepRow& a, const SweepRow& b) { return std::hypot(a.stderr_outage, b.stderr_outage); }

// 7. Outage non-increasing in M.
Outcome trend_elements() {
  RunConfig c = preset("desk");
  const SweepSpec spec = c.sweep_spec();
  const SweepResult r = run_sweep(spec);
  std::size_t si = 0;
  while (spec.schemes[si] != Scheme::kAlternatingSvrg) ++si;
  bool pass = !r.all_failed();
  std::string detail = "alternating-svrg mean (se):";
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    const SweepRow& row = r.row(vi, si);
    detail += fmt(" M=%g %.4f (%.4f)", row.value, row.mean_outage, row.stderr_outage);
    pass &= row.realizations == 30;
    if (vi > 0) pass &= row.mean_outage <= r.row(vi - 1, si).mean_outage + diff_se(row, r.row(vi - 1, si));
  }
  return {pass, detail};
}

// 8. Alternating beats random phase in >= 60% of pairs.
Outcome beats_random_phase() {
  RunConfig c = preset("desk-fig2");
  SweepSpec spec = c.sweep_spec();
  spec.values = {static_cast<double>(preset("desk").scenario.antennas)};
  spec.schemes = {Scheme::kAlternatingSvrg, Scheme::kRandomPhase};
  const SweepResult r = run_sweep(spec);
  const auto& alt = r.outcomes[0][0];
  const auto& rp = r.outcomes[0][1];
  int wins = 0;
  for (std::size_t i = 0; i < alt.size(); ++i) wins += alt[i] < rp[i];
  const bool pass = alt.size() == 30 && wins >= 18;
  return {pass, fmt("N=%g M=%g: %g of 30 paired realizations won", spec.values[0], spec.scenario.elements, wins) +
                    fmt("; means %.4f vs %.4f", r.rows[0].mean_outage, r.rows[1].mean_outage)};
}

// 9. RIS vs no RIS, and exact monotonicity in tau.
Outcome ris_gain_and_tau() {
  RunConfig c = preset("desk-fig3");
  const SweepSpec spec = c.sweep_spec();
  const SweepResult r = run_sweep(spec);
  bool pass = !r.all_failed();
  std::string detail = "no-ris minus ris:";
  for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
    const SweepRow& ris = r.row(vi, 0);
    const SweepRow& bare = r.row(vi, 1);
    pass &= bare.mean_outage >= ris.mean_outage - diff_se(ris, bare);
    detail += fmt(" %+.4f", bare.mean_outage - ris.mean_outage);
  }
  // fixed (m, v) on one shared evaluation draw
  const ScenarioConfig cfg = c.scenario_config();
  const ChannelSet train = generate_channel_set(cfg, 100);
  const BeamformingState s = alternating_solve(train, c.solver_config(), c.gamma()).state;
  DrawPlan plan;
  plan.fading = Stream::kEvalFading;
  plan.positions = train.device_positions;
  const ChannelSet draw = generate_channel_set(cfg, 5000, plan);
  bool nested = true;
  double prev = 1.0;
  for (double tau = -20; tau <= 10; tau += 0.25) {
    const double g = gamma_from_tau_db(tau, cfg);
    const double p = empirical_outage(s.m, s.v, draw, g);
    nested &= p <= prev;
    prev = p;
    for (std::size_t t = 0; t < draw.size(); t += 50) {
      // outage at a looser threshold implies outage at every tighter one
      if (in_outage(s.m, s.v, draw.samples[t], g)) nested &= in_outage(s.m, s.v, draw.samples[t], 0.9 * g);
    }
  }
  pass &= nested;
  return {pass, detail + "; fixed-state outage over 121 tau values " + (nested ? "non-increasing" : "NOT monotone")};
}

// 10. Every CLI command reruns byte-identically.
Outcome reproducibility() {
  testing::Scratch dir("acceptance");
  const std::vector<std::pair<std::string, std::vector<std::string>>> cmds = {
      {"generate --preset desk --seed 11 --out set.jsonl", {"set.jsonl"}},
      {"generate --preset desk --seed 11 --format binary --out set.bin", {"set.bin"}},
      {"solve --channels set.jsonl --seed 11 --out state.csv", {"state.csv", "state_trace.csv"}},
      {"solve --channels set.jsonl --seed 11 --scheme sgd --out sgd.csv", {"sgd.csv", "sgd_trace.csv"}},
      {"sweep --preset desk --seed 11 --realizations 4 --out sweep.csv", {"sweep.csv"}},
      {"print-config --preset paper-fig1 --seed 11 --out cfg.ini", {"cfg.ini"}},
  };
  testing::fs::create_directories(dir.path("first"));
  int identical = 0, total = 0;
  bool ok = true;
  for (const auto& [cmd, files] : cmds) {
    // identical arguments both times; the first run's outputs are moved aside
    ok &= dir.cli(cmd).status == 0;
    for (const auto& f : files) testing::fs::copy_file(dir.path(f), dir.path("first/" + f));
    ok &= dir.cli(cmd).status == 0;
    for (const auto& f : files) {
      ++total;
      const std::string a = dir.read("first/" + f), b = dir.read(f);
      identical += !a.empty() && a == b;
    }
  }
  // thread count must not change a sweep either
  ok &= dir.cli("sweep --preset desk --seed 11 --realizations 4 --threads 3 --out sweep3.csv").status == 0;
  const bool threads_ok = dir.read("sweep.csv") == dir.read("sweep3.csv");
  const bool pass = ok && identical == total && threads_ok;
  return {pass, fmt("%g of %g output files byte-identical across reruns", identical, total) +
                    "; sweep with --threads 3 " + (threads_ok ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient oracle", gradient_oracle},
      {"complex/real equivalence", complex_real_equivalence},
      {"SVRG structure", svrg_structure},
      {"feasibility", feasibility},
      {"closed-form MSE oracle", mse_oracle},
      {"outage estimator anchor", outage_anchor},
      {"trend: outage vs M", trend_elements},
      {"trend: alternating vs random phase", beats_random_phase},
      {"trend: RIS vs no RIS, monotone in tau", ris_gain_and_tau},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
