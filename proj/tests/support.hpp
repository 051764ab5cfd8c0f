// SPDX-License-Identifier: Apache-2.0
// Shared fixtures for the test binaries.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "aircomp/objective.hpp"
#include "aircomp/rng.hpp"
#include "aircomp/scenario.hpp"

namespace testing {

using cd = std::complex<double>;

inline Eigen::VectorXcd random_cvec(int n, aircomp::Rng& rng, double var = 1.0) {
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.complex_normal(var);
  return x;
}

inline Eigen::VectorXcd random_phases(int n, aircomp::Rng& rng) {
  Eigen::VectorXcd x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.unit_phase();
  return x;
}

// Unit-variance sample, independent of any geometry.
inline aircomp::ChannelSample random_sample(int K, int N, int M, aircomp::Rng& rng) {
  aircomp::ChannelSample s;
  for (int k = 0; k < K; ++k) s.direct.push_back(random_cvec(N, rng));
  for (int k = 0; k < K; ++k) s.reflect.push_back(random_cvec(M, rng));
  s.ris_to_ap.resize(N, M);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < N; ++i) s.ris_to_ap(i, j) = rng.complex_normal(1.0);
  return s;
}

// Set wrapper for the objective-only tests; its scenario carries the shape.
inline aircomp::ChannelSet wrap(std::vector<aircomp::ChannelSample> samples) {
  aircomp::ChannelSet set;
  set.scenario.devices = samples.front().devices();
  set.scenario.antennas = samples.front().antennas();
  set.scenario.elements = samples.front().elements();
  set.device_positions.assign(static_cast<std::size_t>(set.scenario.devices), aircomp::Vec3::Zero());
  set.samples = std::move(samples);
  return set;
}

// Textbook complex evaluation of h_k = h_d,k + G diag(h_r,k) v.
inline Eigen::VectorXcd naive_effective(const aircomp::ChannelSample& s, const Eigen::VectorXcd& v,
                                        int k) {
  const int N = s.antennas(), M = s.elements();
  Eigen::VectorXcd h(N);
  for (int i = 0; i < N; ++i) {
    cd acc = s.direct[k](i);
    for (int j = 0; j < M; ++j) acc += s.ris_to_ap(i, j) * s.reflect[k](j) * v(j);
    h(i) = acc;
  }
  return h;
}

inline cd inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  cd acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::conj(a(i)) * b(i);
  return acc;
}

// d_k for all k in the complex domain.
inline std::vector<double> complex_d(const aircomp::ChannelSample& s, const Eigen::VectorXcd& m,
                                     const Eigen::VectorXcd& v, double gamma) {
  std::vector<double> d;
  for (int k = 0; k < s.devices(); ++k) d.push_back(m.squaredNorm() - gamma * std::norm(inner(m, naive_effective(s, v, k))));
  return d;
}

inline double top_two_gap(std::vector<double> d) {
  if (d.size() < 2) return INFINITY;
  std::sort(d.begin(), d.end(), std::greater<>());
  return d[0] - d[1];
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
