// SPDX-License-Identifier: Apache-2.0
#include "aircomp/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aircomp/errors.hpp"
#include "aircomp/kernels.hpp"

namespace aircomp {

namespace {

void check_device(const ChannelSample& sample, int k) {
  if (k < 0 || k >= sample.devices()) {
    throw std::out_of_range("device index " + std::to_string(k) + " out of range [0, " +
                            std::to_string(sample.devices()) + ")");
  }
}

// Real 2L x 2 image [Re x, -Im x; Im x, Re x] written into dst.
template <typename Dst>
void write_real_image(const Eigen::VectorXcd& x, Dst&& dst) {
  const Eigen::Index n = x.size();
  dst.col(0).head(n) = x.real();
  dst.col(0).tail(n) = x.imag();
  dst.col(1).head(n) = -x.imag();
  dst.col(1).tail(n) = x.real();
}

}  // namespace

void SurrogateParams::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ValidationError("gamma", "must be finite and >= 0");
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature", "must be finite and > 0");
  }
}

Eigen::VectorXd stack_real(const Eigen::VectorXcd& x) {
  Eigen::VectorXd out(2 * x.size());
  out.head(x.size()) = x.real();
  out.tail(x.size()) = x.imag();
  return out;
}

Eigen::VectorXcd unstack_real(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXcd out(n);
  out.real() = x.head(n);
  out.imag() = x.tail(n);
  return out;
}

Eigen::VectorXcd effective_channel(const ChannelSample& sample, const Eigen::VectorXcd& v, int k) {
  check_device(sample, k);
  if (v.size() != sample.elements()) throw std::invalid_argument("phase vector length mismatch");
  return sample.direct[k] + sample.ris_to_ap * sample.reflect[k].cwiseProduct(v);
}

std::complex<double> optimal_transmit_scalar(const Eigen::VectorXcd& m, const Eigen::VectorXcd& h,
                                             double eta) {
  if (!(eta > 0.0)) throw ValidationError("eta", "must be > 0");
  const std::complex<double> inner = m.dot(h);  // m^H h
  const double power = std::norm(inner);
  if (power == 0.0) throw DegenerateChannel("m^H h = 0: no transmit scalar aligns the device");
  return std::sqrt(eta) * std::conj(inner) / power;
}

double power_normalizer(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                        const ChannelSample& sample, double max_power) {
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sample.devices(); ++k) {
    worst = std::min(worst, std::norm(m.dot(effective_channel(sample, v, k))));
  }
  if (!(worst > 0.0)) throw DegenerateChannel("min_k |m^H h_k|^2 = 0");
  return max_power * worst;
}

double closed_form_mse(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                       const ChannelSample& sample, double max_power, double noise_power) {
  return m.squaredNorm() * noise_power / power_normalizer(m, v, sample, max_power);
}

double surrogate_d(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSample& sample,
                   int k, double gamma) {
  return m.squaredNorm() - gamma * std::norm(m.dot(effective_channel(sample, v, k)));
}

MaxTerm max_surrogate_d(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                        const ChannelSample& sample, double gamma) {
  MaxTerm best{-std::numeric_limits<double>::infinity(), 0};
  for (int k = 0; k < sample.devices(); ++k) {
    const double d = surrogate_d(m, v, sample, k, gamma);
    if (d > best.value) best = {d, k};
  }
  return best;
}

bool in_outage(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSample& sample,
               double gamma) {
  return max_surrogate_d(m, v, sample, gamma).value > 0.0;
}

double empirical_outage(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSet& set,
                        double gamma) {
  if (set.samples.empty()) throw ValidationError("T", "must be >= 1");
  return static_cast<double>(serial::count_outages(m, v, set.samples, gamma)) /
         static_cast<double>(set.samples.size());
}

double sigmoid(double x, double temperature) {
  constexpr double kFloor = std::numeric_limits<double>::denorm_min();
  constexpr double kCeil = 1.0 - 0x1.0p-53;
  const double z = x / temperature;
  double s;
  if (z < -745.0) {
    s = kFloor;
  } else if (z < 0.0) {
    const double e = std::exp(z);
    s = e / (1.0 + e);
  } else if (z <= 36.0) {
    s = 1.0 / (1.0 + std::exp(-z));
  } else {
    s = 1.0 - std::exp(-z);
  }
  return std::clamp(s, kFloor, kCeil);
}

MaxTerm max_term_m(const Eigen::VectorXd& m_tilde, const RealSampleM& sample, double gamma) {
  const Eigen::VectorXd proj = sample.stacked.transpose() * m_tilde;
  const double norm2 = m_tilde.squaredNorm();
  MaxTerm best{-std::numeric_limits<double>::infinity(), 0};
  for (int k = 0; k < sample.devices(); ++k) {
    const double d = norm2 - gamma * proj.segment(2 * k, 2).squaredNorm();
    if (d > best.value) best = {d, k};
  }
  return best;
}

MaxTerm max_term_v(const Eigen::VectorXd& v_tilde, const RealSampleV& sample, double m_norm2,
                   double gamma) {
  const Eigen::VectorXd resp = sample.b + sample.a.transpose() * v_tilde;
  MaxTerm best{-std::numeric_limits<double>::infinity(), 0};
  for (int k = 0; k < sample.devices(); ++k) {
    const double d = m_norm2 - gamma * resp.segment(2 * k, 2).squaredNorm();
    if (d > best.value) best = {d, k};
  }
  return best;
}

double smoothed_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                            const SurrogateParams& params) {
  return serial::mean_objective_m(m_tilde, samples, params);
}

double smoothed_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                            double m_norm2, const SurrogateParams& params) {
  return serial::mean_objective_v(v_tilde, samples, m_norm2, params);
}

Eigen::VectorXd grad_sample_m(const Eigen::VectorXd& m_tilde, const RealSampleM& sample,
                              const SurrogateParams& params) {
  const MaxTerm top = max_term_m(m_tilde, sample, params.gamma);
  const double s = sigmoid(top.value, params.temperature);
  const double weight = s * (1.0 - s) / params.temperature;
  const auto H = sample.device(top.device);
  const Eigen::Vector2d proj = H.transpose() * m_tilde;
  return weight * (2.0 * m_tilde - 2.0 * params.gamma * (H * proj));
}

Eigen::VectorXd grad_sample_v(const Eigen::VectorXd& v_tilde, const RealSampleV& sample,
                              double m_norm2, const SurrogateParams& params) {
  const MaxTerm top = max_term_v(v_tilde, sample, m_norm2, params.gamma);
  const double s = sigmoid(top.value, params.temperature);
  const double weight = s * (1.0 - s) / params.temperature;
  const auto A = sample.device(top.device);
  const Eigen::Vector2d resp = sample.offset(top.device) + A.transpose() * v_tilde;
  // -2 gamma A b - 2 gamma A A^T v = -2 gamma A (b + A^T v)
  return weight * (-2.0 * params.gamma * (A * resp));
}

RealSampleM real_sample_m(const ChannelSample& sample, const Eigen::VectorXcd& v) {
  const int K = sample.devices(), N = sample.antennas();
  RealSampleM out;
  out.stacked.resize(2 * N, 2 * K);
  for (int k = 0; k < K; ++k) {
    write_real_image(effective_channel(sample, v, k), out.stacked.middleCols(2 * k, 2));
  }
  return out;
}

RealSampleV real_sample_v(const ChannelSample& sample, const Eigen::VectorXcd& m) {
  const int K = sample.devices(), M = sample.elements();
  if (m.size() != sample.antennas()) throw std::invalid_argument("beamformer length mismatch");
  // a_k = conj(h_r,k) .* (G^H m), so that a_k^H v = m^H G diag(h_r,k) v.
  const Eigen::VectorXcd gm = sample.ris_to_ap.adjoint() * m;
  RealSampleV out;
  out.a.resize(2 * M, 2 * K);
  out.b.resize(2 * K);
  for (int k = 0; k < K; ++k) {
    const Eigen::VectorXcd a = sample.reflect[k].conjugate().cwiseProduct(gm);
    write_real_image(a, out.a.middleCols(2 * k, 2));
    const std::complex<double> b = m.dot(sample.direct[k]);
    out.b(2 * k) = b.real();
    out.b(2 * k + 1) = b.imag();
  }
  return out;
}

std::vector<RealSampleM> build_real_channels_m(const ChannelSet& set, const Eigen::VectorXcd& v) {
  if (v.size() != set.scenario.elements) throw std::invalid_argument("phase vector length mismatch");
  std::vector<RealSampleM> out(set.samples.size());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::int64_t t = 0; t < n; ++t) out[t] = real_sample_m(set.samples[t], v);
  return out;
}

std::vector<RealSampleV> build_real_channels_v(const ChannelSet& set, const Eigen::VectorXcd& m) {
  if (m.size() != set.scenario.antennas) throw std::invalid_argument("beamformer length mismatch");
  std::vector<RealSampleV> out(set.samples.size());
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::int64_t t = 0; t < n; ++t) out[t] = real_sample_v(set.samples[t], m);
  return out;
}

}  // namespace aircomp
