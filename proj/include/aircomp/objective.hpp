// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aircomp/scenario.hpp"

namespace aircomp {

// Receive beamformer m (length N) and RIS phase vector v (length M, |v_i| = 1).
struct BeamformingState {
  Eigen::VectorXcd m;
  Eigen::VectorXcd v;
};

// [Re x; Im x]. Norm-preserving.
Eigen::VectorXd stack_real(const Eigen::VectorXcd& x);
Eigen::VectorXcd unstack_real(const Eigen::VectorXd& x);

// Per-sample real images of the effective channels for fixed v. Columns
// (2k, 2k+1) hold H_k = [Re h_k, -Im h_k; Im h_k, Re h_k] so that
// H_k^T m_tilde = [Re(h_k^H m); Im(h_k^H m)].
struct RealSampleM {
  Eigen::MatrixXd stacked;  // 2N x 2K

  int devices() const { return static_cast<int>(stacked.cols() / 2); }
  auto device(int k) const { return stacked.middleCols(2 * k, 2); }
};

// Per-sample real images for fixed m: b_k = m^H h_d,k and
// a_k^H = m^H G diag(h_r,k). Columns (2k, 2k+1) of `a` hold A_k, entries
// (2k, 2k+1) of `b` hold [Re b_k; Im b_k].
struct RealSampleV {
  Eigen::MatrixXd a;  // 2M x 2K
  Eigen::VectorXd b;  // 2K

  int devices() const { return static_cast<int>(a.cols() / 2); }
  auto device(int k) const { return a.middleCols(2 * k, 2); }
  auto offset(int k) const { return b.segment(2 * k, 2); }
};

// gamma = tau * P / sigma^2; the sigmoid argument is divided by temperature.
struct SurrogateParams {
  double gamma = 1.0;
  double temperature = 1.0;

  void validate() const;
};

// Largest per-device surrogate value and the device attaining it (the
// smallest index on ties).
struct MaxTerm {
  double value;
  int device;
};

// h_k = h_d,k + G diag(h_r,k) v.
Eigen::VectorXcd effective_channel(const ChannelSample& sample, const Eigen::VectorXcd& v, int k);

// sqrt(eta) (m^H h)^* / |m^H h|^2.
std::complex<double> optimal_transmit_scalar(const Eigen::VectorXcd& m, const Eigen::VectorXcd& h,
                                             double eta);

// P * min_k |m^H h_k|^2.
double power_normalizer(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                        const ChannelSample& sample, double max_power);

// ||m||^2 sigma^2 / eta.
double closed_form_mse(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                       const ChannelSample& sample, double max_power, double noise_power);

// ||m||^2 - gamma |m^H h_k|^2; non-positive exactly when device k meets the
// MSE threshold.
double surrogate_d(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSample& sample,
                   int k, double gamma);

MaxTerm max_surrogate_d(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                        const ChannelSample& sample, double gamma);

// Outage indicator: strictly positive max_k d.
bool in_outage(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSample& sample,
               double gamma);

// Fraction of samples in outage.
double empirical_outage(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v, const ChannelSet& set,
                        double gamma);

// 1 / (1 + exp(-x / c)), evaluated without overflow and kept inside (0, 1).
double sigmoid(double x, double temperature = 1.0);

MaxTerm max_term_m(const Eigen::VectorXd& m_tilde, const RealSampleM& sample, double gamma);
MaxTerm max_term_v(const Eigen::VectorXd& v_tilde, const RealSampleV& sample, double m_norm2,
                   double gamma);

// u1: sample mean of S(max_k d(m_tilde; H_k^t)).
double smoothed_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                            const SurrogateParams& params);

// u2: sample mean of S(max_k (m_norm2 - gamma ||b_k + A_k^T v_tilde||^2)).
double smoothed_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                            double m_norm2, const SurrogateParams& params);

// Gradient of S(max_k d) in m_tilde for one sample, through the maximizing
// device.
Eigen::VectorXd grad_sample_m(const Eigen::VectorXd& m_tilde, const RealSampleM& sample,
                              const SurrogateParams& params);

Eigen::VectorXd grad_sample_v(const Eigen::VectorXd& v_tilde, const RealSampleV& sample,
                              double m_norm2, const SurrogateParams& params);

RealSampleM real_sample_m(const ChannelSample& sample, const Eigen::VectorXcd& v);
RealSampleV real_sample_v(const ChannelSample& sample, const Eigen::VectorXcd& m);

std::vector<RealSampleM> build_real_channels_m(const ChannelSet& set, const Eigen::VectorXcd& v);
std::vector<RealSampleV> build_real_channels_v(const ChannelSet& set, const Eigen::VectorXcd& m);

}  // namespace aircomp
