// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "aircomp/kernels.hpp"
#include "kernels_common.hpp"

namespace aircomp::serial {

Eigen::VectorXd mean_gradient_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                                const SurrogateParams& params, std::span<const std::size_t> batch) {
  const detail::Picks picks(samples.size(), batch);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m_tilde.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    acc += grad_sample_m(m_tilde, samples[picks[i]], params);
  }
  return acc / static_cast<double>(picks.size());
}

Eigen::VectorXd mean_gradient_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                                double m_norm2, const SurrogateParams& params,
                                std::span<const std::size_t> batch) {
  const detail::Picks picks(samples.size(), batch);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(v_tilde.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    acc += grad_sample_v(v_tilde, samples[picks[i]], m_norm2, params);
  }
  return acc / static_cast<double>(picks.size());
}

Eigen::VectorXd mean_gradient_difference_m(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleM> samples,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch) {
  const detail::Picks picks(samples.size(), batch);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(current.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    const RealSampleM& s = samples[picks[i]];
    acc += grad_sample_m(current, s, params) - grad_sample_m(anchor, s, params);
  }
  return acc / static_cast<double>(picks.size());
}

Eigen::VectorXd mean_gradient_difference_v(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleV> samples, double m_norm2,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch) {
  const detail::Picks picks(samples.size(), batch);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(current.size());
  for (std::size_t i = 0; i < picks.size(); ++i) {
    const RealSampleV& s = samples[picks[i]];
    acc += grad_sample_v(current, s, m_norm2, params) - grad_sample_v(anchor, s, m_norm2, params);
  }
  return acc / static_cast<double>(picks.size());
}

double mean_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                        const SurrogateParams& params) {
  const detail::Picks picks(samples.size(), {});
  double acc = 0.0;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    acc += sigmoid(max_term_m(m_tilde, samples[i], params.gamma).value, params.temperature);
  }
  return acc / static_cast<double>(picks.size());
}

double mean_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                        double m_norm2, const SurrogateParams& params) {
  const detail::Picks picks(samples.size(), {});
  double acc = 0.0;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    acc += sigmoid(max_term_v(v_tilde, samples[i], m_norm2, params.gamma).value, params.temperature);
  }
  return acc / static_cast<double>(picks.size());
}

std::size_t count_outages(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                          std::span<const ChannelSample> samples, double gamma) {
  std::size_t count = 0;
  for (const ChannelSample& s : samples) count += in_outage(m, v, s, gamma) ? 1 : 0;
  return count;
}

}  // namespace aircomp::serial
