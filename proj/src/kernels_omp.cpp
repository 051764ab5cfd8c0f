// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <vector>

#include "aircomp/kernels.hpp"
#include "kernels_common.hpp"

namespace aircomp::parallel {

namespace {

// Below this many terms the fork/join cost dominates.
constexpr std::int64_t kMinParallelTerms = 32;

template <typename Term>
Eigen::VectorXd mean_of_vectors(const detail::Picks& picks, Eigen::Index dim, Reduction reduction,
                                Term&& term) {
  const auto n = static_cast<std::int64_t>(picks.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  if (reduction == Reduction::kOrdered) {
    std::vector<Eigen::VectorXd> terms(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n >= kMinParallelTerms)
    for (std::int64_t i = 0; i < n; ++i) terms[i] = term(picks[i]);
    for (std::int64_t i = 0; i < n; ++i) acc += terms[i];
  } else {
#pragma omp parallel if (n >= kMinParallelTerms)
    {
      Eigen::VectorXd local = Eigen::VectorXd::Zero(dim);
#pragma omp for schedule(static) nowait
      for (std::int64_t i = 0; i < n; ++i) local += term(picks[i]);
#pragma omp critical(aircomp_reduce)
      acc += local;
    }
  }
  return acc / static_cast<double>(n);
}

template <typename Term>
double mean_of_scalars(const detail::Picks& picks, Reduction reduction, Term&& term) {
  const auto n = static_cast<std::int64_t>(picks.size());
  double acc = 0.0;
  if (reduction == Reduction::kOrdered) {
    std::vector<double> terms(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n >= kMinParallelTerms)
    for (std::int64_t i = 0; i < n; ++i) terms[i] = term(picks[i]);
    for (std::int64_t i = 0; i < n; ++i) acc += terms[i];
  } else {
#pragma omp parallel for schedule(static) reduction(+ : acc) if (n >= kMinParallelTerms)
    for (std::int64_t i = 0; i < n; ++i) acc += term(picks[i]);
  }
  return acc / static_cast<double>(n);
}

}  // namespace

Eigen::VectorXd mean_gradient_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                                const SurrogateParams& params, std::span<const std::size_t> batch,
                                Reduction reduction) {
  return mean_of_vectors(detail::Picks(samples.size(), batch), m_tilde.size(), reduction,
                         [&](std::size_t i) { return grad_sample_m(m_tilde, samples[i], params); });
}

Eigen::VectorXd mean_gradient_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                                double m_norm2, const SurrogateParams& params,
                                std::span<const std::size_t> batch, Reduction reduction) {
  return mean_of_vectors(
      detail::Picks(samples.size(), batch), v_tilde.size(), reduction,
      [&](std::size_t i) { return grad_sample_v(v_tilde, samples[i], m_norm2, params); });
}

Eigen::VectorXd mean_gradient_difference_m(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleM> samples,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch,
                                           Reduction reduction) {
  return mean_of_vectors(detail::Picks(samples.size(), batch), current.size(), reduction,
                         [&](std::size_t i) -> Eigen::VectorXd {
                           return grad_sample_m(current, samples[i], params) -
                                  grad_sample_m(anchor, samples[i], params);
                         });
}

Eigen::VectorXd mean_gradient_difference_v(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleV> samples, double m_norm2,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch,
                                           Reduction reduction) {
  return mean_of_vectors(detail::Picks(samples.size(), batch), current.size(), reduction,
                         [&](std::size_t i) -> Eigen::VectorXd {
                           return grad_sample_v(current, samples[i], m_norm2, params) -
                                  grad_sample_v(anchor, samples[i], m_norm2, params);
                         });
}

double mean_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                        const SurrogateParams& params, Reduction reduction) {
  return mean_of_scalars(detail::Picks(samples.size(), {}), reduction, [&](std::size_t i) {
    return sigmoid(max_term_m(m_tilde, samples[i], params.gamma).value, params.temperature);
  });
}

double mean_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                        double m_norm2, const SurrogateParams& params, Reduction reduction) {
  return mean_of_scalars(detail::Picks(samples.size(), {}), reduction, [&](std::size_t i) {
    return sigmoid(max_term_v(v_tilde, samples[i], m_norm2, params.gamma).value,
                   params.temperature);
  });
}

std::size_t count_outages(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                          std::span<const ChannelSample> samples, double gamma) {
  const auto n = static_cast<std::int64_t>(samples.size());
  std::int64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count) if (n >= kMinParallelTerms)
  for (std::int64_t i = 0; i < n; ++i) count += in_outage(m, v, samples[i], gamma) ? 1 : 0;
  return static_cast<std::size_t>(count);
}

}  // namespace aircomp::parallel
