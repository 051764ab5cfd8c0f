// SPDX-License-Identifier: Apache-2.0
#pragma once

// Sample-parallel reductions used by the solvers and the evaluator.
//
// serial::   reference implementations; a plain loop over samples in index
//            order, summed left to right.
// parallel:: OpenMP versions. With Reduction::kOrdered the per-sample terms
//            are computed in parallel into a buffer and then summed in index
//            order, which makes the result bitwise identical to serial:: for
//            any thread count. kUnordered uses per-thread partial sums and is
//            only reproducible up to rounding.
//
// `batch` selects a subset of sample indices; an empty span means all
// samples. Means divide by the number of terms summed.

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "aircomp/objective.hpp"

namespace aircomp {

enum class Reduction { kOrdered, kUnordered };

namespace serial {

Eigen::VectorXd mean_gradient_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                                const SurrogateParams& params,
                                std::span<const std::size_t> batch = {});

Eigen::VectorXd mean_gradient_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                                double m_norm2, const SurrogateParams& params,
                                std::span<const std::size_t> batch = {});

// Mean over the batch of g_i(current) - g_i(anchor).
Eigen::VectorXd mean_gradient_difference_m(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleM> samples,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch);

Eigen::VectorXd mean_gradient_difference_v(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleV> samples, double m_norm2,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch);

double mean_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                        const SurrogateParams& params);

double mean_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                        double m_norm2, const SurrogateParams& params);

std::size_t count_outages(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                          std::span<const ChannelSample> samples, double gamma);

}  // namespace serial

namespace parallel {

Eigen::VectorXd mean_gradient_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                                const SurrogateParams& params,
                                std::span<const std::size_t> batch = {},
                                Reduction reduction = Reduction::kOrdered);

Eigen::VectorXd mean_gradient_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                                double m_norm2, const SurrogateParams& params,
                                std::span<const std::size_t> batch = {},
                                Reduction reduction = Reduction::kOrdered);

Eigen::VectorXd mean_gradient_difference_m(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleM> samples,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch,
                                           Reduction reduction = Reduction::kOrdered);

Eigen::VectorXd mean_gradient_difference_v(const Eigen::VectorXd& current,
                                           const Eigen::VectorXd& anchor,
                                           std::span<const RealSampleV> samples, double m_norm2,
                                           const SurrogateParams& params,
                                           std::span<const std::size_t> batch,
                                           Reduction reduction = Reduction::kOrdered);

double mean_objective_m(const Eigen::VectorXd& m_tilde, std::span<const RealSampleM> samples,
                        const SurrogateParams& params, Reduction reduction = Reduction::kOrdered);

double mean_objective_v(const Eigen::VectorXd& v_tilde, std::span<const RealSampleV> samples,
                        double m_norm2, const SurrogateParams& params,
                        Reduction reduction = Reduction::kOrdered);

// Integer counts are order-independent, so there is no reduction choice.
std::size_t count_outages(const Eigen::VectorXcd& m, const Eigen::VectorXcd& v,
                          std::span<const ChannelSample> samples, double gamma);

}  // namespace parallel

}  // namespace aircomp
