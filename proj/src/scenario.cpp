// SPDX-License-Identifier: Apache-2.0
#include "aircomp/scenario.hpp"

#include <cmath>
#include <string>

#include "aircomp/errors.hpp"

namespace aircomp {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(field, "must be finite and > 0");
  }
}

bool all_finite(const Eigen::MatrixXcd& x) {
  return x.real().allFinite() && x.imag().allFinite();
}

}  // namespace

void ScenarioConfig::validate() const {
  if (devices < 1) throw ValidationError("K", "must be >= 1");
  if (antennas < 1) throw ValidationError("N", "must be >= 1");
  if (elements < 1) throw ValidationError("M", "must be >= 1");
  require_positive(max_power, "P");
  require_positive(noise_power, "sigma2");
  require_positive(reference_loss, "L0");
  require_positive(beta_direct, "beta_direct");
  require_positive(beta_ris_ap, "beta_ris_ap");
  require_positive(beta_dev_ris, "beta_dev_ris");
  if (!(rician_factor >= 0.0) || !std::isfinite(rician_factor)) {
    throw ValidationError("rician_factor", "must be finite and >= 0");
  }
  // side = 0 collapses the region to its center and is allowed.
  if (!(device_region_side >= 0.0) || !std::isfinite(device_region_side)) {
    throw ValidationError("device_region_side", "must be finite and >= 0");
  }
  if (!ap_position.allFinite() || !ris_position.allFinite() || !device_region_center.allFinite()) {
    throw ValidationError("position", "coordinates must be finite");
  }
}

void ChannelSet::validate() const {
  if (samples.empty()) throw ValidationError("T", "must be >= 1");
  const auto K = static_cast<std::size_t>(scenario.devices);
  if (device_positions.size() != K) {
    throw ValidationError("device_positions", "expected " + std::to_string(K) + " entries");
  }
  for (std::size_t t = 0; t < samples.size(); ++t) {
    const ChannelSample& s = samples[t];
    const std::string where = "sample " + std::to_string(t);
    if (s.direct.size() != K || s.reflect.size() != K) {
      throw ValidationError(where, "device count mismatch");
    }
    if (s.ris_to_ap.rows() != scenario.antennas || s.ris_to_ap.cols() != scenario.elements) {
      throw ValidationError(where, "G shape mismatch");
    }
    if (!all_finite(s.ris_to_ap)) throw ValidationError(where, "non-finite G entry");
    for (std::size_t k = 0; k < K; ++k) {
      if (s.direct[k].size() != scenario.antennas || s.reflect[k].size() != scenario.elements) {
        throw ValidationError(where, "channel length mismatch for device " + std::to_string(k));
      }
      if (!all_finite(s.direct[k]) || !all_finite(s.reflect[k])) {
        throw ValidationError(where, "non-finite entry for device " + std::to_string(k));
      }
    }
  }
}

double path_loss(double distance, double exponent, double reference) {
  if (!(distance > 0.0)) {
    throw InvalidGeometry("link length must be > 0, got " + std::to_string(distance));
  }
  return reference * std::pow(distance, -exponent);
}

std::vector<Vec3> sample_device_positions(const ScenarioConfig& cfg, Rng& rng) {
  const double half = cfg.device_region_side / 2.0;
  const Vec3& c = cfg.device_region_center;
  std::vector<Vec3> positions;
  positions.reserve(static_cast<std::size_t>(cfg.devices));
  for (int k = 0; k < cfg.devices; ++k) {
    const double x = rng.uniform(c.x() - half, c.x() + half);
    const double y = rng.uniform(c.y() - half, c.y() + half);
    positions.emplace_back(x, y, c.z());
  }
  return positions;
}

LinkGains link_gains(const ScenarioConfig& cfg, const std::vector<Vec3>& positions) {
  LinkGains g;
  g.ris_to_ap = path_loss((cfg.ris_position - cfg.ap_position).norm(), cfg.beta_ris_ap,
                          cfg.reference_loss);
  for (const Vec3& p : positions) {
    g.direct.push_back(path_loss((p - cfg.ap_position).norm(), cfg.beta_direct, cfg.reference_loss));
    g.reflect.push_back(
        path_loss((p - cfg.ris_position).norm(), cfg.beta_dev_ris, cfg.reference_loss));
  }
  return g;
}

Eigen::MatrixXcd draw_rayleigh(Eigen::Index rows, Eigen::Index cols, double gain, Rng& rng) {
  if (!(gain > 0.0)) throw ValidationError("gain", "must be > 0");
  Eigen::MatrixXcd out(rows, cols);
  // Row-major fill so the draw order matches the file layout.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = rng.complex_normal(gain);
  }
  return out;
}

Eigen::MatrixXcd draw_rician(double gain, double kappa, const Eigen::MatrixXcd& los, Rng& rng) {
  if (!(gain > 0.0)) throw ValidationError("gain", "must be > 0");
  if (!(kappa >= 0.0)) throw ValidationError("rician_factor", "must be >= 0");
  const double amp = std::sqrt(gain);
  const double los_w = std::sqrt(kappa / (1.0 + kappa));
  const double nlos_w = std::sqrt(1.0 / (1.0 + kappa));
  Eigen::MatrixXcd out(los.rows(), los.cols());
  for (Eigen::Index r = 0; r < los.rows(); ++r) {
    for (Eigen::Index c = 0; c < los.cols(); ++c) {
      out(r, c) = amp * (los_w * los(r, c) + nlos_w * rng.complex_normal(1.0));
    }
  }
  return out;
}

ChannelSample draw_channel_sample(const ScenarioConfig& cfg, const LinkGains& gains, Rng& rng) {
  const int K = cfg.devices, N = cfg.antennas, M = cfg.elements;
  // Line-of-sight component: all-ones (zero-angle steering vector).
  const Eigen::MatrixXcd los_reflect = Eigen::MatrixXcd::Ones(M, 1);
  const Eigen::MatrixXcd los_ris_ap = Eigen::MatrixXcd::Ones(N, M);

  ChannelSample s;
  s.direct.reserve(K);
  s.reflect.reserve(K);
  for (int k = 0; k < K; ++k) s.direct.emplace_back(draw_rayleigh(N, 1, gains.direct[k], rng));
  for (int k = 0; k < K; ++k) {
    s.reflect.emplace_back(draw_rician(gains.reflect[k], cfg.rician_factor, los_reflect, rng));
  }
  s.ris_to_ap = draw_rician(gains.ris_to_ap, cfg.rician_factor, los_ris_ap, rng);
  return s;
}

ChannelSet generate_channel_set(const ScenarioConfig& cfg, std::size_t count,
                                const DrawPlan& plan) {
  cfg.validate();
  if (count < 1) throw ValidationError("T", "must be >= 1");

  ChannelSet set;
  set.scenario = cfg;
  if (plan.positions) {
    if (plan.positions->size() != static_cast<std::size_t>(cfg.devices)) {
      throw ValidationError("device_positions", "expected K positions");
    }
    set.device_positions = *plan.positions;
  } else {
    Rng geo(derive_seed(cfg.seed, Stream::kGeometry, plan.realization));
    set.device_positions = sample_device_positions(cfg, geo);
  }
  const LinkGains gains = link_gains(cfg, set.device_positions);

  set.samples.resize(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (n > 16)
  for (std::int64_t t = 0; t < n; ++t) {
    Rng rng(derive_seed(cfg.seed, plan.fading, plan.realization, static_cast<std::uint64_t>(t)));
    ChannelSample s = draw_channel_sample(cfg, gains, rng);
    if (!plan.ris_present) s.ris_to_ap.setZero();
    set.samples[static_cast<std::size_t>(t)] = std::move(s);
  }
  return set;
}

ChannelSet without_ris(const ChannelSet& set) {
  ChannelSet out = set;
  for (ChannelSample& s : out.samples) s.ris_to_ap.setZero();
  return out;
}

}  // namespace aircomp
