// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "aircomp/rng.hpp"

namespace aircomp {

using Vec3 = Eigen::Vector3d;

// Geometry, dimensions, powers and fading law of one deployment. All powers
// are linear (watts); dB conversion happens only at the CLI/config boundary.
struct ScenarioConfig {
  Vec3 ap_position{0.0, 0.0, 10.0};
  Vec3 ris_position{20.0, 10.0, 10.0};
  Vec3 device_region_center{25.0, 5.0, 0.0};
  double device_region_side = 10.0;  // meters

  int devices = 20;   // K
  int antennas = 20;  // N, at the AP
  int elements = 40;  // M, at the RIS

  double max_power = 1e-3;     // P, watts (0 dBm)
  double noise_power = 1e-13;  // sigma^2, watts (-100 dBm)
  double reference_loss = 1e-3;
  double beta_direct = 3.8;   // device -> AP
  double beta_ris_ap = 2.2;   // RIS -> AP
  double beta_dev_ris = 2.2;  // device -> RIS
  double rician_factor = 3.0;  // linear, applied to both reflecting links

  std::uint64_t seed = 1;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// One fading realization for all K devices.
struct ChannelSample {
  std::vector<Eigen::VectorXcd> direct;   // K vectors of length N (device -> AP)
  std::vector<Eigen::VectorXcd> reflect;  // K vectors of length M (device -> RIS)
  Eigen::MatrixXcd ris_to_ap;             // N x M

  int devices() const { return static_cast<int>(direct.size()); }
  int antennas() const { return static_cast<int>(ris_to_ap.rows()); }
  int elements() const { return static_cast<int>(ris_to_ap.cols()); }
};

// The historical training set (or any evaluation draw), with the geometry
// it was drawn under.
struct ChannelSet {
  ScenarioConfig scenario;
  std::vector<Vec3> device_positions;
  std::vector<ChannelSample> samples;

  std::size_t size() const { return samples.size(); }
  // Throws ValidationError if any sample disagrees with the scenario shape
  // or carries a non-finite entry.
  void validate() const;
};

// Large-scale gains of each link; derived from geometry once per set.
struct LinkGains {
  std::vector<double> direct;   // per device
  std::vector<double> reflect;  // per device
  double ris_to_ap = 0.0;
};

double path_loss(double distance, double exponent, double reference);

std::vector<Vec3> sample_device_positions(const ScenarioConfig& cfg, Rng& rng);

LinkGains link_gains(const ScenarioConfig& cfg, const std::vector<Vec3>& positions);

// i.i.d. CN(0, gain) entries.
Eigen::MatrixXcd draw_rayleigh(Eigen::Index rows, Eigen::Index cols, double gain, Rng& rng);

// sqrt(gain) * (sqrt(k/(1+k)) * los + sqrt(1/(1+k)) * w), w ~ CN(0, 1).
Eigen::MatrixXcd draw_rician(double gain, double kappa, const Eigen::MatrixXcd& los, Rng& rng);

// Draws one sample in the fixed order h_d,1..h_d,K, h_r,1..h_r,K, G.
ChannelSample draw_channel_sample(const ScenarioConfig& cfg, const LinkGains& gains, Rng& rng);

// How a set is drawn from the master seed cfg.seed. Sample t of realization r
// uses substream (fading, r, t); positions come from (kGeometry, r) unless
// supplied.
struct DrawPlan {
  Stream fading = Stream::kTrainFading;
  std::uint64_t realization = 0;
  std::optional<std::vector<Vec3>> positions;
  bool ris_present = true;  // false zeroes G after drawing
};

ChannelSet generate_channel_set(const ScenarioConfig& cfg, std::size_t count,
                                const DrawPlan& plan = {});

// Copy of the set with the RIS -> AP link removed (G = 0).
ChannelSet without_ris(const ChannelSet& set);

}  // namespace aircomp
