// SPDX-License-Identifier: Apache-2.0
#include "aircomp/channel_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "aircomp/errors.hpp"

namespace aircomp {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'A', 'C', 'S', 'B'};
constexpr const char* kFormatTag = "aircomp-channel-set";

static_assert(std::endian::native == std::endian::little,
              "binary channel format assumes a little-endian host");

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json scenario_json(const ScenarioConfig& c) {
  return json{{"ap_position", vec3_json(c.ap_position)},
              {"ris_position", vec3_json(c.ris_position)},
              {"device_region_center", vec3_json(c.device_region_center)},
              {"device_region_side", c.device_region_side},
              {"K", c.devices},
              {"N", c.antennas},
              {"M", c.elements},
              {"P_watts", c.max_power},
              {"sigma2_watts", c.noise_power},
              {"L0", c.reference_loss},
              {"beta_direct", c.beta_direct},
              {"beta_ris_ap", c.beta_ris_ap},
              {"beta_dev_ris", c.beta_dev_ris},
              {"rician_factor", c.rician_factor},
              {"seed", c.seed}};
}

ScenarioConfig scenario_from(const json& j) {
  ScenarioConfig c;
  c.ap_position = vec3_from(j.at("ap_position"));
  c.ris_position = vec3_from(j.at("ris_position"));
  c.device_region_center = vec3_from(j.at("device_region_center"));
  c.device_region_side = j.at("device_region_side").get<double>();
  c.devices = j.at("K").get<int>();
  c.antennas = j.at("N").get<int>();
  c.elements = j.at("M").get<int>();
  c.max_power = j.at("P_watts").get<double>();
  c.noise_power = j.at("sigma2_watts").get<double>();
  c.reference_loss = j.at("L0").get<double>();
  c.beta_direct = j.at("beta_direct").get<double>();
  c.beta_ris_ap = j.at("beta_ris_ap").get<double>();
  c.beta_dev_ris = j.at("beta_dev_ris").get<double>();
  c.rician_factor = j.at("rician_factor").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json header_json(const ChannelSet& set, ChannelFormat format) {
  json positions = json::array();
  for (const Vec3& p : set.device_positions) positions.push_back(vec3_json(p));
  return json{{"format", kFormatTag},
              {"version", kChannelFormatVersion},
              {"encoding", to_string(format)},
              {"seed", set.scenario.seed},
              {"T", set.samples.size()},
              {"scenario", scenario_json(set.scenario)},
              {"device_positions", positions}};
}

std::size_t record_doubles(const ScenarioConfig& c) {
  const auto K = static_cast<std::size_t>(c.devices);
  const auto N = static_cast<std::size_t>(c.antennas);
  const auto M = static_cast<std::size_t>(c.elements);
  return 2 * (K * N + K * M + N * M);
}

// Flattens one sample into (re, im) pairs in file order.
std::vector<double> flatten(const ChannelSample& s) {
  std::vector<double> out;
  auto push = [&out](std::complex<double> z) {
    out.push_back(z.real());
    out.push_back(z.imag());
  };
  for (const auto& h : s.direct)
    for (Eigen::Index i = 0; i < h.size(); ++i) push(h(i));
  for (const auto& h : s.reflect)
    for (Eigen::Index i = 0; i < h.size(); ++i) push(h(i));
  for (Eigen::Index r = 0; r < s.ris_to_ap.rows(); ++r)
    for (Eigen::Index c = 0; c < s.ris_to_ap.cols(); ++c) push(s.ris_to_ap(r, c));
  return out;
}

ChannelSample unflatten(const ScenarioConfig& cfg, const double* data) {
  const int K = cfg.devices, N = cfg.antennas, M = cfg.elements;
  auto next = [&data]() {
    const std::complex<double> z{data[0], data[1]};
    data += 2;
    return z;
  };
  ChannelSample s;
  s.direct.assign(K, Eigen::VectorXcd(N));
  s.reflect.assign(K, Eigen::VectorXcd(M));
  s.ris_to_ap.resize(N, M);
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < N; ++i) s.direct[k](i) = next();
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < M; ++i) s.reflect[k](i) = next();
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < M; ++c) s.ris_to_ap(r, c) = next();
  return s;
}

struct Header {
  ScenarioConfig scenario;
  std::vector<Vec3> positions;
  std::size_t count = 0;
};

Header parse_header(const json& j) {
  if (!j.is_object() || j.value("format", "") != kFormatTag) {
    throw FormatError("not an aircomp channel-set file");
  }
  if (j.at("version").get<int>() != kChannelFormatVersion) {
    throw FormatError("unsupported channel-set version " + j.at("version").dump());
  }
  Header h;
  h.scenario = scenario_from(j.at("scenario"));
  if (j.at("seed").get<std::uint64_t>() != h.scenario.seed) {
    throw FormatError("header seed disagrees with scenario seed");
  }
  for (const auto& p : j.at("device_positions")) h.positions.push_back(vec3_from(p));
  h.count = j.at("T").get<std::size_t>();
  return h;
}

ChannelSet finish(Header h, std::vector<ChannelSample> samples) {
  ChannelSet set;
  set.scenario = h.scenario;
  set.device_positions = std::move(h.positions);
  set.samples = std::move(samples);
  try {
    set.scenario.validate();
    set.validate();
  } catch (const ValidationError& e) {
    throw FormatError(std::string("invalid channel set: ") + e.what());
  }
  return set;
}

ChannelSet read_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty channel-set file");
  Header h = parse_header(json::parse(line));
  const std::size_t width = record_doubles(h.scenario);
  std::vector<ChannelSample> samples;
  samples.reserve(h.count);
  for (std::size_t t = 0; t < h.count; ++t) {
    if (!std::getline(in, line)) throw FormatError("truncated: missing sample " + std::to_string(t));
    const json rec = json::parse(line);
    if (rec.at("t").get<std::size_t>() != t) throw FormatError("sample records out of order");
    const auto data = rec.at("data").get<std::vector<double>>();
    if (data.size() != width) {
      throw FormatError("sample " + std::to_string(t) + " has " + std::to_string(data.size()) +
                        " values, expected " + std::to_string(width));
    }
    samples.push_back(unflatten(h.scenario, data.data()));
  }
  return finish(std::move(h), std::move(samples));
}

template <typename T>
T read_pod(std::istream& in) {
  T value;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw FormatError("truncated binary header");
  return value;
}

ChannelSet read_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("bad binary magic");
  const auto version = read_pod<std::uint32_t>(in);
  if (version != static_cast<std::uint32_t>(kChannelFormatVersion)) {
    throw FormatError("unsupported channel-set version " + std::to_string(version));
  }
  const auto len = read_pod<std::uint64_t>(in);
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) throw FormatError("truncated binary header");
  Header h = parse_header(json::parse(text));
  const std::size_t width = record_doubles(h.scenario);
  std::vector<double> buf(width);
  std::vector<ChannelSample> samples;
  samples.reserve(h.count);
  for (std::size_t t = 0; t < h.count; ++t) {
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(width * sizeof(double)))) {
      throw FormatError("truncated: missing sample " + std::to_string(t));
    }
    samples.push_back(unflatten(h.scenario, buf.data()));
  }
  return finish(std::move(h), std::move(samples));
}

}  // namespace

ChannelFormat parse_channel_format(const std::string& name) {
  if (name == "text") return ChannelFormat::kText;
  if (name == "binary") return ChannelFormat::kBinary;
  throw ValidationError("format", "expected text|binary, got '" + name + "'");
}

const char* to_string(ChannelFormat format) {
  return format == ChannelFormat::kText ? "text" : "binary";
}

void write_channel_set(std::ostream& out, const ChannelSet& set, ChannelFormat format) {
  const json header = header_json(set, format);
  if (format == ChannelFormat::kText) {
    out << header.dump() << '\n';
    for (std::size_t t = 0; t < set.samples.size(); ++t) {
      out << json{{"t", t}, {"data", flatten(set.samples[t])}}.dump() << '\n';
    }
  } else {
    const std::string text = header.dump();
    const auto version = static_cast<std::uint32_t>(kChannelFormatVersion);
    const auto len = static_cast<std::uint64_t>(text.size());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const ChannelSample& s : set.samples) {
      const std::vector<double> flat = flatten(s);
      out.write(reinterpret_cast<const char*>(flat.data()),
                static_cast<std::streamsize>(flat.size() * sizeof(double)));
    }
  }
  if (!out) throw IoError("write failed");
}

void write_channel_set(const std::string& path, const ChannelSet& set, ChannelFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_channel_set(out, set, format);
}

ChannelSet read_channel_set(std::istream& in) {
  const int first = in.peek();
  if (first == std::char_traits<char>::eof()) throw FormatError("empty channel-set file");
  try {
    if (first == kMagic[0]) return read_binary(in);
    return read_text(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed channel-set file: ") + e.what());
  }
}

ChannelSet read_channel_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open channel set: " + path);
  return read_channel_set(in);
}

}  // namespace aircomp
