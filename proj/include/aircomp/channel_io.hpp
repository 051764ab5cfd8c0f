// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "aircomp/scenario.hpp"

namespace aircomp {

// Channel-set container. Both encodings carry the same logical content:
//   header  - format tag, version, encoding, seed, T, full ScenarioConfig and
//             device positions (JSON object)
//   records - T samples, each the complex entries h_d,1..h_d,K, h_r,1..h_r,K, G
//             (G row-major) as IEEE-754 (real, imag) double pairs.
// Text: JSON lines, header on line 1, one {"t":..,"data":[..]} line per sample.
// Binary: "ACSB" magic, u32 version, u64 header length, header JSON bytes,
// then the raw little-endian doubles of every record back to back.
enum class ChannelFormat { kText, kBinary };

inline constexpr int kChannelFormatVersion = 1;

void write_channel_set(std::ostream& out, const ChannelSet& set, ChannelFormat format);
void write_channel_set(const std::string& path, const ChannelSet& set, ChannelFormat format);

// Detects the encoding from the first bytes. Throws FormatError on malformed
// input and IoError if the file cannot be opened.
ChannelSet read_channel_set(std::istream& in);
ChannelSet read_channel_set(const std::string& path);

ChannelFormat parse_channel_format(const std::string& name);
const char* to_string(ChannelFormat format);

}  // namespace aircomp
