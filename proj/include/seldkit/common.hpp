// SPDX-License-Identifier: Apache-2.0
//
// seldkit: spatial sound scene synthesis and SELD evaluation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SELDKIT_COMMON_HPP
#define SELDKIT_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seldkit {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Pipeline-wide sampling rate. All RIRs, event samples, and scenes run at 24 kHz.
inline constexpr double kSampleRate = 24000.0;

// Label (metadata) frame length in seconds: one reference frame per 100 ms.
inline constexpr double kLabelHopSeconds = 0.1;

// Number of sound event classes.
inline constexpr int kNumClasses = 14;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }

// Mean squared sample value of a signal; 0 for an empty signal.
inline double mean_power(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

inline double energy(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Multichannel audio stored one contiguous vector per channel.
struct AudioBlock {
  std::vector<std::vector<double>> channels;
  double fs = kSampleRate;

  AudioBlock() = default;
  AudioBlock(std::size_t num_channels, std::size_t num_frames, double sample_rate = kSampleRate)
      : channels(num_channels, std::vector<double>(num_frames, 0.0)), fs(sample_rate) {}

  std::size_t num_channels() const { return channels.size(); }
  std::size_t num_frames() const { return channels.empty() ? 0 : channels.front().size(); }

  void resize_frames(std::size_t num_frames) {
    for (auto& ch : channels) ch.resize(num_frames, 0.0);
  }
};

}  // namespace seldkit

#endif  // SELDKIT_COMMON_HPP
