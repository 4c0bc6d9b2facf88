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

#ifndef SELDKIT_ROOM_SIM_HPP
#define SELDKIT_ROOM_SIM_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/rir.hpp"
#include "seldkit/rng.hpp"

namespace seldkit {

// Statistical description of a synthetic room. drr_db may be +infinity for an
// anechoic room (no tail at all).
struct RoomSpec {
  std::string room_id;
  double rt60 = 0.4;                                       // seconds
  double drr_db = 10.0;                                    // direct/tail ratio
  std::size_t rir_len = 2048;                              // samples per RIR
  static constexpr double kAnechoic = std::numeric_limits<double>::infinity();
};

// Closed circle of directions at fixed elevation, step_deg apart in azimuth.
inline std::vector<Direction> build_circle_track(double el_deg, double step_deg = 1.0) {
  if (!(step_deg > 0.0)) {
    throw std::invalid_argument("build_circle_track: step must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(std::lround(360.0 / step_deg));
  std::vector<Direction> track;
  track.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    track.push_back(Direction::from_degrees(-180.0 + static_cast<double>(i) * step_deg, el_deg));
  }
  return track;
}

// Renders one RIR per track direction: the direct path comes from the array
// model (arriving at rir_len/2); the reverberant tail is seeded Gaussian
// noise starting one direct-window length later, exponentially decaying at
// the rate that reaches -60 dB at rt60, and scaled so the direct-to-tail
// energy ratio inside the buffer equals drr_db. Below 500 Hz the tail is
// shared across channels (a diffuse field is coherent at long wavelengths
// against a small array); above it each channel gets independent noise. For
// the ambisonic format the directional channels carry 1/sqrt(3) of the omni
// tail amplitude, the diffuse-field ratio of those components. The same seed
// produces the same tail noise for both formats. Deterministic per
// (room, seed).
inline TrajectoryRirSet simulate_trajectory_rirs(const RoomSpec& room,
                                                 const std::vector<Direction>& track,
                                                 const TetraArraySpec& spec,
                                                 ArrayFormat format,
                                                 std::uint64_t seed,
                                                 double fs = kSampleRate) {
  if (!(room.rt60 >= 0.2 && room.rt60 <= 2.0)) {
    throw std::invalid_argument("simulate_trajectory_rirs: rt60 outside [0.2, 2.0] s");
  }
  if (std::isnan(room.drr_db)) {
    throw std::invalid_argument("simulate_trajectory_rirs: drr_db is NaN");
  }
  if (track.empty()) {
    throw std::invalid_argument("simulate_trajectory_rirs: empty track");
  }

  const std::size_t len = room.rir_len;
  const std::size_t center = len / 2;
  const std::size_t tail_start = center + 64;  // keep the direct window clean
  if (tail_start + 16 >= len) {
    throw std::invalid_argument("simulate_trajectory_rirs: rir_len leaves no tail room");
  }
  const bool anechoic = std::isinf(room.drr_db) && room.drr_db > 0.0;
  const ArrayIrSynthesizer synth(spec, fs, len);
  const Rng root(seed);

  TrajectoryRirSet set;
  set.room_id = room.room_id;
  set.spacing_deg = 1.0;
  set.entries.reserve(track.size());

  const std::size_t tail_len = len - tail_start;
  const std::size_t nfft = next_pow2(2 * tail_len);
  const std::size_t split_bin =
      static_cast<std::size_t>(std::lround(500.0 * static_cast<double>(nfft) / fs));
  const double decay_rate = std::log(1000.0) / room.rt60;  // amplitude e-folding

  for (std::size_t i = 0; i < track.size(); ++i) {
    const AudioBlock direct = synth.synthesize(track[i], format);
    TrajectoryEntry entry;
    entry.direction = track[i];
    entry.rir.fs = fs;
    entry.rir.channels = direct.channels;

    if (!anechoic) {
      Rng entry_rng = root.derive(i);
      Rng common_rng = entry_rng.derive(0);
      std::vector<double> common(tail_len);
      for (double& v : common) v = common_rng.normal();
      const auto common_spec = [&] {
        std::vector<double> buf(nfft, 0.0);
        std::copy(common.begin(), common.end(), buf.begin());
        return rfft(buf);
      }();

      double tail_energy = 0.0;
      std::vector<std::vector<double>> tails(4);
      for (std::size_t c = 0; c < 4; ++c) {
        Rng ch_rng = entry_rng.derive(1 + c);
        std::vector<double> own(nfft, 0.0);
        for (std::size_t t = 0; t < tail_len; ++t) own[t] = ch_rng.normal();
        std::vector<std::complex<double>> sp = rfft(own);
        for (std::size_t k = 0; k < sp.size(); ++k) {
          if (k < split_bin) sp[k] = common_spec[k];
        }
        std::vector<double> mixed = irfft(sp, nfft);
        mixed.resize(tail_len);
        const double ch_gain =
            format == ArrayFormat::kFoa && c > 0 ? 1.0 / std::sqrt(3.0) : 1.0;
        for (std::size_t t = 0; t < tail_len; ++t) {
          const double dt = static_cast<double>(tail_start + t - center) / fs;
          mixed[t] *= ch_gain * std::exp(-decay_rate * dt);
          tail_energy += mixed[t] * mixed[t];
        }
        tails[c] = std::move(mixed);
      }

      double direct_energy = 0.0;
      for (const auto& ch : direct.channels) direct_energy += energy(ch);
      if (tail_energy > 0.0) {
        const double gain =
            std::sqrt(direct_energy / (tail_energy * db_to_power(room.drr_db)));
        for (std::size_t c = 0; c < 4; ++c) {
          for (std::size_t t = 0; t < tail_len; ++t) {
            entry.rir.channels[c][tail_start + t] += gain * tails[c][t];
          }
        }
      }
    }
    set.entries.push_back(std::move(entry));
  }
  return set;
}

// Walks the planned track and, each time the accumulated arc reaches another
// spacing_deg step, keeps the measured (RIR, direction) pair closest to the
// planned point. Sparse measurements may be picked repeatedly; that sets the
// sparse flag.
inline TrajectoryRirSet select_reference_pairs(const std::vector<TrajectoryEntry>& doas,
                                               const std::vector<Direction>& planned_track,
                                               double spacing_deg = 1.0,
                                               const std::string& room_id = "") {
  if (doas.empty() || planned_track.empty()) {
    throw std::invalid_argument("select_reference_pairs: empty inputs");
  }
  if (!(spacing_deg > 0.0)) {
    throw std::invalid_argument("select_reference_pairs: spacing must be positive");
  }

  TrajectoryRirSet out;
  out.room_id = room_id;
  out.spacing_deg = spacing_deg;

  std::vector<bool> used(doas.size(), false);
  double arc = 0.0;
  double next_target = 0.0;
  const double eps = 1e-9;
  for (std::size_t i = 0; i < planned_track.size(); ++i) {
    if (i > 0) arc += angular_distance_deg(planned_track[i - 1], planned_track[i]);
    if (arc + eps < next_target) continue;
    // Nearest measurement to this planned point.
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < doas.size(); ++m) {
      const double d = angular_distance_deg(doas[m].direction, planned_track[i]);
      if (d < best_dist) {
        best_dist = d;
        best = m;
      }
    }
    if (used[best]) out.sparse = true;
    used[best] = true;
    out.entries.push_back(doas[best]);
    next_target += spacing_deg;
  }
  return out;
}

// Fixed stable of synthetic rooms the dataset pipeline draws from.
inline std::vector<RoomSpec> build_default_rooms() {
  return {
      {"room1", 0.30, 11.0, 2048}, {"room2", 0.45, 8.0, 2048},
      {"room3", 0.25, 13.0, 2048}, {"room4", 0.60, 6.0, 2048},
      {"room5", 0.35, 10.0, 2048}, {"room6", 0.80, 4.0, 2048},
  };
}

}  // namespace seldkit

#endif  // SELDKIT_ROOM_SIM_HPP
