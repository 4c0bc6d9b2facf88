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

#ifndef SELDKIT_RIR_HPP
#define SELDKIT_RIR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/wav.hpp"

namespace seldkit {

// Four-channel room impulse response.
struct Rir {
  std::vector<std::vector<double>> channels;  // 4 x length
  double fs = kSampleRate;
  bool degenerate = false;  // extraction window was rank-deficient
  bool truncated = false;   // direct-path window was clipped at the bounds

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

struct TrajectoryEntry {
  Rir rir;
  Direction direction;
};

// Ordered RIRs along one trajectory through a room, nominally one per degree
// of arc.
struct TrajectoryRirSet {
  std::string room_id;
  std::vector<TrajectoryEntry> entries;
  double spacing_deg = 1.0;
  bool sparse = false;  // fewer measured points than planned, duplicates used
};

inline double rir_energy(const Rir& rir) {
  double e = 0.0;
  for (const auto& ch : rir.channels) e += energy(ch);
  return e;
}

// Delay of the strongest arrival, in (fractional) samples: argmax of the
// squared channel sum, refined by fitting a parabola through the peak and its
// neighbours.
inline double direct_path_delay(const Rir& rir) {
  const std::size_t len = rir.length();
  if (len == 0) {
    throw std::invalid_argument("direct_path_delay: empty RIR");
  }
  std::vector<double> env(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    double s = 0.0;
    for (const auto& ch : rir.channels) s += ch[i];
    env[i] = s * s;
  }
  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(env.begin(), env.end()) - env.begin());
  if (peak == 0 || peak + 1 >= len) return static_cast<double>(peak);
  const double a = env[peak - 1];
  const double b = env[peak];
  const double c = env[peak + 1];
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return static_cast<double>(peak);  // not a proper maximum
  return static_cast<double>(peak) + 0.5 * (a - c) / denom;
}

// Keeps only the direct sound: multiplies the RIR by a flat-topped window
// with raised-cosine edges (25% taper each side), centered on direct_delay,
// and zeroes everything outside. A window reaching past the RIR bounds is
// clipped and the result flagged as truncated.
inline Rir window_direct_path(const Rir& rir, double direct_delay,
                              std::size_t win_len = 64) {
  const std::size_t len = rir.length();
  if (len == 0 || win_len == 0) {
    throw std::invalid_argument("window_direct_path: empty input");
  }
  const long center = std::lround(direct_delay);
  const long start = center - static_cast<long>(win_len) / 2;
  const long stop = start + static_cast<long>(win_len);  // exclusive

  Rir out = rir;
  out.truncated = start < 0 || stop > static_cast<long>(len);
  const std::size_t taper = win_len / 4;
  for (std::size_t c = 0; c < out.channels.size(); ++c) {
    std::vector<double>& ch = out.channels[c];
    for (std::size_t i = 0; i < len; ++i) {
      const long j = static_cast<long>(i) - start;  // position inside window
      double w = 0.0;
      if (j >= 0 && j < static_cast<long>(win_len)) {
        const std::size_t u = static_cast<std::size_t>(j);
        if (taper == 0) {
          w = 1.0;
        } else if (u < taper) {
          w = 0.5 * (1.0 - std::cos(kPi * (u + 1) / (taper + 1)));
        } else if (u >= win_len - taper) {
          w = 0.5 * (1.0 - std::cos(kPi * (win_len - u) / (taper + 1)));
        } else {
          w = 1.0;
        }
      }
      ch[i] *= w;
    }
  }
  return out;
}

// Persists one trajectory as rirs/<room_id>/<trajectory_id>/: a 4-channel WAV
// per entry plus a sidecar CSV `index,azimuth_deg,elevation_deg`.
inline void save_trajectory_rirs(const std::string& rir_root,
                                 const TrajectoryRirSet& set,
                                 const std::string& trajectory_id) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(rir_root) / set.room_id / trajectory_id;
  fs::create_directories(dir);

  std::ofstream csv(dir / "directions.csv");
  if (!csv) {
    throw std::runtime_error("save_trajectory_rirs: cannot write sidecar in " +
                             dir.string());
  }
  csv << "index,azimuth_deg,elevation_deg\n";
  char name[32];
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    const TrajectoryEntry& e = set.entries[i];
    std::snprintf(name, sizeof(name), "rir_%04zu.wav", i);
    AudioBlock audio;
    audio.fs = e.rir.fs;
    audio.channels = e.rir.channels;
    write_wav((dir / name).string(), audio, WavSampleFormat::kFloat32);
    char row[96];
    std::snprintf(row, sizeof(row), "%zu,%.6f,%.6f\n", i,
                  e.direction.azimuth_deg(), e.direction.elevation_deg());
    csv << row;
  }
}

inline TrajectoryRirSet load_trajectory_rirs(const std::string& trajectory_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(trajectory_dir);
  std::ifstream csv(dir / "directions.csv");
  if (!csv) {
    throw std::runtime_error("load_trajectory_rirs: missing sidecar in " +
                             trajectory_dir);
  }
  TrajectoryRirSet set;
  set.room_id = dir.parent_path().filename().string();

  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string idx_s, az_s, el_s;
    if (!std::getline(ss, idx_s, ',') || !std::getline(ss, az_s, ',') ||
        !std::getline(ss, el_s)) {
      throw std::runtime_error("load_trajectory_rirs: malformed sidecar row: " + line);
    }
    const std::size_t idx = static_cast<std::size_t>(std::stoul(idx_s));
    char name[32];
    std::snprintf(name, sizeof(name), "rir_%04zu.wav", idx);
    const AudioBlock audio = read_wav((dir / name).string());
    TrajectoryEntry e;
    e.rir.channels = audio.channels;
    e.rir.fs = audio.fs;
    e.direction = Direction::from_degrees(std::stod(az_s), std::stod(el_s));
    set.entries.push_back(std::move(e));
  }
  if (set.entries.empty()) {
    throw std::runtime_error("load_trajectory_rirs: empty trajectory in " +
                             trajectory_dir);
  }
  return set;
}

}  // namespace seldkit

#endif  // SELDKIT_RIR_HPP
