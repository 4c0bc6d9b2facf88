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

// The measurement loop in miniature: excite a simulated room with an MLS,
// recover the impulse response by least squares, window its direct path, and
// estimate the source direction with broadband MUSIC.

#include <cstdio>

#include "seldkit/seldkit.hpp"

int main() {
  using namespace seldkit;

  const TetraArraySpec array;
  RoomSpec room;
  room.room_id = "demo";
  room.rt60 = 0.3;
  room.drr_db = 8.0;

  const Direction truth = Direction::from_degrees(63.0, -12.0);
  const TrajectoryRirSet set =
      simulate_trajectory_rirs(room, {truth}, array, ArrayFormat::kMic, /*seed=*/11);
  const Rir& true_rir = set.entries.front().rir;

  // Play the excitation through the room and listen on all four capsules.
  // The sequence period (4095 samples at order 12) must fit inside the
  // one-second regression window, or the shifted excitation copies the
  // regression sees become linearly dependent and the solve degenerates.
  const MlsSignal mls = generate_mls(/*order=*/12, /*seed=*/5);
  std::vector<double> excitation;
  while (excitation.size() < 2 * static_cast<std::size_t>(kSampleRate)) {
    excitation.insert(excitation.end(), mls.samples.begin(), mls.samples.end());
  }
  AudioBlock recording;
  recording.fs = kSampleRate;
  recording.channels.resize(4);
  for (std::size_t c = 0; c < 4; ++c) {
    recording.channels[c] = fft_convolve(excitation, true_rir.channels[c]);
    recording.channels[c].resize(excitation.size());
  }

  const std::vector<Rir> estimates =
      extract_rirs_sliding(excitation, recording, true_rir.length());
  const Rir& estimate = estimates[estimates.size() / 2];

  const Rir direct = window_direct_path(estimate, direct_path_delay(estimate));
  const Direction doa = music_doa_broadband(direct, array);

  std::printf("true direction      az %+7.2f  el %+6.2f deg\n", truth.azimuth_deg(),
              truth.elevation_deg());
  std::printf("estimated direction az %+7.2f  el %+6.2f deg\n", doa.azimuth_deg(),
              doa.elevation_deg());
  std::printf("angular error       %.2f deg\n", angular_distance_deg(truth, doa));
  return 0;
}
