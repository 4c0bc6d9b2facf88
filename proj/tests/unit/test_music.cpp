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

#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "seldkit/music.hpp"
#include "seldkit/rir.hpp"
#include "seldkit/rng.hpp"
#include "seldkit/room_sim.hpp"

using namespace seldkit;

namespace {

Direction analyze(const RoomSpec& room, const Direction& truth, std::uint64_t seed) {
  const TetraArraySpec spec;
  const TrajectoryRirSet set =
      simulate_trajectory_rirs(room, {truth}, spec, ArrayFormat::kMic, seed);
  const Rir& rir = set.entries[0].rir;
  const Rir windowed = window_direct_path(rir, direct_path_delay(rir));
  return music_doa_broadband(windowed, spec);
}

}  // namespace

TEST_CASE("subspace search recovers anechoic directions", "[music]") {
  RoomSpec room;
  room.room_id = "anechoic";
  room.rt60 = 0.3;
  room.drr_db = RoomSpec::kAnechoic;
  room.rir_len = 1024;
  Rng rng(41);
  for (int i = 0; i < 8; ++i) {
    const Direction truth = Direction::from_degrees(rng.uniform(-180.0, 180.0),
                                                    rng.uniform(-55.0, 55.0));
    const Direction got = analyze(room, truth, 100 + i);
    CHECK(angular_distance_deg(truth, got) <= 2.0);
  }
}

TEST_CASE("subspace search tolerates a strong reverberant tail", "[music]") {
  RoomSpec room;
  room.room_id = "wet";
  room.rt60 = 0.4;
  room.drr_db = 3.0;
  room.rir_len = 2048;
  Rng rng(43);
  for (int i = 0; i < 5; ++i) {
    const Direction truth = Direction::from_degrees(rng.uniform(-180.0, 180.0),
                                                    rng.uniform(-50.0, 50.0));
    const Direction got = analyze(room, truth, 200 + i);
    CHECK(angular_distance_deg(truth, got) <= 5.0);
  }
}

TEST_CASE("the search rejects malformed input", "[music]") {
  const TetraArraySpec spec;
  Rir wrong;
  wrong.channels.assign(2, std::vector<double>(128, 0.0));
  CHECK_THROWS_AS(music_doa_broadband(wrong, spec), std::invalid_argument);

  Rir silent;
  silent.channels.assign(4, std::vector<double>(128, 0.0));
  CHECK_THROWS_AS(music_doa_broadband(silent, spec), std::runtime_error);

  Rir ok;
  ok.channels.assign(4, std::vector<double>(128, 0.0));
  ok.channels[0][64] = 1.0;
  MusicParams bad;
  bad.grid_step_deg = 0.0;
  CHECK_THROWS_AS(music_doa_broadband(ok, spec, bad), std::invalid_argument);
  MusicParams swapped;
  swapped.band_lo_hz = 4000.0;
  swapped.band_hi_hz = 300.0;
  CHECK_THROWS_AS(music_doa_broadband(ok, spec, swapped), std::invalid_argument);
}
