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

// Scores two mock systems against a synthetic reference: one predicts the
// truth with a small angular jitter, the other is consistently 30 degrees
// off in azimuth. The joint ranking prefers the first.

#include <cstdio>

#include "seldkit/seldkit.hpp"

int main() {
  using namespace seldkit;

  Rng rng(404);
  std::vector<SeldFrame> reference(600);
  Direction current = Direction::from_degrees(0.0, 0.0);
  for (std::size_t f = 0; f < reference.size(); ++f) {
    if (f % 50 == 0) {  // a new stationary event every 5 s
      current = Direction::from_degrees(-180.0 + rng.uniform(0.0, 360.0),
                                        rng.uniform(-45.0, 45.0));
    }
    SeldEvent e;
    e.class_id = static_cast<int>((f / 50) % kNumClasses);
    e.track_id = 0;
    e.direction = current;
    reference[f].events.push_back(e);
  }

  // System A: right class, direction within a few degrees.
  std::vector<SeldFrame> jittered = reference;
  for (SeldFrame& frame : jittered) {
    for (SeldEvent& e : frame.events) {
      e.direction = Direction::from_degrees(
          e.direction.azimuth_deg() + rng.uniform(-5.0, 5.0),
          std::clamp(e.direction.elevation_deg() + rng.uniform(-5.0, 5.0), -90.0, 90.0));
    }
  }
  // System B: right class, azimuth always 30 degrees off.
  std::vector<SeldFrame> offset = reference;
  for (SeldFrame& frame : offset) {
    for (SeldEvent& e : frame.events) {
      e.direction = Direction::from_degrees(e.direction.azimuth_deg() + 30.0,
                                            e.direction.elevation_deg());
    }
  }

  MetricsAccumulator acc_a, acc_b;
  acc_a.add(reference, jittered);
  acc_b.add(reference, offset);
  const std::vector<MetricsReport> reports = {acc_a.finalize("jittered"),
                                              acc_b.finalize("offset")};

  for (const MetricsReport& r : reports) {
    std::printf("%-10s er_20 %.3f  f_20 %.3f  le_cd %6.2f deg  lr_cd %.3f\n",
                r.name.c_str(), r.er_20, r.f_20, r.le_cd, r.lr_cd);
  }
  const std::vector<std::size_t> order = rank_systems(reports);
  std::printf("ranking:");
  for (std::size_t idx : order) std::printf(" %s", reports[idx].name.c_str());
  std::printf("\n");
  return 0;
}
