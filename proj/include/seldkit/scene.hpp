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

#ifndef SELDKIT_SCENE_HPP
#define SELDKIT_SCENE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/event_bank.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/rir.hpp"
#include "seldkit/rng.hpp"
#include "seldkit/seld_frame.hpp"
#include "seldkit/tvconv.hpp"

namespace seldkit {

enum class Speed { kSlow, kMedium, kFast };

// Trajectory entries consumed per second of rendered output; the entries sit
// about one degree apart, so this doubles as the angular speed in deg/s.
inline double speed_rate(Speed s) {
  switch (s) {
    case Speed::kSlow: return 10.0;
    case Speed::kMedium: return 20.0;
    case Speed::kFast: return 40.0;
  }
  return 10.0;
}

struct SceneSpec {
  double duration = 60.0;  // seconds
  int max_polyphony = 1;   // 1 or 2
  double snr_db = 20.0;    // [6, 30]
  double fs = kSampleRate;
  ArrayFormat format = ArrayFormat::kFoa;
  std::uint64_t seed = 0;
};

inline void validate_scene_spec(const SceneSpec& spec) {
  if (!(spec.duration > 0.0)) {
    throw std::invalid_argument("SceneSpec: duration must be positive");
  }
  if (spec.max_polyphony != 1 && spec.max_polyphony != 2) {
    throw std::invalid_argument("SceneSpec: max_polyphony must be 1 or 2");
  }
  if (!(spec.snr_db >= 6.0 && spec.snr_db <= 30.0)) {
    throw std::invalid_argument("SceneSpec: snr_db outside [6, 30]");
  }
  if (spec.fs != kSampleRate) {
    throw std::invalid_argument("SceneSpec: pipeline runs at 24 kHz");
  }
}

// One planned event instance inside a scene.
struct EventPlacement {
  std::size_t sample_index = 0;  // into the event bank
  double onset = 0.0;            // seconds, aligned to the sample grid
  int track_id = 0;
  bool moving = false;
  // Static events: which reference entry supplies RIR and direction.
  std::size_t traj_index = 0;
  std::size_t entry_index = 0;
  // Moving events: walk parameters along the room's trajectories.
  std::size_t start_index = 0;
  int direction_sign = 1;
  Speed speed = Speed::kSlow;
};

struct SceneRecording {
  AudioBlock audio;
  std::vector<SeldFrame> frames;  // one per 100 ms
  std::string room_id;
  SceneSpec spec;
};

namespace detail {

// Largest number of simultaneously open intervals; half-open [on, off), so a
// touching pair does not overlap.
inline int max_concurrency(const std::vector<std::pair<double, double>>& intervals) {
  std::vector<std::pair<double, int>> edges;
  edges.reserve(intervals.size() * 2);
  for (const auto& iv : intervals) {
    edges.push_back({iv.first, +1});
    edges.push_back({iv.second, -1});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;  // close before open at equal times
  });
  int cur = 0;
  int best = 0;
  for (const auto& e : edges) {
    cur += e.second;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace detail

// Draws a random event plan for one scene: onsets fall wherever they keep the
// instantaneous polyphony within bounds, each event tosses a fair coin
// between static and moving (events of two seconds or less always stay
// static), and all spatial parameters come uniformly from the room's
// reference trajectories. Deterministic given the rng state.
inline std::vector<EventPlacement> plan_scene(const std::vector<EventSample>& bank,
                                              const std::vector<TrajectoryRirSet>& trajectories,
                                              const SceneSpec& spec, Rng& rng) {
  validate_scene_spec(spec);
  if (bank.empty() || trajectories.empty()) {
    throw std::invalid_argument("plan_scene: empty bank or trajectories");
  }
  for (const auto& t : trajectories) {
    if (t.entries.empty()) {
      throw std::invalid_argument("plan_scene: trajectory with no entries");
    }
  }
  double min_dur = bank.front().duration();
  for (const auto& s : bank) min_dur = std::min(min_dur, s.duration());
  if (min_dur > spec.duration) {
    throw std::invalid_argument("plan_scene: every bank event outlasts the scene");
  }

  std::size_t total_entries = 0;
  for (const auto& t : trajectories) total_entries += t.entries.size();

  const std::size_t target = spec.max_polyphony == 1
                                 ? 6 + rng.uniform_int(5)
                                 : 10 + rng.uniform_int(7);
  std::vector<EventPlacement> plan;
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t e = 0; e < target; ++e) {
    const std::size_t sample_index = rng.uniform_int(bank.size());
    const double dur = bank[sample_index].duration();
    if (dur > spec.duration) continue;

    bool placed = false;
    double onset = 0.0;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double raw = rng.uniform(0.0, spec.duration - dur);
      onset = std::floor(raw * spec.fs) / spec.fs;  // align to the sample grid
      auto trial = intervals;
      trial.push_back({onset, onset + dur});
      placed = detail::max_concurrency(trial) <= spec.max_polyphony;
    }
    if (!placed) continue;
    intervals.push_back({onset, onset + dur});

    EventPlacement p;
    p.sample_index = sample_index;
    p.onset = onset;
    p.moving = dur > 2.0 && rng.coin();
    if (p.moving) {
      p.traj_index = rng.uniform_int(trajectories.size());
      p.start_index = rng.uniform_int(trajectories[p.traj_index].entries.size());
      p.direction_sign = rng.coin() ? 1 : -1;
      const std::uint64_t sp = rng.uniform_int(3);
      p.speed = sp == 0 ? Speed::kSlow : (sp == 1 ? Speed::kMedium : Speed::kFast);
    } else {
      // Uniform over the union of all reference entries in the room.
      std::size_t pick = rng.uniform_int(total_entries);
      std::size_t ti = 0;
      while (pick >= trajectories[ti].entries.size()) {
        pick -= trajectories[ti].entries.size();
        ++ti;
      }
      p.traj_index = ti;
      p.entry_index = pick;
    }
    plan.push_back(p);
  }

  std::sort(plan.begin(), plan.end(), [](const EventPlacement& a, const EventPlacement& b) {
    return a.onset < b.onset;
  });
  for (std::size_t i = 0; i < plan.size(); ++i) plan[i].track_id = static_cast<int>(i);
  return plan;
}

// Static source: plain per-channel convolution with one RIR.
inline std::vector<std::vector<double>> spatialize_static(const EventSample& sample,
                                                          const Rir& rir) {
  if (sample.fs != rir.fs) {
    throw std::invalid_argument("spatialize_static: sample rate mismatch");
  }
  std::vector<std::vector<double>> out(rir.channels.size());
  for (std::size_t c = 0; c < rir.channels.size(); ++c) {
    out[c] = fft_convolve(sample.waveform, rir.channels[c]);
  }
  return out;
}

// Step-by-step position along a room's trajectories. Hitting the end of a
// trajectory continues on the adjacent elevation when one exists (preferring
// the higher), landing on the entry closest to the current direction and
// walking inward from there; with nowhere to jump the walk reflects.
struct PathPoint {
  std::size_t traj = 0;
  std::size_t entry = 0;
};

inline std::vector<PathPoint> walk_trajectory_path(
    const std::vector<TrajectoryRirSet>& trajectories, std::size_t traj0,
    std::size_t start, int sign, std::size_t count) {
  if (trajectories.empty()) {
    throw std::invalid_argument("walk_trajectory_path: no trajectories");
  }
  if (traj0 >= trajectories.size() || start >= trajectories[traj0].entries.size()) {
    throw std::invalid_argument("walk_trajectory_path: start out of range");
  }
  std::vector<PathPoint> path;
  path.reserve(count);
  std::size_t t = traj0;
  long idx = static_cast<long>(start);
  int dir = sign >= 0 ? 1 : -1;
  for (std::size_t k = 0; k < count; ++k) {
    path.push_back({t, static_cast<std::size_t>(idx)});
    const long size = static_cast<long>(trajectories[t].entries.size());
    long next = idx + dir;
    if (next >= 0 && next < size) {
      idx = next;
      continue;
    }
    // End of this trajectory: jump or reflect.
    std::size_t jump_to = t;
    if (t + 1 < trajectories.size()) {
      jump_to = t + 1;
    } else if (t > 0) {
      jump_to = t - 1;
    }
    if (jump_to != t) {
      const Direction& here = trajectories[t].entries[static_cast<std::size_t>(idx)].direction;
      const auto& entries = trajectories[jump_to].entries;
      std::size_t best = 0;
      double best_d = angular_distance(entries[0].direction, here);
      for (std::size_t i = 1; i < entries.size(); ++i) {
        const double d = angular_distance(entries[i].direction, here);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      t = jump_to;
      idx = static_cast<long>(best);
      dir = best < entries.size() / 2 ? 1 : -1;  // walk into the new path
    } else if (size > 1) {
      dir = -dir;
      idx += dir;
    }
    // A single-entry trajectory just stays put.
  }
  return path;
}

struct MovingRender {
  std::vector<std::vector<double>> audio;   // 4 x (len + rir_len - 1)
  std::vector<Direction> path_directions;   // one per consumed entry
  std::vector<Direction> doa_track;         // one per 100 ms of the sample
  std::size_t entries_consumed = 0;
};

// Moving source: renders the sample through the time-variant convolution,
// consuming speed_rate(speed) trajectory entries per second of output.
inline MovingRender spatialize_moving(const EventSample& sample,
                                      const std::vector<TrajectoryRirSet>& trajectories,
                                      std::size_t traj_index, std::size_t start_index,
                                      int sign, Speed speed) {
  const double dur = sample.duration();
  if (!(dur > 2.0)) {
    throw std::invalid_argument("spatialize_moving: sample must be longer than 2 s");
  }
  const double rate = speed_rate(speed);
  const std::size_t count =
      static_cast<std::size_t>(std::ceil(rate * dur - 1e-9));
  const std::vector<PathPoint> path =
      walk_trajectory_path(trajectories, traj_index, start_index, sign, count);

  MovingRender out;
  out.entries_consumed = count;
  out.path_directions.reserve(count);
  std::vector<const Rir*> schedule;
  schedule.reserve(count);
  for (const PathPoint& p : path) {
    const TrajectoryEntry& e = trajectories[p.traj].entries[p.entry];
    schedule.push_back(&e.rir);
    out.path_directions.push_back(e.direction);
  }
  out.audio = time_variant_convolve(sample.waveform, sample.fs, schedule, rate);

  const std::size_t label_frames =
      static_cast<std::size_t>(std::ceil(dur / kLabelHopSeconds - 1e-9));
  out.doa_track.reserve(label_frames);
  for (std::size_t j = 0; j < label_frames; ++j) {
    const std::size_t slot = std::min<std::size_t>(
        count - 1, static_cast<std::size_t>(
                       std::floor(rate * static_cast<double>(j) * kLabelHopSeconds + 1e-9)));
    out.doa_track.push_back(out.path_directions[slot]);
  }
  return out;
}

// Omnidirectional signal: the W channel already is one for the ambisonic
// format; for the capsule format the four capsules average out to one.
inline std::vector<double> extract_omni(const AudioBlock& audio, ArrayFormat format) {
  if (audio.num_channels() != 4) {
    throw std::invalid_argument("extract_omni: need 4 channels");
  }
  if (format == ArrayFormat::kFoa) return audio.channels[0];
  const std::size_t n = audio.num_frames();
  std::vector<double> out(n, 0.0);
  for (const auto& ch : audio.channels) {
    for (std::size_t i = 0; i < n; ++i) out[i] += ch[i];
  }
  for (double& v : out) v *= 0.25;
  return out;
}

// Adds background noise at the requested omnidirectional SNR: the noise gain
// satisfies P_omni(mixture) / (g^2 P_omni(noise)) = 10^(snr/10).
inline AudioBlock mix_ambience(const AudioBlock& mixture, const AudioBlock& noise,
                               double snr_db, ArrayFormat format) {
  if (mixture.num_frames() != noise.num_frames()) {
    throw std::invalid_argument("mix_ambience: length mismatch");
  }
  const double p_mix = mean_power(extract_omni(mixture, format));
  const double p_noise = mean_power(extract_omni(noise, format));
  if (!(p_noise > 0.0)) {
    throw std::invalid_argument("mix_ambience: silent noise");
  }
  const double gain = std::sqrt(p_mix / (p_noise * db_to_power(snr_db)));
  AudioBlock out = mixture;
  for (std::size_t c = 0; c < out.num_channels(); ++c) {
    for (std::size_t i = 0; i < out.channels[c].size(); ++i) {
      out.channels[c][i] += gain * noise.channels[c][i];
    }
  }
  return out;
}

// Manufactures additional ambience segments by summing two distinct existing
// ones and rescaling each result to the mean omni power of the originals.
inline std::vector<AudioBlock> extend_noise(const std::vector<AudioBlock>& segments,
                                            std::size_t count, Rng& rng,
                                            ArrayFormat format) {
  if (segments.size() < 2) {
    throw std::invalid_argument("extend_noise: need at least 2 segments");
  }
  double mean_omni = 0.0;
  for (const auto& s : segments) mean_omni += mean_power(extract_omni(s, format));
  mean_omni /= static_cast<double>(segments.size());

  std::vector<AudioBlock> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = rng.uniform_int(segments.size());
    std::size_t b = rng.uniform_int(segments.size() - 1);
    if (b >= a) ++b;  // distinct pair
    AudioBlock mixed = segments[a];
    const std::size_t n = std::min(mixed.num_frames(), segments[b].num_frames());
    for (std::size_t c = 0; c < mixed.num_channels(); ++c) {
      mixed.channels[c].resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        mixed.channels[c][j] += segments[b].channels[c][j];
      }
    }
    const double p = mean_power(extract_omni(mixed, format));
    if (p > 0.0) {
      const double g = std::sqrt(mean_omni / p);
      for (auto& ch : mixed.channels) {
        for (double& v : ch) v *= g;
      }
    }
    out.push_back(std::move(mixed));
  }
  return out;
}

// Renders the full scene: spatializes every planned event, sums them in plan
// order into the 60 s canvas, lays ambience under the mixture at the target
// SNR, and fills the 100 ms label frames. An event labels a frame when it
// covers at least half of it; if a boundary coincidence pushes a frame over
// the polyphony cap, the events covering most of the frame win (then lower
// track id).
inline SceneRecording synthesize_scene(const std::vector<EventSample>& bank,
                                       const std::vector<EventPlacement>& placements,
                                       const std::vector<TrajectoryRirSet>& trajectories,
                                       const std::vector<AudioBlock>& noise_bank,
                                       const SceneSpec& spec) {
  validate_scene_spec(spec);
  if (trajectories.empty()) {
    throw std::invalid_argument("synthesize_scene: no trajectories");
  }
  const std::size_t scene_len =
      static_cast<std::size_t>(std::lround(spec.duration * spec.fs));

  SceneRecording rec;
  rec.spec = spec;
  rec.room_id = trajectories.front().room_id;
  rec.audio.fs = spec.fs;
  rec.audio.channels.assign(4, std::vector<double>(scene_len, 0.0));

  struct ActiveEvent {
    const EventPlacement* placement;
    double onset;
    double offset;
    std::vector<Direction> path_directions;  // moving only
    double rate = 0.0;
  };
  std::vector<ActiveEvent> actives;
  actives.reserve(placements.size());

  for (const EventPlacement& p : placements) {
    if (p.sample_index >= bank.size()) {
      throw std::invalid_argument("synthesize_scene: placement references missing sample");
    }
    const EventSample& sample = bank[p.sample_index];
    ActiveEvent ae;
    ae.placement = &p;
    ae.onset = p.onset;
    ae.offset = p.onset + sample.duration();

    std::vector<std::vector<double>> rendered;
    if (p.moving) {
      MovingRender mr = spatialize_moving(sample, trajectories, p.traj_index,
                                          p.start_index, p.direction_sign, p.speed);
      rendered = std::move(mr.audio);
      ae.path_directions = std::move(mr.path_directions);
      ae.rate = speed_rate(p.speed);
    } else {
      const TrajectoryEntry& entry =
          trajectories[p.traj_index].entries[p.entry_index];
      rendered = spatialize_static(sample, entry.rir);
    }

    const std::size_t at =
        static_cast<std::size_t>(std::lround(p.onset * spec.fs));
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t limit =
          at < scene_len ? std::min(rendered[c].size(), scene_len - at) : 0;
      for (std::size_t i = 0; i < limit; ++i) {
        rec.audio.channels[c][at + i] += rendered[c][i];
      }
    }
    actives.push_back(std::move(ae));
  }

  if (!noise_bank.empty()) {
    Rng noise_rng = Rng(spec.seed).derive(0x6e6f6973ULL);  // scene noise pick
    const AudioBlock& noise = noise_bank[noise_rng.uniform_int(noise_bank.size())];
    if (noise.num_frames() < scene_len) {
      throw std::invalid_argument("synthesize_scene: noise segment shorter than scene");
    }
    AudioBlock cropped;
    cropped.fs = noise.fs;
    cropped.channels.resize(4);
    for (std::size_t c = 0; c < 4; ++c) {
      cropped.channels[c].assign(noise.channels[c].begin(),
                                 noise.channels[c].begin() + scene_len);
    }
    rec.audio = mix_ambience(rec.audio, cropped, spec.snr_db, spec.format);
  }

  const std::size_t num_frames =
      static_cast<std::size_t>(std::lround(spec.duration / kLabelHopSeconds));
  rec.frames.resize(num_frames);
  for (std::size_t j = 0; j < num_frames; ++j) {
    const double f_lo = static_cast<double>(j) * kLabelHopSeconds;
    const double f_hi = f_lo + kLabelHopSeconds;
    struct Candidate {
      double overlap;
      SeldEvent event;
    };
    std::vector<Candidate> cands;
    for (const ActiveEvent& ae : actives) {
      const double overlap = std::min(ae.offset, f_hi) - std::max(ae.onset, f_lo);
      if (overlap < 0.5 * kLabelHopSeconds - 1e-9) continue;
      SeldEvent ev;
      ev.class_id = bank[ae.placement->sample_index].class_id;
      ev.track_id = ae.placement->track_id;
      if (ae.placement->moving) {
        const double t_rel = std::max(f_lo, ae.onset) - ae.onset;
        const std::size_t slot = std::min<std::size_t>(
            ae.path_directions.size() - 1,
            static_cast<std::size_t>(std::floor(ae.rate * t_rel + 1e-9)));
        ev.direction = ae.path_directions[slot];
      } else {
        ev.direction = trajectories[ae.placement->traj_index]
                           .entries[ae.placement->entry_index]
                           .direction;
      }
      cands.push_back({overlap, ev});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.overlap != b.overlap) return a.overlap > b.overlap;
      return a.event.track_id < b.event.track_id;
    });
    if (cands.size() > static_cast<std::size_t>(spec.max_polyphony)) {
      cands.resize(static_cast<std::size_t>(spec.max_polyphony));
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.event.track_id < b.event.track_id;
    });
    for (const Candidate& c : cands) rec.frames[j].events.push_back(c.event);
  }
  return rec;
}

// Writes the label CSV: one row per active event per frame, angles rounded to
// whole degrees with azimuth folded into (-180, 180].
inline void emit_metadata(const SceneRecording& recording, const std::string& path) {
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("emit_metadata: cannot open " + path);
  }
  f << "frame_index,class_id,track_id,azimuth_deg,elevation_deg\n";
  for (std::size_t j = 0; j < recording.frames.size(); ++j) {
    for (const SeldEvent& e : recording.frames[j].events) {
      long az = std::lround(e.direction.azimuth_deg());
      if (az <= -180) az += 360;
      if (az > 180) az -= 360;
      const long el = std::lround(e.direction.elevation_deg());
      char row[96];
      std::snprintf(row, sizeof(row), "%zu,%d,%d,%ld,%ld\n", j, e.class_id,
                    e.track_id, az, el);
      f << row;
    }
  }
  if (!f) {
    throw std::runtime_error("emit_metadata: write failure on " + path);
  }
}

}  // namespace seldkit

#endif  // SELDKIT_SCENE_HPP
