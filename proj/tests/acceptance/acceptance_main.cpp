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

// End-to-end acceptance runner. Each numbered criterion prints exactly one
// PASS/FAIL line with the measured quantity and its wall-clock cost; the
// process exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "seldkit/seldkit.hpp"

using namespace seldkit;
namespace fs = std::filesystem;

namespace {

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

int g_failures = 0;

// Runs one criterion, timing it against an optional budget in seconds.
void criterion(int id, double limit_s, const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  } catch (...) {
    pass = false;
    detail = "unknown error";
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (pass && limit_s > 0.0 && dt > limit_s) {
    pass = false;
    detail += " — but exceeded the " + num(limit_s) + " s budget";
  }
  std::printf("%s criterion %d: %s [%.2f s]\n", pass ? "PASS" : "FAIL", id,
              detail.c_str(), dt);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::vector<double> random_signal(std::size_t len, std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::vector<double> out(len);
  for (double& v : out) v = rng.normal() * scale;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  require(f.good(), "cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Criterion bodies
// ---------------------------------------------------------------------------

std::string check_foa_encoding() {
  Rng rng(101);
  double max_err = 0.0;
  double max_unit = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Direction d(rng.uniform(-kPi, kPi), rng.uniform(-kPi / 2, kPi / 2));
    const std::array<double, 4> g = foa_response(d);
    const double ce = std::cos(d.elevation);
    const double expect[4] = {1.0, std::sin(d.azimuth) * ce, std::sin(d.elevation),
                              std::cos(d.azimuth) * ce};
    for (int c = 0; c < 4; ++c) {
      max_err = std::max(max_err, std::abs(g[c] - expect[c]));
    }
    max_unit = std::max(
        max_unit, std::abs(g[1] * g[1] + g[2] * g[2] + g[3] * g[3] - 1.0));
  }
  require(max_err <= 1e-12, "gain mismatch " + num(max_err) + " exceeds 1e-12");
  require(max_unit <= 1e-12, "unit-vector defect " + num(max_unit) + " exceeds 1e-12");
  return "foa gains match the direction formula on 1000 directions, max |err| " +
         num(max_err) + ", unit-vector defect " + num(max_unit);
}

std::string check_sphere_model() {
  const TetraArraySpec spec;
  Rng rng(202);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Direction d(rng.uniform(-kPi, kPi), rng.uniform(-kPi / 2, kPi / 2));
    const double freq = rng.uniform(100.0, 20000.0);
    const std::array<std::complex<double>, 4> got =
        rigid_sphere_response(spec, d, kTwoPi * freq);
    const std::array<double, 4> cg = capsule_cos_angles(spec, d);
    for (std::size_t m = 0; m < 4; ++m) {
      const std::complex<double> expect = oracles::rigid_sphere_response_mp(
          spec.radius_m, spec.speed_of_sound, freq, cg[m]);
      const double rel = std::abs(got[m] - expect) / std::abs(expect);
      worst = std::max(worst, rel);
    }
  }
  require(worst <= 1e-6,
          "sphere response off by " + num(worst) + " relative (limit 1e-6)");
  return "sphere response matches the 50-digit series oracle at 50 points, worst "
         "relative error " + num(worst);
}

std::string check_mls_identification() {
  // Three periods of an order-12 m-sequence through a seeded 512-tap filter.
  const MlsSignal mls = generate_mls(12, 7);
  std::vector<double> excitation;
  while (excitation.size() < 3 * mls.samples.size()) {
    excitation.insert(excitation.end(), mls.samples.begin(), mls.samples.end());
  }
  Rng rng(303);
  std::vector<std::vector<double>> truth(4, std::vector<double>(512));
  AudioBlock recording;
  recording.fs = kSampleRate;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t k = 0; k < 512; ++k) {
      truth[c][k] = rng.normal() * std::exp(-4.0 * double(k) / 512.0);
    }
    recording.channels.push_back(fft_convolve(excitation, truth[c]));
  }

  const std::vector<Rir> clean =
      extract_rirs_sliding(excitation, recording, 512, 8192, 8192);
  require(clean.size() == 1 && !clean[0].degenerate, "clean extraction failed");
  double worst_clean = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    worst_clean =
        std::max(worst_clean, oracles::rel_l2_error(clean[0].channels[c], truth[c]));
  }
  require(worst_clean < 1e-6,
          "noiseless error " + num(worst_clean) + " exceeds 1e-6");

  Rng noise_rng(304);
  for (auto& ch : recording.channels) {
    const double sigma = std::sqrt(mean_power(ch) / 1000.0);  // 30 dB down
    for (double& v : ch) v += sigma * noise_rng.normal();
  }
  const std::vector<Rir> noisy =
      extract_rirs_sliding(excitation, recording, 512, 8192, 8192);
  double worst_noisy = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    worst_noisy =
        std::max(worst_noisy, oracles::rel_l2_error(noisy[0].channels[c], truth[c]));
  }
  require(worst_noisy < 0.1, "30 dB error " + num(worst_noisy) + " exceeds 0.1");
  return "512-tap filter recovered, error " + num(worst_clean) + " noiseless / " +
         num(worst_noisy) + " at 30 dB SNR";
}

std::string check_doa_loop() {
  const TetraArraySpec spec;
  Rng rng(404);
  std::vector<Direction> truths;
  for (int i = 0; i < 50; ++i) {
    truths.push_back(Direction::from_degrees(rng.uniform(-180.0, 180.0),
                                             rng.uniform(-55.0, 55.0)));
  }

  const auto recover = [&](const RoomSpec& room, const Direction& truth,
                           std::uint64_t seed) {
    const TrajectoryRirSet set =
        simulate_trajectory_rirs(room, {truth}, spec, ArrayFormat::kMic, seed);
    const Rir& rir = set.entries[0].rir;
    const Rir windowed = window_direct_path(rir, direct_path_delay(rir));
    return music_doa_broadband(windowed, spec);
  };

  RoomSpec dry;
  dry.room_id = "acceptdry";
  dry.rt60 = 0.3;
  dry.drr_db = RoomSpec::kAnechoic;
  dry.rir_len = 1024;
  double worst_dry = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const Direction got = recover(dry, truths[i], 1000 + i);
    worst_dry = std::max(worst_dry, angular_distance_deg(truths[i], got));
  }
  require(worst_dry <= 2.0,
          "anechoic recovery off by " + num(worst_dry) + " deg (limit 2)");

  RoomSpec wet;
  wet.room_id = "acceptwet";
  wet.rt60 = 0.4;
  wet.drr_db = 3.0;
  wet.rir_len = 2048;
  double worst_wet = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const Direction got = recover(wet, truths[i], 2000 + i);
    worst_wet = std::max(worst_wet, angular_distance_deg(truths[i], got));
  }
  require(worst_wet <= 5.0,
          "reverberant recovery off by " + num(worst_wet) + " deg (limit 5)");
  return "50 directions recovered, worst " + num(worst_dry) + " deg anechoic / " +
         num(worst_wet) + " deg at 3 dB DRR";
}

std::string check_moving_special_case() {
  // A trajectory whose entries all carry one RIR must render exactly like a
  // single static convolution.
  const std::vector<double> taps[4] = {
      random_signal(512, 51, 1.0), random_signal(512, 52, 1.0),
      random_signal(512, 53, 1.0), random_signal(512, 54, 1.0)};
  TrajectoryRirSet set;
  set.room_id = "mono";
  const std::vector<Direction> circle = build_circle_track(0.0);
  for (const Direction& d : circle) {
    TrajectoryEntry e;
    e.direction = d;
    e.rir.fs = kSampleRate;
    for (int c = 0; c < 4; ++c) e.rir.channels.push_back(taps[c]);
    set.entries.push_back(std::move(e));
  }
  const std::vector<TrajectoryRirSet> trajs = {set};

  EventSample sample;
  sample.class_id = 0;
  sample.waveform = random_signal(3 * static_cast<std::size_t>(kSampleRate), 55, 0.3);
  const MovingRender mr = spatialize_moving(sample, trajs, 0, 10, 1, Speed::kFast);
  require(mr.entries_consumed == 120,
          "3 s at fast speed consumed " + std::to_string(mr.entries_consumed) +
              " entries, expected 120");
  double worst = 0.0;
  for (int c = 0; c < 4; ++c) {
    const std::vector<double> want = fft_convolve(sample.waveform, taps[c]);
    worst = std::max(worst, oracles::rel_l2_error(mr.audio[c], want));
  }
  require(worst <= 1e-2, "moving render deviates " + num(worst) +
                             " relative from static convolution (limit 1e-2)");

  EventSample shorter;
  shorter.class_id = 0;
  shorter.waveform = random_signal(60000, 56, 0.3);  // 2.5 s
  const MovingRender mr2 = spatialize_moving(shorter, trajs, 0, 200, -1, Speed::kFast);
  require(mr2.entries_consumed == 100,
          "2.5 s at fast speed consumed " + std::to_string(mr2.entries_consumed) +
              " entries, expected 100");
  return "identical-RIR trajectory matches static convolution within " + num(worst) +
         " relative; fast speed consumed 40 entries per second exactly";
}

std::string check_scene_snr() {
  const TetraArraySpec array;
  RoomSpec room;
  room.room_id = "acceptsnr";
  room.rt60 = 0.4;
  room.drr_db = 9.0;
  room.rir_len = 1024;

  Rng rng(606);
  std::vector<EventSample> bank;
  bank.push_back(render_event_sample(2, 1.5, rng));
  bank.push_back(render_event_sample(5, 2.0, rng));
  const std::vector<EventPlacement> placements = [] {
    EventPlacement a;
    a.sample_index = 0;
    a.onset = 0.25;
    a.track_id = 0;
    a.moving = false;
    a.traj_index = 0;
    a.entry_index = 40;
    EventPlacement b = a;
    b.sample_index = 1;
    b.onset = 0.75;
    b.track_id = 1;
    b.entry_index = 220;
    return std::vector<EventPlacement>{a, b};
  }();

  double worst_dev = 0.0;
  for (const ArrayFormat format : {ArrayFormat::kFoa, ArrayFormat::kMic}) {
    const std::vector<TrajectoryRirSet> trajs = {
        simulate_trajectory_rirs(room, build_circle_track(0.0), array, format, 77)};
    const std::vector<AudioBlock> noise = {render_ambience_segment(88, 3.0, format)};
    for (const double target : {6.0, 18.0, 30.0}) {
      SceneSpec spec;
      spec.duration = 3.0;
      spec.max_polyphony = 2;
      spec.snr_db = target;
      spec.format = format;
      spec.seed = 99;
      const SceneRecording dry = synthesize_scene(bank, placements, trajs, {}, spec);
      const SceneRecording wet =
          synthesize_scene(bank, placements, trajs, noise, spec);
      const std::vector<double> dry_omni = extract_omni(dry.audio, format);
      std::vector<double> residual = extract_omni(wet.audio, format);
      for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= dry_omni[i];
      const double measured =
          10.0 * std::log10(mean_power(dry_omni) / mean_power(residual));
      worst_dev = std::max(worst_dev, std::abs(measured - target));
    }
  }
  require(worst_dev <= 0.5, "omni ratio off by " + num(worst_dev) + " dB (limit 0.5)");
  return "measured omni ratios within " + num(worst_dev) +
         " dB of the 6/18/30 dB targets in both formats";
}

std::string check_feature_contract() {
  const TetraArraySpec array;
  const MelFilterbank fb;

  // Shapes on a full-length scene built from identity responses.
  std::vector<TrajectoryRirSet> fast_trajs;
  for (const double el : {-20.0, 0.0, 20.0}) {
    TrajectoryRirSet set;
    set.room_id = "acceptshape";
    for (const Direction& d : build_circle_track(el)) {
      TrajectoryEntry e;
      e.direction = d;
      e.rir.fs = kSampleRate;
      e.rir.channels.assign(4, std::vector<double>(64, 0.0));
      for (auto& ch : e.rir.channels) ch[0] = 1.0;
      set.entries.push_back(std::move(e));
    }
    fast_trajs.push_back(std::move(set));
  }
  const std::vector<EventSample> bank = build_event_bank(707);
  SceneSpec spec;
  spec.duration = 60.0;
  spec.max_polyphony = 2;
  spec.snr_db = 20.0;
  spec.seed = 708;
  Rng plan_rng(709);
  const std::vector<EventPlacement> plan = plan_scene(bank, fast_trajs, spec, plan_rng);
  const std::vector<AudioBlock> noise = {
      render_ambience_segment(710, 60.0, ArrayFormat::kFoa)};
  const SceneRecording rec = synthesize_scene(bank, plan, fast_trajs, noise, spec);
  require(rec.frames.size() == 600,
          "60 s scene produced " + std::to_string(rec.frames.size()) +
              " label frames, expected 600");

  const std::size_t expect_t = (60 * 24000 - 960) / 480 + 1;
  const FeatureTensor foa = extract_features(rec.audio, ArrayFormat::kFoa, fb);
  require(foa.num_channels() == 7, "foa stack has wrong channel count");
  require(foa.num_frames() == expect_t, "foa stack has wrong frame count");
  for (const auto& ch : foa.data) {
    require(ch.size() == expect_t, "ragged foa channel");
    require(ch.front().size() == 64 && ch.back().size() == 64, "foa band count");
  }
  const FeatureTensor mic = extract_features(rec.audio, ArrayFormat::kMic, fb);
  require(mic.num_channels() == 10 && mic.num_frames() == expect_t,
          "mic stack has wrong shape");

  // Directional cues for an anechoic static source, through the real model.
  RoomSpec anechoic;
  anechoic.room_id = "acceptcue";
  anechoic.rt60 = 0.3;
  anechoic.drr_db = RoomSpec::kAnechoic;
  anechoic.rir_len = 1024;
  const Direction truth = Direction::from_degrees(65.0, -15.0);
  Rng cue_rng(711);
  const std::vector<EventSample> cue_bank = {render_event_sample(4, 4.0, cue_rng)};
  EventPlacement cue_place;
  cue_place.sample_index = 0;
  cue_place.onset = 0.0;
  cue_place.track_id = 0;
  cue_place.moving = false;
  cue_place.traj_index = 0;
  cue_place.entry_index = 0;
  SceneSpec cue_spec;
  cue_spec.duration = 4.0;
  cue_spec.max_polyphony = 1;
  cue_spec.snr_db = 30.0;
  cue_spec.seed = 712;

  // Intensity bearing from the FOA render.
  cue_spec.format = ArrayFormat::kFoa;
  const std::vector<TrajectoryRirSet> foa_traj = {
      simulate_trajectory_rirs(anechoic, {truth}, array, ArrayFormat::kFoa, 713)};
  const SceneRecording foa_rec =
      synthesize_scene(cue_bank, {cue_place}, foa_traj, {}, cue_spec);
  const auto intensity = foa_intensity(compute_stft(foa_rec.audio), fb);
  double ix = 0.0, iy = 0.0, iz = 0.0;
  for (std::size_t t = 0; t < intensity[0].size(); ++t) {
    for (std::size_t band = 8; band < 56; ++band) {
      ix += intensity[0][t][band];
      iy += intensity[1][t][band];
      iz += intensity[2][t][band];
    }
  }
  const Direction intensity_doa = direction_from_unit({ix, iy, iz});
  const double intensity_err = angular_distance_deg(truth, intensity_doa);
  require(intensity_err <= 10.0,
          "intensity bearing off by " + num(intensity_err) + " deg (limit 10)");

  // Correlation-lag bearing from the MIC render.
  cue_spec.format = ArrayFormat::kMic;
  const std::vector<TrajectoryRirSet> mic_traj = {
      simulate_trajectory_rirs(anechoic, {truth}, array, ArrayFormat::kMic, 714)};
  const SceneRecording mic_rec =
      synthesize_scene(cue_bank, {cue_place}, mic_traj, {}, cue_spec);
  const auto gcc = gcc_phat_features(compute_stft(mic_rec.audio));
  const std::pair<std::size_t, std::size_t> pairs[6] = {{0, 1}, {0, 2}, {0, 3},
                                                        {1, 2}, {1, 3}, {2, 3}};
  std::array<double, 6> lags{};
  for (std::size_t pi = 0; pi < 6; ++pi) {
    std::vector<double> mean_row(64, 0.0);
    for (const auto& row : gcc[pi]) {
      for (std::size_t k = 0; k < 64; ++k) mean_row[k] += row[k];
    }
    lags[pi] = static_cast<double>(
                   std::max_element(mean_row.begin(), mean_row.end()) -
                   mean_row.begin()) - 31.0;
  }
  Direction gcc_doa;
  double best_cost = 1e300;
  for (int az = -180; az < 180; az += 2) {
    for (int el = -90; el <= 90; el += 2) {
      const Direction cand = Direction::from_degrees(az, el);
      double cost = 0.0;
      for (std::size_t pi = 0; pi < 6; ++pi) {
        const double expect = oracles::tdoa_samples(array, pairs[pi].first,
                                                    pairs[pi].second, cand,
                                                    kSampleRate);
        cost += (lags[pi] - expect) * (lags[pi] - expect);
      }
      if (cost < best_cost) {
        best_cost = cost;
        gcc_doa = cand;
      }
    }
  }
  const double gcc_err = angular_distance_deg(truth, gcc_doa);
  require(gcc_err <= 10.0,
          "correlation bearing off by " + num(gcc_err) + " deg (limit 10)");
  return "shapes (7,T,64)/(10,T,64) with T=" + std::to_string(expect_t) +
         " and 600 label frames; cue bearings off by " + num(intensity_err) +
         " deg (intensity) / " + num(gcc_err) + " deg (correlation)";
}

std::string check_metric_suite() {
  const auto event = [](int class_id, int track_id, double az, double el) {
    SeldEvent e;
    e.class_id = class_id;
    e.track_id = track_id;
    e.direction = Direction::from_degrees(az, el);
    return e;
  };
  const auto constant_scene = [&](std::size_t frames, int class_id, double az,
                                  double el) {
    std::vector<SeldFrame> out(frames);
    for (auto& f : out) f.events.push_back(event(class_id, 0, az, el));
    return out;
  };

  // Identity at zero elevation: all four scores land exactly on the ideal.
  {
    const std::vector<SeldFrame> scene = constant_scene(30, 2, 45.0, 0.0);
    MetricsAccumulator acc;
    acc.add(scene, scene);
    const MetricsReport r = acc.finalize();
    require(r.er_20 == 0.0 && r.f_20 == 1.0 && r.le_defined && r.le_cd == 0.0 &&
                r.lr_cd == 1.0,
            "identity prediction missed the ideal scores");
  }

  // Hand case: reference {0,1}, prediction {0,2} -> one substitution.
  {
    std::vector<SeldFrame> ref(10), pred(10);
    for (std::size_t f = 0; f < 10; ++f) {
      ref[f].events = {event(0, 0, 0.0, 0.0), event(1, 1, 90.0, 0.0)};
      pred[f].events = {event(0, 0, 0.0, 0.0), event(2, 1, 90.0, 0.0)};
    }
    const auto [er, f1] = segment_er_f(ref, pred);
    require(er == 0.5 && f1 == 0.5, "substitution case moved off 0.5/0.5");
  }

  // Hand case: one reference, two predictions, one exact -> zero error, zero
  // frame recall.
  {
    std::vector<SeldFrame> ref(10), pred(10);
    for (std::size_t f = 0; f < 10; ++f) {
      ref[f].events = {event(3, 0, -30.0, 0.0)};
      pred[f].events = {event(3, 0, -30.0, 0.0), event(3, 1, 140.0, 0.0)};
    }
    const auto [de, fr] = doa_error_frame_recall(ref, pred);
    require(de == 0.0 && fr == 0.0, "count-mismatch case moved off 0/0");
  }

  // Hand case: right position, wrong class -> localization recall 0 and an
  // undefined class-aware error.
  {
    const std::vector<SeldFrame> ref = constant_scene(10, 0, 20.0, 0.0);
    const std::vector<SeldFrame> pred = constant_scene(10, 1, 20.0, 0.0);
    MetricsAccumulator acc;
    acc.add(ref, pred);
    const MetricsReport r = acc.finalize();
    require(r.lr_cd == 0.0 && !r.le_defined && r.er_20 == 1.0 && r.f_20 == 0.0,
            "class mix-up case moved");
  }

  // The 20-degree gate: 19.9 in, 20.1 out.
  {
    const std::vector<SeldFrame> ref = constant_scene(10, 0, 0.0, 0.0);
    MetricsAccumulator in, out;
    in.add(ref, constant_scene(10, 0, 19.9, 0.0));
    out.add(ref, constant_scene(10, 0, 20.1, 0.0));
    require(in.finalize().er_20 == 0.0 && in.finalize().f_20 == 1.0,
            "19.9 deg counted as an error");
    require(out.finalize().er_20 == 1.0 && out.finalize().f_20 == 0.0,
            "20.1 deg counted as correct");
  }

  // Brute-force recount across 200 random 20-frame scenes.
  Rng rng(808);
  const auto random_scene = [&]() {
    std::vector<SeldFrame> out(20);
    for (auto& f : out) {
      const std::size_t n = rng.uniform_int(3);
      for (std::size_t i = 0; i < n; ++i) {
        f.events.push_back(event(static_cast<int>(rng.uniform_int(5)),
                                 static_cast<int>(rng.uniform_int(3)),
                                 rng.uniform(-180.0, 180.0),
                                 rng.uniform(-60.0, 60.0)));
      }
    }
    return out;
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<SeldFrame> ref = random_scene();
    const std::vector<SeldFrame> pred = random_scene();
    const auto [er, f1] = segment_er_f(ref, pred);
    const oracles::SegmentCounts c = oracles::recount_segment_detection(ref, pred);
    require(std::abs(er - oracles::recount_er(c)) <= 1e-12 &&
                std::abs(f1 - oracles::recount_f(c)) <= 1e-12,
            "recount mismatch at trial " + std::to_string(trial));
  }
  return "identity, three hand cases, the 20 deg boundary, and 200 recount "
         "trials all agree";
}

std::string check_determinism() {
  const fs::path base = fs::temp_directory_path();
  const fs::path roots[2] = {base / "seldkit_accept_run_a",
                             base / "seldkit_accept_run_b"};
  struct Cleanup {
    const fs::path* roots;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(roots[0], ec);
      fs::remove_all(roots[1], ec);
    }
  } cleanup{roots};

  std::string manifests[2][3];
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(roots[run]);
    fs::create_directories(roots[run]);
    PipelineConfig cfg;
    cfg.output_root = roots[run].string();
    cfg.seed = 11;
    cfg.scenes_per_split = 5;
    cfg.duration = 60.0;
    cfg.max_polyphony = 2;
    cfg.splits = {{1, "test", {"room1"}}, {3, "train", {"room3"}}};
    cfg.jobs = 2;

    const SynthSummary synth = run_synth(cfg);
    require(synth.scenes == 10, "expected 10 scenes, got " +
                                    std::to_string(synth.scenes));
    run_features(cfg, ArrayFormat::kFoa);
    run_features(cfg, ArrayFormat::kMic);

    EvalOptions eo;
    eo.ref_dir = (roots[run] / "metadata_dev").string();
    eo.pred_dir = eo.ref_dir;
    eo.report_path = (roots[run] / "eval_report.txt").string();
    const EvalResult ev = run_eval(eo);
    require(ev.files == 10 && ev.all.er_20 == 0.0 && ev.all.f_20 == 1.0 &&
                ev.all.lr_cd == 1.0 && ev.all.frame_recall == 1.0,
            "self-evaluation missed the ideal scores");

    manifests[run][0] = slurp(roots[run] / "manifest_synth.txt");
    manifests[run][1] = slurp(roots[run] / "manifest_features_foa.txt");
    manifests[run][2] = slurp(roots[run] / "manifest_features_mic.txt");
    reports[run] = slurp(eo.report_path);
  }
  require(manifests[0][0] == manifests[1][0], "synth manifests differ");
  require(manifests[0][1] == manifests[1][1], "foa feature manifests differ");
  require(manifests[0][2] == manifests[1][2], "mic feature manifests differ");
  require(reports[0] == reports[1], "evaluation reports differ");
  return "two synth->features->eval runs at 2 splits x 5 scenes produced "
         "byte-identical manifests and reports";
}

}  // namespace

int main() {
  ::unsetenv("SELDKIT_OUTPUT_ROOT");
  std::printf("seldkit acceptance run\n");
  criterion(1, 1.0, check_foa_encoding);
  criterion(2, 10.0, check_sphere_model);
  criterion(3, 30.0, check_mls_identification);
  criterion(4, 120.0, check_doa_loop);
  criterion(5, 0.0, check_moving_special_case);
  criterion(6, 0.0, check_scene_snr);
  criterion(7, 0.0, check_feature_contract);
  criterion(8, 0.0, check_metric_suite);
  criterion(9, 300.0, check_determinism);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
