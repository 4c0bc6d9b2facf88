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

#ifndef SELDKIT_EVENT_BANK_HPP
#define SELDKIT_EVENT_BANK_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/rng.hpp"

namespace seldkit {

// One mono source recording with its class label.
struct EventSample {
  int class_id = 0;
  std::vector<double> waveform;  // peak <= 1, 24 kHz
  double fs = kSampleRate;

  double duration() const { return static_cast<double>(waveform.size()) / fs; }
};

namespace detail {

// Trapezoid gain: 10% attack, 20% release, flat in between.
inline double trapezoid_env(double pos) {
  if (pos < 0.1) return pos / 0.1;
  if (pos > 0.8) return (1.0 - pos) / 0.2;
  return 1.0;
}

// Keeps only the [lo_hz, hi_hz] band of a real signal.
inline void bandlimit(std::vector<double>& x, double fs, double lo_hz, double hi_hz) {
  const std::size_t n = next_pow2(x.size());
  std::vector<double> buf(n, 0.0);
  std::copy(x.begin(), x.end(), buf.begin());
  std::vector<std::complex<double>> sp = rfft(buf);
  for (std::size_t k = 0; k < sp.size(); ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f < lo_hz || f > hi_hz) sp[k] = 0.0;
  }
  const std::vector<double> y = irfft(sp, n);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i];
}

inline void peak_normalize(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    const double g = peak / m;
    for (double& v : x) v *= g;
  }
}

}  // namespace detail

// Renders one synthetic event for a class. Even classes are band-limited
// noise bursts, odd classes are tone complexes; band edges, fundamentals and
// modulation all scale with the class index so the spectra stay distinct.
inline EventSample render_event_sample(int class_id, double duration_s, Rng& rng,
                                       double fs = kSampleRate) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw std::invalid_argument("render_event_sample: class_id out of range");
  }
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("render_event_sample: duration must be positive");
  }
  const std::size_t len = static_cast<std::size_t>(std::lround(duration_s * fs));
  EventSample out;
  out.class_id = class_id;
  out.fs = fs;
  out.waveform.resize(len);

  if (class_id % 2 == 0) {
    const double lo = 250.0 + 120.0 * class_id;
    const double hi = lo + 900.0 + 250.0 * class_id;
    for (std::size_t i = 0; i < len; ++i) out.waveform[i] = rng.normal();
    detail::bandlimit(out.waveform, fs, lo, hi);
    const double trem_hz = 2.0 + 0.5 * class_id;  // slow amplitude flutter
    for (std::size_t i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / fs;
      const double trem = 1.0 + 0.3 * std::sin(kTwoPi * trem_hz * t);
      out.waveform[i] *= detail::trapezoid_env(static_cast<double>(i) / len) * trem;
    }
  } else {
    const double f0 = 160.0 + 45.0 * class_id;
    const int num_partials = 5;
    std::vector<double> phases(num_partials);
    for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
    const double detune = 1.0 + 0.002 * class_id;  // slight inharmonicity
    for (std::size_t i = 0; i < len; ++i) {
      const double t = static_cast<double>(i) / fs;
      double v = 0.0;
      for (int k = 0; k < num_partials; ++k) {
        const double fk = f0 * std::pow(static_cast<double>(k + 1), detune);
        v += std::sin(kTwoPi * fk * t + phases[k]) / (k + 1.0);
      }
      out.waveform[i] = v * detail::trapezoid_env(static_cast<double>(i) / len);
    }
  }
  detail::peak_normalize(out.waveform, 0.9);
  return out;
}

// Builds the full bank: samples_per_class recordings of every class, a mix of
// short (static-only) and long durations, deterministic per seed.
inline std::vector<EventSample> build_event_bank(std::uint64_t seed,
                                                 std::size_t samples_per_class = 4,
                                                 double fs = kSampleRate) {
  Rng root(seed);
  std::vector<EventSample> bank;
  bank.reserve(kNumClasses * samples_per_class);
  for (int c = 0; c < kNumClasses; ++c) {
    for (std::size_t s = 0; s < samples_per_class; ++s) {
      Rng rng = root.derive(static_cast<std::uint64_t>(c) * 1000 + s);
      // Half the bank stays 2 s or under so static-only material exists;
      // the rest is long enough to move.
      const double dur = (s % 2 == 0) ? rng.uniform(0.5, 2.0) : rng.uniform(2.5, 8.0);
      bank.push_back(render_event_sample(c, dur, rng, fs));
    }
  }
  return bank;
}

// Spatially spread background noise: a shared pink-weighted bed plus an
// independent pink layer per channel. FOA keeps the bed on W and attenuated
// independent layers on the directional channels; the capsule format gets an
// even blend on all four.
inline AudioBlock render_ambience_segment(std::uint64_t seed, double duration_s,
                                          ArrayFormat format, double fs = kSampleRate) {
  const std::size_t len = static_cast<std::size_t>(std::lround(duration_s * fs));
  const std::size_t n = next_pow2(len);
  Rng root(seed);

  auto pink = [&](Rng& rng) {
    std::vector<double> buf(n, 0.0);
    for (std::size_t i = 0; i < len; ++i) buf[i] = rng.normal();
    std::vector<std::complex<double>> sp = rfft(buf);
    for (std::size_t k = 1; k < sp.size(); ++k) {
      const double f = static_cast<double>(k) * fs / static_cast<double>(n);
      sp[k] *= 1.0 / std::sqrt(std::max(f, 20.0));
    }
    sp[0] = 0.0;
    std::vector<double> y = irfft(sp, n);
    y.resize(len);
    return y;
  };

  Rng bed_rng = root.derive(0);
  const std::vector<double> bed = pink(bed_rng);
  AudioBlock out;
  out.fs = fs;
  out.channels.assign(4, std::vector<double>(len, 0.0));
  for (std::size_t c = 0; c < 4; ++c) {
    Rng ch_rng = root.derive(1 + c);
    const std::vector<double> own = pink(ch_rng);
    const bool foa = format == ArrayFormat::kFoa;
    const double bed_gain = foa ? (c == 0 ? 1.0 : 0.0) : 0.7;
    const double own_gain = foa ? (c == 0 ? 0.2 : 0.577) : 0.7;
    for (std::size_t i = 0; i < len; ++i) {
      out.channels[c][i] = bed_gain * bed[i] + own_gain * own[i];
    }
  }
  // Tame the level so mixtures stay far from clipping before gain staging.
  double peak = 0.0;
  for (const auto& ch : out.channels) {
    for (double v : ch) peak = std::max(peak, std::abs(v));
  }
  if (peak > 0.0) {
    for (auto& ch : out.channels) {
      for (double& v : ch) v *= 0.5 / peak;
    }
  }
  return out;
}

}  // namespace seldkit

#endif  // SELDKIT_EVENT_BANK_HPP
