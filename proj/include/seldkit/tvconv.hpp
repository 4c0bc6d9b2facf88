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

#ifndef SELDKIT_TVCONV_HPP
#define SELDKIT_TVCONV_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/rir.hpp"

namespace seldkit {

// Convolution with a filter that changes over time, for rendering sources
// that move along a trajectory of RIRs.
//
// The input is cut into 1024-sample frames, hop 512, under a periodic Hann
// analysis window (the two overlapping windows sum to exactly one, so the
// frames alone rebuild the signal; the input is preceded by one hop of
// silence so the first samples get both windows). Each frame is convolved —
// via 2048-point transforms, long enough to keep the products linear — with
// the RIR scheduled at the frame's start time, split into 1024-tap
// partitions. A partition with delay p lands p partition-lengths later in
// the output, so at any output instant the early taps come from the current
// RIR while the tail taps come from RIRs scheduled further in the past:
// consecutive RIRs cross-fade over one hop and the reverberation trails the
// source's earlier positions. With a constant schedule the chain is an exact
// linear convolution up to rounding.
//
// `schedule` holds one RIR per slot, consumed at slots_per_second; all RIRs
// must share length and sample rate. Output length is len + rir_len - 1.
inline std::vector<std::vector<double>> time_variant_convolve(
    const std::vector<double>& src, double fs,
    const std::vector<const Rir*>& schedule, double slots_per_second) {
  static constexpr std::size_t kBlock = 1024;
  static constexpr std::size_t kHop = 512;
  static constexpr std::size_t kFft = 2048;

  if (src.empty() || schedule.empty()) {
    throw std::invalid_argument("time_variant_convolve: empty input");
  }
  if (!(slots_per_second > 0.0)) {
    throw std::invalid_argument("time_variant_convolve: bad slot rate");
  }
  const Rir* first = schedule.front();
  const std::size_t rir_len = first->length();
  const std::size_t num_ch = first->channels.size();
  if (rir_len == 0 || num_ch == 0) {
    throw std::invalid_argument("time_variant_convolve: empty RIR");
  }
  for (const Rir* r : schedule) {
    if (r->length() != rir_len || r->channels.size() != num_ch || r->fs != fs) {
      throw std::invalid_argument(
          "time_variant_convolve: schedule RIRs must share shape and rate");
    }
  }

  const std::size_t num_parts = (rir_len + kBlock - 1) / kBlock;
  const std::size_t len = src.size();
  // Frame m covers padded samples [m*hop, m*hop + block); padding shifts the
  // signal right by one hop. Last frame starts at the last input sample.
  const std::size_t num_frames = (kHop + len - 1) / kHop + 1;
  const std::size_t out_len = len + rir_len - 1;
  const std::size_t pad_len = (num_frames - 1) * kHop + (num_parts - 1) * kBlock + kFft;

  // Partition spectra per distinct RIR in the schedule.
  std::map<const Rir*, std::vector<std::vector<std::complex<double>>>> parts;
  for (const Rir* r : schedule) {
    if (parts.count(r)) continue;
    auto& entry = parts[r];
    entry.resize(num_ch * num_parts);
    std::vector<double> buf(kFft, 0.0);
    for (std::size_t c = 0; c < num_ch; ++c) {
      for (std::size_t p = 0; p < num_parts; ++p) {
        std::fill(buf.begin(), buf.end(), 0.0);
        const std::size_t lo = p * kBlock;
        const std::size_t hi = std::min(rir_len, lo + kBlock);
        for (std::size_t i = lo; i < hi; ++i) buf[i - lo] = r->channels[c][i];
        entry[c * num_parts + p] = rfft(buf);
      }
    }
  }

  std::vector<double> window(kBlock);
  for (std::size_t i = 0; i < kBlock; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / kBlock));
  }

  std::vector<std::vector<double>> out_pad(num_ch, std::vector<double>(pad_len, 0.0));
  std::vector<double> frame(kFft);
  std::vector<std::complex<double>> prod(kFft / 2 + 1);
  const std::size_t num_slots = schedule.size();

  for (std::size_t m = 0; m < num_frames; ++m) {
    // Gather the windowed frame from the (virtually) padded input.
    bool any = false;
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t j = 0; j < kBlock; ++j) {
      const long u = static_cast<long>(m * kHop + j) - static_cast<long>(kHop);
      if (u >= 0 && u < static_cast<long>(len)) {
        const double v = src[u] * window[j];
        frame[j] = v;
        if (v != 0.0) any = true;
      }
    }
    if (!any) continue;

    const double t_start =
        static_cast<double>(std::max<long>(0, static_cast<long>(m * kHop) -
                                                  static_cast<long>(kHop))) / fs;
    const std::size_t slot = std::min<std::size_t>(
        num_slots - 1,
        static_cast<std::size_t>(std::floor(t_start * slots_per_second + 1e-9)));
    const auto& rir_parts = parts.at(schedule[slot]);

    const std::vector<std::complex<double>> x = rfft(frame);
    for (std::size_t c = 0; c < num_ch; ++c) {
      for (std::size_t p = 0; p < num_parts; ++p) {
        const auto& h = rir_parts[c * num_parts + p];
        for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = x[k] * h[k];
        const std::vector<double> seg = irfft(prod, kFft);
        double* dst = out_pad[c].data() + m * kHop + p * kBlock;
        for (std::size_t j = 0; j < kFft; ++j) dst[j] += seg[j];
      }
    }
  }

  std::vector<std::vector<double>> out(num_ch, std::vector<double>(out_len, 0.0));
  for (std::size_t c = 0; c < num_ch; ++c) {
    for (std::size_t i = 0; i < out_len; ++i) out[c][i] = out_pad[c][kHop + i];
  }
  return out;
}

}  // namespace seldkit

#endif  // SELDKIT_TVCONV_HPP
