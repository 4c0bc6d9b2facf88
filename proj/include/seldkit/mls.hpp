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

#ifndef SELDKIT_MLS_HPP
#define SELDKIT_MLS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seldkit/rng.hpp"

namespace seldkit {

// Maximum-length sequence with ±1 samples; length is 2^order - 1.
struct MlsSignal {
  unsigned order = 0;
  std::vector<double> samples;
};

namespace detail {

// Exponents of one primitive polynomial per register length (the trailing
// + 1 term is implicit). Each yields the full 2^order - 1 period; the
// autocorrelation tests guard the table.
inline const std::vector<unsigned>& mls_taps(unsigned order) {
  static const std::vector<std::vector<unsigned>> table = {
      /* 2 */ {2, 1},
      /* 3 */ {3, 2},
      /* 4 */ {4, 3},
      /* 5 */ {5, 3},
      /* 6 */ {6, 5},
      /* 7 */ {7, 6},
      /* 8 */ {8, 6, 5, 4},
      /* 9 */ {9, 5},
      /* 10 */ {10, 7},
      /* 11 */ {11, 9},
      /* 12 */ {12, 6, 4, 1},
      /* 13 */ {13, 4, 3, 1},
      /* 14 */ {14, 5, 3, 1},
      /* 15 */ {15, 14},
      /* 16 */ {16, 15, 13, 4},
      /* 17 */ {17, 14},
      /* 18 */ {18, 11},
      /* 19 */ {19, 6, 2, 1},
      /* 20 */ {20, 17},
  };
  if (order < 2 || order > 20) {
    throw std::invalid_argument("mls_taps: order out of range");
  }
  return table[order - 2];
}

}  // namespace detail

// Generates a maximum-length sequence from a linear feedback shift register.
// The seed picks the (nonzero) initial register fill, i.e. the phase of the
// sequence; the tap set per order is fixed.
inline MlsSignal generate_mls(unsigned order, std::uint64_t seed) {
  if (order < 2 || order > 20) {
    throw std::invalid_argument("generate_mls: order must be in [2, 20]");
  }
  const std::vector<unsigned>& taps = detail::mls_taps(order);
  const std::uint64_t period = (1ULL << order) - 1;
  std::uint32_t state =
      static_cast<std::uint32_t>(splitmix64(seed) % period) + 1;  // nonzero

  MlsSignal out;
  out.order = order;
  out.samples.resize(period);
  for (std::uint64_t i = 0; i < period; ++i) {
    out.samples[i] = (state & 1U) ? 1.0 : -1.0;
    // Feedback for x^order + sum(x^t) + 1: the constant term taps bit 0, each
    // intermediate exponent taps its own bit, and the new bit enters at the top.
    std::uint32_t fb = state & 1U;
    for (unsigned t : taps) {
      if (t != order) fb ^= (state >> t) & 1U;
    }
    state = (state >> 1) | (fb << (order - 1));
  }
  return out;
}

}  // namespace seldkit

#endif  // SELDKIT_MLS_HPP
