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

#ifndef SELDKIT_ARRAY_MODEL_HPP
#define SELDKIT_ARRAY_MODEL_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/special_functions.hpp"

namespace seldkit {

enum class ArrayFormat { kFoa, kMic };

inline const char* array_format_name(ArrayFormat f) {
  return f == ArrayFormat::kFoa ? "foa" : "mic";
}

// Four capsules flush-mounted on a rigid sphere, in a tetrahedral layout.
struct TetraArraySpec {
  double radius_m = 0.042;
  double speed_of_sound = 343.0;
  unsigned max_order = 30;
  std::array<Direction, 4> placements = {
      Direction::from_degrees(45.0, 35.0),
      Direction::from_degrees(-45.0, -35.0),
      Direction::from_degrees(135.0, -35.0),
      Direction::from_degrees(-135.0, 35.0),
  };
};

// First-order ambisonic gains for a plane wave from `d`, channel order
// W, Y, Z, X with SN3D normalization (W carries no sqrt(2) factor).
inline std::array<double, 4> foa_response(const Direction& d) {
  const double ce = std::cos(d.elevation);
  return {1.0, std::sin(d.azimuth) * ce, std::sin(d.elevation),
          std::cos(d.azimuth) * ce};
}

// Cosine of the great-circle angle between the wave direction and each capsule.
inline std::array<double, 4> capsule_cos_angles(const TetraArraySpec& spec,
                                                const Direction& d) {
  const Vec3 u = unit_vector(d);
  std::array<double, 4> out{};
  for (std::size_t m = 0; m < 4; ++m) {
    const Vec3 p = unit_vector(spec.placements[m]);
    out[m] = u.x * p.x + u.y * p.y + u.z * p.z;
  }
  return out;
}

// Per-order radial weights b_n(x) = i^(n-1) (2n+1) / (h2_n'(x) x^2) for the
// scattering off a rigid sphere, with x = omega * radius / c. The pressure at
// a capsule is then sum_n b_n(x) P_n(cos gamma).
inline std::vector<std::complex<double>> rigid_sphere_radial_terms(
    const TetraArraySpec& spec, double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("rigid_sphere_radial_terms: x must be positive");
  }
  static const std::complex<double> kIpow[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  std::vector<std::complex<double>> b(spec.max_order + 1);
  const double inv_x2 = 1.0 / (x * x);
  for (unsigned n = 0; n <= spec.max_order; ++n) {
    const std::complex<double> i_pow = kIpow[(n + 3) % 4];  // i^(n-1)
    b[n] = i_pow * (2.0 * n + 1.0) * inv_x2 / sph_hankel2_deriv(n, x);
  }
  return b;
}

// Frequency response of each capsule to a unit plane wave from `d` at angular
// frequency `omega` (rad/s).
inline std::array<std::complex<double>, 4> rigid_sphere_response(
    const TetraArraySpec& spec, const Direction& d, double omega) {
  const double x = omega * spec.radius_m / spec.speed_of_sound;
  const std::vector<std::complex<double>> b = rigid_sphere_radial_terms(spec, x);
  const std::array<double, 4> cg = capsule_cos_angles(spec, d);
  std::array<std::complex<double>, 4> h{};
  for (std::size_t m = 0; m < 4; ++m) {
    std::complex<double> acc{0.0, 0.0};
    double p_prev = 1.0;   // P_0
    double p = cg[m];      // P_1
    acc += b[0] * p_prev;
    if (spec.max_order >= 1) acc += b[1] * p;
    for (unsigned n = 1; n < spec.max_order; ++n) {
      const double p_next = ((2.0 * n + 1.0) * cg[m] * p - n * p_prev) / (n + 1.0);
      p_prev = p;
      p = p_next;
      acc += b[n + 1] * p;
    }
    h[m] = acc;
  }
  return h;
}

// Renders anechoic impulse responses for a plane wave from a given direction.
// Both formats delay the wave by ir_len/2 samples so that FOA and capsule
// outputs stay time-aligned. The capsule responses are built in the frequency
// domain from the rigid-sphere model; the radial weight tables per bin are
// cached so repeated directions reuse them.
class ArrayIrSynthesizer {
 public:
  ArrayIrSynthesizer(const TetraArraySpec& spec, double fs, std::size_t ir_len)
      : spec_(spec), fs_(fs), ir_len_(ir_len) {
    if (ir_len_ < 4 || ir_len_ % 2 != 0) {
      throw std::invalid_argument("ArrayIrSynthesizer: ir_len must be even and >= 4");
    }
    const std::size_t half = ir_len_ / 2;
    radial_.resize(half);  // bins 1..N/2
    for (std::size_t k = 1; k <= half; ++k) {
      const double omega = kTwoPi * static_cast<double>(k) * fs_ /
                           static_cast<double>(ir_len_);
      radial_[k - 1] =
          rigid_sphere_radial_terms(spec_, omega * spec_.radius_m / spec_.speed_of_sound);
    }
  }

  const TetraArraySpec& spec() const { return spec_; }
  double fs() const { return fs_; }
  std::size_t ir_len() const { return ir_len_; }

  AudioBlock synthesize(const Direction& d, ArrayFormat format) const {
    AudioBlock ir;
    ir.fs = fs_;
    ir.channels.assign(4, std::vector<double>(ir_len_, 0.0));
    const std::size_t center = ir_len_ / 2;
    if (format == ArrayFormat::kFoa) {
      const std::array<double, 4> g = foa_response(d);
      for (std::size_t c = 0; c < 4; ++c) ir.channels[c][center] = g[c];
      return ir;
    }

    const std::array<double, 4> cg = capsule_cos_angles(spec_, d);
    const std::size_t half = ir_len_ / 2;
    std::vector<std::complex<double>> spectrum(half + 1);
    std::vector<double> pn(spec_.max_order + 1);
    for (std::size_t m = 0; m < 4; ++m) {
      pn[0] = 1.0;
      if (spec_.max_order >= 1) pn[1] = cg[m];
      for (unsigned n = 1; n < spec_.max_order; ++n) {
        pn[n + 1] = ((2.0 * n + 1.0) * cg[m] * pn[n] - n * pn[n - 1]) / (n + 1.0);
      }
      for (std::size_t k = 1; k <= half; ++k) {
        const std::vector<std::complex<double>>& b = radial_[k - 1];
        std::complex<double> acc{0.0, 0.0};
        for (unsigned n = 0; n <= spec_.max_order; ++n) acc += b[n] * pn[n];
        // Shift by ir_len/2 samples: multiply by exp(-i pi k) = (-1)^k.
        if (k % 2 == 1) acc = -acc;
        spectrum[k] = acc;
      }
      // DC has no model value (the sum diverges at x = 0); carry the magnitude
      // of the lowest bin so the band edge stays smooth. Nyquist must be real.
      spectrum[0] = std::abs(spectrum[1]);
      spectrum[half] = spectrum[half].real();
      ir.channels[m] = irfft(spectrum, ir_len_);
    }
    return ir;
  }

 private:
  TetraArraySpec spec_;
  double fs_;
  std::size_t ir_len_;
  std::vector<std::vector<std::complex<double>>> radial_;
};

inline AudioBlock synthesize_array_ir(const TetraArraySpec& spec, const Direction& d,
                                      double fs, std::size_t ir_len,
                                      ArrayFormat format) {
  return ArrayIrSynthesizer(spec, fs, ir_len).synthesize(d, format);
}

}  // namespace seldkit

#endif  // SELDKIT_ARRAY_MODEL_HPP
