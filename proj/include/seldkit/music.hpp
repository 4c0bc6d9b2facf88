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

#ifndef SELDKIT_MUSIC_HPP
#define SELDKIT_MUSIC_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/rir.hpp"

namespace seldkit {

struct MusicParams {
  double grid_step_deg = 1.0;
  double band_lo_hz = 200.0;
  double band_hi_hz = 8000.0;
  double el_min_deg = -60.0;
  double el_max_deg = 60.0;
};

// Broadband subspace direction search over a windowed direct-path RIR.
//
// Per frequency bin in the band, the 4x4 covariance is the outer product of
// the RIR spectrum vector s. With a single source that covariance is rank
// one: its three zero eigenvectors span the orthogonal complement of s, so
// projecting a steering vector onto the noise subspace reduces to
// |a|^2 - |a^H s_hat|^2 with s_hat = s/|s|. The pseudospectra (reciprocals of
// that projection, with unit-norm steering vectors from the rigid-sphere
// model) are summed over bins and the grid argmax wins; an exact tie goes to
// the smaller linear grid index (azimuth-major).
inline Direction music_doa_broadband(const Rir& windowed, const TetraArraySpec& spec,
                                     const MusicParams& params = {}) {
  const std::size_t len = windowed.length();
  if (windowed.channels.size() != 4 || len == 0) {
    throw std::invalid_argument("music_doa_broadband: need a 4-channel RIR");
  }
  if (!(params.grid_step_deg > 0.0) || params.band_hi_hz <= params.band_lo_hz) {
    throw std::invalid_argument("music_doa_broadband: invalid search parameters");
  }

  // Crop to the nonzero support: every channel shares the window position, so
  // the common shift only rotates each bin's phase and cancels in the
  // projection. Short supports then get a short transform and a coarse but
  // sufficient bin grid.
  std::size_t first = len;
  std::size_t last = 0;
  for (const auto& ch : windowed.channels) {
    for (std::size_t i = 0; i < len; ++i) {
      if (ch[i] != 0.0) {
        if (i < first) first = i;
        if (i > last) last = i;
        break;
      }
    }
    for (std::size_t i = len; i-- > 0;) {
      if (ch[i] != 0.0) {
        if (i > last) last = i;
        break;
      }
    }
  }
  if (first > last) {
    throw std::runtime_error("music_doa_broadband: degenerate RIR (all zero)");
  }
  const std::size_t support = last - first + 1;
  const std::size_t n = std::max<std::size_t>(128, next_pow2(support));

  // Unit-norm spectrum vectors per usable bin.
  const double fs = windowed.fs;
  std::vector<std::vector<std::complex<double>>> spectra(4);
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<double> buf(n, 0.0);
    for (std::size_t i = 0; i < support; ++i) buf[i] = windowed.channels[c][first + i];
    spectra[c] = rfft(buf);
  }
  const std::size_t k_lo = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.band_lo_hz * n / fs)));
  const std::size_t k_hi = std::min(
      n / 2, static_cast<std::size_t>(std::floor(params.band_hi_hz * n / fs)));

  std::vector<std::size_t> bins;
  std::vector<std::array<std::complex<double>, 4>> s_hat;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    std::array<std::complex<double>, 4> s{};
    double norm2 = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      s[c] = spectra[c][k];
      norm2 += std::norm(s[c]);
    }
    if (norm2 <= 0.0) continue;
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : s) v *= inv;
    bins.push_back(k);
    s_hat.push_back(s);
  }
  if (bins.size() < 3) {
    throw std::runtime_error("music_doa_broadband: fewer than 3 usable bins");
  }

  // Radial weights per bin are direction-independent; the per-capsule
  // Legendre values are bin-independent. Splitting them keeps the grid sweep
  // at O(orders) per capsule and bin.
  std::vector<std::vector<std::complex<double>>> radial(bins.size());
  for (std::size_t bi = 0; bi < bins.size(); ++bi) {
    const double omega = kTwoPi * static_cast<double>(bins[bi]) * fs / n;
    radial[bi] =
        rigid_sphere_radial_terms(spec, omega * spec.radius_m / spec.speed_of_sound);
  }

  const double step = params.grid_step_deg;
  const std::size_t n_az = static_cast<std::size_t>(std::lround(360.0 / step));
  const std::size_t n_el =
      static_cast<std::size_t>(std::lround((params.el_max_deg - params.el_min_deg) / step)) + 1;

  double best_score = -1.0;
  Direction best_dir;
  std::array<std::vector<double>, 4> pn_tab;
  for (auto& t : pn_tab) t.assign(spec.max_order + 1, 0.0);
  std::array<std::complex<double>, 4> a{};
  for (std::size_t ia = 0; ia < n_az; ++ia) {
    const double az = -180.0 + static_cast<double>(ia) * step;
    for (std::size_t ie = 0; ie < n_el; ++ie) {
      const double el = params.el_min_deg + static_cast<double>(ie) * step;
      const Direction g = Direction::from_degrees(az, el);
      const std::array<double, 4> cg = capsule_cos_angles(spec, g);

      double score = 0.0;
      // Legendre table per capsule, shared by all bins of this grid point.
      for (std::size_t m = 0; m < 4; ++m) {
        std::vector<double>& pn = pn_tab[m];
        pn[0] = 1.0;
        if (spec.max_order >= 1) pn[1] = cg[m];
        for (unsigned nn = 1; nn < spec.max_order; ++nn) {
          pn[nn + 1] = ((2.0 * nn + 1.0) * cg[m] * pn[nn] - nn * pn[nn - 1]) / (nn + 1.0);
        }
      }
      for (std::size_t bi = 0; bi < bins.size(); ++bi) {
        const std::vector<std::complex<double>>& b = radial[bi];
        double a_norm2 = 0.0;
        for (std::size_t m = 0; m < 4; ++m) {
          std::complex<double> acc{0.0, 0.0};
          const std::vector<double>& p = pn_tab[m];
          for (unsigned nn = 0; nn <= spec.max_order; ++nn) acc += b[nn] * p[nn];
          a[m] = acc;
          a_norm2 += std::norm(acc);
        }
        if (a_norm2 <= 0.0) continue;
        std::complex<double> dot{0.0, 0.0};
        for (std::size_t m = 0; m < 4; ++m) dot += std::conj(a[m]) * s_hat[bi][m];
        double denom = 1.0 - std::norm(dot) / a_norm2;
        if (denom < 1e-15) denom = 1e-15;
        score += 1.0 / denom;
      }
      if (score > best_score) {
        best_score = score;
        best_dir = g;
      }
    }
  }
  return best_dir;
}

}  // namespace seldkit

#endif  // SELDKIT_MUSIC_HPP
