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

// Independent reference implementations the tests compare the library
// against. Each oracle takes a deliberately different computational route
// from the production code so shared mistakes cannot cancel out.

#ifndef SELDKIT_TESTS_SUPPORT_ORACLES_HPP
#define SELDKIT_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "seldkit/array_model.hpp"
#include "seldkit/geometry.hpp"
#include "seldkit/seld_frame.hpp"

namespace oracles {

using mp_float = boost::multiprecision::cpp_bin_float_50;

// ---------------------------------------------------------------------------
// High-precision spherical Bessel / Hankel machinery
// ---------------------------------------------------------------------------

// j_n(x) by its absolutely convergent power series
//   j_n(x) = x^n sum_k (-x^2/2)^k / (k! (2n+2k+1)!!),
// nothing shared with the library's recurrence route.
inline mp_float sph_bessel_j_mp(unsigned n, const mp_float& x) {
  mp_float double_fact = 1;  // (2n+1)!!
  for (unsigned m = 1; m <= n; ++m) double_fact *= 2 * m + 1;
  mp_float term = boost::multiprecision::pow(x, static_cast<int>(n)) / double_fact;
  mp_float sum = term;
  const mp_float neg_half_x2 = -x * x / 2;
  for (unsigned k = 1; k < 500; ++k) {
    term *= neg_half_x2 / (mp_float(k) * (2 * n + 2 * k + 1));
    sum += term;
    if (boost::multiprecision::abs(term) <
        boost::multiprecision::abs(sum) * mp_float("1e-70")) {
      break;
    }
  }
  return sum;
}

// y_n(x) from the closed forms for n = 0, 1 and the upward three-term
// recurrence, which is the stable direction for y.
inline mp_float sph_bessel_y_mp(unsigned n, const mp_float& x) {
  const mp_float y0 = -boost::multiprecision::cos(x) / x;
  if (n == 0) return y0;
  const mp_float y1 =
      -boost::multiprecision::cos(x) / (x * x) - boost::multiprecision::sin(x) / x;
  if (n == 1) return y1;
  mp_float prev = y0;
  mp_float cur = y1;
  for (unsigned m = 1; m < n; ++m) {
    const mp_float next = mp_float(2 * m + 1) / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct MpComplex {
  mp_float re;
  mp_float im;
};

inline MpComplex sph_hankel2_mp(unsigned n, const mp_float& x) {
  return {sph_bessel_j_mp(n, x), -sph_bessel_y_mp(n, x)};
}

// Derivative via the symmetric identity
//   h_n'(x) = (n h_{n-1}(x) - (n+1) h_{n+1}(x)) / (2n+1),
// a different identity from the one the library uses.
inline MpComplex sph_hankel2_deriv_mp(unsigned n, const mp_float& x) {
  if (n == 0) {
    const MpComplex h1 = sph_hankel2_mp(1, x);
    return {-h1.re, -h1.im};
  }
  const MpComplex lo = sph_hankel2_mp(n - 1, x);
  const MpComplex hi = sph_hankel2_mp(n + 1, x);
  const mp_float denom = 2 * n + 1;
  return {(n * lo.re - (n + 1) * hi.re) / denom, (n * lo.im - (n + 1) * hi.im) / denom};
}

// Unnormalized Legendre polynomial in high precision (same recurrence as the
// library, but the arithmetic is 50-digit so truncation behaves differently).
inline mp_float legendre_p_mp(unsigned n, const mp_float& x) {
  if (n == 0) return 1;
  mp_float prev = 1;
  mp_float cur = x;
  for (unsigned m = 1; m < n; ++m) {
    const mp_float next = ((2 * m + 1) * x * cur - m * prev) / (m + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

// 31-term rigid-sphere series evaluated entirely in 50-digit arithmetic:
//   H = x^-2 sum_n [ i^(n-1) / h_n'(x) ] (2n+1) P_n(cos gamma).
inline std::complex<double> rigid_sphere_response_mp(double radius, double speed_of_sound,
                                                     double freq, double cos_gamma,
                                                     unsigned max_order = 30) {
  const mp_float pi = 4 * boost::multiprecision::atan(mp_float(1));
  const mp_float x =
      2 * pi * mp_float(freq) * mp_float(radius) / mp_float(speed_of_sound);
  mp_float acc_re = 0;
  mp_float acc_im = 0;
  for (unsigned n = 0; n <= max_order; ++n) {
    const MpComplex dh = sph_hankel2_deriv_mp(n, x);
    // i^(n-1) cycles (n mod 4): n=0 -> -i, 1 -> 1, 2 -> i, 3 -> -1.
    mp_float ip_re = 0;
    mp_float ip_im = 0;
    switch (n % 4) {
      case 0: ip_im = -1; break;
      case 1: ip_re = 1; break;
      case 2: ip_im = 1; break;
      case 3: ip_re = -1; break;
    }
    // i^(n-1) / h_n'(x)
    const mp_float mag2 = dh.re * dh.re + dh.im * dh.im;
    const mp_float q_re = (ip_re * dh.re + ip_im * dh.im) / mag2;
    const mp_float q_im = (ip_im * dh.re - ip_re * dh.im) / mag2;
    const mp_float weight = (2 * n + 1) * legendre_p_mp(n, mp_float(cos_gamma));
    acc_re += q_re * weight;
    acc_im += q_im * weight;
  }
  const mp_float scale = 1 / (x * x);
  return {static_cast<double>(acc_re * scale), static_cast<double>(acc_im * scale)};
}

// ---------------------------------------------------------------------------
// Signal helpers
// ---------------------------------------------------------------------------

// Direct O(N*K) linear convolution.
inline std::vector<double> naive_convolve(const std::vector<double>& a,
                                          const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

inline double rel_l2_error(const std::vector<double>& estimate,
                           const std::vector<double>& reference) {
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = std::max(estimate.size(), reference.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double e = i < estimate.size() ? estimate[i] : 0.0;
    const double r = i < reference.size() ? reference[i] : 0.0;
    num += (e - r) * (e - r);
    den += r * r;
  }
  return std::sqrt(num / den);
}

// Plane-wave arrival-time difference between two capsules in samples:
// t_i - t_j for a wave arriving from `src` (positive when capsule i hears it
// later). Pure geometry, nothing from the frequency-domain model.
inline double tdoa_samples(const seldkit::TetraArraySpec& spec, std::size_t i,
                           std::size_t j, const seldkit::Direction& src, double fs) {
  const seldkit::Vec3 u = seldkit::unit_vector(src);
  const seldkit::Vec3 pi = seldkit::unit_vector(spec.placements[i]);
  const seldkit::Vec3 pj = seldkit::unit_vector(spec.placements[j]);
  const double proj =
      (pi.x - pj.x) * u.x + (pi.y - pj.y) * u.y + (pi.z - pj.z) * u.z;
  return -spec.radius_m / spec.speed_of_sound * proj * fs;
}

// ---------------------------------------------------------------------------
// Metric recounts from first principles
// ---------------------------------------------------------------------------

// Minimum assignment cost by full permutation enumeration (pad the smaller
// side conceptually: exactly min(r, p) pairs are formed).
inline double min_assignment_cost(const std::vector<std::vector<double>>& cost) {
  const std::size_t r = cost.size();
  if (r == 0) return 0.0;
  const std::size_t p = cost[0].size();
  if (p == 0) return 0.0;
  if (r <= p) {
    std::vector<std::size_t> cols(p);
    std::iota(cols.begin(), cols.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < r; ++i) total += cost[i][cols[i]];
      best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
  }
  std::vector<std::vector<double>> transposed(p, std::vector<double>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < p; ++j) transposed[j][i] = cost[i][j];
  }
  return min_assignment_cost(transposed);
}

struct SegmentCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t n_ref = 0;
};

// Straight-from-the-definition recount of the segment detection counts: class
// activity per one-second segment, S = min(FN, FP), D = FN - S, I = FP - S.
inline SegmentCounts recount_segment_detection(const std::vector<seldkit::SeldFrame>& ref,
                                               const std::vector<seldkit::SeldFrame>& pred) {
  SegmentCounts total;
  const std::size_t num_frames = std::max(ref.size(), pred.size());
  for (std::size_t seg_start = 0; seg_start < num_frames; seg_start += 10) {
    std::set<int> ref_classes;
    std::set<int> pred_classes;
    for (std::size_t f = seg_start; f < std::min(num_frames, seg_start + 10); ++f) {
      if (f < ref.size()) {
        for (const auto& e : ref[f].events) ref_classes.insert(e.class_id);
      }
      if (f < pred.size()) {
        for (const auto& e : pred[f].events) pred_classes.insert(e.class_id);
      }
    }
    std::size_t tp = 0;
    for (int c : ref_classes) tp += pred_classes.count(c);
    const std::size_t fn = ref_classes.size() - tp;
    const std::size_t fp = pred_classes.size() - tp;
    const std::size_t s = std::min(fn, fp);
    total.tp += tp;
    total.fp += fp;
    total.fn += fn;
    total.substitutions += s;
    total.deletions += fn - s;
    total.insertions += fp - s;
    total.n_ref += ref_classes.size();
  }
  return total;
}

inline double recount_er(const SegmentCounts& c) {
  return static_cast<double>(c.substitutions + c.deletions + c.insertions) /
         std::max<double>(1.0, static_cast<double>(c.n_ref));
}

inline double recount_f(const SegmentCounts& c) {
  const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  return denom > 0.0 ? 2.0 * static_cast<double>(c.tp) / denom : 1.0;
}

}  // namespace oracles

#endif  // SELDKIT_TESTS_SUPPORT_ORACLES_HPP
