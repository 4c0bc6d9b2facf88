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

#ifndef SELDKIT_SPECIAL_FUNCTIONS_HPP
#define SELDKIT_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

namespace seldkit {

// Legendre polynomial P_n(x) for x in [-1, 1], by the three-term recurrence
// (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
inline double legendre_p(unsigned n, double x) {
  if (!(std::abs(x) <= 1.0)) {
    throw std::invalid_argument("legendre_p: x outside [-1, 1]");
  }
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (unsigned k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = p_next;
  }
  return p;
}

// Spherical Hankel function of the second kind, h_n^(2)(x) = j_n(x) - i y_n(x).
inline std::complex<double> sph_hankel2(unsigned n, double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("sph_hankel2: x must be positive");
  }
  return {std::sph_bessel(n, x), -std::sph_neumann(n, x)};
}

// Derivative of h_n^(2) from the recurrence h_n' = h_{n-1} - ((n+1)/x) h_n,
// with the n = 0 case h_0' = -h_1.
inline std::complex<double> sph_hankel2_deriv(unsigned n, double x) {
  if (n == 0) return -sph_hankel2(1, x);
  return sph_hankel2(n - 1, x) - ((n + 1.0) / x) * sph_hankel2(n, x);
}

}  // namespace seldkit

#endif  // SELDKIT_SPECIAL_FUNCTIONS_HPP
