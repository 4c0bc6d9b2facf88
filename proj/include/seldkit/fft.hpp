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

#ifndef SELDKIT_FFT_HPP
#define SELDKIT_FFT_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "seldkit/common.hpp"

namespace seldkit {

namespace detail {
inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}
}  // namespace detail

inline std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in) {
  std::vector<std::complex<double>> out;
  detail::fft_engine().fwd(out, in);
  return out;
}

inline std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& in) {
  std::vector<std::complex<double>> out;
  detail::fft_engine().inv(out, in);
  return out;
}

// Forward transform of a real signal, returning bins 0..N/2 (N must be even).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& in) {
  if (in.size() % 2 != 0) {
    throw std::invalid_argument("rfft: length must be even");
  }
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  std::vector<std::complex<double>> full = fft(buf);
  full.resize(in.size() / 2 + 1);
  return full;
}

// Inverse of rfft: reassembles the conjugate-symmetric upper half explicitly,
// then takes the real part of the complex inverse transform.
inline std::vector<double> irfft(const std::vector<std::complex<double>>& half, std::size_t n) {
  if (n % 2 != 0 || half.size() != n / 2 + 1) {
    throw std::invalid_argument("irfft: need n even and n/2+1 bins");
  }
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k <= n / 2; ++k) full[k] = half[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  std::vector<std::complex<double>> t = ifft(full);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = t[i].real();
  return out;
}

// Full linear convolution (length a+b-1) via zero-padded transforms.
inline std::vector<double> fft_convolve(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  std::vector<double> pa(n, 0.0);
  std::vector<double> pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa = rfft(pa);
  const std::vector<std::complex<double>> fb = rfft(pb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> full = irfft(fa, n);
  full.resize(out_len);
  return full;
}

}  // namespace seldkit

#endif  // SELDKIT_FFT_HPP
