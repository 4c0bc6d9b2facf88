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

#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "../support/oracles.hpp"
#include "seldkit/fft.hpp"
#include "seldkit/rng.hpp"

using namespace seldkit;

TEST_CASE("real FFT round trip", "[fft]") {
  Rng rng(5);
  std::vector<double> x(512);
  for (double& v : x) v = rng.normal();
  const auto spec = rfft(x);
  REQUIRE(spec.size() == 257);
  const auto back = irfft(spec, 512);
  REQUIRE(back.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(back[i] == Catch::Approx(x[i]).margin(1e-10));
  }
}

TEST_CASE("rfft of a pure tone concentrates in its bin", "[fft]") {
  const std::size_t n = 1024;
  const std::size_t bin = 37;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::cos(kTwoPi * static_cast<double>(bin * i) / static_cast<double>(n));
  }
  const auto spec = rfft(x);
  CHECK(std::abs(spec[bin]) == Catch::Approx(static_cast<double>(n) / 2.0).margin(1e-6));
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (k != bin) CHECK(std::abs(spec[k]) < 1e-6);
  }
}

TEST_CASE("Parseval identity holds", "[fft]") {
  Rng rng(9);
  std::vector<double> x(256);
  for (double& v : x) v = rng.normal();
  double time_energy = 0.0;
  for (double v : x) time_energy += v * v;
  const auto spec = rfft(x);
  double freq_energy = std::norm(spec[0]) + std::norm(spec.back());
  for (std::size_t k = 1; k + 1 < spec.size(); ++k) freq_energy += 2.0 * std::norm(spec[k]);
  freq_energy /= static_cast<double>(x.size());
  CHECK(freq_energy == Catch::Approx(time_energy).epsilon(1e-10));
}

TEST_CASE("fft_convolve matches direct convolution", "[fft]") {
  Rng rng(21);
  for (const auto& [na, nb] : {std::pair<int, int>{64, 17}, {100, 100}, {1, 50}}) {
    std::vector<double> a(na), b(nb);
    for (double& v : a) v = rng.normal();
    for (double& v : b) v = rng.normal();
    const auto fast = fft_convolve(a, b);
    const auto slow = oracles::naive_convolve(a, b);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i] == Catch::Approx(slow[i]).margin(1e-9));
    }
  }
}

TEST_CASE("irfft enforces Hermitian reconstruction", "[fft]") {
  // A spectrum with a non-real Nyquist bin must still produce a real signal:
  // the imaginary part is discarded by construction.
  std::vector<std::complex<double>> spec(5, {0.0, 0.0});
  spec[0] = {1.0, 0.0};
  spec[2] = {0.5, -0.25};
  const auto x = irfft(spec, 8);
  REQUIRE(x.size() == 8);
  // Compare to the explicit inverse DFT sum of the Hermitian extension.
  for (std::size_t t = 0; t < 8; ++t) {
    double expect = 1.0 / 8.0;
    expect += 2.0 / 8.0 * (0.5 * std::cos(kTwoPi * 2.0 * t / 8.0) +
                           0.25 * std::sin(kTwoPi * 2.0 * t / 8.0));
    CHECK(x[t] == Catch::Approx(expect).margin(1e-12));
  }
}
