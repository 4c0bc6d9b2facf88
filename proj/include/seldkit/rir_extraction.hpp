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

#ifndef SELDKIT_RIR_EXTRACTION_HPP
#define SELDKIT_RIR_EXTRACTION_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "seldkit/common.hpp"
#include "seldkit/rir.hpp"

namespace seldkit {

// Identifies the impulse response between a known excitation and a 4-channel
// recording on a sliding window, one least-squares FIR fit per hop position.
//
// Within a window of W samples starting at s, the model is
//   y_c[s+t] = sum_k h_c[k] x[s+t-k],  t = 0..W-1,
// solved per channel through the normal equations. The Gram matrix entry
// A[k][l] is a sum of excitation products at lag k-l over a shifted range, so
// the whole matrix is assembled from per-lag prefix sums in O(K(W+K)) rather
// than the naive O(K^2 W). A small ridge (1e-8 times the mean diagonal) keeps
// the solve well-posed; a silent window is returned flagged instead of solved.
//
// The excitation must be persistently exciting over every window. For a
// maximum-length sequence that means at least one full period per window:
// sub-period segments of an m-sequence produce linearly dependent shifted
// regressors and the fit degenerates, so pick the order such that
// 2^order - 1 <= window_len (and, as with any excitation, the period should
// still exceed rir_len so distinct taps stay distinguishable).
//
// window_len = 0 selects the default analysis window of one second.
inline std::vector<Rir> extract_rirs_sliding(const std::vector<double>& excitation,
                                             const AudioBlock& recording,
                                             std::size_t rir_len,
                                             std::size_t hop = 4800,
                                             std::size_t window_len = 0) {
  const std::size_t num_ch = recording.num_channels();
  const std::size_t rec_len = recording.num_frames();
  const std::size_t exc_len = excitation.size();
  const std::size_t W =
      window_len > 0 ? window_len : static_cast<std::size_t>(recording.fs);
  if (num_ch == 0 || rec_len == 0 || exc_len == 0) {
    throw std::invalid_argument("extract_rirs_sliding: empty input");
  }
  if (rec_len < W) {
    throw std::invalid_argument(
        "extract_rirs_sliding: recording shorter than the analysis window");
  }
  if (rir_len == 0 || rir_len > W / 2) {
    throw std::invalid_argument(
        "extract_rirs_sliding: rir_len must be in [1, window/2]");
  }
  if (hop == 0) {
    throw std::invalid_argument("extract_rirs_sliding: hop must be positive");
  }

  const std::size_t K = rir_len;
  const std::size_t num_hops = (rec_len - W) / hop + 1;
  const long span = static_cast<long>(W + K - 1);  // excitation samples touched

  std::vector<Rir> out;
  out.reserve(num_hops);
  Eigen::MatrixXd A(K, K);
  Eigen::VectorXd b(K);
  std::vector<double> prefix(span + 1);

  auto x_at = [&](long u) -> double {
    return (u >= 0 && u < static_cast<long>(exc_len)) ? excitation[u] : 0.0;
  };

  for (std::size_t p = 0; p < num_hops; ++p) {
    const long s = static_cast<long>(p * hop);
    const long base = s - static_cast<long>(K) + 1;

    // A[k][l] = sum over u in [s-k, s+W-1-k] of x[u] x[u+(k-l)], k >= l.
    for (std::size_t d = 0; d < K; ++d) {
      prefix[0] = 0.0;
      for (long i = 0; i < span; ++i) {
        const long u = base + i;
        prefix[i + 1] = prefix[i] + x_at(u) * x_at(u + static_cast<long>(d));
      }
      for (std::size_t k = d; k < K; ++k) {
        const long lo = s - static_cast<long>(k);
        const long hi = lo + static_cast<long>(W) - 1;
        const double v = prefix[hi - base + 1] - prefix[lo - base];
        A(k, k - d) = v;
        A(k - d, k) = v;
      }
    }

    Rir rir;
    rir.fs = recording.fs;
    rir.channels.assign(num_ch, std::vector<double>(K, 0.0));

    const double mean_diag = A.diagonal().sum() / static_cast<double>(K);
    if (!(mean_diag > 0.0)) {
      rir.degenerate = true;  // silent excitation window
      out.push_back(std::move(rir));
      continue;
    }
    A.diagonal().array() += 1e-8 * mean_diag;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
      rir.degenerate = true;
      out.push_back(std::move(rir));
      continue;
    }

    for (std::size_t c = 0; c < num_ch; ++c) {
      const std::vector<double>& y = recording.channels[c];
      for (std::size_t k = 0; k < K; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < W; ++t) {
          acc += y[s + t] * x_at(s + static_cast<long>(t) - static_cast<long>(k));
        }
        b(k) = acc;
      }
      const Eigen::VectorXd h = llt.solve(b);
      for (std::size_t k = 0; k < K; ++k) rir.channels[c][k] = h(k);
    }
    out.push_back(std::move(rir));
  }
  return out;
}

}  // namespace seldkit

#endif  // SELDKIT_RIR_EXTRACTION_HPP
