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

#ifndef SELDKIT_FEATURES_HPP
#define SELDKIT_FEATURES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>  // flat vendored copy
#endif

#include "seldkit/array_model.hpp"
#include "seldkit/common.hpp"
#include "seldkit/fft.hpp"

namespace seldkit {

struct StftParams {
  std::size_t fft_size = 1024;
  std::size_t window = 960;  // 40 ms at 24 kHz
  std::size_t hop = 480;     // 20 ms
};

// Per-channel complex spectrogram.
struct StftTensor {
  std::vector<std::vector<std::vector<std::complex<double>>>> data;  // ch x T x bins
  double fs = kSampleRate;
  StftParams params;

  std::size_t num_channels() const { return data.size(); }
  std::size_t num_frames() const { return data.empty() ? 0 : data[0].size(); }
  std::size_t num_bins() const { return params.fft_size / 2 + 1; }
};

// Hann-windowed short-time transform; the window is shorter than the FFT and
// zero-padded to it. Frame count is floor((len - window)/hop) + 1.
inline StftTensor compute_stft(const AudioBlock& audio, const StftParams& params = {}) {
  if (audio.fs != kSampleRate) {
    throw std::invalid_argument("compute_stft: expected 24 kHz input");
  }
  const std::size_t len = audio.num_frames();
  if (len < params.window) {
    throw std::invalid_argument("compute_stft: audio shorter than one window");
  }
  if (params.window > params.fft_size || params.fft_size % 2 != 0 || params.hop == 0) {
    throw std::invalid_argument("compute_stft: invalid analysis parameters");
  }

  std::vector<double> window(params.window);
  for (std::size_t i = 0; i < params.window; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) /
                                      static_cast<double>(params.window)));
  }
  const std::size_t num_frames = (len - params.window) / params.hop + 1;

  StftTensor out;
  out.fs = audio.fs;
  out.params = params;
  out.data.resize(audio.num_channels());
  std::vector<double> buf(params.fft_size);
  for (std::size_t c = 0; c < audio.num_channels(); ++c) {
    out.data[c].resize(num_frames);
    for (std::size_t t = 0; t < num_frames; ++t) {
      std::fill(buf.begin(), buf.end(), 0.0);
      const std::size_t start = t * params.hop;
      for (std::size_t i = 0; i < params.window; ++i) {
        buf[i] = audio.channels[c][start + i] * window[i];
      }
      out.data[c][t] = rfft(buf);
    }
  }
  return out;
}

// Triangular mel filterbank over the rfft bins, 64 bands from 0 Hz to
// 12 kHz, each triangle peak-normalized to one.
class MelFilterbank {
 public:
  static constexpr std::size_t kBands = 64;

  explicit MelFilterbank(std::size_t fft_size = 1024, double fs = kSampleRate,
                         double f_lo = 0.0, double f_hi = 12000.0) {
    const std::size_t bins = fft_size / 2 + 1;
    weights_.assign(kBands, std::vector<double>(bins, 0.0));
    const double m_lo = hz_to_mel(f_lo);
    const double m_hi = hz_to_mel(f_hi);
    std::vector<double> edges(kBands + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                                      static_cast<double>(kBands + 1));
    }
    for (std::size_t b = 0; b < kBands; ++b) {
      const double fl = edges[b];
      const double fc = edges[b + 1];
      const double fr = edges[b + 2];
      bool any = false;
      for (std::size_t k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(fft_size);
        double w = 0.0;
        if (f > fl && f <= fc) {
          w = (f - fl) / (fc - fl);
        } else if (f > fc && f < fr) {
          w = (fr - f) / (fr - fc);
        }
        if (w > 0.0) any = true;
        weights_[b][k] = w;
      }
      if (!any) {
        throw std::runtime_error("MelFilterbank: empty band");
      }
    }
  }

  const std::vector<std::vector<double>>& weights() const { return weights_; }

  // fb-weighted sum of per-bin values.
  double apply(std::size_t band, const std::vector<double>& per_bin) const {
    const std::vector<double>& w = weights_[band];
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] != 0.0) acc += w[k] * per_bin[k];
    }
    return acc;
  }

  static double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
  static double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

 private:
  std::vector<std::vector<double>> weights_;
};

constexpr double kFeatureEps = 1e-10;

// Log mel-band energies per channel: log(fb * |S|^2 + eps).
inline std::vector<std::vector<std::vector<double>>> logmel(const StftTensor& stft,
                                                            const MelFilterbank& fb) {
  const std::size_t T = stft.num_frames();
  const std::size_t bins = stft.num_bins();
  std::vector<std::vector<std::vector<double>>> out(
      stft.num_channels(),
      std::vector<std::vector<double>>(T, std::vector<double>(MelFilterbank::kBands)));
  std::vector<double> power(bins);
  for (std::size_t c = 0; c < stft.num_channels(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(stft.data[c][t][k]);
      for (std::size_t b = 0; b < MelFilterbank::kBands; ++b) {
        out[c][t][b] = std::log(fb.apply(b, power) + kFeatureEps);
      }
    }
  }
  return out;
}

// Acoustic intensity per mel band for the ambisonic format (channel order
// W, Y, Z, X): per bin I = Re{conj(W) [X, Y, Z]}, aggregated to bands, then
// normalized by the band-aggregated energy (|W|^2 + |X|^2 + |Y|^2 + |Z|^2)/2.
// With that denominator a plane wave reaches norm exactly one and
// Cauchy-Schwarz keeps every (frame, band) vector inside the unit ball.
// Output order is Cartesian (x, y, z).
inline std::vector<std::vector<std::vector<double>>> foa_intensity(
    const StftTensor& stft, const MelFilterbank& fb) {
  if (stft.num_channels() != 4) {
    throw std::invalid_argument("foa_intensity: need 4 channels (W, Y, Z, X)");
  }
  const std::size_t T = stft.num_frames();
  const std::size_t bins = stft.num_bins();
  std::vector<std::vector<std::vector<double>>> out(
      3, std::vector<std::vector<double>>(T, std::vector<double>(MelFilterbank::kBands)));
  std::vector<double> ix(bins), iy(bins), iz(bins), en(bins);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t k = 0; k < bins; ++k) {
      const std::complex<double> w = stft.data[0][t][k];
      const std::complex<double> y = stft.data[1][t][k];
      const std::complex<double> z = stft.data[2][t][k];
      const std::complex<double> x = stft.data[3][t][k];
      const std::complex<double> wc = std::conj(w);
      ix[k] = (wc * x).real();
      iy[k] = (wc * y).real();
      iz[k] = (wc * z).real();
      en[k] = 0.5 * (std::norm(w) + std::norm(x) + std::norm(y) + std::norm(z));
    }
    for (std::size_t b = 0; b < MelFilterbank::kBands; ++b) {
      const double e = fb.apply(b, en) + kFeatureEps;
      out[0][t][b] = fb.apply(b, ix) / e;
      out[1][t][b] = fb.apply(b, iy) / e;
      out[2][t][b] = fb.apply(b, iz) / e;
    }
  }
  return out;
}

enum class GccMode { kCenterLags, kPerBand };

// Cross-correlation features for the capsule format, PHAT-weighted, for the
// six unordered channel pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
//
// Default mode keeps 64 correlation lags centered on zero (-31..+32); a lag d
// at index 31+d means channel i trails channel j by d samples. The per-band
// mode instead reduces the weighted cross-spectrum onto each mel band.
inline std::vector<std::vector<std::vector<double>>> gcc_phat_features(
    const StftTensor& stft, GccMode mode = GccMode::kCenterLags,
    const MelFilterbank* fb = nullptr) {
  if (stft.num_channels() != 4) {
    throw std::invalid_argument("gcc_phat_features: need 4 channels");
  }
  if (mode == GccMode::kPerBand && fb == nullptr) {
    throw std::invalid_argument("gcc_phat_features: per-band mode needs a filterbank");
  }
  const std::size_t T = stft.num_frames();
  const std::size_t bins = stft.num_bins();
  const std::size_t n = stft.params.fft_size;
  static const std::pair<std::size_t, std::size_t> kPairs[6] = {
      {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

  std::vector<std::vector<std::vector<double>>> out(
      6, std::vector<std::vector<double>>(T, std::vector<double>(MelFilterbank::kBands)));
  std::vector<std::complex<double>> cross(bins);
  std::vector<double> re(bins);
  for (std::size_t pi = 0; pi < 6; ++pi) {
    const std::size_t i = kPairs[pi].first;
    const std::size_t j = kPairs[pi].second;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t k = 0; k < bins; ++k) {
        const std::complex<double> s = stft.data[i][t][k] * std::conj(stft.data[j][t][k]);
        cross[k] = s / (std::abs(s) + kFeatureEps);
      }
      if (mode == GccMode::kCenterLags) {
        const std::vector<double> lagged = irfft(cross, n);
        for (std::size_t b = 0; b < MelFilterbank::kBands; ++b) {
          const long lag = static_cast<long>(b) - 31;  // -31 .. +32
          const std::size_t idx =
              lag >= 0 ? static_cast<std::size_t>(lag)
                       : n - static_cast<std::size_t>(-lag);
          out[pi][t][b] = lagged[idx];
        }
      } else {
        for (std::size_t k = 0; k < bins; ++k) re[k] = cross[k].real();
        for (std::size_t b = 0; b < MelFilterbank::kBands; ++b) {
          double wsum = 0.0;
          for (double w : fb->weights()[b]) wsum += w;
          out[pi][t][b] = fb->apply(b, re) / (wsum + kFeatureEps);
        }
      }
    }
  }
  return out;
}

// Feature stack ready for a model: channels x T x 64.
struct FeatureTensor {
  std::vector<std::vector<std::vector<double>>> data;
  ArrayFormat format = ArrayFormat::kFoa;

  std::size_t num_channels() const { return data.size(); }
  std::size_t num_frames() const { return data.empty() ? 0 : data[0].size(); }
};

// FOA: 4 log-mel channels then 3 intensity channels (7 total).
// MIC: 6 correlation channels then 4 log-mel channels (10 total).
inline FeatureTensor stack_features(
    const std::vector<std::vector<std::vector<double>>>& logmel_feats,
    const std::vector<std::vector<std::vector<double>>>& spatial_feats,
    ArrayFormat format) {
  if (logmel_feats.size() != 4) {
    throw std::invalid_argument("stack_features: expected 4 log-mel channels");
  }
  const std::size_t expected_spatial = format == ArrayFormat::kFoa ? 3 : 6;
  if (spatial_feats.size() != expected_spatial) {
    throw std::invalid_argument("stack_features: wrong spatial channel count");
  }
  const std::size_t T = logmel_feats[0].size();
  for (const auto& ch : spatial_feats) {
    if (ch.size() != T) {
      throw std::invalid_argument("stack_features: frame count mismatch");
    }
  }
  FeatureTensor out;
  out.format = format;
  if (format == ArrayFormat::kFoa) {
    out.data = logmel_feats;
    out.data.insert(out.data.end(), spatial_feats.begin(), spatial_feats.end());
  } else {
    out.data = spatial_feats;
    out.data.insert(out.data.end(), logmel_feats.begin(), logmel_feats.end());
  }
  return out;
}

// Convenience wrapper: full per-scene extraction for either format.
inline FeatureTensor extract_features(const AudioBlock& audio, ArrayFormat format,
                                      const MelFilterbank& fb,
                                      GccMode gcc_mode = GccMode::kCenterLags) {
  const StftTensor stft = compute_stft(audio);
  const auto lm = logmel(stft, fb);
  if (format == ArrayFormat::kFoa) {
    return stack_features(lm, foa_intensity(stft, fb), format);
  }
  return stack_features(lm, gcc_phat_features(stft, gcc_mode, &fb), format);
}

// Per-feature-channel standardization statistics.
struct NormStats {
  ArrayFormat format = ArrayFormat::kFoa;
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline void accumulate_norm_stats(const FeatureTensor& feats, std::vector<double>& sum,
                                  std::vector<double>& sum_sq, std::vector<std::size_t>& count) {
  const std::size_t C = feats.num_channels();
  sum.resize(C, 0.0);
  sum_sq.resize(C, 0.0);
  count.resize(C, 0);
  for (std::size_t c = 0; c < C; ++c) {
    for (const auto& frame : feats.data[c]) {
      for (double v : frame) {
        sum[c] += v;
        sum_sq[c] += v * v;
        ++count[c];
      }
    }
  }
}

inline NormStats finalize_norm_stats(const std::vector<double>& sum,
                                     const std::vector<double>& sum_sq,
                                     const std::vector<std::size_t>& count,
                                     ArrayFormat format) {
  NormStats stats;
  stats.format = format;
  stats.mean.resize(sum.size());
  stats.stddev.resize(sum.size());
  for (std::size_t c = 0; c < sum.size(); ++c) {
    const double n = static_cast<double>(std::max<std::size_t>(1, count[c]));
    stats.mean[c] = sum[c] / n;
    const double var = std::max(0.0, sum_sq[c] / n - stats.mean[c] * stats.mean[c]);
    stats.stddev[c] = std::sqrt(var) > 0.0 ? std::sqrt(var) : 1.0;
  }
  return stats;
}

inline void apply_norm_stats(FeatureTensor& feats, const NormStats& stats) {
  if (stats.mean.size() != feats.num_channels()) {
    throw std::invalid_argument("apply_norm_stats: channel count mismatch");
  }
  for (std::size_t c = 0; c < feats.num_channels(); ++c) {
    for (auto& frame : feats.data[c]) {
      for (double& v : frame) v = (v - stats.mean[c]) / stats.stddev[c];
    }
  }
}

inline void save_norm_stats(const NormStats& stats, const std::string& path) {
  nlohmann::json j;
  j["format"] = array_format_name(stats.format);
  j["mean"] = stats.mean;
  j["std"] = stats.stddev;
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("save_norm_stats: cannot open " + path);
  }
  f << j.dump(2) << "\n";
}

inline NormStats load_norm_stats(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::runtime_error("load_norm_stats: cannot open " + path);
  }
  nlohmann::json j;
  f >> j;
  NormStats stats;
  stats.format =
      j.at("format").get<std::string>() == "mic" ? ArrayFormat::kMic : ArrayFormat::kFoa;
  stats.mean = j.at("mean").get<std::vector<double>>();
  stats.stddev = j.at("std").get<std::vector<double>>();
  return stats;
}

// Feature files: a magic line, one JSON header line (shape, dtype, format,
// stats path), then the float32 little-endian payload in channel-major order.
inline void save_feature_tensor(const FeatureTensor& feats, const std::string& path,
                                const std::string& stats_ref = "") {
  const std::size_t C = feats.num_channels();
  const std::size_t T = feats.num_frames();
  const std::size_t B = C > 0 && T > 0 ? feats.data[0][0].size() : 0;
  nlohmann::json header;
  header["shape"] = {C, T, B};
  header["dtype"] = "float32";
  header["byte_order"] = "little";
  header["format"] = array_format_name(feats.format);
  header["stats"] = stats_ref;

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("save_feature_tensor: cannot open " + path);
  }
  f << "SELDFEAT1\n" << header.dump() << "\n";
  std::vector<float> row(B);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t b = 0; b < B; ++b) {
        row[b] = static_cast<float>(feats.data[c][t][b]);
      }
      f.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  if (!f) {
    throw std::runtime_error("save_feature_tensor: write failure on " + path);
  }
}

inline FeatureTensor load_feature_tensor(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("load_feature_tensor: cannot open " + path);
  }
  std::string magic, header_line;
  std::getline(f, magic);
  if (magic != "SELDFEAT1") {
    throw std::runtime_error("load_feature_tensor: bad magic in " + path);
  }
  std::getline(f, header_line);
  const nlohmann::json header = nlohmann::json::parse(header_line);
  const auto shape = header.at("shape").get<std::vector<std::size_t>>();
  if (shape.size() != 3) {
    throw std::runtime_error("load_feature_tensor: bad shape in " + path);
  }
  FeatureTensor feats;
  feats.format = header.at("format").get<std::string>() == "mic" ? ArrayFormat::kMic
                                                                 : ArrayFormat::kFoa;
  feats.data.assign(shape[0], std::vector<std::vector<double>>(
                                  shape[1], std::vector<double>(shape[2])));
  std::vector<float> row(shape[2]);
  for (std::size_t c = 0; c < shape[0]; ++c) {
    for (std::size_t t = 0; t < shape[1]; ++t) {
      f.read(reinterpret_cast<char*>(row.data()),
             static_cast<std::streamsize>(row.size() * sizeof(float)));
      if (!f) {
        throw std::runtime_error("load_feature_tensor: truncated payload in " + path);
      }
      for (std::size_t b = 0; b < shape[2]; ++b) feats.data[c][t][b] = row[b];
    }
  }
  return feats;
}

}  // namespace seldkit

#endif  // SELDKIT_FEATURES_HPP
