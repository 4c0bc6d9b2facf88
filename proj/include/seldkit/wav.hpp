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

#ifndef SELDKIT_WAV_HPP
#define SELDKIT_WAV_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seldkit/common.hpp"

namespace seldkit {

enum class WavSampleFormat { kFloat32, kPcm16 };

namespace detail {

inline void put_u32(std::string& s, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  s.append(b, 4);
}

inline void put_u16(std::string& s, std::uint16_t v) {
  char b[2];
  std::memcpy(b, &v, 2);
  s.append(b, 2);
}

inline std::uint32_t get_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

inline std::uint16_t get_u16(const char* p) {
  std::uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

}  // namespace detail

// Writes an interleaved RIFF/WAVE file. Channels must be equal length.
inline void write_wav(const std::string& path, const AudioBlock& audio,
                      WavSampleFormat format = WavSampleFormat::kFloat32) {
  const std::size_t num_ch = audio.num_channels();
  if (num_ch == 0) {
    throw std::invalid_argument("write_wav: no channels: " + path);
  }
  const std::size_t num_frames = audio.num_frames();
  for (const auto& ch : audio.channels) {
    if (ch.size() != num_frames) {
      throw std::invalid_argument("write_wav: ragged channels: " + path);
    }
  }

  const bool is_float = format == WavSampleFormat::kFloat32;
  const std::uint16_t bytes_per_sample = is_float ? 4 : 2;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(num_frames * num_ch * bytes_per_sample);
  const std::uint32_t sample_rate = static_cast<std::uint32_t>(std::lround(audio.fs));

  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  detail::put_u32(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  detail::put_u32(out, 16);
  detail::put_u16(out, is_float ? 3 : 1);  // IEEE float / integer PCM
  detail::put_u16(out, static_cast<std::uint16_t>(num_ch));
  detail::put_u32(out, sample_rate);
  detail::put_u32(out, sample_rate * num_ch * bytes_per_sample);
  detail::put_u16(out, static_cast<std::uint16_t>(num_ch * bytes_per_sample));
  detail::put_u16(out, static_cast<std::uint16_t>(8 * bytes_per_sample));
  out.append("data");
  detail::put_u32(out, data_bytes);

  if (is_float) {
    for (std::size_t i = 0; i < num_frames; ++i) {
      for (std::size_t c = 0; c < num_ch; ++c) {
        const float v = static_cast<float>(audio.channels[c][i]);
        char b[4];
        std::memcpy(b, &v, 4);
        out.append(b, 4);
      }
    }
  } else {
    for (std::size_t i = 0; i < num_frames; ++i) {
      for (std::size_t c = 0; c < num_ch; ++c) {
        const double clamped = std::clamp(audio.channels[c][i], -1.0, 1.0);
        const std::int16_t v =
            static_cast<std::int16_t>(std::lround(clamped * 32767.0));
        char b[2];
        std::memcpy(b, &v, 2);
        out.append(b, 2);
      }
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("write_wav: cannot open for writing: " + path);
  }
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) {
    throw std::runtime_error("write_wav: short write: " + path);
  }
}

// Reads a RIFF/WAVE file holding IEEE float32 or 16-bit PCM samples.
// Unknown chunks are skipped; both samples are mapped to double in [-1, 1].
inline AudioBlock read_wav(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("read_wav: cannot open: " + path);
  }
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);
  }

  std::uint16_t fmt_code = 0;
  std::uint16_t num_ch = 0;
  std::uint16_t bits = 0;
  std::uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const std::uint32_t len = detail::get_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size()) {
      throw std::runtime_error("read_wav: truncated chunk '" + id + "': " + path);
    }
    if (id == "fmt ") {
      if (len < 16) {
        throw std::runtime_error("read_wav: fmt chunk too small: " + path);
      }
      fmt_code = detail::get_u16(bytes.data() + body);
      num_ch = detail::get_u16(bytes.data() + body + 2);
      sample_rate = detail::get_u32(bytes.data() + body + 4);
      bits = detail::get_u16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (id == "data") {
      data_off = body;
      data_len = len;
    }
    pos = body + len + (len % 2);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) {
    throw std::runtime_error("read_wav: missing fmt or data chunk: " + path);
  }
  if (num_ch == 0 || sample_rate == 0) {
    throw std::runtime_error("read_wav: invalid fmt fields: " + path);
  }
  const bool is_float = fmt_code == 3 && bits == 32;
  const bool is_pcm16 = fmt_code == 1 && bits == 16;
  if (!is_float && !is_pcm16) {
    throw std::runtime_error("read_wav: unsupported sample format: " + path);
  }

  const std::size_t bytes_per_sample = is_float ? 4 : 2;
  const std::size_t frame_bytes = bytes_per_sample * num_ch;
  const std::size_t num_frames = data_len / frame_bytes;

  AudioBlock audio;
  audio.fs = static_cast<double>(sample_rate);
  audio.channels.assign(num_ch, std::vector<double>(num_frames, 0.0));
  const char* p = bytes.data() + data_off;
  for (std::size_t i = 0; i < num_frames; ++i) {
    for (std::size_t c = 0; c < num_ch; ++c) {
      if (is_float) {
        float v;
        std::memcpy(&v, p, 4);
        audio.channels[c][i] = static_cast<double>(v);
        p += 4;
      } else {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        audio.channels[c][i] = static_cast<double>(v) / 32767.0;
        p += 2;
      }
    }
  }
  return audio;
}

}  // namespace seldkit

#endif  // SELDKIT_WAV_HPP
