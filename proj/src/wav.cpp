// Copyright 2026 The maxfs-cs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "maxfs/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace maxfs {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<unsigned char>((v >> (8 * k)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::int16_t to_pcm16(double v) {
  const double s = std::nearbyint(v * 32768.0);
  return static_cast<std::int16_t>(std::clamp(s, -32768.0, 32767.0));
}

}  // namespace

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError(path + ": cannot open for reading");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError(path + ": not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  WavData wav;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || avail < 16) throw WavError(path + ": truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      wav.sample_rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible && size >= 40 && avail >= 40) {
        format = le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw WavError(path + ": data chunk before fmt chunk");
      if (format != kFormatPcm || bits != 16 || channels != 1) {
        throw WavError(path + ": unsupported format (format tag " +
                       std::to_string(format) + ", " + std::to_string(channels) +
                       " channel(s), " + std::to_string(bits) +
                       " bits); expected 16-bit PCM mono");
      }
      // Some writers leave the size at 0 or too large when streaming.
      const std::size_t len = std::min<std::size_t>(size == 0 ? avail : size, avail);
      const std::size_t count = len / 2;
      wav.samples.resize(static_cast<Index>(count));
      const unsigned char* d = bytes.data() + body;
      for (std::size_t i = 0; i < count; ++i) {
        wav.samples[static_cast<Index>(i)] =
            static_cast<std::int16_t>(le16(d + 2 * i)) / 32768.0;
      }
      return wav;
    }
    pos = body + size + (size & 1u);
  }
  throw WavError(path + (have_fmt ? ": no data chunk" : ": no fmt chunk"));
}

void write_wav(const std::string& path, const RealVector& samples,
               std::uint32_t sample_rate) {
  require_finite(samples, "write_wav");
  const auto data_bytes = static_cast<std::uint32_t>(2 * samples.size());
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, sample_rate);
  put32(out, sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (Index i = 0; i < samples.size(); ++i) {
    put16(out, static_cast<std::uint16_t>(to_pcm16(samples[i])));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw WavError(path + ": cannot open for writing");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw WavError(path + ": write failed");
}

RealVector quantize_pcm16(const RealVector& samples) {
  RealVector q(samples.size());
  for (Index i = 0; i < samples.size(); ++i) q[i] = to_pcm16(samples[i]) / 32768.0;
  return q;
}

}  // namespace maxfs
