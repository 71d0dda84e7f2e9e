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

// 16-bit PCM mono RIFF/WAVE reading and writing.

#ifndef MAXFS_WAV_HPP_
#define MAXFS_WAV_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "maxfs/numcore.hpp"

namespace maxfs {

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WavData {
  std::uint32_t sample_rate = 16000;
  /// Samples scaled to [-1, 1) by 1/32768.
  RealVector samples;
};

WavData read_wav(const std::string& path);

/// Samples are clipped to the int16 range after scaling by 32768 and
/// rounded to nearest.
void write_wav(const std::string& path, const RealVector& samples,
               std::uint32_t sample_rate);

/// The value write_wav followed by read_wav would return for each sample.
RealVector quantize_pcm16(const RealVector& samples);

}  // namespace maxfs

#endif  // MAXFS_WAV_HPP_
