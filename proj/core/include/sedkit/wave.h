// core/include/sedkit/wave.h

// Copyright 2026  The sedkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEDKIT_WAVE_H_
#define SEDKIT_WAVE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace sedkit {

// Mono sample buffer. All waveform transforms act on this unit.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 16000;

  int64_t size() const { return static_cast<int64_t>(samples.size()); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

// Zero-pads or crops at the tail to exactly n samples.
Waveform PadOrCrop(const Waveform &w, int64_t n);

double PeakAbs(const Waveform &w);
double Rms(const Waveform &w);

// 16-bit PCM mono RIFF/WAVE. Reading anything else raises DataError.
void WriteWav(const std::string &path, const Waveform &w);
Waveform ReadWav(const std::string &path);

// Raw float32 little-endian format: 8-byte header (magic "SSF0",
// uint32 sample rate), then the samples.
void WriteSsf(const std::string &path, const Waveform &w);
Waveform ReadSsf(const std::string &path);

// CRC32 (zlib polynomial) of the sample buffer's float32 bytes; used as the
// per-clip checksum in dataset sidecars.
uint32_t WaveformCrc32(const Waveform &w);

}  // namespace sedkit

#endif  // SEDKIT_WAVE_H_
