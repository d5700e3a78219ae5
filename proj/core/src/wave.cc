// core/src/wave.cc

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

#include "sedkit/wave.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "sedkit/common.h"

namespace sedkit {

namespace {

void PutU32(std::ostream &os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void PutU16(std::ostream &os, uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  os.write(b, 2);
}

uint32_t GetU32(std::istream &is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char *>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t GetU16(std::istream &is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char *>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

Waveform PadOrCrop(const Waveform &w, int64_t n) {
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples = w.samples;
  out.samples.resize(n, 0.0f);
  return out;
}

double PeakAbs(const Waveform &w) {
  double peak = 0.0;
  for (float s : w.samples) peak = std::max(peak, std::abs(static_cast<double>(s)));
  return peak;
}

double Rms(const Waveform &w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (float s : w.samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / w.samples.size());
}

void WriteWav(const std::string &path, const Waveform &w) {
  std::ofstream os(path, std::ios::binary);
  SEDKIT_CHECK(os.good(), DataError, "cannot open for write: " + path);
  uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  PutU32(os, 16);
  PutU16(os, 1);  // PCM
  PutU16(os, 1);  // mono
  PutU32(os, static_cast<uint32_t>(w.sample_rate));
  PutU32(os, static_cast<uint32_t>(w.sample_rate * 2));
  PutU16(os, 2);
  PutU16(os, 16);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (float s : w.samples) {
    double clipped = std::clamp(static_cast<double>(s), -1.0, 1.0);
    int v = static_cast<int>(std::lrint(clipped * 32767.0));
    PutU16(os, static_cast<uint16_t>(v));
  }
  SEDKIT_CHECK(os.good(), DataError, "write failed: " + path);
}

Waveform ReadWav(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  SEDKIT_CHECK(is.good(), DataError, "cannot open: " + path);
  char tag[4];
  is.read(tag, 4);
  SEDKIT_CHECK(is.good() && std::memcmp(tag, "RIFF", 4) == 0, DataError,
               "not a RIFF file: " + path);
  GetU32(is);
  is.read(tag, 4);
  SEDKIT_CHECK(is.good() && std::memcmp(tag, "WAVE", 4) == 0, DataError,
               "not a WAVE file: " + path);

  Waveform w;
  bool have_fmt = false, have_data = false;
  while (is.read(tag, 4)) {
    uint32_t chunk = GetU32(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      uint16_t format = GetU16(is);
      uint16_t channels = GetU16(is);
      uint32_t rate = GetU32(is);
      GetU32(is);
      GetU16(is);
      uint16_t bits = GetU16(is);
      SEDKIT_CHECK(format == 1 && channels == 1 && bits == 16, DataError,
                   "expected 16-bit PCM mono: " + path);
      w.sample_rate = static_cast<int>(rate);
      if (chunk > 16) is.seekg(chunk - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      SEDKIT_CHECK(have_fmt, DataError, "data chunk before fmt: " + path);
      size_t n = chunk / 2;
      w.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t v = static_cast<int16_t>(GetU16(is));
        w.samples[i] = static_cast<float>(v) / 32767.0f;
      }
      SEDKIT_CHECK(is.good(), DataError, "truncated data chunk: " + path);
      have_data = true;
      break;
    } else {
      is.seekg(chunk + (chunk & 1), std::ios::cur);
    }
  }
  SEDKIT_CHECK(have_data, DataError, "no data chunk: " + path);
  return w;
}

void WriteSsf(const std::string &path, const Waveform &w) {
  std::ofstream os(path, std::ios::binary);
  SEDKIT_CHECK(os.good(), DataError, "cannot open for write: " + path);
  os.write("SSF0", 4);
  PutU32(os, static_cast<uint32_t>(w.sample_rate));
  static_assert(sizeof(float) == 4);
  os.write(reinterpret_cast<const char *>(w.samples.data()),
           static_cast<std::streamsize>(w.samples.size() * 4));
  SEDKIT_CHECK(os.good(), DataError, "write failed: " + path);
}

Waveform ReadSsf(const std::string &path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  SEDKIT_CHECK(is.good(), DataError, "cannot open: " + path);
  std::streamsize bytes = is.tellg();
  SEDKIT_CHECK(bytes >= 8 && (bytes - 8) % 4 == 0, DataError,
               "malformed SSF0 file: " + path);
  is.seekg(0);
  char magic[4];
  is.read(magic, 4);
  SEDKIT_CHECK(std::memcmp(magic, "SSF0", 4) == 0, DataError,
               "bad SSF0 magic: " + path);
  Waveform w;
  w.sample_rate = static_cast<int>(GetU32(is));
  w.samples.resize((bytes - 8) / 4);
  is.read(reinterpret_cast<char *>(w.samples.data()), bytes - 8);
  SEDKIT_CHECK(is.good(), DataError, "truncated SSF0 file: " + path);
  return w;
}

uint32_t WaveformCrc32(const Waveform &w) {
  uLong crc = crc32(0L, Z_NULL, 0);
  if (!w.samples.empty()) {
    crc = crc32(crc, reinterpret_cast<const Bytef *>(w.samples.data()),
                static_cast<uInt>(w.samples.size() * 4));
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace sedkit
