// core/src/checkpoint.cc

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

#include "sedkit/checkpoint.h"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sedkit/common.h"

namespace sedkit {
namespace nn {

namespace {

constexpr char kMagic[5] = {'S', 'E', 'D', 'M', '1'};

void PutU32(std::ostream &os, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

void PutU64(std::ostream &os, uint64_t v) {
  PutU32(os, static_cast<uint32_t>(v & 0xffffffffULL));
  PutU32(os, static_cast<uint32_t>(v >> 32));
}

uint32_t GetU32(std::istream &is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char *>(b), 4);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t GetU64(std::istream &is) {
  uint64_t lo = GetU32(is);
  uint64_t hi = GetU32(is);
  return lo | (hi << 32);
}

void WriteFloats(std::ostream &os, const std::vector<float> &v) {
  static_assert(sizeof(float) == 4);
  os.write(reinterpret_cast<const char *>(v.data()),
           static_cast<std::streamsize>(v.size() * 4));
}

std::vector<float> ReadFloats(std::istream &is, size_t n) {
  std::vector<float> v(n);
  is.read(reinterpret_cast<char *>(v.data()),
          static_cast<std::streamsize>(n * 4));
  return v;
}

nlohmann::json ConfigToJson(const ModelConfig &cfg) {
  return nlohmann::json{{"conv_blocks", cfg.conv_blocks},
                        {"channels", cfg.channels},
                        {"pool_factor", cfg.pool_factor},
                        {"activation", ToString(cfg.activation)},
                        {"recurrent_hidden", cfg.recurrent_hidden},
                        {"classes", cfg.classes},
                        {"pooling_head", ToString(cfg.pooling_head)},
                        {"n_mels", cfg.n_mels}};
}

ModelConfig ConfigFromJson(const nlohmann::json &j) {
  ModelConfig cfg;
  cfg.conv_blocks = j.at("conv_blocks").get<int>();
  cfg.channels = j.at("channels").get<std::vector<int>>();
  cfg.pool_factor = j.at("pool_factor").get<int>();
  cfg.activation = ActivationFromString(j.at("activation").get<std::string>());
  cfg.recurrent_hidden = j.at("recurrent_hidden").get<int>();
  cfg.classes = j.at("classes").get<int>();
  cfg.pooling_head =
      PoolingHeadFromString(j.at("pooling_head").get<std::string>());
  cfg.n_mels = j.at("n_mels").get<int>();
  return cfg;
}

}  // namespace

void SaveCheckpoint(const std::string &path, const ModelState<float> &state,
                    const AdamState<float> *opt) {
  std::ofstream os(path, std::ios::binary);
  SEDKIT_CHECK(os.good(), DataError, "cannot open for write: " + path);
  os.write(kMagic, 5);
  const std::string header = ConfigToJson(state.config).dump();
  PutU32(os, static_cast<uint32_t>(header.size()));
  os.write(header.data(), static_cast<std::streamsize>(header.size()));
  PutU64(os, state.params.size());
  WriteFloats(os, state.params);
  if (opt != nullptr && !opt->m.empty()) {
    os.put(1);
    WriteFloats(os, opt->m);
    WriteFloats(os, opt->v);
    PutU64(os, static_cast<uint64_t>(opt->t));
  } else {
    os.put(0);
  }
  SEDKIT_CHECK(os.good(), DataError, "write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  SEDKIT_CHECK(is.good(), DataError, "cannot open: " + path);
  char magic[5];
  is.read(magic, 5);
  SEDKIT_CHECK(is.good() && std::memcmp(magic, kMagic, 5) == 0, DataError,
               "bad checkpoint magic: " + path);
  const uint32_t header_len = GetU32(is);
  std::string header(header_len, '\0');
  is.read(header.data(), header_len);
  SEDKIT_CHECK(is.good(), DataError, "truncated checkpoint header: " + path);

  Checkpoint ckpt;
  try {
    ckpt.state.config = ConfigFromJson(nlohmann::json::parse(header));
  } catch (const nlohmann::json::exception &e) {
    throw DataError("bad checkpoint config: " + std::string(e.what()));
  }
  const uint64_t n = GetU64(is);
  const ParamLayout layout = ParamLayout::FromConfig(ckpt.state.config);
  SEDKIT_CHECK(n == static_cast<uint64_t>(layout.total), DataError,
               "checkpoint parameter count does not match config");
  ckpt.state.params = ReadFloats(is, n);
  SEDKIT_CHECK(is.good(), DataError, "truncated checkpoint params: " + path);
  const int has_adam = is.get();
  if (has_adam == 1) {
    AdamState<float> opt;
    opt.m = ReadFloats(is, n);
    opt.v = ReadFloats(is, n);
    opt.t = static_cast<int64_t>(GetU64(is));
    SEDKIT_CHECK(is.good(), DataError, "truncated checkpoint moments: " + path);
    ckpt.opt = std::move(opt);
  }
  return ckpt;
}

}  // namespace nn
}  // namespace sedkit
