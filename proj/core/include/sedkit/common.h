// core/include/sedkit/common.h

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

#ifndef SEDKIT_COMMON_H_
#define SEDKIT_COMMON_H_

#include <stdexcept>
#include <string>

namespace sedkit {

// Error taxonomy shared by the library and the CLI. The CLI maps these onto
// process exit codes (config 2, data 3, numerical 4).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SEDKIT_CHECK(cond, exc, msg)        \
  do {                                      \
    if (!(cond)) throw exc(std::string(msg)); \
  } while (0)

}  // namespace sedkit

#endif  // SEDKIT_COMMON_H_
