// Copyright 2026 The benfrag Authors
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

#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "benfrag/model.hpp"

namespace benfrag {

// A model as read from a configuration file, either
//   {"proportions": [p_1, ..., p_{m-1}]}   (p_m completes the sum; a full
//                                           m-vector summing to 1 is also accepted)
// or
//   {"exponents": [{"rational": [a, b]} | {"real": x}, ...], "base": 10}
struct ModelConfig {
  ProportionVector model;
  std::optional<ExponentSpec> exponents;

  // The configured exponents when they were given in `base`, otherwise the
  // real exponents derived from the proportions.
  ExponentSpec exponents_in(int base) const;
};

// Throws ConfigError on malformed input.
ModelConfig parse_model_config(std::string_view json_text);
ModelConfig load_model_config(const std::filesystem::path& path);

}  // namespace benfrag
