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

#include "benfrag/model_config.hpp"

#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

using nlohmann::json;

namespace {

Exponent parse_exponent(const json& entry) {
  if (!entry.is_object() || entry.size() != 1) {
    throw ConfigError("each exponent must be {\"rational\": [a, b]} or {\"real\": x}");
  }
  if (entry.contains("rational")) {
    const json& r = entry.at("rational");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
      throw ConfigError("\"rational\" must be an array of two integers");
    }
    return Rational(r[0].get<std::int64_t>(), r[1].get<std::int64_t>());
  }
  if (entry.contains("real")) {
    const json& x = entry.at("real");
    if (!x.is_number()) throw ConfigError("\"real\" must be a number");
    return x.get<double>();
  }
  throw ConfigError("each exponent must be {\"rational\": [a, b]} or {\"real\": x}");
}

}  // namespace

ExponentSpec ModelConfig::exponents_in(int base) const {
  if (exponents && exponents->base == base) return *exponents;
  return exponents_from_proportions(model, base);
}

ModelConfig parse_model_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const bool has_p = doc.contains("proportions");
  const bool has_y = doc.contains("exponents");
  if (has_p == has_y) {
    throw ConfigError("config must contain exactly one of \"proportions\" and \"exponents\"");
  }
  try {
    if (has_p) {
      if (doc.contains("base")) throw ConfigError("\"base\" only applies to \"exponents\"");
      const json& arr = doc.at("proportions");
      if (!arr.is_array()) throw ConfigError("\"proportions\" must be an array");
      std::vector<double> p;
      for (const auto& x : arr) {
        if (!x.is_number()) throw ConfigError("proportions must be numbers");
        p.push_back(x.get<double>());
      }
      CompensatedSum<double> sum;
      for (double x : p) sum.add(x);
      // A complete vector (already summing to 1) is accepted as is.
      if (p.size() >= 2 && std::abs(sum.value() - 1.0) <= ProportionVector::kNormalizationSlack) {
        return ModelConfig{ProportionVector::from_full(std::move(p)), std::nullopt};
      }
      return ModelConfig{make_model(p), std::nullopt};
    }
    const json& arr = doc.at("exponents");
    if (!arr.is_array()) throw ConfigError("\"exponents\" must be an array");
    ExponentSpec spec;
    if (doc.contains("base")) {
      if (!doc.at("base").is_number_integer()) throw ConfigError("\"base\" must be an integer");
      spec.base = doc.at("base").get<int>();
    }
    for (const auto& e : arr) spec.y.push_back(parse_exponent(e));
    validate(spec);
    auto model = proportions_from_exponents(spec);
    return ModelConfig{std::move(model), std::move(spec)};
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model_config(text.str());
}

}  // namespace benfrag
