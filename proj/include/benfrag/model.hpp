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

// Fixed multi-proportion fragmentation models: proportion space, exponent
// space (y_i = log_B(p_i / p_{i+1})) and rationality classification of the
// exponents.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace benfrag {

// Exact rational in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  // Throws ConfigError on a zero denominator.
  Rational(std::int64_t numerator, std::int64_t denominator);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double value_ld() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(const Rational& r);

// Split proportions p_1..p_m, each strictly inside (0,1), summing to 1.
class ProportionVector {
 public:
  // Tolerated |sum - 1| before renormalizing; anything larger is rejected.
  static constexpr double kNormalizationSlack = 1e-12;

  // Validates a complete vector and renormalizes it by its sum.
  static ProportionVector from_full(std::vector<double> p);

  std::span<const double> values() const { return p_; }
  std::size_t parts() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

 private:
  explicit ProportionVector(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

// One exponent: either exact (from configuration) or a measured real value.
using Exponent = std::variant<Rational, double>;

long double real_value(const Exponent& y);

struct ExponentSpec {
  std::vector<Exponent> y;  // m - 1 entries
  int base = 10;
};

// Validates base >= 2 and finite exponents; throws ConfigError.
void validate(const ExponentSpec& spec);

struct ExponentVerdict {
  bool rational = false;
  Rational value;              // meaningful when rational
  Rational witness;            // best convergent examined
  double witness_error = 0.0;  // |y - witness|
  std::int64_t search_bound = 0;
};

struct ExponentClassification {
  std::vector<ExponentVerdict> entries;
  std::int64_t max_denominator = 0;
  double tolerance = 0.0;
};

enum class BenfordPrediction { Benford, NonBenford };

std::string to_string(BenfordPrediction v);

inline constexpr std::int64_t kDefaultMaxDenominator = 10'000;
inline constexpr double kDefaultTolerance = 1e-12;

// Completes p_1..p_{m-1} with p_m = 1 - sum.
ProportionVector make_model(std::span<const double> leading);

// y_i = log_base(p_i / p_{i+1}), i = 1..m-1, as real values.
ExponentSpec exponents_from_proportions(const ProportionVector& model, int base = 10);

// Inverse map: p_m = 1 / (1 + sum_i prod_{j>=i} B^{y_j}), then back-substitution.
// Throws ConfigError when a ratio over- or underflows double precision.
ProportionVector proportions_from_exponents(const ExponentSpec& spec);

// Exact entries pass through; real entries are expanded into continued
// fractions and the first convergent a/b with b <= max_denominator and
// |y - a/b| <= tolerance makes the entry rational.
ExponentClassification classify_rationality(const ExponentSpec& spec,
                                            std::int64_t max_denominator = kDefaultMaxDenominator,
                                            double tolerance = kDefaultTolerance);

// Benford iff at least one exponent is presumed irrational.
BenfordPrediction predict_benford(const ExponentClassification& classification);

}  // namespace benfrag
