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

#include "benfrag/model.hpp"

#include <cmath>
#include <fmt/format.h>
#include <numeric>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw ConfigError("rational exponent with zero denominator");
  if (numerator == std::numeric_limits<std::int64_t>::min() ||
      denominator == std::numeric_limits<std::int64_t>::min()) {
    throw ConfigError("rational exponent out of range");
  }
  std::int64_t g = std::gcd(numerator, denominator);
  numerator /= g;
  denominator /= g;
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  num_ = numerator;
  den_ = denominator;
}

std::string to_string(const Rational& r) { return fmt::format("{}/{}", r.num(), r.den()); }

std::string to_string(BenfordPrediction v) {
  return v == BenfordPrediction::Benford ? "Benford" : "NonBenford";
}

ProportionVector ProportionVector::from_full(std::vector<double> p) {
  if (p.size() < 2) throw ConfigError("a model needs at least two proportions");
  CompensatedSum<double> sum;
  for (double x : p) {
    if (!std::isfinite(x) || x <= 0.0 || x >= 1.0) {
      throw ConfigError(fmt::format("proportion {} is not inside (0,1)", x));
    }
    sum.add(x);
  }
  double total = sum.value();
  if (std::abs(total - 1.0) > kNormalizationSlack) {
    throw ConfigError(fmt::format("proportions sum to {:.17g}, not 1", total));
  }
  if (total != 1.0) {
    for (double& x : p) x /= total;
  }
  return ProportionVector(std::move(p));
}

ProportionVector make_model(std::span<const double> leading) {
  if (leading.empty()) throw ConfigError("at least one proportion is required");
  CompensatedSum<double> sum;
  for (double x : leading) {
    if (!std::isfinite(x) || x <= 0.0 || x >= 1.0) {
      throw ConfigError(fmt::format("proportion {} is not inside (0,1)", x));
    }
    sum.add(x);
  }
  double last = 1.0 - sum.value();
  if (!(last > 0.0)) {
    throw ConfigError(fmt::format("proportions sum to {:.17g} >= 1", sum.value()));
  }
  std::vector<double> p(leading.begin(), leading.end());
  p.push_back(last);
  return ProportionVector::from_full(std::move(p));
}

long double real_value(const Exponent& y) {
  if (const auto* r = std::get_if<Rational>(&y)) return r->value_ld();
  return std::get<double>(y);
}

void validate(const ExponentSpec& spec) {
  if (spec.base < 2) throw ConfigError("base must be at least 2");
  if (spec.y.empty()) throw ConfigError("at least one exponent is required");
  for (const auto& y : spec.y) {
    if (!std::isfinite(static_cast<double>(real_value(y)))) {
      throw ConfigError("exponents must be finite");
    }
  }
}

ExponentSpec exponents_from_proportions(const ProportionVector& model, int base) {
  if (base < 2) throw ConfigError("base must be at least 2");
  ExponentSpec spec;
  spec.base = base;
  auto p = model.values();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    long double ratio = static_cast<long double>(p[i]) / static_cast<long double>(p[i + 1]);
    spec.y.emplace_back(static_cast<double>(log_base(ratio, base)));
  }
  return spec;
}

ProportionVector proportions_from_exponents(const ExponentSpec& spec) {
  validate(spec);
  const std::size_t m = spec.y.size() + 1;
  const long double ln_base = std::log(static_cast<long double>(spec.base));
  // log(p_i / p_m) = ln B * sum_{j >= i} y_j
  std::vector<long double> log_rel(m, 0.0L);
  for (std::size_t i = m - 1; i-- > 0;) {
    log_rel[i] = log_rel[i + 1] + real_value(spec.y[i]) * ln_base;
  }
  const long double limit = std::log(static_cast<long double>(std::numeric_limits<double>::max())) - 1;
  const long double floor = std::log(static_cast<long double>(std::numeric_limits<double>::min()));
  long double max_rel = 0.0L;
  for (long double l : log_rel) {
    if (l > limit || l < -limit) throw ConfigError("exponent ratios overflow double precision");
    max_rel = std::max(max_rel, l);
  }
  // Normalize relative to the largest proportion so the sum never overflows.
  long double total = 0.0L;
  for (long double l : log_rel) total += std::exp(l - max_rel);
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) {
    long double log_p = log_rel[i] - max_rel - std::log(total);
    if (log_p < floor) throw ConfigError("exponent ratios underflow double precision");
    p[i] = static_cast<double>(std::exp(log_p));
    if (!(p[i] > 0.0 && p[i] < 1.0)) {
      throw ConfigError("exponents produce a proportion that is not inside (0,1)");
    }
  }
  return ProportionVector::from_full(std::move(p));
}

namespace {

ExponentVerdict classify_real(long double y, std::int64_t max_denominator, long double tolerance) {
  ExponentVerdict v;
  v.search_bound = max_denominator;
  // Convergent recurrences h_n = a_n h_{n-1} + h_{n-2}, k_n = a_n k_{n-1} + k_{n-2}.
  std::int64_t h_prev = 1, h_prev2 = 0;
  std::int64_t k_prev = 0, k_prev2 = 1;
  long double x = y;
  bool have_witness = false;
  for (int iter = 0; iter < 96; ++iter) {
    long double a_ld = std::floor(x);
    if (std::abs(a_ld) > 9.0e18L) break;
    auto a = static_cast<std::int64_t>(a_ld);
    std::int64_t h, k, t;
    if (__builtin_mul_overflow(a, h_prev, &t) || __builtin_add_overflow(t, h_prev2, &h)) break;
    if (__builtin_mul_overflow(a, k_prev, &t) || __builtin_add_overflow(t, k_prev2, &k)) break;
    if (k > max_denominator) break;
    long double err = std::abs(y - static_cast<long double>(h) / static_cast<long double>(k));
    v.witness = Rational(h, k);
    v.witness_error = static_cast<double>(err);
    have_witness = true;
    if (err <= tolerance) {
      v.rational = true;
      v.value = v.witness;
      return v;
    }
    long double rem = x - a_ld;
    if (rem <= 0.0L) break;
    x = 1.0L / rem;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  if (!have_witness) {
    // Only reachable for |y| beyond int64; report the nearest integer.
    v.witness_error = static_cast<double>(std::abs(y - std::round(y)));
  }
  return v;
}

}  // namespace

ExponentClassification classify_rationality(const ExponentSpec& spec,
                                            std::int64_t max_denominator, double tolerance) {
  if (max_denominator < 1) throw ConfigError("max_denominator must be at least 1");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  validate(spec);
  ExponentClassification out;
  out.max_denominator = max_denominator;
  out.tolerance = tolerance;
  for (const auto& y : spec.y) {
    if (const auto* r = std::get_if<Rational>(&y)) {
      ExponentVerdict v;
      v.rational = true;
      v.value = *r;
      v.witness = *r;
      v.search_bound = max_denominator;
      out.entries.push_back(v);
    } else {
      out.entries.push_back(classify_real(std::get<double>(y), max_denominator, tolerance));
    }
  }
  return out;
}

BenfordPrediction predict_benford(const ExponentClassification& classification) {
  for (const auto& e : classification.entries) {
    if (!e.rational) return BenfordPrediction::Benford;
  }
  return BenfordPrediction::NonBenford;
}

}  // namespace benfrag
