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

// Small numeric helpers shared by the enumeration, oracle and sampling code.

#pragma once

#include <cmath>
#include <limits>

namespace benfrag {

// log_base(x). Base 10 goes through log10l so that exact powers of ten
// round-trip.
inline long double log_base(long double x, int base) {
  if (base == 10) return std::log10(x);
  if (base == 2) return std::log2(x);
  return std::log(x) / std::log(static_cast<long double>(base));
}

// Fractional part mapped into [0, 1).
inline double frac01(long double x) {
  long double r = x - std::floor(x);
  double d = static_cast<double>(r);
  if (d >= 1.0 || d < 0.0) d = 0.0;
  return d;
}

// log(exp(a) + exp(b)) without overflow; -inf is the additive identity.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Neumaier's compensated summation.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{0};
  T comp_{0};
};

}  // namespace benfrag
