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

// Test-only reference computations, written without touching the library
// code paths they are used to check.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace benfrag::testing {

// All weak compositions of N into m parts by recursion, in the same
// reverse-lexicographic order the stream promises.
inline std::vector<std::vector<int>> all_compositions(int N, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(static_cast<std::size_t>(m));
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      k[pos] = left;
      out.push_back(k);
      return;
    }
    for (int v = left; v >= 0; --v) {
      k[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, N);
  return out;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Exact multinomial for N <= 20.
inline std::uint64_t multinomial(const std::vector<int>& k) {
  int N = 0;
  for (int v : k) N += v;
  std::uint64_t r = factorial(N);
  for (int v : k) r /= factorial(v);
  return r;
}

// Random proportions bounded away from 0 so every leaf length is a normal double.
inline std::vector<double> random_simplex(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(static_cast<std::size_t>(m));
  double total = 0;
  for (double& x : p) total += (x = u(rng));
  for (double& x : p) x /= total;
  return p;
}

}  // namespace benfrag::testing
