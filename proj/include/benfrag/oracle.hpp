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

// Reference implementations that check the enumeration engine: full tree
// expansion, and exact residue classes for all-rational exponents.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "benfrag/enumeration.hpp"
#include "benfrag/model.hpp"

namespace benfrag {

inline constexpr std::uint64_t kBruteForceGuard = 10'000'000;

// All m^N leaf lengths (L = 1), depth-first with children in order p_1..p_m.
struct LeafList {
  std::vector<double> lengths;
};

// m^N as a saturating count.
std::uint64_t leaf_count(int N, int m);

// Throws ResourceLimitError when m^N exceeds `guard`.
LeafList brute_force_leaves(const ProportionVector& model, int N,
                            std::uint64_t guard = kBruteForceGuard);

void write_leaves_csv(std::ostream& out, const LeafList& leaves);

// Residue classes of log_B A_k mod 1 when every y_i = a_i / b_i. With
// S_i = k_1 + ... + k_i and D = lcm(b_1, ..., b_{m-1}),
//
//   log_B A_k = sum_i S_i a_i / b_i + N log_B p_m,
//
// so each residue is frac(offset + n / D) for an integer class n in [0, D).
struct ResidueClass {
  std::int64_t numerator;
  double mass;
};

struct RationalResidues {
  std::int64_t denominator_lcm = 1;
  double base_offset = 0.0;
  std::vector<ResidueClass> classes;  // ascending numerator, reachable classes only

  std::size_t count() const { return classes.size(); }
  double residue(const ResidueClass& c) const;
};

// frac(N log_B p_m), the constant shared by every stick after N stages.
double rational_base_offset(const ProportionVector& model, int N, int base = 10);

// Exact reachable classes with their masses. Masses use the uniform-over-
// sticks measure, or the length-weighted measure when `proportions` (the
// full p_1..p_m) is given. Throws ConfigError for an empty exponent list
// and ResourceLimitError when (N+1) * lcm exceeds the state budget.
RationalResidues exact_residues_rational(std::span<const Rational> y, int N, double base_offset,
                                         std::span<const double> proportions = {});

// Number of reachable classes only, in O(m N lcm).
std::size_t exact_residue_count(std::span<const Rational> y, int N);

// Extracts the exact exponents; throws ConfigError if any is presumed irrational.
std::vector<Rational> rational_exponents(const ExponentClassification& classification);

// `numerator,denominator_lcm,mass`.
void write_residues_csv(std::ostream& out, const RationalResidues& residues);

struct CrossCheckReport {
  std::uint64_t leaves = 0;
  std::size_t brute_atoms = 0;
  std::size_t exact_atoms = 0;
  double max_deviation = 0.0;
  bool passed = false;
};

inline constexpr double kCrossCheckTolerance = 1e-9;

// Compares the brute-force leaf tally with exact_distribution after merging
// residues within 1e-9 on both sides; passes iff every aligned atom mass
// differs by at most 1e-9.
CrossCheckReport cross_check(const ProportionVector& model, int N, int base, Measure measure,
                             std::uint64_t guard = kBruteForceGuard);

}  // namespace benfrag
