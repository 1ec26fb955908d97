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

// Significands, leading digits and equidistribution metrics over atomic
// distributions on [0,1).

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "benfrag/enumeration.hpp"

namespace benfrag {

// S in [1, base) with x = S * base^e; S within 1e-12 of base snaps to 1.
double significand(double x, int base = 10);

// Mass of atoms with residue <= s, s in [0,1].
double cdf_mod1(const WeightedMod1Distribution& dist, double s);

// sup_s |F(s) - s|, taking both one-sided limits at every atom.
double ks_to_uniform(const WeightedMod1Distribution& dist);

// sup over subintervals [a,b] of [0,1] of |mass([a,b]) - (b - a)|.
//
// With G(s) = F(s) - s this is max G - min G over both one-sided limits:
// mass and length both total 1, so the excess on a wrapping arc equals the
// deficit on the complementary ordinary interval. The value is therefore
// invariant under rotations of the residues.
double star_discrepancy(const WeightedMod1Distribution& dist);

// sup_s |F_a(s) - F_b(s)| between two atomic distributions. Atoms whose
// residues lie within `tolerance` of the current location are treated as
// coincident, since merged residues are only resolved to that precision.
double cdf_distance(const WeightedMod1Distribution& a, const WeightedMod1Distribution& b,
                    double tolerance = kResidueMergeTolerance);

// log_base((d+1)/d) for d = 1..base-1.
std::vector<double> benford_digit_probabilities(int base = 10);

// Mass per leading digit: residue r maps to d iff log_B d <= r < log_B(d+1).
std::vector<double> leading_digit_histogram(const WeightedMod1Distribution& dist, int base = 10);

// sum_d (f_d - e_d)^2 / e_d against the Benford probabilities.
double chi2_vs_benford(std::span<const double> freqs, int base = 10);

enum class EmpiricalVerdict { ConsistentWithBenford, Inconsistent };

std::string to_string(EmpiricalVerdict v);

inline constexpr double kDefaultKsThreshold = 0.02;

// Boundary inclusive.
EmpiricalVerdict empirical_verdict(double ks, double ks_threshold = kDefaultKsThreshold);

struct BenfordReport {
  double ks = 0.0;
  double star_discrepancy = 0.0;
  std::vector<double> leading_digits;
  double chi2 = 0.0;
  std::size_t distinct_residues = 0;
  EmpiricalVerdict verdict = EmpiricalVerdict::Inconsistent;
  double ks_threshold = kDefaultKsThreshold;
  int base = 10;
};

BenfordReport make_report(const WeightedMod1Distribution& dist, int base = 10,
                          double ks_threshold = kDefaultKsThreshold);

// JSON object with keys ks, star_discrepancy, leading_digits, chi2,
// distinct_residues, verdict, ks_threshold, base.
std::string report_json(const BenfordReport& report);

// `digit,frequency,benford_expected`.
void write_digits_csv(std::ostream& out, const BenfordReport& report);

}  // namespace benfrag
