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

// Exact enumeration of the composition lattice after N stages.
//
// After N stages the m^N sticks take the lengths p_1^{k_1} ... p_m^{k_m}
// with k a weak composition of N, each shared by N!/(k_1!...k_m!) sticks.
// Enumerating the C(N+m-1, m-1) compositions gives the exact distribution of
// log-length residues mod 1 without materializing the sticks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "benfrag/model.hpp"

namespace benfrag {

enum class Measure {
  UniformOverSticks,  // each of the m^N sticks weighs 1/m^N
  LengthWeighted,     // each stick weighs its length
};

std::string to_string(Measure m);
// Accepts "uniform" and "length".
Measure parse_measure(std::string_view name);

// C(n, k) saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

// Number of weak compositions of N into m parts.
inline std::uint64_t composition_count(int N, int m) {
  return binomial_saturating(static_cast<std::uint64_t>(N) + m - 1, static_cast<std::uint64_t>(m) - 1);
}

// Weak compositions of N into m parts in reverse-lexicographic order:
// (N,0,...,0) first, (0,...,0,N) last. The successor is computed in place.
//
// A stream may be restricted to leading parts k_1 in [low, high]; such
// sub-streams are contiguous ranges of the full order, which is what the
// parallel aggregation splits on.
class CompositionStream {
 public:
  CompositionStream(int N, int m);
  CompositionStream(int N, int m, int leading_high, int leading_low);

  bool done() const { return done_; }
  const std::vector<int>& current() const { return k_; }
  int stages() const { return n_; }
  // Advances to the next composition; returns false once exhausted.
  bool next();

 private:
  int n_;
  int low_;
  std::vector<int> k_;
  bool done_ = false;
};

// Leading-part ranges [high, low] that partition the stream into at most
// `parts` contiguous chunks of roughly equal size, in stream order.
struct LeadingRange {
  int high;
  int low;
};
std::vector<LeadingRange> split_by_leading_part(int N, int m, unsigned parts);

// ln(N! / (k_1! ... k_m!)) via log-gamma.
double log_multinomial(int N, std::span<const int> k);

// Residue and log-masses of the sticks sharing one composition.
struct CompositionAtom {
  double residue;           // frac(sum_j k_j log_B p_j)
  double log_mass_uniform;  // log_multinomial - N ln m
  double log_mass_length;   // log_multinomial + sum_j k_j ln p_j
};

// Precomputes per-model tables so atoms can be evaluated in a tight loop.
class AtomEvaluator {
 public:
  AtomEvaluator(const ProportionVector& model, int N, int base);
  CompositionAtom operator()(std::span<const int> k) const;
  // Residue only; matches operator()(k).residue bit for bit.
  double residue(std::span<const int> k) const;

 private:
  int n_;
  std::vector<long double> log_b_p_;
  std::vector<double> ln_p_;
  std::vector<double> log_factorial_;
  double n_ln_m_;
};

CompositionAtom atom_for(const ProportionVector& model, std::span<const int> k, int base = 10);

struct Mod1Atom {
  double residue;
  double mass;
};

// Unmerged atom with its mass in log space.
struct LogAtom {
  double residue;
  double log_mass;
};

inline constexpr double kResidueMergeTolerance = 1e-12;

// Sorts by residue and merges runs whose residues lie within `tolerance`
// of the run's first residue; masses of a run are combined by log-sum-exp.
// Residues within `tolerance` below 1 are wrapped to 0 first. Equal
// residues keep input order, so the output is a pure function of the input.
std::vector<Mod1Atom> merge_log_atoms(std::vector<LogAtom> atoms, double tolerance);

// Atomic probability distribution on [0,1).
class WeightedMod1Distribution {
 public:
  WeightedMod1Distribution(std::vector<Mod1Atom> atoms, Measure measure, int stages, int parts);

  std::span<const Mod1Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Measure measure() const { return measure_; }
  int stages() const { return stages_; }
  int parts() const { return parts_; }
  double total_mass() const;
  double max_atom_mass() const;

  // Rotation r -> frac(r + shift), i.e. scaling every length by B^shift.
  WeightedMod1Distribution rotated(double shift) const;

 private:
  std::vector<Mod1Atom> atoms_;
  Measure measure_;
  int stages_;
  int parts_;
};

struct ExactOptions {
  std::uint64_t cap = 100'000'000;  // maximum number of compositions
  unsigned threads = 1;
  double merge_tolerance = kResidueMergeTolerance;
};

// Throws ResourceLimitError when C(N+m-1, m-1) exceeds options.cap. Large
// enumerations are merged one leading part at a time, so memory follows the
// number of distinct residues. The result does not depend on options.threads.
WeightedMod1Distribution exact_distribution(const ProportionVector& model, int N, int base,
                                            Measure measure, const ExactOptions& options = {});

// `residue,mass` with 17 significant digits, sorted by residue.
void write_distribution_csv(std::ostream& out, const WeightedMod1Distribution& dist);

}  // namespace benfrag
