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

#include "benfrag/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <ostream>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// (N + 1) * lcm states per layer.
constexpr std::uint64_t kResidueStateBudget = 50'000'000;

struct ClassSetup {
  std::int64_t lcm = 1;
  std::vector<std::int64_t> step;  // a_i * (lcm / b_i) mod lcm
};

ClassSetup setup_classes(std::span<const Rational> y, int N) {
  if (y.empty()) throw ConfigError("at least one exponent is required");
  if (N < 0) throw ConfigError("N must be non-negative");
  ClassSetup s;
  for (const auto& r : y) {
    const std::int64_t g = std::gcd(s.lcm, r.den());
    std::int64_t next;
    if (__builtin_mul_overflow(s.lcm / g, r.den(), &next)) {
      throw ResourceLimitError("lcm of exponent denominators overflows 64 bits");
    }
    s.lcm = next;
  }
  if (static_cast<unsigned __int128>(s.lcm) * (static_cast<unsigned>(N) + 1) > kResidueStateBudget) {
    throw ResourceLimitError(fmt::format(
        "residue classes: lcm {} times N+1 = {} exceeds the state budget", s.lcm, N + 1));
  }
  for (const auto& r : y) {
    const __int128 c = static_cast<__int128>(r.num()) * (s.lcm / r.den());
    std::int64_t m = static_cast<std::int64_t>(c % s.lcm);
    if (m < 0) m += s.lcm;
    s.step.push_back(m);
  }
  return s;
}

// (S * step) mod lcm without overflow.
std::int64_t term(std::int64_t S, std::int64_t step, std::int64_t lcm) {
  return static_cast<std::int64_t>((static_cast<__int128>(S % lcm) * step) % lcm);
}

}  // namespace

std::uint64_t leaf_count(int N, int m) {
  unsigned __int128 c = 1;
  for (int i = 0; i < N; ++i) {
    c *= static_cast<unsigned>(m);
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

LeafList brute_force_leaves(const ProportionVector& model, int N, std::uint64_t guard) {
  if (N < 0) throw ConfigError("N must be non-negative");
  const auto m = static_cast<int>(model.parts());
  const std::uint64_t count = leaf_count(N, m);
  if (count > guard) {
    throw ResourceLimitError(
        fmt::format("{}^{} leaves exceed the brute-force guard of {}", m, N, guard));
  }
  LeafList out;
  out.lengths = {1.0};
  out.lengths.reserve(count);
  std::vector<double> next;
  next.reserve(count);
  for (int stage = 0; stage < N; ++stage) {
    next.clear();
    for (double len : out.lengths) {
      for (double p : model.values()) next.push_back(len * p);
    }
    out.lengths.swap(next);
  }
  return out;
}

void write_leaves_csv(std::ostream& out, const LeafList& leaves) {
  out << "leaf_index,length\n";
  for (std::size_t i = 0; i < leaves.lengths.size(); ++i) {
    out << fmt::format("{},{:.17g}\n", i, leaves.lengths[i]);
  }
}

double RationalResidues::residue(const ResidueClass& c) const {
  return frac01(static_cast<long double>(base_offset) +
                static_cast<long double>(c.numerator) / static_cast<long double>(denominator_lcm));
}

double rational_base_offset(const ProportionVector& model, int N, int base) {
  return frac01(static_cast<long double>(N) *
                log_base(static_cast<long double>(model.values().back()), base));
}

RationalResidues exact_residues_rational(std::span<const Rational> y, int N, double base_offset,
                                         std::span<const double> proportions) {
  const ClassSetup s = setup_classes(y, N);
  const std::size_t m = y.size() + 1;
  const bool length_weighted = !proportions.empty();
  if (length_weighted && proportions.size() != m) {
    throw ConfigError("length-weighted residues need all m proportions");
  }
  const auto L = static_cast<std::size_t>(s.lcm);
  const auto width = static_cast<std::size_t>(N) + 1;
  std::vector<double> ln_fact(width);
  for (std::size_t i = 0; i < width; ++i) ln_fact[i] = std::lgamma(static_cast<double>(i) + 1.0);

  // cur[S * L + r]: log of the summed weight of prefixes with partial sum S
  // and class r. Weights accumulate prod_i p_i^{k_i} / k_i!.
  std::vector<double> cur(width * L, kNegInf), nxt(width * L, kNegInf);
  cur[0] = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::fill(nxt.begin(), nxt.end(), kNegInf);
    const double ln_p = length_weighted ? std::log(proportions[i]) : 0.0;
    for (std::size_t S = 0; S < width; ++S) {
      const auto shift = static_cast<std::size_t>(term(static_cast<std::int64_t>(S), s.step[i], s.lcm));
      for (std::size_t prev = 0; prev <= S; ++prev) {
        const std::size_t k = S - prev;
        const double w = -ln_fact[k] + static_cast<double>(k) * ln_p;
        for (std::size_t r = 0; r < L; ++r) {
          const double from = cur[prev * L + r];
          if (from == kNegInf) continue;
          std::size_t to = r + shift;
          if (to >= L) to -= L;
          double& slot = nxt[S * L + to];
          slot = log_add_exp(slot, from + w);
        }
      }
    }
    cur.swap(nxt);
  }
  std::vector<double> by_class(L, kNegInf);
  const double ln_m = std::log(static_cast<double>(m));
  const double ln_p_last = length_weighted ? std::log(proportions[m - 1]) : 0.0;
  for (std::size_t S = 0; S < width; ++S) {
    const std::size_t k_last = width - 1 - S;
    double w = ln_fact[width - 1] - ln_fact[k_last];
    w += length_weighted ? static_cast<double>(k_last) * ln_p_last : -static_cast<double>(N) * ln_m;
    for (std::size_t r = 0; r < L; ++r) {
      if (cur[S * L + r] == kNegInf) continue;
      by_class[r] = log_add_exp(by_class[r], cur[S * L + r] + w);
    }
  }
  RationalResidues out;
  out.denominator_lcm = s.lcm;
  out.base_offset = base_offset;
  for (std::size_t r = 0; r < L; ++r) {
    if (by_class[r] == kNegInf) continue;
    out.classes.push_back({static_cast<std::int64_t>(r), std::exp(by_class[r])});
  }
  return out;
}

std::size_t exact_residue_count(std::span<const Rational> y, int N) {
  const ClassSetup s = setup_classes(y, N);
  const std::size_t m = y.size() + 1;
  const auto L = static_cast<std::size_t>(s.lcm);
  const auto width = static_cast<std::size_t>(N) + 1;
  // reach[S * L + r] for the current layer; prefix[r] is the OR over S' <= S.
  std::vector<char> cur(width * L, 0), nxt(width * L, 0), prefix(L);
  cur[0] = 1;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::fill(nxt.begin(), nxt.end(), 0);
    std::fill(prefix.begin(), prefix.end(), 0);
    for (std::size_t S = 0; S < width; ++S) {
      for (std::size_t r = 0; r < L; ++r) prefix[r] |= cur[S * L + r];
      const auto shift = static_cast<std::size_t>(term(static_cast<std::int64_t>(S), s.step[i], s.lcm));
      for (std::size_t r = 0; r < L; ++r) {
        if (!prefix[r]) continue;
        std::size_t to = r + shift;
        if (to >= L) to -= L;
        nxt[S * L + to] = 1;
      }
    }
    cur.swap(nxt);
  }
  std::vector<char> seen(L, 0);
  for (std::size_t S = 0; S < width; ++S) {
    for (std::size_t r = 0; r < L; ++r) seen[r] |= cur[S * L + r];
  }
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
}

std::vector<Rational> rational_exponents(const ExponentClassification& classification) {
  std::vector<Rational> out;
  for (const auto& e : classification.entries) {
    if (!e.rational) throw ConfigError("exact residues need every exponent to be rational");
    out.push_back(e.value);
  }
  return out;
}

void write_residues_csv(std::ostream& out, const RationalResidues& residues) {
  out << "numerator,denominator_lcm,mass\n";
  for (const auto& c : residues.classes) {
    out << fmt::format("{},{},{:.17g}\n", c.numerator, residues.denominator_lcm, c.mass);
  }
}

CrossCheckReport cross_check(const ProportionVector& model, int N, int base, Measure measure,
                             std::uint64_t guard) {
  const LeafList leaves = brute_force_leaves(model, N, guard);
  const double uniform_log_mass = -std::log(static_cast<double>(leaves.lengths.size()));
  std::vector<LogAtom> brute;
  brute.reserve(leaves.lengths.size());
  for (double len : leaves.lengths) {
    const double residue = frac01(log_base(static_cast<long double>(len), base));
    brute.push_back({residue, measure == Measure::UniformOverSticks ? uniform_log_mass : std::log(len)});
  }
  const auto lhs = merge_log_atoms(std::move(brute), kCrossCheckTolerance);

  const auto exact = exact_distribution(model, N, base, measure);
  std::vector<LogAtom> relog;
  for (const auto& a : exact.atoms()) relog.push_back({a.residue, a.mass > 0 ? std::log(a.mass) : kNegInf});
  const auto rhs = merge_log_atoms(std::move(relog), kCrossCheckTolerance);

  CrossCheckReport report;
  report.leaves = leaves.lengths.size();
  report.brute_atoms = lhs.size();
  report.exact_atoms = rhs.size();
  std::size_t i = 0, j = 0;
  while (i < lhs.size() || j < rhs.size()) {
    double dev;
    if (i < lhs.size() && j < rhs.size() &&
        std::abs(lhs[i].residue - rhs[j].residue) <= kCrossCheckTolerance) {
      dev = std::abs(lhs[i++].mass - rhs[j++].mass);
    } else if (j >= rhs.size() || (i < lhs.size() && lhs[i].residue < rhs[j].residue)) {
      dev = lhs[i++].mass;
    } else {
      dev = rhs[j++].mass;
    }
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.passed = report.max_deviation <= kCrossCheckTolerance;
  return report;
}

}  // namespace benfrag
