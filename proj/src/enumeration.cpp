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

#include "benfrag/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>
#include <thread>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

std::string to_string(Measure m) {
  return m == Measure::UniformOverSticks ? "uniform" : "length";
}

Measure parse_measure(std::string_view name) {
  if (name == "uniform") return Measure::UniformOverSticks;
  if (name == "length") return Measure::LengthWeighted;
  throw ConfigError(fmt::format("unknown measure '{}' (expected uniform or length)", name));
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

CompositionStream::CompositionStream(int N, int m) : CompositionStream(N, m, N, 0) {}

CompositionStream::CompositionStream(int N, int m, int leading_high, int leading_low)
    : n_(N), low_(leading_low) {
  if (m < 2) throw ConfigError("compositions need m >= 2");
  if (N < 0) throw ConfigError("compositions need N >= 0");
  if (leading_low < 0 || leading_high > N || leading_low > leading_high) {
    throw ConfigError("invalid leading-part range");
  }
  k_.assign(static_cast<std::size_t>(m), 0);
  k_[0] = leading_high;
  k_[1] = N - leading_high;
}

bool CompositionStream::next() {
  if (done_) return false;
  const int m = static_cast<int>(k_.size());
  int i = m - 2;
  while (i >= 0 && k_[i] == 0) --i;
  if (i < 0) {
    done_ = true;
    return false;
  }
  int tail = 0;
  for (int j = i + 1; j < m; ++j) {
    tail += k_[j];
    k_[j] = 0;
  }
  --k_[i];
  k_[i + 1] = tail + 1;
  if (k_[0] < low_) {
    done_ = true;
    return false;
  }
  return true;
}

std::vector<LeadingRange> split_by_leading_part(int N, int m, unsigned parts) {
  parts = std::max(1u, parts);
  const std::uint64_t total = composition_count(N, m);
  std::vector<LeadingRange> out;
  std::uint64_t acc = 0;
  int high = N;
  for (int v = N; v >= 0; --v) {
    acc += composition_count(N - v, m - 1);
    const std::uint64_t target =
        static_cast<std::uint64_t>((static_cast<long double>(total) * (out.size() + 1)) / parts);
    if (v == 0 || (acc >= target && out.size() + 1 < parts)) {
      out.push_back({high, v});
      high = v - 1;
    }
  }
  return out;
}

double log_multinomial(int N, std::span<const int> k) {
  double r = std::lgamma(static_cast<double>(N) + 1.0);
  for (int kj : k) r -= std::lgamma(static_cast<double>(kj) + 1.0);
  return r;
}

AtomEvaluator::AtomEvaluator(const ProportionVector& model, int N, int base) : n_(N) {
  if (N < 0) throw ConfigError("N must be non-negative");
  if (base < 2) throw ConfigError("base must be at least 2");
  for (double p : model.values()) {
    log_b_p_.push_back(log_base(static_cast<long double>(p), base));
    ln_p_.push_back(std::log(p));
  }
  log_factorial_.resize(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) log_factorial_[i] = std::lgamma(static_cast<double>(i) + 1.0);
  n_ln_m_ = static_cast<double>(N) * std::log(static_cast<double>(model.parts()));
}

double AtomEvaluator::residue(std::span<const int> k) const {
  CompensatedSum<long double> sum;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] != 0) sum.add(static_cast<long double>(k[j]) * log_b_p_[j]);
  }
  return frac01(sum.value());
}

CompositionAtom AtomEvaluator::operator()(std::span<const int> k) const {
  double log_multi = log_factorial_[n_];
  CompensatedSum<double> log_len;
  for (std::size_t j = 0; j < k.size(); ++j) {
    log_multi -= log_factorial_[k[j]];
    if (k[j] != 0) log_len.add(static_cast<double>(k[j]) * ln_p_[j]);
  }
  return {residue(k), log_multi - n_ln_m_, log_multi + log_len.value()};
}

CompositionAtom atom_for(const ProportionVector& model, std::span<const int> k, int base) {
  if (k.size() != model.parts()) throw ConfigError("composition and model differ in m");
  int N = 0;
  for (int kj : k) {
    if (kj < 0) throw ConfigError("composition parts must be non-negative");
    N += kj;
  }
  return AtomEvaluator(model, N, base)(k);
}

std::vector<Mod1Atom> merge_log_atoms(std::vector<LogAtom> atoms, double tolerance) {
  for (auto& a : atoms) {
    if (a.residue >= 1.0 - tolerance) a.residue = 0.0;
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const LogAtom& a, const LogAtom& b) { return a.residue < b.residue; });
  std::vector<Mod1Atom> out;
  std::size_t i = 0;
  while (i < atoms.size()) {
    const double anchor = atoms[i].residue;
    std::size_t j = i;
    double max_log = -std::numeric_limits<double>::infinity();
    while (j < atoms.size() && atoms[j].residue - anchor <= tolerance) {
      max_log = std::max(max_log, atoms[j].log_mass);
      ++j;
    }
    double mass = 0.0;
    if (max_log > -std::numeric_limits<double>::infinity()) {
      CompensatedSum<double> scaled;
      for (std::size_t t = i; t < j; ++t) scaled.add(std::exp(atoms[t].log_mass - max_log));
      mass = std::exp(max_log + std::log(scaled.value()));
    }
    out.push_back({anchor, mass});
    i = j;
  }
  return out;
}

WeightedMod1Distribution::WeightedMod1Distribution(std::vector<Mod1Atom> atoms, Measure measure,
                                                   int stages, int parts)
    : atoms_(std::move(atoms)), measure_(measure), stages_(stages), parts_(parts) {
  for (const auto& a : atoms_) {
    if (!(a.residue >= 0.0 && a.residue < 1.0)) {
      throw ConfigError(fmt::format("residue {} outside [0,1)", a.residue));
    }
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) {
      throw ConfigError(fmt::format("invalid atom mass {}", a.mass));
    }
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Mod1Atom& a, const Mod1Atom& b) { return a.residue < b.residue; });
}

double WeightedMod1Distribution::total_mass() const {
  CompensatedSum<double> s;
  for (const auto& a : atoms_) s.add(a.mass);
  return s.value();
}

double WeightedMod1Distribution::max_atom_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m = std::max(m, a.mass);
  return m;
}

WeightedMod1Distribution WeightedMod1Distribution::rotated(double shift) const {
  std::vector<Mod1Atom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    out.push_back({frac01(static_cast<long double>(a.residue) + shift), a.mass});
  }
  return WeightedMod1Distribution(std::move(out), measure_, stages_, parts_);
}

namespace {

// Above this many compositions each leading-part block is merged on its own
// before the final merge, so memory follows the number of distinct residues.
constexpr std::uint64_t kCompactThreshold = std::uint64_t{1} << 22;

void collect_block(const AtomEvaluator& eval, int N, int m, int high, int low, Measure measure,
                   std::vector<LogAtom>& out) {
  CompositionStream stream(N, m, high, low);
  do {
    const auto atom = eval(stream.current());
    out.push_back({atom.residue, measure == Measure::UniformOverSticks ? atom.log_mass_uniform
                                                                      : atom.log_mass_length});
  } while (stream.next());
}

void collect_range(const AtomEvaluator& eval, int N, int m, LeadingRange range, Measure measure,
                   bool compact, double tolerance, std::vector<LogAtom>& out) {
  if (!compact) {
    collect_block(eval, N, m, range.high, range.low, measure, out);
    return;
  }
  std::vector<LogAtom> block;
  for (int lead = range.high; lead >= range.low; --lead) {
    block.clear();
    collect_block(eval, N, m, lead, lead, measure, block);
    for (const auto& a : merge_log_atoms(block, tolerance)) {
      out.push_back({a.residue, a.mass > 0.0 ? std::log(a.mass)
                                             : -std::numeric_limits<double>::infinity()});
    }
  }
}

}  // namespace

WeightedMod1Distribution exact_distribution(const ProportionVector& model, int N, int base,
                                            Measure measure, const ExactOptions& options) {
  if (N < 0) throw ConfigError("N must be non-negative");
  const int m = static_cast<int>(model.parts());
  const std::uint64_t count = composition_count(N, m);
  if (count > options.cap) {
    throw ResourceLimitError(fmt::format(
        "N={} with m={} has {} compositions, above the cap of {}; use sampling instead", N, m,
        count, options.cap));
  }
  const AtomEvaluator eval(model, N, base);
  const auto ranges = split_by_leading_part(N, m, options.threads);
  const bool compact = count > kCompactThreshold;
  const double tol = options.merge_tolerance;
  std::vector<std::vector<LogAtom>> chunks(ranges.size());
  if (ranges.size() == 1) {
    if (!compact) chunks[0].reserve(count);
    collect_range(eval, N, m, ranges[0], measure, compact, tol, chunks[0]);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < ranges.size(); ++t) {
      workers.emplace_back([&, t] { 
        collect_range(eval, N, m, ranges[t], measure, compact, tol, chunks[t]);
      });
    }
  }
  std::vector<LogAtom> all;
  for (auto& c : chunks) {
    all.insert(all.end(), c.begin(), c.end());
    std::vector<LogAtom>().swap(c);
  }
  return WeightedMod1Distribution(merge_log_atoms(std::move(all), options.merge_tolerance),
                                  measure, N, m);
}

void write_distribution_csv(std::ostream& out, const WeightedMod1Distribution& dist) {
  out << "residue,mass\n";
  for (const auto& a : dist.atoms()) out << fmt::format("{:.17g},{:.17g}\n", a.residue, a.mass);
}

}  // namespace benfrag
