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

#include "benfrag/benford.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <json.hpp>
#include <ostream>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

double significand(double x, int base) {
  if (!std::isfinite(x) || x <= 0.0) throw ConfigError("significand needs a finite positive value");
  if (base < 2) throw ConfigError("base must be at least 2");
  const long double r = frac01(log_base(static_cast<long double>(x), base));
  double s = static_cast<double>(std::pow(static_cast<long double>(base), r));
  if (s < 1.0 || base - s <= 1e-12) s = 1.0;
  return s;
}

double cdf_mod1(const WeightedMod1Distribution& dist, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw ConfigError("cdf argument must lie in [0,1]");
  CompensatedSum<double> sum;
  for (const auto& a : dist.atoms()) {
    if (a.residue > s) break;
    sum.add(a.mass);
  }
  return sum.value();
}

double ks_to_uniform(const WeightedMod1Distribution& dist) {
  double sup = 0.0;
  CompensatedSum<double> cdf;
  for (const auto& a : dist.atoms()) {
    sup = std::max(sup, std::abs(cdf.value() - a.residue));
    cdf.add(a.mass);
    sup = std::max(sup, std::abs(cdf.value() - a.residue));
  }
  // Just below s = 1 the CDF equals the total mass.
  sup = std::max(sup, std::abs(cdf.value() - 1.0));
  return sup;
}

double star_discrepancy(const WeightedMod1Distribution& dist) {
  // G(0-) = 0 and G(1) = total - 1 bound the range too.
  double hi = 0.0, lo = 0.0;
  CompensatedSum<double> cdf;
  for (const auto& a : dist.atoms()) {
    double before = cdf.value() - a.residue;
    cdf.add(a.mass);
    double after = cdf.value() - a.residue;
    hi = std::max({hi, before, after});
    lo = std::min({lo, before, after});
  }
  const double end = cdf.value() - 1.0;
  hi = std::max(hi, end);
  lo = std::min(lo, end);
  return hi - lo;
}

double cdf_distance(const WeightedMod1Distribution& a, const WeightedMod1Distribution& b,
                    double tolerance) {
  auto xa = a.atoms();
  auto xb = b.atoms();
  CompensatedSum<double> fa, fb;
  double sup = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xa.size() || j < xb.size()) {
    const double r = std::min(i < xa.size() ? xa[i].residue : 2.0, j < xb.size() ? xb[j].residue : 2.0);
    sup = std::max(sup, std::abs(fa.value() - fb.value()));
    while (i < xa.size() && xa[i].residue <= r + tolerance) fa.add(xa[i++].mass);
    while (j < xb.size() && xb[j].residue <= r + tolerance) fb.add(xb[j++].mass);
    sup = std::max(sup, std::abs(fa.value() - fb.value()));
  }
  return sup;
}

std::vector<double> benford_digit_probabilities(int base) {
  if (base < 2) throw ConfigError("base must be at least 2");
  std::vector<double> out;
  for (int d = 1; d < base; ++d) {
    out.push_back(static_cast<double>(log_base(static_cast<long double>(d + 1) / d, base)));
  }
  return out;
}

std::vector<double> leading_digit_histogram(const WeightedMod1Distribution& dist, int base) {
  if (base < 2) throw ConfigError("base must be at least 2");
  // Lower residue bound of each digit; digit 1 starts at 0.
  std::vector<double> lower;
  for (int d = 1; d < base; ++d) {
    lower.push_back(static_cast<double>(log_base(static_cast<long double>(d), base)));
  }
  std::vector<CompensatedSum<double>> sums(static_cast<std::size_t>(base - 1));
  for (const auto& a : dist.atoms()) {
    auto it = std::upper_bound(lower.begin(), lower.end(), a.residue);
    sums[static_cast<std::size_t>(it - lower.begin()) - 1].add(a.mass);
  }
  std::vector<double> out;
  for (const auto& s : sums) out.push_back(s.value());
  return out;
}

double chi2_vs_benford(std::span<const double> freqs, int base) {
  const auto expected = benford_digit_probabilities(base);
  if (freqs.size() != expected.size()) {
    throw ConfigError(fmt::format("expected {} digit frequencies, got {}", expected.size(), freqs.size()));
  }
  double chi2 = 0.0;
  for (std::size_t d = 0; d < expected.size(); ++d) {
    double diff = freqs[d] - expected[d];
    chi2 += diff * diff / expected[d];
  }
  return chi2;
}

std::string to_string(EmpiricalVerdict v) {
  return v == EmpiricalVerdict::ConsistentWithBenford ? "ConsistentWithBenford" : "Inconsistent";
}

EmpiricalVerdict empirical_verdict(double ks, double ks_threshold) {
  return ks <= ks_threshold ? EmpiricalVerdict::ConsistentWithBenford
                            : EmpiricalVerdict::Inconsistent;
}

BenfordReport make_report(const WeightedMod1Distribution& dist, int base, double ks_threshold) {
  BenfordReport r;
  r.base = base;
  r.ks_threshold = ks_threshold;
  r.ks = ks_to_uniform(dist);
  r.star_discrepancy = star_discrepancy(dist);
  r.leading_digits = leading_digit_histogram(dist, base);
  r.chi2 = chi2_vs_benford(r.leading_digits, base);
  r.distinct_residues = dist.size();
  r.verdict = empirical_verdict(r.ks, ks_threshold);
  return r;
}

std::string report_json(const BenfordReport& report) {
  nlohmann::ordered_json j;
  j["ks"] = report.ks;
  j["star_discrepancy"] = report.star_discrepancy;
  j["leading_digits"] = report.leading_digits;
  j["chi2"] = report.chi2;
  j["distinct_residues"] = report.distinct_residues;
  j["verdict"] = to_string(report.verdict);
  j["ks_threshold"] = report.ks_threshold;
  j["base"] = report.base;
  return j.dump(2);
}

void write_digits_csv(std::ostream& out, const BenfordReport& report) {
  const auto expected = benford_digit_probabilities(report.base);
  out << "digit,frequency,benford_expected\n";
  for (std::size_t d = 0; d < report.leading_digits.size(); ++d) {
    out << fmt::format("{},{:.17g},{:.17g}\n", d + 1, report.leading_digits[d], expected[d]);
  }
}

}  // namespace benfrag
