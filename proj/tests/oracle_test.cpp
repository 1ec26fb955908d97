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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "benfrag/errors.hpp"
#include "test_support.hpp"

namespace benfrag {
namespace {

// Residue numerators mod lcm by plain enumeration of compositions.
std::set<std::int64_t> classes_by_enumeration(const std::vector<Rational>& y, int N) {
  std::int64_t L = 1;
  for (const auto& r : y) L = std::lcm(L, r.den());
  std::set<std::int64_t> out;
  for (const auto& k : testing::all_compositions(N, static_cast<int>(y.size()) + 1)) {
    std::int64_t S = 0, acc = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      S += k[i];
      acc += S * y[i].num() * (L / y[i].den());
    }
    out.insert(((acc % L) + L) % L);
  }
  return out;
}

const std::vector<std::vector<Rational>>& appendix_rational_configs() {
  static const std::vector<std::vector<Rational>> configs = {
      {Rational(-1, 3), Rational(-1, 2)},
      {Rational(-1, 4), Rational(-1, 6)},
      {Rational(-1, 2), Rational(-1, 3), Rational(-1, 4)},
      {Rational(-1, 4), Rational(-1, 2), Rational(-1, 6)},
  };
  return configs;
}

TEST(BruteForceLeaves, Examples) {
  auto two = brute_force_leaves(ProportionVector::from_full({0.3, 0.7}), 2);
  ASSERT_EQ(two.lengths.size(), 4u);
  const double expected[] = {0.09, 0.21, 0.21, 0.49};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(two.lengths[i], expected[i], 1e-16);

  auto zero = brute_force_leaves(ProportionVector::from_full({0.3, 0.7}), 0);
  EXPECT_EQ(zero.lengths, std::vector<double>{1.0});

  auto tri = brute_force_leaves(ProportionVector::from_full({0.3, 0.3, 0.4}), 2);
  ASSERT_EQ(tri.lengths.size(), 9u);
  std::vector<double> sorted = tri.lengths;
  std::sort(sorted.begin(), sorted.end());
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) distinct += sorted[i] - sorted[i - 1] > 1e-15;
  // Six compositions, but p_1 = p_2 leaves only 0.09 (x4), 0.12 (x4) and 0.16.
  EXPECT_EQ(composition_count(2, 3), 6u);
  EXPECT_EQ(distinct, 3u);
}

TEST(BruteForceLeaves, GuardAndErrors) {
  auto model = ProportionVector::from_full({0.3, 0.7});
  EXPECT_THROW(brute_force_leaves(model, 24), ResourceLimitError);
  EXPECT_THROW(brute_force_leaves(model, 5, 31), ResourceLimitError);
  EXPECT_NO_THROW(brute_force_leaves(model, 5, 32));
  EXPECT_THROW(brute_force_leaves(model, -1), ConfigError);
}

TEST(BruteForceLeaves, LengthConservation) {
  std::mt19937_64 rng(21);
  for (int m = 2; m <= 3; ++m) {
    auto model = ProportionVector::from_full(testing::random_simplex(rng, m));
    for (int N = 0; N <= 14; ++N) {
      auto leaves = brute_force_leaves(model, N);
      ASSERT_EQ(leaves.lengths.size(), leaf_count(N, m));
      long double total = 0;
      for (double l : leaves.lengths) total += l;
      EXPECT_NEAR(static_cast<double>(total), 1.0, 1e-9) << m << "," << N;
    }
  }
}

TEST(BruteForceLeaves, DistinctLengthsForGenericProportions) {
  std::mt19937_64 rng(22);
  for (int m = 2; m <= 4; ++m) {
    auto model = ProportionVector::from_full(testing::random_simplex(rng, m));
    for (int N = 0; N <= 7; ++N) {
      auto leaves = brute_force_leaves(model, N);
      std::sort(leaves.lengths.begin(), leaves.lengths.end());
      std::size_t distinct = leaves.lengths.empty() ? 0 : 1;
      for (std::size_t i = 1; i < leaves.lengths.size(); ++i) {
        distinct += leaves.lengths[i] / leaves.lengths[i - 1] - 1 > 1e-12;
      }
      EXPECT_EQ(distinct, composition_count(N, m)) << m << "," << N;
    }
  }
}

TEST(ExactResidues, Examples) {
  const std::vector<Rational> y = {Rational(-1, 3), Rational(-1, 2)};
  EXPECT_EQ(exact_residue_count(y, 6), 6u);
  auto full = exact_residues_rational(y, 6, 0.0);
  EXPECT_EQ(full.count(), 6u);
  EXPECT_EQ(full.denominator_lcm, 6);

  const std::vector<Rational> zero = {Rational(0, 1)};
  for (int N : {0, 1, 17, 500}) {
    EXPECT_EQ(exact_residue_count(zero, N), 1u);
    EXPECT_EQ(exact_residues_rational(zero, N, 0.25).count(), 1u);
  }
  EXPECT_THROW(exact_residue_count(std::vector<Rational>{}, 3), ConfigError);
  EXPECT_THROW(exact_residue_count(y, -1), ConfigError);
}

TEST(ExactResidues, CountMatchesEnumeration) {
  // Counts by N for N = 0..12, frozen from plain enumeration.
  const std::vector<std::vector<std::size_t>> frozen = {
      {1, 3, 5, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6},
      {1, 3, 6, 9, 11, 12, 12, 12, 12, 12, 12, 12, 12},
      {1, 4, 9, 12, 12, 12, 12, 12, 12, 12, 12, 12, 12},
      {1, 4, 8, 11, 12, 12, 12, 12, 12, 12, 12, 12, 12},
  };
  const auto& configs = appendix_rational_configs();
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (int N = 0; N <= 12; ++N) {
      const auto expected = classes_by_enumeration(configs[c], N);
      ASSERT_EQ(expected.size(), frozen[c][N]);
      EXPECT_EQ(exact_residue_count(configs[c], N), expected.size());
      auto full = exact_residues_rational(configs[c], N, 0.0);
      std::set<std::int64_t> got;
      for (const auto& cl : full.classes) got.insert(cl.numerator);
      EXPECT_EQ(got, expected) << c << "," << N;
    }
  }
}

TEST(ExactResidues, BoundedByDenominatorProductAndMonotone) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Rational> y;
    std::int64_t product = 1;
    for (int i = 0; i < 1 + trial % 3; ++i) {
      y.emplace_back(num(rng), den(rng));
      product *= y.back().den();
    }
    std::size_t prev = 0;
    for (int N = 0; N <= 60; ++N) {
      const std::size_t c = exact_residue_count(y, N);
      EXPECT_LE(c, static_cast<std::size_t>(product));
      EXPECT_GE(c, prev);
      prev = c;
    }
  }
}

TEST(ExactResidues, MassesMatchEnumeratedDistribution) {
  for (const auto& y : appendix_rational_configs()) {
    ExponentSpec spec;
    for (const auto& r : y) spec.y.emplace_back(r);
    auto model = proportions_from_exponents(spec);
    for (int N : {0, 5, 40, 100}) {
      const double offset = rational_base_offset(model, N);
      for (auto measure : {Measure::UniformOverSticks, Measure::LengthWeighted}) {
        auto exact = exact_residues_rational(
            y, N, offset,
            measure == Measure::LengthWeighted ? model.values() : std::span<const double>{});
        auto dist = exact_distribution(model, N, 10, measure);
        ASSERT_EQ(exact.count(), dist.size());
        double total = 0;
        for (const auto& cl : exact.classes) {
          total += cl.mass;
          const double r = exact.residue(cl);
          auto it = std::find_if(dist.atoms().begin(), dist.atoms().end(), [&](const Mod1Atom& a) {
            const double d = std::abs(a.residue - r);
            return std::min(d, 1 - d) < 1e-9;
          });
          ASSERT_NE(it, dist.atoms().end());
          EXPECT_NEAR(it->mass, cl.mass, 1e-10);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
      }
    }
  }
}

// Above 2^22 compositions exact_distribution merges per leading part.
TEST(ExactResidues, MassesMatchCompactedEnumeration) {
  const auto y = appendix_rational_configs()[2];
  ExponentSpec spec;
  for (const auto& r : y) spec.y.emplace_back(r);
  auto model = proportions_from_exponents(spec);
  constexpr int N = 300;
  ASSERT_GT(composition_count(N, 4), std::uint64_t{1} << 22);
  auto exact = exact_residues_rational(y, N, rational_base_offset(model, N));
  auto dist = exact_distribution(model, N, 10, Measure::UniformOverSticks);
  ASSERT_EQ(exact.count(), dist.size());
  for (const auto& cl : exact.classes) {
    const double r = exact.residue(cl);
    auto it = std::find_if(dist.atoms().begin(), dist.atoms().end(), [&](const Mod1Atom& a) {
      const double d = std::abs(a.residue - r);
      return std::min(d, 1 - d) < 1e-9;
    });
    ASSERT_NE(it, dist.atoms().end());
    EXPECT_NEAR(it->mass, cl.mass, 1e-10);
  }
  ExactOptions threaded;
  threaded.threads = 3;
  auto again = exact_distribution(model, N, 10, Measure::UniformOverSticks, threaded);
  ASSERT_EQ(again.size(), dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    EXPECT_EQ(again.atoms()[i].residue, dist.atoms()[i].residue);
    EXPECT_EQ(again.atoms()[i].mass, dist.atoms()[i].mass);
  }
}

TEST(ExactResidues, RequiresRationalExponents) {
  auto c = classify_rationality({{Rational(-1, 2), -std::sqrt(2.0)}, 10});
  EXPECT_THROW(rational_exponents(c), ConfigError);
  auto d = classify_rationality({{Rational(-1, 2), -0.25}, 10});
  EXPECT_EQ(rational_exponents(d), (std::vector<Rational>{Rational(-1, 2), Rational(-1, 4)}));
}

TEST(ExactResidues, StateBudget) {
  const std::vector<Rational> y = {Rational(1, 999'983), Rational(1, 999'979)};
  EXPECT_THROW(exact_residue_count(y, 10), ResourceLimitError);
}

TEST(CrossCheck, Examples) {
  auto two = cross_check(ProportionVector::from_full({0.3, 0.7}), 10, 10, Measure::UniformOverSticks);
  EXPECT_TRUE(two.passed);
  EXPECT_LE(two.max_deviation, 1e-9);
  EXPECT_EQ(two.leaves, 1024u);
  EXPECT_EQ(two.brute_atoms, 11u);

  auto three = cross_check(ProportionVector::from_full({0.3, 0.3, 0.4}), 8, 10, Measure::LengthWeighted);
  EXPECT_TRUE(three.passed);

  auto zero = cross_check(ProportionVector::from_full({0.3, 0.3, 0.4}), 0, 10, Measure::UniformOverSticks);
  EXPECT_TRUE(zero.passed);
  EXPECT_EQ(zero.brute_atoms, 1u);
  EXPECT_EQ(zero.exact_atoms, 1u);
  EXPECT_EQ(zero.max_deviation, 0.0);

  EXPECT_THROW(cross_check(ProportionVector::from_full({0.3, 0.7}), 30, 10, Measure::UniformOverSticks),
               ResourceLimitError);
}

TEST(OracleCsv, Formats) {
  std::ostringstream leaves;
  write_leaves_csv(leaves, brute_force_leaves(ProportionVector::from_full({0.5, 0.5}), 1));
  EXPECT_EQ(leaves.str(), "leaf_index,length\n0,0.5\n1,0.5\n");

  std::ostringstream classes;
  const std::vector<Rational> zero = {Rational(0, 1)};
  write_residues_csv(classes, exact_residues_rational(zero, 3, 0.0));
  EXPECT_EQ(classes.str(), "numerator,denominator_lcm,mass\n0,1,1\n");
}

}  // namespace
}  // namespace benfrag
