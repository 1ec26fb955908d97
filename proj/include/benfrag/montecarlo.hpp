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

// Path sampling of leaf residues, for stage counts beyond exact enumeration
// and for models whose proportions are redrawn at every split.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "benfrag/enumeration.hpp"
#include "benfrag/model.hpp"

namespace benfrag {

// Every split uses the same proportions.
struct FixedProportions {
  ProportionVector model;
};

// Every split draws fresh proportions from a Dirichlet distribution with the
// given concentration parameters (one per part).
struct RandomProportions {
  std::vector<double> concentration;
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::uint64_t samples = 1;
  std::variant<RandomProportions, FixedProportions> mode;  // set before use
  Measure measure = Measure::UniformOverSticks;
};

// std::mt19937_64 seeded per block through std::seed_seq{seed, block}; both
// are fully specified by the standard, so streams match across platforms.
inline constexpr std::string_view kGeneratorName = "mt19937_64/seed_seq(seed_lo,seed_hi,block_lo,block_hi)";
// Samples per independently seeded block.
inline constexpr std::uint64_t kSampleBlock = 8192;

struct SampleResult {
  std::vector<double> residues;  // in sample order
  WeightedMod1Distribution distribution;
};

// Throws ConfigError for an invalid configuration.
void validate(const SamplerConfig& config);

// Walks one root-to-leaf path of N splits per sample. Fixed proportions:
// the child is uniform among m (uniform measure) or drawn with probability
// p_j (length measure). Random proportions: a fresh vector is drawn per
// split and the child is chosen the same way. The residue stream depends
// only on (config, N, base), never on `threads`.
SampleResult sample_leaf_residues(const SamplerConfig& config, int N, int base = 10,
                                  unsigned threads = 1);

// Equal-mass atoms merged within kResidueMergeTolerance.
WeightedMod1Distribution empirical_distribution(const std::vector<double>& residues,
                                                Measure measure, int stages, int parts);

// `sample_index,residue`.
void write_samples_csv(std::ostream& out, const std::vector<double>& residues);

}  // namespace benfrag
