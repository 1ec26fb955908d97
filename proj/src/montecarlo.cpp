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

#include "benfrag/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <fmt/format.h>
#include <ostream>
#include <random>
#include <thread>

#include "benfrag/errors.hpp"
#include "benfrag/numeric.hpp"

namespace benfrag {

namespace {

// Draws built directly on the engine output. The standard distributions
// are implementation-defined, so they are avoided here.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t bits() { return engine_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // (0, 1]
  double uniform_open_zero() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  // Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>(engine_()) * n;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

  // Marsaglia polar method.
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

  // log of a Gamma(alpha, 1) variate (Marsaglia-Tsang); kept in log space so
  // small shapes do not underflow.
  double log_gamma_variate(double alpha) {
    if (alpha < 1.0) {
      return log_gamma_variate(alpha + 1.0) + std::log(uniform_open_zero()) / alpha;
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_open_zero();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return std::log(d) + std::log(v);
    }
  }

 private:
  std::mt19937_64 engine_;
};

class FixedWalker {
 public:
  FixedWalker(const ProportionVector& model, int N, int base, Measure measure)
      : n_(N), m_(model.parts()), measure_(measure), eval_(model, N, base), counts_(model.parts()) {
    double acc = 0.0;
    for (double p : model.values()) {
      acc += p;
      cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
  }

  double operator()(Rng& rng) {
    std::fill(counts_.begin(), counts_.end(), 0);
    if (measure_ == Measure::UniformOverSticks) {
      walk_uniform(rng);
    } else {
      for (int step = 0; step < n_; ++step) {
        const double u = rng.uniform();
        std::size_t j = 0;
        while (u >= cumulative_[j]) ++j;
        ++counts_[j];
      }
    }
    return eval_.residue(counts_);
  }

 private:
  void walk_uniform(Rng& rng) {
    if (m_ == 2) {
      // One bit per split: set bit = first child.
      int left = n_;
      while (left >= 64) {
        counts_[0] += std::popcount(rng.bits());
        left -= 64;
      }
      if (left > 0) counts_[0] += std::popcount(rng.bits() >> (64 - left));
      counts_[1] = n_ - counts_[0];
      return;
    }
    if (std::has_single_bit(m_)) {
      const int width = std::countr_zero(m_);
      const std::uint64_t mask = m_ - 1;
      std::uint64_t buffer = 0;
      int available = 0;
      for (int step = 0; step < n_; ++step) {
        if (available < width) {
          buffer = rng.bits();
          available = 64;
        }
        ++counts_[buffer & mask];
        buffer >>= width;
        available -= width;
      }
      return;
    }
    for (int step = 0; step < n_; ++step) ++counts_[rng.below(m_)];
  }

  int n_;
  std::size_t m_;
  Measure measure_;
  AtomEvaluator eval_;
  std::vector<int> counts_;
  std::vector<double> cumulative_;
};

class RandomWalker {
 public:
  RandomWalker(const RandomProportions& mode, int N, int base, Measure measure)
      : n_(N),
        measure_(measure),
        alpha_(mode.concentration),
        inv_ln_base_(1.0L / std::log(static_cast<long double>(base))),
        log_g_(alpha_.size()) {}

  double operator()(Rng& rng) {
    CompensatedSum<long double> sum;
    const std::size_t m = alpha_.size();
    for (int step = 0; step < n_; ++step) {
      double max_g = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        log_g_[j] = rng.log_gamma_variate(alpha_[j]);
        max_g = std::max(max_g, log_g_[j]);
      }
      double scaled = 0.0;
      for (std::size_t j = 0; j < m; ++j) scaled += std::exp(log_g_[j] - max_g);
      const double log_total = max_g + std::log(scaled);
      std::size_t child;
      if (measure_ == Measure::UniformOverSticks) {
        child = rng.below(m);
      } else {
        const double u = rng.uniform();
        double acc = 0.0;
        child = m - 1;
        for (std::size_t j = 0; j + 1 < m; ++j) {
          acc += std::exp(log_g_[j] - log_total);
          if (u < acc) {
            child = j;
            break;
          }
        }
      }
      sum.add(static_cast<long double>(log_g_[child] - log_total) * inv_ln_base_);
    }
    return frac01(sum.value());
  }

 private:
  int n_;
  Measure measure_;
  std::vector<double> alpha_;
  long double inv_ln_base_;
  std::vector<double> log_g_;
};

template <typename Walker>
void run_blocks(const SamplerConfig& config, std::vector<double>& out, unsigned threads,
                const std::function<Walker()>& make_walker) {
  const std::uint64_t blocks = (config.samples + kSampleBlock - 1) / kSampleBlock;
  auto worker = [&](unsigned t, unsigned stride) {
    Walker walk = make_walker();
    for (std::uint64_t b = t; b < blocks; b += stride) {
      Rng rng(config.seed, b);
      const std::uint64_t end = std::min(config.samples, (b + 1) * kSampleBlock);
      for (std::uint64_t i = b * kSampleBlock; i < end; ++i) out[i] = walk(rng);
    }
  };
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, blocks));
  if (threads == 1) {
    worker(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
}

}  // namespace

void validate(const SamplerConfig& config) {
  if (config.samples < 1) throw ConfigError("samples must be at least 1");
  if (const auto* r = std::get_if<RandomProportions>(&config.mode)) {
    if (r->concentration.size() < 2) throw ConfigError("random proportions need m >= 2");
    for (double a : r->concentration) {
      if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("concentration parameters must be positive");
    }
  }
}

SampleResult sample_leaf_residues(const SamplerConfig& config, int N, int base, unsigned threads) {
  validate(config);
  if (N < 0) throw ConfigError("N must be non-negative");
  if (base < 2) throw ConfigError("base must be at least 2");
  std::vector<double> residues(config.samples);
  int parts;
  if (const auto* fixed = std::get_if<FixedProportions>(&config.mode)) {
    parts = static_cast<int>(fixed->model.parts());
    run_blocks<FixedWalker>(config, residues, threads, [&] {
      return FixedWalker(fixed->model, N, base, config.measure);
    });
  } else {
    const auto& random = std::get<RandomProportions>(config.mode);
    parts = static_cast<int>(random.concentration.size());
    run_blocks<RandomWalker>(config, residues, threads, [&] {
      return RandomWalker(random, N, base, config.measure);
    });
  }
  auto dist = empirical_distribution(residues, config.measure, N, parts);
  return {std::move(residues), std::move(dist)};
}

WeightedMod1Distribution empirical_distribution(const std::vector<double>& residues,
                                                Measure measure, int stages, int parts) {
  std::vector<double> sorted = residues;
  for (double& r : sorted) {
    if (r >= 1.0 - kResidueMergeTolerance) r = 0.0;
  }
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<Mod1Atom> atoms;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] - sorted[i] <= kResidueMergeTolerance) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i) / n});
    i = j;
  }
  return WeightedMod1Distribution(std::move(atoms), measure, stages, parts);
}

void write_samples_csv(std::ostream& out, const std::vector<double>& residues) {
  out << "sample_index,residue\n";
  for (std::size_t i = 0; i < residues.size(); ++i) out << fmt::format("{},{:.17g}\n", i, residues[i]);
}

}  // namespace benfrag
