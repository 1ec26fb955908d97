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

#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "benfrag/benford.hpp"
#include "benfrag/enumeration.hpp"
#include "benfrag/errors.hpp"
#include "benfrag/model.hpp"
#include "benfrag/model_config.hpp"
#include "benfrag/montecarlo.hpp"
#include "benfrag/numeric.hpp"
#include "benfrag/oracle.hpp"

namespace benfrag::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "benfrag 0.1.0";

struct Options {
  std::string config_path;
  int N = -1;
  int base = 10;
  std::string measure = "uniform";
  std::string out_dir;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  std::int64_t max_denominator = kDefaultMaxDenominator;
  double tolerance = kDefaultTolerance;
  std::uint64_t cap = ExactOptions{}.cap;
  unsigned threads = 1;
  double ks_threshold = kDefaultKsThreshold;
  double length = 1.0;
  std::vector<double> concentration;
};

struct LoadedConfig {
  std::string text;
  ModelConfig config;
};

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

LoadedConfig load(const Options& o) {
  std::ifstream in(o.config_path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", o.config_path));
  std::ostringstream text;
  text << in.rdbuf();
  return {text.str(), parse_model_config(text.str())};
}

void require_n(const Options& o) {
  if (o.N < 0) throw ConfigError("--N must be given and non-negative");
}

json classification_json(const ExponentSpec& spec, const ExponentClassification& c) {
  json j;
  j["base"] = spec.base;
  j["max_denominator"] = c.max_denominator;
  j["tolerance"] = c.tolerance;
  json entries = json::array();
  for (std::size_t i = 0; i < c.entries.size(); ++i) {
    const auto& e = c.entries[i];
    json item;
    item["index"] = i + 1;
    item["value"] = static_cast<double>(real_value(spec.y[i]));
    item["exact_input"] = std::holds_alternative<Rational>(spec.y[i]);
    item["verdict"] = e.rational ? "Rational" : "PresumedIrrational";
    if (e.rational) {
      item["numerator"] = e.value.num();
      item["denominator"] = e.value.den();
    }
    item["witness"] = {{"numerator", e.witness.num()},
                       {"denominator", e.witness.den()},
                       {"error", e.witness_error}};
    item["search_bound"] = e.search_bound;
    entries.push_back(item);
  }
  j["exponents"] = entries;
  j["prediction"] = to_string(predict_benford(c));
  return j;
}

json proportions_json(const ProportionVector& model) {
  json arr = json::array();
  for (double p : model.values()) arr.push_back(p);
  return arr;
}

class RunDirectory {
 public:
  explicit RunDirectory(std::string dir) : dir_(std::move(dir)) {
    if (dir_.empty()) throw ConfigError("--out DIR is required");
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir_, ec.message()));
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const fs::path path = fs::path(dir_) / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    body(file);
    file.close();
    files_.push_back(name);
  }

  void write_text(const std::string& name, const std::string& text) {
    write(name, [&](std::ostream& os) { os << text << '\n'; });
  }

  // manifest.json goes last and lists every file written before it.
  void finish(const std::vector<std::string>& args, std::string_view config_text) {
    for (const auto& f : files_) {
      const fs::path path = fs::path(dir_) / f;
      if (!fs::exists(path) || fs::file_size(path) == 0) {
        throw VerificationError(fmt::format("output file '{}' is missing or empty", path.string()));
      }
    }
    json m;
    m["command"] = args;
    m["config_hash"] = fnv1a_hex(config_text);
    m["tool_version"] = kToolVersion;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    m["timestamp"] = stamp;
    m["outputs"] = files_;
    const std::string text = m.dump(2);
    write_text("manifest.json", text);
  }

  const std::string& path() const { return dir_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

int cmd_classify(const Options& o, std::ostream& out) {
  const auto loaded = load(o);
  const ExponentSpec spec = loaded.config.exponents_in(o.base);
  const auto c = classify_rationality(spec, o.max_denominator, o.tolerance);
  json j;
  j["command"] = "classify";
  j["proportions"] = proportions_json(loaded.config.model);
  j["classification"] = classification_json(spec, c);
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_analyze(const Options& o, const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  require_n(o);
  if (!(o.length > 0.0) || !std::isfinite(o.length)) throw ConfigError("--length must be positive");
  const auto loaded = load(o);
  const Measure measure = parse_measure(o.measure);
  const ExponentSpec spec = loaded.config.exponents_in(o.base);
  const auto c = classify_rationality(spec, o.max_denominator, o.tolerance);
  const BenfordPrediction prediction = predict_benford(c);

  ExactOptions opts;
  opts.cap = o.cap;
  opts.threads = o.threads;
  err << fmt::format("analyze: m={} N={} measure={} ({} compositions)\n", loaded.config.model.parts(),
                     o.N, to_string(measure), composition_count(o.N, static_cast<int>(loaded.config.model.parts())));
  WeightedMod1Distribution dist = [&] {
    try {
      return exact_distribution(loaded.config.model, o.N, o.base, measure, opts);
    } catch (const ResourceLimitError& e) {
      throw ResourceLimitError(fmt::format("{} (try `benfrag simulate`)", e.what()));
    }
  }();
  const BenfordReport report = make_report(dist, o.base, o.ks_threshold);

  json j;
  j["command"] = "analyze";
  j["N"] = o.N;
  j["measure"] = to_string(measure);
  j["report"] = json::parse(report_json(report));
  j["classification"] = classification_json(spec, c);
  j["prediction"] = to_string(prediction);
  j["agrees"] = (prediction == BenfordPrediction::Benford) ==
                (report.verdict == EmpiricalVerdict::ConsistentWithBenford);

  if (o.length != 1.0) {
    // Scaling every stick by L rotates all residues by log_B L.
    const double shift = static_cast<double>(log_base(static_cast<long double>(o.length), o.base));
    const double scaled = star_discrepancy(dist.rotated(shift));
    const bool invariant = std::abs(scaled - report.star_discrepancy) <= 1e-9;
    j["length_check"] = {{"length", o.length},
                         {"star_discrepancy_scaled", scaled},
                         {"invariant", invariant}};
    if (!invariant) {
      out << j.dump(2) << '\n';
      throw VerificationError("star discrepancy changed under length scaling");
    }
  }

  RunDirectory run(o.out_dir);
  run.write_text("report.json", report_json(report));
  run.write("distribution.csv", [&](std::ostream& os) { write_distribution_csv(os, dist); });
  run.write("digits.csv", [&](std::ostream& os) { write_digits_csv(os, report); });
  run.finish(args, loaded.text);
  j["out"] = run.path();
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_brute(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  require_n(o);
  const auto loaded = load(o);
  const Measure measure = parse_measure(o.measure);
  const auto report = cross_check(loaded.config.model, o.N, o.base, measure);
  json j;
  j["command"] = "brute";
  j["N"] = o.N;
  j["measure"] = to_string(measure);
  j["leaves"] = report.leaves;
  j["brute_atoms"] = report.brute_atoms;
  j["exact_atoms"] = report.exact_atoms;
  j["max_deviation"] = report.max_deviation;
  j["tolerance"] = kCrossCheckTolerance;
  j["passed"] = report.passed;
  if (!o.out_dir.empty()) {
    RunDirectory run(o.out_dir);
    const auto leaves = brute_force_leaves(loaded.config.model, o.N);
    run.write("leaves.csv", [&](std::ostream& os) { write_leaves_csv(os, leaves); });
    run.write_text("cross_check.json", j.dump(2));
    run.finish(args, loaded.text);
    j["out"] = run.path();
  }
  out << j.dump(2) << '\n';
  return report.passed ? kExitOk : kExitVerification;
}

int cmd_residues(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  require_n(o);
  const auto loaded = load(o);
  const Measure measure = parse_measure(o.measure);
  const ExponentSpec spec = loaded.config.exponents_in(o.base);
  const auto c = classify_rationality(spec, o.max_denominator, o.tolerance);
  const auto y = rational_exponents(c);
  const double offset = rational_base_offset(loaded.config.model, o.N, o.base);
  const auto residues = exact_residues_rational(
      y, o.N, offset,
      measure == Measure::LengthWeighted ? loaded.config.model.values() : std::span<const double>{});
  std::int64_t bound = 1;
  for (const auto& r : y) {
    if (__builtin_mul_overflow(bound, r.den(), &bound)) bound = std::numeric_limits<std::int64_t>::max();
  }
  json j;
  j["command"] = "residues";
  j["N"] = o.N;
  j["measure"] = to_string(measure);
  j["denominator_lcm"] = residues.denominator_lcm;
  j["denominator_product"] = bound;
  j["base_offset"] = residues.base_offset;
  j["count"] = residues.count();
  json classes = json::array();
  for (const auto& cl : residues.classes) {
    classes.push_back({{"numerator", cl.numerator}, {"residue", residues.residue(cl)}, {"mass", cl.mass}});
  }
  j["classes"] = classes;
  if (!o.out_dir.empty()) {
    RunDirectory run(o.out_dir);
    run.write("residues.csv", [&](std::ostream& os) { write_residues_csv(os, residues); });
    run.finish(args, loaded.text);
    j["out"] = run.path();
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  require_n(o);
  const Measure measure = parse_measure(o.measure);
  SamplerConfig config;
  config.seed = o.seed;
  config.samples = o.samples;
  config.measure = measure;
  std::string config_text;
  json echo;
  echo["N"] = o.N;
  echo["base"] = o.base;
  echo["samples"] = o.samples;
  echo["measure"] = to_string(measure);
  std::optional<ModelConfig> model_config;
  if (!o.concentration.empty()) {
    if (!o.config_path.empty()) throw ConfigError("give either --config or --concentration, not both");
    config.mode = RandomProportions{o.concentration};
    echo["mode"] = "random";
    echo["concentration"] = o.concentration;
    config_text = echo.dump();
  } else {
    if (o.config_path.empty()) throw ConfigError("--config or --concentration is required");
    auto loaded = load(o);
    config_text = loaded.text;
    config.mode = FixedProportions{loaded.config.model};
    echo["mode"] = "fixed";
    echo["proportions"] = proportions_json(loaded.config.model);
    echo["config"] = json::parse(loaded.text);
    model_config = std::move(loaded.config);
  }
  err << fmt::format("simulate: N={} samples={} seed={}\n", o.N, o.samples, o.seed);
  const auto result = sample_leaf_residues(config, o.N, o.base, o.threads);
  const BenfordReport report = make_report(result.distribution, o.base, o.ks_threshold);

  json meta;
  meta["seed"] = o.seed;
  meta["generator"] = std::string(kGeneratorName);
  meta["block_size"] = kSampleBlock;
  meta["config"] = echo;

  json j;
  j["command"] = "simulate";
  j["N"] = o.N;
  j["measure"] = to_string(measure);
  j["samples"] = o.samples;
  j["report"] = json::parse(report_json(report));
  if (model_config) {
    const ExponentSpec spec = model_config->exponents_in(o.base);
    const auto c = classify_rationality(spec, o.max_denominator, o.tolerance);
    j["prediction"] = to_string(predict_benford(c));
  }

  RunDirectory run(o.out_dir);
  run.write("samples.csv", [&](std::ostream& os) { write_samples_csv(os, result.residues); });
  run.write_text("metadata.json", meta.dump(2));
  run.write_text("report.json", report_json(report));
  run.write("distribution.csv", [&](std::ostream& os) { write_distribution_csv(os, result.distribution); });
  run.write("digits.csv", [&](std::ostream& os) { write_digits_csv(os, report); });
  run.finish(args, config_text);
  j["out"] = run.path();
  out << j.dump(2) << '\n';
  return kExitOk;
}

void add_model_options(CLI::App* cmd, Options& o, bool config_required = true) {
  auto* opt = cmd->add_option("--config", o.config_path, "model configuration (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--base", o.base, "logarithm base B")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--max-denominator", o.max_denominator, "continued-fraction denominator bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance", o.tolerance, "rationality tolerance")->check(CLI::PositiveNumber);
}

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--N", o.N, "number of fragmentation stages")->required()->check(CLI::NonNegativeNumber);
  cmd->add_option("--measure", o.measure, "uniform | length")->check(CLI::IsMember({"uniform", "length"}));
  cmd->add_option("--threads", o.threads, "worker threads (1 gives canonical output)")
      ->check(CLI::Range(1u, 1024u));
  cmd->add_option("--ks-threshold", o.ks_threshold, "KS threshold for the empirical verdict");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Benford analysis of fixed multi-proportion stick fragmentation"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "classify exponents and predict Benford behaviour");
  add_model_options(classify, o);

  auto* analyze = app.add_subcommand("analyze", "exact residue distribution and Benford metrics");
  add_model_options(analyze, o);
  add_run_options(analyze, o);
  analyze->add_option("--out", o.out_dir, "output directory")->required();
  analyze->add_option("--cap", o.cap, "maximum number of compositions");
  analyze->add_option("--length", o.length, "initial stick length L (checks scale invariance)");

  auto* brute = app.add_subcommand("brute", "cross-check enumeration against full tree expansion");
  add_model_options(brute, o);
  add_run_options(brute, o);
  brute->add_option("--out", o.out_dir, "optional output directory for the leaf dump");

  auto* residues = app.add_subcommand("residues", "exact residue classes for rational exponents");
  add_model_options(residues, o);
  add_run_options(residues, o);
  residues->add_option("--out", o.out_dir, "optional output directory for the class dump");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo path sampling");
  add_model_options(simulate, o, false);
  add_run_options(simulate, o);
  simulate->add_option("--out", o.out_dir, "output directory")->required();
  simulate->add_option("--samples", o.samples, "number of sampled leaves")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "64-bit seed");
  simulate->add_option("--concentration", o.concentration,
                       "Dirichlet concentrations; samples random proportions instead of --config")
      ->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (classify->parsed()) return cmd_classify(o, out);
    if (analyze->parsed()) return cmd_analyze(o, args, out, err);
    if (brute->parsed()) return cmd_brute(o, args, out);
    if (residues->parsed()) return cmd_residues(o, args, out);
    if (simulate->parsed()) return cmd_simulate(o, args, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitConfig;
}

}  // namespace benfrag::cli
