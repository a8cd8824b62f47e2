// Copyright 2026 The rstlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rstlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "rstlab/experiments.hpp"
#include "rstlab/exploration.hpp"
#include "rstlab/ppp.hpp"
#include "rstlab/rst.hpp"

namespace rstlab::cli {

namespace {

using nlohmann::json;

// Raised for invalid configurations and unusable output locations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::size_t dim = 2;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string out_dir;

  double radius = 30.0;
  std::string input;
  double start_norm = 100.0;
  std::vector<double> norms{50.0, 100.0, 200.0, 400.0};
  double x_norm = 10.0;
  std::vector<double> thresholds{0.5, 1.0, 2.0};
  std::uint64_t trials = 500;
  std::uint64_t instances = 100000;
  std::string lemma = "all";
  std::string source = "auto";
  std::size_t step = 4;
  std::uint64_t min_applicable = 50;
  std::uint64_t max_trials = 4000;

  double kappa = 2.0;
  double epsilon = 0.25;
  std::optional<double> lambda;
  std::optional<double> delta;

  Constants constants() const {
    Constants c = Constants::defaults(dim);
    c.kappa = kappa;
    c.epsilon = epsilon;
    if (lambda) c.lambda = *lambda;
    if (delta) c.delta = *delta;
    return c;
  }
};

// Writes files into the output directory and remembers their names.
class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) {
      throw ConfigError("cannot create output directory '" + dir_ + "'");
    }
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + path.string() + "'");
    body(os);
    os.flush();
    if (!os) throw ConfigError("failed writing '" + path.string() + "'");
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

json config_json(const RunConfig& c, const std::vector<std::string>& keys) {
  // Execution-only settings (workers, output directory) stay out so that
  // manifests are identical across worker counts and locations.
  const Constants k = c.constants();
  json all = {
      {"dim", c.dim},
      {"seed", c.seed},
      {"radius", c.radius},
      {"input", c.input},
      {"start_norm", c.start_norm},
      {"norms", c.norms},
      {"x_norm", c.x_norm},
      {"thresholds", c.thresholds},
      {"trials", c.trials},
      {"instances", c.instances},
      {"lemma", c.lemma},
      {"source", c.source},
      {"step", c.step},
      {"min_applicable", c.min_applicable},
      {"max_trials", c.max_trials},
      {"kappa", k.kappa},
      {"epsilon", k.epsilon},
      {"lambda", k.lambda},
      {"delta", k.delta},
      {"delta_a", k.delta_a()},
  };
  json out = {{"dim", c.dim}, {"seed", c.seed}};
  // Manifest keys are spelled like the flags and TOML keys.
  for (const auto& key : keys) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    out[flag] = all.at(key);
  }
  return out;
}

void write_manifest(Output& out, const std::string& name, const RunConfig& c, const json& config,
                    const json& results, bool passed) {
  json m;
  m["command"] = c.command;
  m["config"] = config;
  m["config_hash"] = content_hash(config);
  m["results"] = results;
  m["passed"] = passed;
  std::vector<std::string> files = out.files();
  files.push_back(name);
  m["outputs"] = files;
  out.write(name, [&](std::ostream& os) { os << m.dump(2) << '\n'; });
}

void validate_common(const RunConfig& c) {
  if (c.dim < 2) throw ConfigError("--dim must be >= 2");
  if (c.workers < 1) throw ConfigError("--workers must be >= 1");
  if (c.trials < 1) throw ConfigError("--trials must be >= 1");
}

void require_positive(double v, const char* flag) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(flag) + " must be a finite number > 0");
}

Constants checked_constants(const RunConfig& c) {
  const Constants k = c.constants();
  try {
    k.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return k;
}

PointSet load_or_sample(const RunConfig& c) {
  if (c.input.empty()) {
    require_positive(c.radius, "--radius");
    return sample_ball(c.dim, c.radius, c.seed);
  }
  std::ifstream is(c.input);
  if (!is) throw ConfigError("cannot read --input '" + c.input + "'");
  try {
    PointSet p = read_points_csv(is);
    if (p.dimension != c.dim) {
      throw ConfigError("--input has dimension " + std::to_string(p.dimension) + " but --dim is " +
                        std::to_string(c.dim));
    }
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--input: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_sample(const RunConfig& c, std::ostream& log) {
  require_positive(c.radius, "--radius");
  Output out(c.out_dir);
  const PointSet pts = sample_ball(c.dim, c.radius, c.seed);
  out.write("points.csv", [&](std::ostream& os) { write_points_csv(os, pts); });
  write_manifest(out, "sample.json", c, config_json(c, {"radius"}), {{"points", pts.size()}}, true);
  log << "sample: " << pts.size() << " points\n";
  return kOk;
}

int cmd_build(const RunConfig& c, std::ostream& log) {
  Output out(c.out_dir);
  const PointSet pts = load_or_sample(c);
  const RstTree tree = build_rst(pts);
  const TreeCheck check = validate_tree(tree);
  out.write("tree.csv", [&](std::ostream& os) { write_tree_csv(os, tree); });
  out.write("in_degree.csv", [&](std::ostream& os) { write_in_degree_csv(os, in_degree_histogram(tree)); });
  const json results = {{"vertices", tree.size()},
                        {"norm_violations", check.norm_violations},
                        {"cycle_or_orphan", check.cycle_or_orphan},
                        {"edge_count_ok", check.edge_count_ok}};
  write_manifest(out, "build.json", c, config_json(c, {"radius", "input"}), results, check.ok());
  log << "build: " << tree.size() << " edges, tree " << (check.ok() ? "valid" : "INVALID") << '\n';
  return check.ok() ? kOk : kAssertionFailure;
}

int cmd_straightness(const RunConfig& c, std::ostream& log) {
  Output out(c.out_dir);
  const PointSet pts = load_or_sample(c);
  const RstTree tree = build_rst(pts);
  const StraightnessProfile prof = straightness_profile(tree);
  out.write("straightness.csv", [&](std::ostream& os) { write_straightness_csv(os, prof); });
  json bands = json::array();
  for (double lo = 1.0; lo < c.radius; lo *= 2.0) {
    const auto m = prof.band_median(lo, 2.0 * lo);
    bands.push_back({{"lo", lo}, {"hi", 2.0 * lo}, {"median_max_angle", m ? json(*m) : json(nullptr)}});
  }
  double outer = 0.0;
  for (const auto& r : prof.records) outer = std::max(outer, r.norm);
  // Descriptive only: how well the outer half of the window covers directions.
  const json results = {{"vertices", tree.size()},
                        {"violations", prof.violations(c.epsilon).size()},
                        {"bands", bands},
                        {"direction_gap", direction_gap(tree, outer / 2.0)}};
  write_manifest(out, "straightness.json", c, config_json(c, {"radius", "input", "epsilon"}), results, true);
  log << "straightness: " << tree.size() << " vertices\n";
  return kOk;
}

int cmd_explore(const RunConfig& c, std::ostream& log) {
  require_positive(c.start_norm, "--start-norm");
  const Constants k = checked_constants(c);
  SourceKind kind = SourceKind::kAuto;
  if (c.source == "eager") {
    kind = SourceKind::kEager;
  } else if (c.source == "lazy") {
    kind = SourceKind::kLazy;
  } else if (c.source != "auto") {
    throw ConfigError("--source must be auto, eager or lazy");
  }
  Output out(c.out_dir);
  FieldSource src(c.dim, c.seed, c.start_norm, kind);
  const Vector pi0 = c.start_norm * Vector::unit(c.dim, 0);
  const Exploration run = explore(pi0, src, k);
  const auto blocks = renewal_increments(run);
  out.write("trace.csv", [&](std::ostream& os) { write_trace_csv(os, run); });
  out.write("renewal.csv", [&](std::ostream& os) { write_renewal_csv(os, blocks, c.dim); });
  const auto& tr = run.trace;
  const json results = {{"steps", run.states.size() - 1},
                        {"theta", tr.theta},
                        {"i_theta", tr.i_theta},
                        {"tau", tr.tau},
                        {"w", tr.w},
                        {"deviation_sup", deviation_sup(run.path(), pi0)},
                        {"q_psi_mismatches", tr.q_psi_mismatches}};
  const bool ok = tr.q_psi_mismatches == 0;
  write_manifest(out, "explore.json", c,
                 config_json(c, {"start_norm", "source", "kappa", "epsilon", "lambda", "delta", "delta_a"}),
                 results, ok);
  log << "explore: " << run.states.size() - 1 << " steps, Theta=" << tr.theta << '\n';
  return ok ? kOk : kAssertionFailure;
}

int cmd_psi_tail(const RunConfig& c, std::ostream& log) {
  require_positive(c.x_norm, "--x-norm");
  Output out(c.out_dir);
  const PsiTailReport rep = estimate_psi_tail(c.dim, c.x_norm, c.thresholds, c.trials, c.seed, c.workers);
  out.write("psi_tail.csv", [&](std::ostream& os) { write_tail_csv(os, rep.estimate, &rep.bound); });
  json failing = json::array();
  for (std::size_t k = 0; k < rep.pass.size(); ++k) {
    if (!rep.pass[k]) failing.push_back(rep.estimate.thresholds[k]);
  }
  write_manifest(out, "psi_tail.json", c, config_json(c, {"x_norm", "thresholds", "trials"}),
                 {{"failing_thresholds", failing}}, rep.ok());
  for (const auto& t : failing) log << "psi-tail: bound exceeded at threshold " << t << '\n';
  log << "psi-tail: " << (rep.ok() ? "within bound" : "BOUND EXCEEDED") << '\n';
  return rep.ok() ? kOk : kAssertionFailure;
}

int cmd_deviation(const RunConfig& c, std::ostream& log) {
  Output out(c.out_dir);
  const DeviationReport rep = estimate_deviation_tail(c.dim, c.norms, c.epsilon, c.trials, c.seed, c.workers);
  out.write("deviation.csv", [&](std::ostream& os) {
    os << "norm,trials,exceed_rate,half_width,median_deviation\n";
    for (const auto& r : rep.per_norm) {
      os << format_double(r.norm) << ',' << r.trials << ',' << format_double(r.exceed_rate) << ','
         << format_double(r.half_width) << ',' << format_double(r.median_deviation) << '\n';
    }
  });
  out.write("deviation_trials.csv", [&](std::ostream& os) {
    os << "norm,trial,deviation_sup\n";
    for (const auto& r : rep.per_norm) {
      for (std::size_t i = 0; i < r.sups.size(); ++i) {
        os << format_double(r.norm) << ',' << i << ',' << format_double(r.sups[i]) << '\n';
      }
    }
  });
  const json results = {{"slope", rep.slope}, {"monotone_within_half_widths", rep.monotone_within_half_widths()}};
  write_manifest(out, "deviation.json", c, config_json(c, {"norms", "epsilon", "trials"}), results, true);
  log << "deviation: slope " << rep.slope << '\n';
  return kOk;
}

int cmd_spacing(const RunConfig& c, std::ostream& log) {
  require_positive(c.start_norm, "--start-norm");
  const Constants k = checked_constants(c);
  Output out(c.out_dir);
  const SpacingReport rep = estimate_spacing_tails(c.dim, c.start_norm, k, c.trials, c.seed, c.workers);
  out.write("spacing_tau.csv", [&](std::ostream& os) { write_tail_csv(os, rep.tau_gap); });
  out.write("spacing_w.csv", [&](std::ostream& os) { write_tail_csv(os, rep.w_gap); });
  out.write("spacing_block_length.csv", [&](std::ostream& os) { write_tail_csv(os, rep.block_length); });
  out.write("spacing_r_theta.csv", [&](std::ostream& os) { write_tail_csv(os, rep.r_theta); });
  const bool monotone = rep.tau_gap.monotone() && rep.w_gap.monotone() && rep.block_length.monotone() &&
                        rep.r_theta.monotone();
  const bool ok = !rep.insufficient_data() && monotone && rep.tau_ratio_ok();
  const json results = {{"tau_gaps_observed", rep.tau_gaps_observed},
                        {"insufficient_data", rep.insufficient_data()},
                        {"tau_strictly_decreasing", rep.tau_strictly_decreasing()},
                        {"tau_ratio_ok", rep.tau_ratio_ok()},
                        {"r_theta_correlation", rep.r_theta_correlation},
                        {"note", "pooled gaps are a necessary-condition proxy for the conditional bound"}};
  write_manifest(out, "spacing.json", c,
                 config_json(c, {"start_norm", "trials", "kappa", "lambda", "delta", "epsilon"}), results, ok);
  if (rep.insufficient_data()) log << "spacing: insufficient data (" << rep.tau_gaps_observed << " gaps)\n";
  log << "spacing: " << (ok ? "ok" : "FAILED") << '\n';
  return ok ? kOk : kAssertionFailure;
}

int cmd_symmetry(const RunConfig& c, std::ostream& log) {
  require_positive(c.start_norm, "--start-norm");
  const Constants k = checked_constants(c);
  Output out(c.out_dir);
  SymmetryOptions opts;
  opts.min_applicable = c.min_applicable;
  opts.max_trials = c.max_trials;
  opts.workers = c.workers;
  const SymmetryReport rep = run_symmetry_campaign(c.dim, c.start_norm, k, c.trials, c.seed, opts);
  out.write("symmetry.csv", [&](std::ostream& os) {
    os << "trial,seed,outcome,w_start,w_end,negation_error,first_block_outcome,first_coordinate\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      os << i << ',' << r.seed << ',' << to_string(r.renewal.outcome) << ',' << r.renewal.w_start << ','
         << r.renewal.w_end << ',' << format_double(r.renewal.negation_error) << ','
         << to_string(r.first_block.outcome) << ',' << format_double(r.first_block.first_coordinate) << '\n';
    }
  });
  const json results = {{"trials", rep.trials},
                        {"applicable", rep.applicable},
                        {"negated", rep.negated},
                        {"coupling_broken", rep.broken},
                        {"negation_failures", rep.negation_failures},
                        {"first_block_failures", rep.first_block_failures},
                        {"max_negation_error", rep.max_negation_error},
                        {"insufficient_applicable", rep.insufficient(c.min_applicable)},
                        {"failing_seed", rep.failing_seed ? json(*rep.failing_seed) : json(nullptr)},
                        {"positives", rep.positives},
                        {"negatives", rep.negatives},
                        {"sign_p_value", rep.sign_p_value},
                        {"mean_first_coordinate", rep.mean_first_coordinate},
                        {"standard_error", rep.standard_error}};
  write_manifest(out, "symmetry.json", c,
                 config_json(c, {"start_norm", "trials", "min_applicable", "max_trials", "kappa", "lambda",
                                 "delta", "epsilon"}),
                 results, rep.exact_ok());
  if (rep.failing_seed) log << "symmetry: exact negation failed for seed " << *rep.failing_seed << '\n';
  if (rep.insufficient(c.min_applicable)) log << "symmetry: insufficient applicable runs\n";
  log << "symmetry: " << rep.applicable << " applicable of " << rep.trials << '\n';
  return rep.exact_ok() ? kOk : kAssertionFailure;
}

int cmd_resampling(const RunConfig& c, std::ostream& log) {
  require_positive(c.start_norm, "--start-norm");
  Output out(c.out_dir);
  const MarkovReport rep = markov_resampling_test(c.dim, c.start_norm, c.step, c.trials, c.seed, c.workers);
  out.write("resampling.csv", [&](std::ostream& os) {
    os << "trial,continued,resampled\n";
    for (std::size_t i = 0; i < rep.continued.size(); ++i) {
      os << i << ',' << format_double(rep.continued[i]) << ',' << format_double(rep.resampled[i]) << '\n';
    }
  });
  const bool ok = !rep.rejected(0.01);
  write_manifest(out, "resampling.json", c, config_json(c, {"start_norm", "step", "trials"}),
                 {{"ks_statistic", rep.ks.statistic}, {"p_value", rep.ks.p_value}}, ok);
  log << "resampling: KS p=" << rep.ks.p_value << '\n';
  return ok ? kOk : kAssertionFailure;
}

int cmd_check_lemmas(const RunConfig& c, std::ostream& log) {
  if (c.instances < 1) throw ConfigError("--instances must be >= 1");
  std::vector<Lemma> lemmas;
  if (c.lemma == "all") {
    lemmas = {Lemma::kEmptyBall, Lemma::kFlatness, Lemma::kRadialProgress};
  } else {
    try {
      lemmas = {parse_lemma(c.lemma)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  Output out(c.out_dir);
  json results = json::object();
  bool ok = true;
  json failures = json::array();
  for (Lemma l : lemmas) {
    const FuzzReport rep = run_lemma_fuzz(l, c.dim, c.instances, c.seed);
    results[to_string(l)] = {{"instances", rep.instances},
                             {"violations", rep.violations},
                             {"accepted", rep.stats.accepted},
                             {"rejected", rep.stats.rejected},
                             {"rejection_rate", rep.stats.rejection_rate()}};
    for (const auto& f : rep.failures) failures.push_back(f);
    ok = ok && rep.violations == 0;
    log << "lemma " << to_string(l) << ": " << rep.violations << " violations in " << rep.instances << '\n';
  }
  if (!failures.empty()) {
    out.write("lemma_failures.json", [&](std::ostream& os) { os << failures.dump(2) << '\n'; });
  }
  write_manifest(out, "lemmas.json", c, config_json(c, {"instances", "lemma"}), results, ok);
  return ok ? kOk : kAssertionFailure;
}

int cmd_check_planarity(const RunConfig& c, std::ostream& log) {
  if (c.dim != 2) throw ConfigError("check planarity needs --dim 2");
  Output out(c.out_dir);
  const RstTree tree = build_rst(load_or_sample(c));
  const auto crossings = check_planarity(tree);
  out.write("crossings.csv", [&](std::ostream& os) { write_crossings_csv(os, crossings); });
  write_manifest(out, "planarity.json", c, config_json(c, {"radius", "input"}),
                 {{"edges", tree.size()}, {"crossings", crossings.size()}}, crossings.empty());
  log << "planarity: " << crossings.size() << " crossings\n";
  return crossings.empty() ? kOk : kAssertionFailure;
}

int cmd_check_tree(const RunConfig& c, std::ostream& log) {
  Output out(c.out_dir);
  const RstTree tree = build_rst(load_or_sample(c));
  const TreeCheck check = validate_tree(tree);
  write_manifest(out, "tree_check.json", c, config_json(c, {"radius", "input"}),
                 {{"vertices", tree.size()},
                  {"norm_violations", check.norm_violations},
                  {"cycle_or_orphan", check.cycle_or_orphan},
                  {"edge_count_ok", check.edge_count_ok},
                  {"tie_events", tie_events()}},
                 check.ok());
  log << "tree: " << (check.ok() ? "valid" : "INVALID") << '\n';
  return check.ok() ? kOk : kAssertionFailure;
}

// ---------------------------------------------------------------------------
// Option wiring

void add_seed_dim(CLI::App* app, RunConfig& c) {
  app->add_option("--dim", c.dim, "Dimension d >= 2")->capture_default_str();
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
}

void add_constants(CLI::App* app, RunConfig& c) {
  app->add_option("--kappa", c.kappa, "kappa > 1")->capture_default_str();
  app->add_option("--epsilon", c.epsilon, "epsilon in (0, 1/2)")->capture_default_str();
  app->add_option("--lambda", c.lambda, "lambda override [default: (1/(4d)) (alpha(1/2)/2)^d, 0.0015784 for d=2]");
  app->add_option("--delta", c.delta, "delta override [default: alpha(1/2)/8 = 0.0280931]");
}

void add_workers(CLI::App* app, RunConfig& c) {
  app->add_option("--workers", c.workers, "Worker threads; results do not depend on it")->capture_default_str();
}

void add_points_input(CLI::App* app, RunConfig& c) {
  app->add_option("--radius", c.radius, "Sampling radius when no --input is given")->capture_default_str();
  app->add_option("--input", c.input, "Points CSV (id,x1..xd) instead of sampling");
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  const char* env_out = std::getenv(kOutEnv);
  c.out_dir = env_out && *env_out ? env_out : "rstlab-out";

  CLI::App app{"rstlab: radial spanning tree laboratory"};
  app.set_config("--config", "", "TOML config file; flags override its values");
  app.add_option("--out", c.out_dir, std::string("Output directory [default: $") + kOutEnv + " or rstlab-out]");
  app.require_subcommand(1);

  std::function<int(const RunConfig&, std::ostream&)> action;
  auto bind = [&](CLI::App* sub, const std::string& name, int (*fn)(const RunConfig&, std::ostream&)) {
    sub->callback([&, name, fn] {
      c.command = name;
      action = fn;
    });
  };

  auto* sample = app.add_subcommand("sample", "Sample a Poisson process in B(0, radius)");
  add_seed_dim(sample, c);
  sample->add_option("--radius", c.radius, "Sampling radius")->capture_default_str();
  bind(sample, "sample", cmd_sample);

  auto* build = app.add_subcommand("build", "Build the RST and validate it");
  add_seed_dim(build, c);
  add_points_input(build, c);
  bind(build, "build", cmd_build);

  auto* straight = app.add_subcommand("straightness", "Per-vertex max subtree angle");
  add_seed_dim(straight, c);
  add_points_input(straight, c);
  straight->add_option("--epsilon", c.epsilon, "Exponent slack in |u|^(-1/2+epsilon)")->capture_default_str();
  bind(straight, "straightness", cmd_straightness);

  auto* expl = app.add_subcommand("explore", "Run one exploration and export its trace");
  add_seed_dim(expl, c);
  add_constants(expl, c);
  expl->add_option("--start-norm", c.start_norm, "|pi0| (pi0 = start_norm e_1)")->capture_default_str();
  expl->add_option("--source", c.source, "Point source: auto, eager or lazy")->capture_default_str();
  bind(expl, "explore", cmd_explore);

  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
  exp->require_subcommand(1);
  auto* psi_tail = exp->add_subcommand("psi-tail", "Tail of |psi(x) - x| against its bound");
  add_seed_dim(psi_tail, c);
  add_workers(psi_tail, c);
  psi_tail->add_option("--x-norm", c.x_norm, "|x|")->capture_default_str();
  psi_tail->add_option("--thresholds", c.thresholds, "Thresholds t")->delimiter(',')->capture_default_str();
  psi_tail->add_option("--trials", c.trials, "Trials")->capture_default_str();
  bind(psi_tail, "experiment psi-tail", cmd_psi_tail);

  auto* dev = exp->add_subcommand("deviation", "Exceedance of |pi0|^(1/2+epsilon) by the path deviation");
  add_seed_dim(dev, c);
  add_workers(dev, c);
  dev->add_option("--norms", c.norms, "Start norms")->delimiter(',')->capture_default_str();
  dev->add_option("--epsilon", c.epsilon, "epsilon in (0, 1/2)")->capture_default_str();
  dev->add_option("--trials", c.trials, "Trials per norm")->capture_default_str();
  bind(dev, "experiment deviation", cmd_deviation);

  auto* spacing = exp->add_subcommand("spacing", "Good-step, renewal and terminal tails");
  add_seed_dim(spacing, c);
  add_workers(spacing, c);
  add_constants(spacing, c);
  spacing->add_option("--start-norm", c.start_norm, "|pi0|")->capture_default_str();
  spacing->add_option("--trials", c.trials, "Trials")->capture_default_str();
  bind(spacing, "experiment spacing", cmd_spacing);

  auto* sym = exp->add_subcommand("symmetry", "Reflection coupling campaign");
  add_seed_dim(sym, c);
  add_workers(sym, c);
  add_constants(sym, c);
  sym->add_option("--start-norm", c.start_norm, "|pi0|")->capture_default_str();
  sym->add_option("--trials", c.trials, "Trials per batch")->capture_default_str();
  sym->add_option("--min-applicable", c.min_applicable, "Runs with a renewal to collect")->capture_default_str();
  sym->add_option("--max-trials", c.max_trials, "Cap on trials when extending")->capture_default_str();
  bind(sym, "experiment symmetry", cmd_symmetry);

  auto* res = exp->add_subcommand("resampling", "Markov resampling smoke test (KS on R_{n+1})");
  add_seed_dim(res, c);
  add_workers(res, c);
  res->add_option("--start-norm", c.start_norm, "|pi0|")->capture_default_str();
  res->add_option("--step", c.step, "Step n")->capture_default_str();
  res->add_option("--trials", c.trials, "Trials per arm")->capture_default_str();
  bind(res, "experiment resampling", cmd_resampling);

  auto* check = app.add_subcommand("check", "Deterministic checks");
  check->require_subcommand(1);
  auto* lemmas = check->add_subcommand("lemmas", "Fuzz the geometric lemmas");
  add_seed_dim(lemmas, c);
  lemmas->add_option("--instances", c.instances, "Instances per lemma")->capture_default_str();
  lemmas->add_option("--lemma", c.lemma, "all, empty-ball, flatness or radial-progress")->capture_default_str();
  bind(lemmas, "check lemmas", cmd_check_lemmas);

  auto* planar = check->add_subcommand("planarity", "Count proper edge crossings (d = 2)");
  add_seed_dim(planar, c);
  add_points_input(planar, c);
  bind(planar, "check planarity", cmd_check_planarity);

  auto* tree = check->add_subcommand("tree", "Validate the tree structure");
  add_seed_dim(tree, c);
  add_points_input(tree, c);
  bind(tree, "check tree", cmd_check_tree);

  std::vector<const char*> args;
  args.reserve(argv.size());
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    validate_common(c);
    return action(c, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAssertionFailure;
  }
}

}  // namespace rstlab::cli
