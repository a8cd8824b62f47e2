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

// Monte Carlo harness: tail estimators, lemma fuzzing, the coupling campaign
// and the resampling smoke test.
//
// Every trial draws from its own counter-based stream keyed by (seed, trial),
// and results are folded in trial order, so outputs do not depend on the
// number of workers.

#ifndef RSTLAB_EXPERIMENTS_HPP_
#define RSTLAB_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "rstlab/exploration.hpp"
#include "rstlab/geom.hpp"
#include "rstlab/random.hpp"

namespace rstlab {

// ---------------------------------------------------------------------------
// Statistics

/// 3 sqrt(p (1 - p) / n).
double binomial_half_width(double p, std::uint64_t n);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Two-sided exact binomial sign test of P(+) = 1/2.
double sign_test_p_value(std::uint64_t positives, std::uint64_t negatives);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

// ---------------------------------------------------------------------------
// Trial pool

/// Seed of trial `index` under `seed`; `group` separates independent
/// families of trials (e.g. one per start norm or per test arm).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t group, std::uint64_t index);

/// Runs fn(i) for i in [0, count) on `workers` threads, chunk by chunk, and
/// returns the results in index order. The first exception is rethrown.
template <typename T, typename Fn>
std::vector<T> run_trials(std::size_t count, std::size_t workers, Fn&& fn) {
  std::vector<T> out(count);
  constexpr std::size_t kChunk = 8;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t start = next.fetch_add(kChunk);
      if (start >= count) return;
      const std::size_t stop = std::min(count, start + kChunk);
      for (std::size_t i = start; i < stop; ++i) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, (count + kChunk - 1) / kChunk));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

// ---------------------------------------------------------------------------
// Tail estimates

struct TailEstimate {
  std::vector<double> thresholds;
  std::vector<double> survival;
  std::vector<double> half_width;
  std::uint64_t trials = 0;
  nlohmann::json meta = nlohmann::json::object();

  bool monotone() const;
};

/// Empirical P(X > t) at each threshold (thresholds must be sorted).
TailEstimate tail_from_samples(const std::vector<double>& samples, std::vector<double> thresholds);

/// exp(-(t/2)^d |B(0,1)|).
double psi_tail_bound(std::size_t dim, double t);

struct PsiTailReport {
  TailEstimate estimate;
  std::vector<double> bound;
  std::vector<bool> pass;
  bool ok() const;
};

/// Survival of |psi(x) - x| for x = x_norm e_1 over fresh samples of
/// B(0, x_norm). Requires trials >= 100.
PsiTailReport estimate_psi_tail(std::size_t dim, double x_norm, std::vector<double> thresholds,
                                std::uint64_t trials, std::uint64_t seed, std::size_t workers = 1);

struct DeviationNormResult {
  double norm = 0.0;
  std::uint64_t trials = 0;
  double exceed_rate = 0.0;
  double half_width = 0.0;
  double median_deviation = 0.0;
  std::vector<double> sups;
};

struct DeviationReport {
  double epsilon = 0.25;
  std::vector<DeviationNormResult> per_norm;
  /// Least-squares slope of log(median) against log(norm).
  double slope = 0.0;
  /// Exceedance non-increasing in norm, up to the two half-widths.
  bool monotone_within_half_widths() const;
};

/// Per start norm, the fraction of runs with deviation_sup > norm^(1/2+eps).
DeviationReport estimate_deviation_tail(std::size_t dim, const std::vector<double>& norms,
                                        double epsilon, std::uint64_t trials, std::uint64_t seed,
                                        std::size_t workers = 1);

struct SpacingReport {
  TailEstimate tau_gap;
  /// tau gaps stratified by block index 0, 1, 2.
  std::vector<TailEstimate> tau_gap_by_block;
  TailEstimate w_gap;
  TailEstimate block_length;
  TailEstimate r_theta;
  std::uint64_t tau_gaps_observed = 0;
  /// log survival of R_Theta against t^(d/(d+1)) over the thresholds.
  double r_theta_correlation = 0.0;
  bool insufficient_data() const { return tau_gaps_observed < 50; }
  /// tau-gap survival strictly decreasing over k = 1..10.
  bool tau_strictly_decreasing() const;
  /// survival(10) <= 0.5 survival(2).
  bool tau_ratio_ok() const;
};

/// Pooled spacing tails over `trials` runs from start_norm e_1. R_Theta
/// thresholds sit at the 5%, 10%, ..., 95% empirical quantiles.
SpacingReport estimate_spacing_tails(std::size_t dim, double start_norm, const Constants& constants,
                                     std::uint64_t trials, std::uint64_t seed,
                                     std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Lemma fuzzing

enum class Lemma { kEmptyBall, kFlatness, kRadialProgress };
std::string to_string(Lemma lemma);
Lemma parse_lemma(const std::string& name);

struct FuzzReport {
  Lemma lemma = Lemma::kEmptyBall;
  std::size_t dimension = 2;
  std::uint64_t instances = 0;
  std::uint64_t violations = 0;
  GeneratorStats stats;
  /// Serialized instances that failed (capped), replayable with replay_instance.
  std::vector<nlohmann::json> failures;
};

/// Draws `instances` admissible instances and checks each one.
FuzzReport run_lemma_fuzz(Lemma lemma, std::size_t dim, std::uint64_t instances, std::uint64_t seed);

/// The instance of one fuzz draw, serialized.
nlohmann::json serialize_instance(const EmptyBallInstance& inst);
nlohmann::json serialize_instance(const FlatnessInstance& inst);
nlohmann::json serialize_instance(const RadialProgressInstance& inst);
/// Re-runs the check on a serialized instance; true when the lemma holds.
bool replay_instance(const nlohmann::json& instance);

// ---------------------------------------------------------------------------
// Coupling campaign

struct SymmetryTrial {
  std::uint64_t seed = 0;
  CouplingReport renewal;    // block 1
  CouplingReport first_block;  // block 0
};

struct SymmetryReport {
  Constants constants;
  double start_norm = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t applicable = 0;
  std::uint64_t negated = 0;
  std::uint64_t broken = 0;
  std::uint64_t negation_failures = 0;
  std::uint64_t first_block_failures = 0;
  double max_negation_error = 0.0;
  std::optional<std::uint64_t> failing_seed;
  /// Signed first orthogonal coordinates of p_perp_{pi0}(pi_{w_1}).
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  double mean_first_coordinate = 0.0;
  double standard_error = 0.0;
  double sign_p_value = 1.0;
  std::vector<SymmetryTrial> rows;

  bool insufficient(std::uint64_t min_applicable) const { return applicable < min_applicable; }
  bool exact_ok() const { return negation_failures == 0 && first_block_failures == 0; }
};

struct SymmetryOptions {
  std::uint64_t min_applicable = 50;
  /// Trials are added in batches of the initial size up to this cap.
  std::uint64_t max_trials = 4000;
  std::size_t workers = 1;
};

/// Runs the reflection coupling on independent fields from start_norm e_1,
/// extending the campaign until min_applicable runs had a renewal.
SymmetryReport run_symmetry_campaign(std::size_t dim, double start_norm, const Constants& constants,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const SymmetryOptions& options = {});

// ---------------------------------------------------------------------------
// Resampling smoke test

struct MarkovReport {
  std::size_t step = 0;
  std::vector<double> continued;  // R_{n+1}, original field
  std::vector<double> resampled;  // R_{n+1} after resampling B(0,R_n) minus the history
  KsResult ks;
  bool rejected(double level) const { return ks.p_value < level; }
};

/// Arm (a) explores n+1 steps; arm (b) explores n steps, resamples
/// B(0, R_n) minus the closed history lenses, then takes one psi step. The
/// arms use disjoint seed families.
MarkovReport markov_resampling_test(std::size_t dim, double start_norm, std::size_t step,
                                    std::uint64_t trials, std::uint64_t seed, std::size_t workers = 1);

// ---------------------------------------------------------------------------
// Records

/// FNV-1a over the canonical dump of the config, as 16 hex digits.
std::string content_hash(const nlohmann::json& config);

void write_tail_csv(std::ostream& os, const TailEstimate& estimate,
                    const std::vector<double>* bound = nullptr);

}  // namespace rstlab

#endif  // RSTLAB_EXPERIMENTS_HPP_
