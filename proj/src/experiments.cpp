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

#include "rstlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>

#include "rstlab/ppp.hpp"
#include "rstlab/rst.hpp"

namespace rstlab {

double binomial_half_width(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
  double q = 0.0;
  if (lambda < 1e-3) {
    q = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
      const double term = sign * 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
      q += term;
      if (std::abs(term) < 1e-16) break;
      sign = -sign;
    }
    q = std::clamp(q, 0.0, 1.0);
  }
  return {d, q};
}

double sign_test_p_value(std::uint64_t positives, std::uint64_t negatives) {
  const std::uint64_t n = positives + negatives;
  if (n == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(n), 0.5);
  const double k = static_cast<double>(std::min(positives, negatives));
  return std::min(1.0, 2.0 * boost::math::cdf(dist, k));
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares: need >= 2 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: constant x");
  return {sxy / sxx, my - (sxy / sxx) * mx};
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need >= 2 pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  return m;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t group, std::uint64_t index) {
  return stream_key(seed, StreamTag::kTrial, {group, index});
}

// ---------------------------------------------------------------------------

bool TailEstimate::monotone() const {
  for (std::size_t i = 1; i < survival.size(); ++i) {
    if (survival[i] > survival[i - 1]) return false;
  }
  return true;
}

TailEstimate tail_from_samples(const std::vector<double>& samples, std::vector<double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("tail thresholds must be sorted");
  }
  TailEstimate est;
  est.trials = samples.size();
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  for (double t : thresholds) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    const double p = sorted.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(sorted.size());
    est.survival.push_back(p);
    est.half_width.push_back(binomial_half_width(p, est.trials));
  }
  est.thresholds = std::move(thresholds);
  return est;
}

double psi_tail_bound(std::size_t dim, double t) {
  return std::exp(-std::pow(t / 2.0, static_cast<double>(dim)) * ball_volume(static_cast<int>(dim), 1.0));
}

bool PsiTailReport::ok() const {
  return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
}

PsiTailReport estimate_psi_tail(std::size_t dim, double x_norm, std::vector<double> thresholds,
                                std::uint64_t trials, std::uint64_t seed, std::size_t workers) {
  if (trials < 100) throw std::invalid_argument("estimate_psi_tail: trials must be >= 100");
  if (!(x_norm > 0.0)) throw std::invalid_argument("estimate_psi_tail: x_norm must be > 0");
  std::sort(thresholds.begin(), thresholds.end());
  const Vector x = x_norm * Vector::unit(dim, 0);
  const double x2 = x.norm2();
  auto dist = run_trials<double>(trials, workers, [&](std::size_t i) {
    const PointSet pts = sample_ball(dim, x_norm, trial_seed(seed, 0, i));
    double best = x2;  // the origin
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const Vector p = pts.vector(j);
      if (!(p.norm2() < x2)) continue;
      best = std::min(best, (p - x).norm2());
    }
    return std::sqrt(best);
  });
  PsiTailReport rep;
  rep.estimate = tail_from_samples(dist, thresholds);
  rep.estimate.meta = {{"dim", dim}, {"x_norm", x_norm}, {"seed", seed}};
  for (std::size_t k = 0; k < rep.estimate.thresholds.size(); ++k) {
    const double b = psi_tail_bound(dim, rep.estimate.thresholds[k]);
    rep.bound.push_back(b);
    rep.pass.push_back(rep.estimate.survival[k] <= b + rep.estimate.half_width[k]);
  }
  return rep;
}

// ---------------------------------------------------------------------------

bool DeviationReport::monotone_within_half_widths() const {
  for (std::size_t i = 1; i < per_norm.size(); ++i) {
    const auto& a = per_norm[i - 1];
    const auto& b = per_norm[i];
    if (b.exceed_rate > a.exceed_rate + a.half_width + b.half_width) return false;
  }
  return true;
}

DeviationReport estimate_deviation_tail(std::size_t dim, const std::vector<double>& norms,
                                        double epsilon, std::uint64_t trials, std::uint64_t seed,
                                        std::size_t workers) {
  if (trials < 100) throw std::invalid_argument("estimate_deviation_tail: trials must be >= 100");
  DeviationReport rep;
  rep.epsilon = epsilon;
  Constants c = Constants::defaults(dim);
  ExploreOptions opts;
  opts.compute_q = false;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const double norm = norms[k];
    if (!(norm > 0.0)) throw std::invalid_argument("estimate_deviation_tail: norms must be > 0");
    const Vector pi0 = norm * Vector::unit(dim, 0);
    DeviationNormResult r;
    r.norm = norm;
    r.trials = trials;
    r.sups = run_trials<double>(trials, workers, [&](std::size_t i) {
      FieldSource src(dim, trial_seed(seed, k, i), norm, SourceKind::kLazy);
      const Exploration run = explore(pi0, src, c, opts);
      return deviation_sup(run.path(), pi0);
    });
    const double threshold = std::pow(norm, 0.5 + epsilon);
    const auto exceed = std::count_if(r.sups.begin(), r.sups.end(), [&](double s) { return s > threshold; });
    r.exceed_rate = static_cast<double>(exceed) / static_cast<double>(trials);
    r.half_width = binomial_half_width(r.exceed_rate, trials);
    r.median_deviation = median(r.sups);
    if (r.median_deviation > 0.0) {
      lx.push_back(std::log(norm));
      ly.push_back(std::log(r.median_deviation));
    }
    rep.per_norm.push_back(std::move(r));
  }
  if (lx.size() >= 2) rep.slope = least_squares(lx, ly).slope;
  return rep;
}

// ---------------------------------------------------------------------------

bool SpacingReport::tau_strictly_decreasing() const {
  // thresholds are k = 0..10.
  for (std::size_t k = 2; k <= 10 && k < tau_gap.survival.size(); ++k) {
    if (!(tau_gap.survival[k] < tau_gap.survival[k - 1])) return false;
  }
  return tau_gap.survival.size() > 10;
}

bool SpacingReport::tau_ratio_ok() const {
  return tau_gap.survival.size() > 10 && tau_gap.survival[10] <= 0.5 * tau_gap.survival[2];
}

SpacingReport estimate_spacing_tails(std::size_t dim, double start_norm, const Constants& constants,
                                     std::uint64_t trials, std::uint64_t seed, std::size_t workers) {
  if (trials < 100) throw std::invalid_argument("estimate_spacing_tails: trials must be >= 100");
  constants.validate();
  struct TrialOut {
    std::vector<std::size_t> tau_gaps;
    std::vector<std::size_t> w_gaps;
    std::vector<double> block_lengths;
    double r_theta = 0.0;
  };
  const Vector pi0 = start_norm * Vector::unit(dim, 0);
  auto outs = run_trials<TrialOut>(trials, workers, [&](std::size_t i) {
    FieldSource src(dim, trial_seed(seed, 0, i), start_norm, SourceKind::kLazy);
    const Exploration run = explore(pi0, src, constants);
    TrialOut o;
    const auto& tau = run.trace.tau;
    for (std::size_t k = 0; k + 1 < tau.size(); ++k) o.tau_gaps.push_back(tau[k + 1] - tau[k]);
    for (const auto& b : renewal_increments(run)) {
      o.w_gaps.push_back(b.w_end - b.w_start);
      o.block_lengths.push_back(b.block_length);
    }
    o.r_theta = run.states[run.trace.theta].R;
    return o;
  });

  std::vector<double> tau_all, w_all, len_all, r_all;
  std::vector<std::vector<double>> tau_by(3);
  for (const auto& o : outs) {
    for (std::size_t k = 0; k < o.tau_gaps.size(); ++k) {
      tau_all.push_back(static_cast<double>(o.tau_gaps[k]));
      if (k < 3) tau_by[k].push_back(static_cast<double>(o.tau_gaps[k]));
    }
    for (std::size_t g : o.w_gaps) w_all.push_back(static_cast<double>(g));
    len_all.insert(len_all.end(), o.block_lengths.begin(), o.block_lengths.end());
    r_all.push_back(o.r_theta);
  }

  std::vector<double> ks(11);
  std::iota(ks.begin(), ks.end(), 0.0);
  SpacingReport rep;
  rep.tau_gaps_observed = tau_all.size();
  rep.tau_gap = tail_from_samples(tau_all, ks);
  for (auto& v : tau_by) rep.tau_gap_by_block.push_back(tail_from_samples(v, ks));
  std::vector<double> wk;
  for (int k = 0; k <= 50; k += 5) wk.push_back(k);
  rep.w_gap = tail_from_samples(w_all, wk);
  std::vector<double> lk;
  for (int k = 0; k <= 100; k += 10) lk.push_back(k);
  rep.block_length = tail_from_samples(len_all, lk);

  std::vector<double> qs;
  {
    std::vector<double> sorted = r_all;
    std::sort(sorted.begin(), sorted.end());
    for (int q = 5; q <= 95; q += 5) {
      const auto idx = static_cast<std::size_t>(std::floor(q / 100.0 * static_cast<double>(sorted.size() - 1)));
      if (qs.empty() || sorted[idx] > qs.back()) qs.push_back(sorted[idx]);
    }
  }
  rep.r_theta = tail_from_samples(r_all, qs);
  std::vector<double> tx, ly;
  const double expo = static_cast<double>(dim) / (static_cast<double>(dim) + 1.0);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    if (rep.r_theta.survival[k] > 0.0) {
      tx.push_back(std::pow(qs[k], expo));
      ly.push_back(std::log(rep.r_theta.survival[k]));
    }
  }
  rep.r_theta_correlation = tx.size() >= 2 ? pearson_correlation(tx, ly) : 0.0;
  const nlohmann::json meta = {{"dim", dim},         {"start_norm", start_norm}, {"kappa", constants.kappa},
                               {"lambda", constants.lambda}, {"seed", seed},  {"trials", trials}};
  rep.tau_gap.meta = rep.w_gap.meta = rep.block_length.meta = rep.r_theta.meta = meta;
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(Lemma lemma) {
  switch (lemma) {
    case Lemma::kEmptyBall: return "empty-ball";
    case Lemma::kFlatness: return "flatness";
    case Lemma::kRadialProgress: return "radial-progress";
  }
  return "unknown";
}

Lemma parse_lemma(const std::string& name) {
  if (name == "empty-ball") return Lemma::kEmptyBall;
  if (name == "flatness") return Lemma::kFlatness;
  if (name == "radial-progress") return Lemma::kRadialProgress;
  throw std::invalid_argument("unknown lemma '" + name + "' (empty-ball, flatness, radial-progress)");
}

namespace {

nlohmann::json coords_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v.coords()) a.push_back(x);
  return a;
}

Vector json_vector(const nlohmann::json& a) {
  std::vector<double> c = a.get<std::vector<double>>();
  return Vector(std::span<const double>(c));
}

bool checked(const std::function<bool()>& check) {
  try {
    return check();
  } catch (const PreconditionViolation&) {
    return false;
  }
}

}  // namespace

nlohmann::json serialize_instance(const EmptyBallInstance& inst) {
  return {{"lemma", "empty-ball"}, {"ell", inst.ell}, {"c", coords_json(inst.c)}, {"rho", inst.rho}};
}

nlohmann::json serialize_instance(const FlatnessInstance& inst) {
  return {{"lemma", "flatness"}, {"ell", inst.ell}, {"c", coords_json(inst.c)}, {"rho", inst.rho}};
}

nlohmann::json serialize_instance(const RadialProgressInstance& inst) {
  return {{"lemma", "radial-progress"}, {"rho", inst.rho}, {"h", inst.h}, {"x", coords_json(inst.x)}};
}

bool replay_instance(const nlohmann::json& j) {
  switch (parse_lemma(j.at("lemma").get<std::string>())) {
    case Lemma::kEmptyBall: {
      const EmptyBallInstance inst{j.at("ell").get<double>(), json_vector(j.at("c")), j.at("rho").get<double>()};
      return empty_ball_admissible(inst) && check_empty_ball(inst).ok();
    }
    case Lemma::kFlatness:
      return checked([&] {
        return check_flatness_bound(json_vector(j.at("c")), j.at("rho").get<double>(), j.at("ell").get<double>());
      });
    case Lemma::kRadialProgress:
      return checked([&] {
        return check_radial_progress(json_vector(j.at("x")), j.at("rho").get<double>(), j.at("h").get<double>());
      });
  }
  return false;
}

FuzzReport run_lemma_fuzz(Lemma lemma, std::size_t dim, std::uint64_t instances, std::uint64_t seed) {
  if (instances < 1) throw std::invalid_argument("run_lemma_fuzz: instances must be >= 1");
  if (dim < 2) throw std::invalid_argument("run_lemma_fuzz: dimension must be >= 2");
  constexpr std::size_t kMaxFailures = 16;
  FuzzReport rep;
  rep.lemma = lemma;
  rep.dimension = dim;
  rep.instances = instances;
  for (std::uint64_t i = 0; i < instances; ++i) {
    Stream rng(stream_key(seed, StreamTag::kFuzz, {static_cast<std::uint64_t>(lemma), i}));
    nlohmann::json inst;
    bool ok = false;
    switch (lemma) {
      case Lemma::kEmptyBall: {
        const auto x = generate_empty_ball_instance(dim, rng, rep.stats);
        ok = check_empty_ball(x).ok();
        if (!ok) inst = serialize_instance(x);
        break;
      }
      case Lemma::kFlatness: {
        const auto x = generate_flatness_instance(dim, rng, rep.stats);
        ok = checked([&] { return check_flatness_bound(x.c, x.rho, x.ell); });
        if (!ok) inst = serialize_instance(x);
        break;
      }
      case Lemma::kRadialProgress: {
        const auto x = generate_radial_progress_instance(dim, rng, rep.stats);
        ok = checked([&] { return check_radial_progress(x.x, x.rho, x.h); });
        if (!ok) inst = serialize_instance(x);
        break;
      }
    }
    if (!ok) {
      ++rep.violations;
      if (rep.failures.size() < kMaxFailures) {
        inst["index"] = i;
        rep.failures.push_back(std::move(inst));
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

SymmetryReport run_symmetry_campaign(std::size_t dim, double start_norm, const Constants& constants,
                                     std::uint64_t trials, std::uint64_t seed,
                                     const SymmetryOptions& options) {
  if (trials < 100) throw std::invalid_argument("run_symmetry_campaign: trials must be >= 100");
  constants.validate();
  SymmetryReport rep;
  rep.constants = constants;
  rep.start_norm = start_norm;
  const Vector pi0 = start_norm * Vector::unit(dim, 0);

  const std::uint64_t cap = std::max(options.max_trials, trials);
  std::uint64_t done = 0;
  do {
    const std::uint64_t batch = std::min(trials, cap - done);
    auto rows = run_trials<SymmetryTrial>(batch, options.workers, [&](std::size_t k) {
      SymmetryTrial t;
      t.seed = trial_seed(seed, 0, done + k);
      LazyField field(dim, t.seed);
      const PointSet pts = realize_cells(field, RegionSpec::ball(start_norm));
      t.renewal = run_coupling(pi0, pts, constants, 1);
      t.first_block = run_coupling(pi0, pts, constants, 0);
      return t;
    });
    for (auto& t : rows) {
      const auto out = t.renewal.outcome;
      if (out != CouplingOutcome::kNoRenewal) ++rep.applicable;
      if (out == CouplingOutcome::kNegated) ++rep.negated;
      if (out == CouplingOutcome::kCouplingBroken) ++rep.broken;
      if (out == CouplingOutcome::kNegationFailed) ++rep.negation_failures;
      if (t.first_block.outcome != CouplingOutcome::kNegated) ++rep.first_block_failures;
      if (!rep.failing_seed && (out == CouplingOutcome::kNegationFailed ||
                                t.first_block.outcome != CouplingOutcome::kNegated)) {
        rep.failing_seed = t.seed;
      }
      if (out != CouplingOutcome::kNoRenewal) {
        rep.max_negation_error = std::max(rep.max_negation_error, t.renewal.negation_error);
      }
      rep.max_negation_error = std::max(rep.max_negation_error, t.first_block.negation_error);
      rep.rows.push_back(std::move(t));
    }
    done += batch;
  } while (rep.applicable < options.min_applicable && done < cap);
  rep.trials = done;

  std::vector<double> first;
  for (const auto& t : rep.rows) {
    const double v = t.first_block.first_coordinate;
    first.push_back(v);
    if (v > 0.0) ++rep.positives;
    if (v < 0.0) ++rep.negatives;
  }
  const double n = static_cast<double>(first.size());
  rep.mean_first_coordinate = std::accumulate(first.begin(), first.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : first) ss += (v - rep.mean_first_coordinate) * (v - rep.mean_first_coordinate);
  rep.standard_error = n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  rep.sign_p_value = sign_test_p_value(rep.positives, rep.negatives);
  return rep;
}

// ---------------------------------------------------------------------------

MarkovReport markov_resampling_test(std::size_t dim, double start_norm, std::size_t step,
                                    std::uint64_t trials, std::uint64_t seed, std::size_t workers) {
  if (trials < 100) throw std::invalid_argument("markov_resampling_test: trials must be >= 100");
  const Constants c = Constants::defaults(dim);
  const Vector pi0 = start_norm * Vector::unit(dim, 0);
  MarkovReport rep;
  rep.step = step;
  ExploreOptions opts;
  opts.compute_q = false;

  rep.continued = run_trials<double>(trials, workers, [&](std::size_t i) {
    LazyField field(dim, trial_seed(seed, 1, i));
    IndexedSource src(realize_cells(field, RegionSpec::ball(start_norm)));
    ExploreOptions o = opts;
    o.max_steps = step + 1;
    const Exploration run = explore(pi0, src, c, o);
    return run.states.size() > step + 1 ? run.states[step + 1].R : 0.0;
  });

  rep.resampled = run_trials<double>(trials, workers, [&](std::size_t i) {
    LazyField field(dim, trial_seed(seed, 2, i));
    PointSet base = realize_cells(field, RegionSpec::ball(start_norm));
    base.window_radius = start_norm;
    IndexedSource src(base);
    ExploreOptions o = opts;
    o.max_steps = step;
    const Exploration run = explore(pi0, src, c, o);
    if (run.states.size() <= step) return 0.0;
    const ExplorationState& s = run.states[step];
    if (s.pi.is_zero()) return 0.0;
    const PointSet fresh =
        resample_region(base, RegionSpec::ball_minus_lenses(s.R, run.history), trial_seed(seed, 3, i));
    const GridIndex index(fresh);
    return psi(s.pi, index).norm();
  });
  rep.ks = ks_two_sample(rep.continued, rep.resampled);
  return rep;
}

// ---------------------------------------------------------------------------

std::string content_hash(const nlohmann::json& config) {
  std::uint64_t h = UINT64_C(0xcbf29ce484222325);
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= UINT64_C(0x100000001b3);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_tail_csv(std::ostream& os, const TailEstimate& estimate, const std::vector<double>* bound) {
  os << "threshold,survival,half_width" << (bound ? ",bound" : "") << '\n';
  for (std::size_t k = 0; k < estimate.thresholds.size(); ++k) {
    os << format_double(estimate.thresholds[k]) << ',' << format_double(estimate.survival[k]) << ','
       << format_double(estimate.half_width[k]);
    if (bound) os << ',' << format_double((*bound)[k]);
    os << '\n';
  }
}

}  // namespace rstlab
