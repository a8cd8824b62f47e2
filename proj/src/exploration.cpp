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

#include "rstlab/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rstlab {

double default_lambda(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("default_lambda: dimension must be >= 1");
  const double d = static_cast<double>(dim);
  return std::pow(alpha(0.5) / 2.0, d) / (4.0 * d);
}

double default_delta() { return alpha(0.5) / 8.0; }

Constants Constants::defaults(std::size_t dim) {
  Constants c;
  c.lambda = default_lambda(dim);
  c.delta = default_delta();
  return c;
}

double Constants::delta_a() const { return 0.8 * 2.0 * epsilon / (1.0 + 2.0 * epsilon); }

void Constants::validate() const {
  if (!(kappa > 1.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be a finite number > 1, got " + std::to_string(kappa));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be a finite number > 0, got " + std::to_string(lambda));
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be a finite number > 0, got " + std::to_string(delta));
  }
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 1/2), got " + std::to_string(epsilon));
  }
}

std::vector<Vector> Exploration::path() const {
  std::vector<Vector> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.pi);
  return out;
}

Vector pi_up(const Vector& pi, double kappa) {
  const double R = pi.norm();
  if (R == 0.0) return Vector(pi.dim());
  return pi * (1.0 - kappa / R);
}

double deviation_sup(const std::vector<Vector>& path, const Vector& pi0) {
  double best = 0.0;
  for (const auto& p : path) best = std::max(best, perp_component(pi0, p).norm());
  return best;
}

namespace {

// Closed-lens count over B0(center, radius); boundary points also bump the
// tie counter. The center itself is excluded: it is the walker's own point,
// always on the sphere of radius |center|.
std::size_t count_closed_lens(PointSource& source, const Vector& center, double radius,
                              std::uint64_t& boundary_hits) {
  const double R2 = center.norm2();
  const double r2 = radius * radius;
  std::size_t count = 0;
  source.visit_closed_ball(center, radius, [&](std::span<const double> p) {
    double n2 = 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      n2 += p[i] * p[i];
      const double t = p[i] - center[i];
      d2 += t * t;
    }
    if (n2 > R2 || d2 > r2 || d2 == 0.0) return;
    ++count;
    if (n2 == R2 || d2 == r2) {
      ++boundary_hits;
      record_tie_event();
    }
  });
  return count;
}

void derive_events(Exploration& run, PointSource& source, const ExploreOptions& options) {
  const auto& st = run.states;
  const Constants& c = run.constants;
  EventTrace& tr = run.trace;
  const double d1 = static_cast<double>(run.dimension) + 1.0;

  tr.theta = st.size() - 1;
  for (std::size_t n = 0; n < st.size(); ++n) {
    if (st[n].R < 1.0 + c.kappa || std::pow(st[n].L, d1) > c.lambda * st[n].R) {
      tr.theta = n;
      break;
    }
  }
  // A truncated run may never meet the criterion; its last row stands in.
  run.states[tr.theta].theta_hit = true;

  tr.tau.assign(1, 0);
  while (tr.tau.back() != tr.theta) {
    const std::size_t prev = tr.tau.back();
    std::size_t next = tr.theta;
    for (std::size_t i = prev + 1; i < tr.theta; ++i) {
      if (st[i].L < c.kappa && st[prev].R - st[i].R >= c.kappa + 1.0) {
        next = i;
        break;
      }
    }
    tr.tau.push_back(next);
  }
  tr.i_theta = tr.tau.size() - 1;

  tr.q.assign(tr.i_theta, false);
  if (options.compute_q) {
    for (std::size_t i = 0; i < tr.i_theta; ++i) {
      const Vector& p = st[tr.tau[i]].pi;
      const Vector up = pi_up(p, c.kappa);
      const std::size_t wide = count_closed_lens(source, p, c.kappa + 1.0, tr.q_boundary_hits);
      if (wide != 1) continue;
      const std::size_t narrow = count_closed_lens(source, up, 1.0, tr.q_boundary_hits);
      tr.q[i] = narrow == 1;
      if (tr.q[i] && options.check_q_psi && tr.tau[i] + 1 < st.size()) {
        const Vector& next = st[tr.tau[i] + 1].pi;
        if (up.is_zero() || !(source.psi(up) == next)) ++tr.q_psi_mismatches;
      }
    }
  }

  tr.eta.assign(1, 0);
  while (tr.eta.back() != tr.i_theta) {
    std::size_t next = tr.i_theta;
    for (std::size_t i = tr.eta.back() + 1; i < tr.i_theta; ++i) {
      if (tr.q[i] && tr.tau[i + 1] < tr.theta) {
        next = i;
        break;
      }
    }
    tr.eta.push_back(next);
  }
  tr.w.clear();
  for (std::size_t e : tr.eta) tr.w.push_back(tr.tau[e]);
}

}  // namespace

Exploration explore(const Vector& pi0, PointSource& source, const Constants& constants,
                    const ExploreOptions& options) {
  if (pi0.is_zero()) throw std::invalid_argument("explore: pi0 must be nonzero");
  if (pi0.dim() != source.dimension()) throw std::invalid_argument("explore: dimension mismatch");
  constants.validate();

  Exploration run;
  run.dimension = pi0.dim();
  run.constants = constants;
  {
    ExplorationState s0;
    s0.pi = pi0;
    s0.R = pi0.norm();
    s0.r = s0.R;
    s0.L = 0.0;
    run.states.push_back(std::move(s0));
  }
  while (!run.states.back().pi.is_zero()) {
    if (options.max_steps && run.states.size() > *options.max_steps) {
      run.truncated = true;
      break;
    }
    ExplorationState& cur = run.states.back();
    Vector next = source.psi(cur.pi);
    cur.rho = distance(next, cur.pi);
    run.history.push_back(Lens{cur.pi, cur.rho});

    ExplorationState s;
    s.n = cur.n + 1;
    s.R = next.norm();
    s.r = std::min(cur.r, std::max(cur.R - cur.rho, 0.0));
    s.L = s.R - s.r;
    s.pi = std::move(next);
    run.states.push_back(std::move(s));
  }
  derive_events(run, source, options);
  return run;
}

FieldSource::FieldSource(std::size_t dim, std::uint64_t seed, double radius, SourceKind kind)
    : field_(std::make_unique<LazyField>(dim, seed)) {
  eager_ = kind == SourceKind::kEager || (kind == SourceKind::kAuto && dim == 2);
  if (eager_) {
    inner_ = std::make_unique<IndexedSource>(realize_cells(*field_, RegionSpec::ball(radius)));
  } else {
    inner_ = std::make_unique<LazySource>(*field_);
  }
}

std::vector<RenewalBlock> renewal_increments(const Exploration& run) {
  std::vector<RenewalBlock> blocks;
  const auto& w = run.trace.w;
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    RenewalBlock b;
    b.block = k;
    b.w_start = w[k];
    b.w_end = w[k + 1];
    const Vector& base = run.pi(b.w_start);
    b.increment = run.pi(b.w_end) - base;
    b.perp = perp_component(base, run.pi(b.w_end));
    const double bn = base.norm();
    b.radial = bn > 0.0 ? b.increment.dot(base) / bn : 0.0;
    for (std::size_t j = b.w_start; j < b.w_end; ++j) b.block_length += run.states[j].rho;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

std::string to_string(CouplingOutcome outcome) {
  switch (outcome) {
    case CouplingOutcome::kNegated: return "negated";
    case CouplingOutcome::kNoRenewal: return "no-renewal";
    case CouplingOutcome::kCouplingBroken: return "coupling-broken";
    case CouplingOutcome::kNegationFailed: return "negation-failed";
  }
  return "unknown";
}

PointSet reflect_points(const PointSet& points, const Vector& axis) {
  PointSet out(points.dimension);
  out.window_radius = points.window_radius;
  out.coords.reserve(points.coords.size());
  out.ids.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vector y = reflect_in_ball(axis, points.vector(i));
    out.push_back(y.coords(), points.ids[i]);
  }
  return out;
}

CouplingReport run_coupling(const Vector& pi0, const PointSet& points, const Constants& constants,
                            std::size_t block) {
  CouplingReport rep;
  rep.block = block;
  IndexedSource original(points);
  const Exploration a = explore(pi0, original, constants);
  const auto& w = a.trace.w;
  if (block >= w.size() || (block > 0 && w[block] >= a.trace.theta)) {
    rep.outcome = CouplingOutcome::kNoRenewal;
    return rep;
  }
  rep.w_start = w[block];
  rep.w_end = block + 1 < w.size() ? w[block + 1] : w[block];
  const Vector& base = a.pi(rep.w_start);
  const Vector axis = block == 0 ? pi0 : pi_up(base, constants.kappa);

  IndexedSource mirrored(reflect_points(points, axis));
  const Exploration b = explore(pi0, mirrored, constants);

  // Up to w_start the path must match exactly; afterwards only the scalar
  // data must agree.
  const std::size_t common = std::min(a.states.size(), b.states.size());
  for (std::size_t k = 0; k < common; ++k) {
    const bool same =
        (block > 0 && k <= rep.w_start)
            ? a.pi(k) == b.pi(k)
            : std::abs(a.states[k].R - b.states[k].R) <= kCouplingTolerance &&
                  std::abs(a.states[k].L - b.states[k].L) <= kCouplingTolerance;
    if (!same) {
      rep.divergence_step = k;
      break;
    }
  }
  if (!rep.divergence_step && a.states.size() != b.states.size()) rep.divergence_step = common;
  const bool events_match = a.trace.theta == b.trace.theta && b.trace.w.size() > block &&
                            b.trace.w[block] == rep.w_start &&
                            (block + 1 >= w.size() || (b.trace.w.size() > block + 1 && b.trace.w[block + 1] == rep.w_end));
  rep.perp_original = perp_component(base, a.pi(rep.w_end));
  if (rep.w_end < b.states.size()) rep.perp_reflected = perp_component(base, b.pi(rep.w_end));
  if (base.dim() >= 2) rep.first_coordinate = rep.perp_original.dot(first_orthogonal_direction(base));

  if (!events_match || (rep.divergence_step && *rep.divergence_step <= rep.w_end)) {
    if (!rep.divergence_step) rep.divergence_step = std::min(a.trace.theta, b.trace.theta);
    rep.outcome = CouplingOutcome::kCouplingBroken;
    return rep;
  }
  rep.negation_error = (rep.perp_original + rep.perp_reflected).norm();
  rep.outcome = rep.negation_error <= kCouplingTolerance ? CouplingOutcome::kNegated
                                                          : CouplingOutcome::kNegationFailed;
  return rep;
}

CouplingReport run_coupling(const Vector& pi0, std::uint64_t seed, const Constants& constants,
                            std::size_t block) {
  LazyField field(pi0.dim(), seed);
  return run_coupling(pi0, realize_cells(field, RegionSpec::ball(pi0.norm())), constants, block);
}

void write_trace_csv(std::ostream& os, const Exploration& run) {
  const std::size_t d = run.dimension;
  os << "n";
  for (std::size_t i = 1; i <= d; ++i) os << ",x" << i;
  os << ",R,r,L,is_tau,is_Q,is_w,theta\n";
  const auto& tr = run.trace;
  std::vector<char> is_tau(run.states.size(), 0), is_q(run.states.size(), 0), is_w(run.states.size(), 0);
  for (std::size_t t : tr.tau) is_tau[t] = 1;
  for (std::size_t i = 0; i < tr.q.size(); ++i) {
    if (tr.q[i] && tr.tau[i] + 1 < run.states.size()) is_q[tr.tau[i] + 1] = 1;
  }
  for (std::size_t t : tr.w) is_w[t] = 1;
  for (std::size_t n = 0; n < run.states.size(); ++n) {
    const auto& s = run.states[n];
    os << n;
    for (std::size_t i = 0; i < d; ++i) os << ',' << format_double(s.pi[i]);
    os << ',' << format_double(s.R) << ',' << format_double(s.r) << ',' << format_double(s.L) << ','
       << int(is_tau[n]) << ',' << int(is_q[n]) << ',' << int(is_w[n]) << ',' << (n == tr.theta ? 1 : 0)
       << '\n';
  }
}

void write_renewal_csv(std::ostream& os, const std::vector<RenewalBlock>& blocks, std::size_t dim) {
  os << "block,w_start,w_end,block_length";
  for (std::size_t i = 1; i <= dim; ++i) os << ",perp" << i;
  os << '\n';
  for (const auto& b : blocks) {
    os << b.block << ',' << b.w_start << ',' << b.w_end << ',' << format_double(b.block_length);
    for (std::size_t i = 0; i < dim; ++i) os << ',' << format_double(b.perp[i]);
    os << '\n';
  }
}

}  // namespace rstlab
