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

// The exploration process pi_{n+1} = psi(pi_n) with its bookkeeping.
//
// Each step forces the lens B0(pi_n, |pi_{n+1} - pi_n|) to be empty; the
// union of these lenses is the history. Only two scalars of the history drive
// decisions: r_n, the smallest norm reached by the history (capped by R_n),
// and the width L_n = R_n - r_n. From them the process derives the terminal
// time Theta, the good steps tau_i, the pseudo-renewal events Q and the
// decomposition times w_k.

#ifndef RSTLAB_EXPLORATION_HPP_
#define RSTLAB_EXPLORATION_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rstlab/geom.hpp"
#include "rstlab/ppp.hpp"
#include "rstlab/rst.hpp"

namespace rstlab {

/// lambda = (1/(4d)) (alpha(1/2)/2)^d.
double default_lambda(std::size_t dim);
/// delta = alpha(1/2)/8.
double default_delta();

struct Constants {
  double kappa = 2.0;
  double lambda = 0.0;
  double delta = 0.0;
  double epsilon = 0.25;

  /// kappa = 2, epsilon = 1/4, lambda and delta from their closed forms.
  static Constants defaults(std::size_t dim);
  /// Exponent of A = t^delta_A: (4/5) 2 epsilon / (1 + 2 epsilon).
  double delta_a() const;
  /// Throws std::invalid_argument unless kappa > 1, lambda > 0, delta > 0
  /// and 0 < epsilon < 1/2.
  void validate() const;
};

/// One row of the exploration: the state at step n before moving on.
struct ExplorationState {
  std::size_t n = 0;
  Vector pi;
  double R = 0.0;
  double r = 0.0;
  double L = 0.0;
  /// |pi_{n+1} - pi_n|; zero on the final row (pi = 0).
  double rho = 0.0;
  bool theta_hit = false;
};

struct EventTrace {
  std::size_t theta = 0;
  /// tau_0, ..., tau_{I_Theta}; the last entry equals theta.
  std::vector<std::size_t> tau;
  std::size_t i_theta = 0;
  /// q[i] is the event Q at step tau_i + 1, evaluated for i < I_Theta.
  std::vector<bool> q;
  /// eta_0, ..., eta_K with eta_K = I_Theta.
  std::vector<std::size_t> eta;
  /// w_k = tau_{eta_k}; the last entry equals theta.
  std::vector<std::size_t> w;
  /// Flagged Q events where psi(pi_tau) != psi(pi_up(pi_tau)).
  std::uint64_t q_psi_mismatches = 0;
  /// Points found exactly on a Q lens boundary.
  std::uint64_t q_boundary_hits = 0;
};

struct Exploration {
  std::size_t dimension = 0;
  Constants constants;
  std::vector<ExplorationState> states;
  std::vector<Lens> history;
  EventTrace trace;
  /// True when max_steps cut the run before reaching the origin.
  bool truncated = false;

  std::vector<Vector> path() const;
  const Vector& pi(std::size_t n) const { return states[n].pi; }
};

struct ExploreOptions {
  std::optional<std::size_t> max_steps;
  /// Evaluate Q events (needs closed-ball scans of the source).
  bool compute_q = true;
  /// Cross-check psi(pi_tau) == psi(pi_up) on every flagged Q event.
  bool check_q_psi = true;
};

Exploration explore(const Vector& pi0, PointSource& source, const Constants& constants,
                    const ExploreOptions& options = {});

/// pi (1 - kappa/|pi|), or 0 when pi = 0.
Vector pi_up(const Vector& pi, double kappa);

/// max_n |p_perp_{pi0}(pi_n)|.
double deviation_sup(const std::vector<Vector>& path, const Vector& pi0);

enum class SourceKind { kAuto, kEager, kLazy };

/// Point source over the lazy field with the given seed. Eager mode realizes
/// every cell meeting B(0, radius) up front and indexes the points; lazy mode
/// realizes cells on demand. Both see the same points, so runs inside the
/// radius agree. kAuto picks eager for d = 2 and lazy otherwise.
class FieldSource final : public PointSource {
 public:
  FieldSource(std::size_t dim, std::uint64_t seed, double radius, SourceKind kind = SourceKind::kAuto);

  std::size_t dimension() const override { return inner_->dimension(); }
  Vector psi(const Vector& x) override { return inner_->psi(x); }
  void visit_closed_ball(const Vector& center, double radius,
                         const std::function<void(std::span<const double>)>& fn) override {
    inner_->visit_closed_ball(center, radius, fn);
  }
  bool eager() const { return eager_; }

 private:
  std::unique_ptr<LazyField> field_;
  std::unique_ptr<PointSource> inner_;
  bool eager_ = false;
};

struct RenewalBlock {
  std::size_t block = 0;
  std::size_t w_start = 0;
  std::size_t w_end = 0;
  Vector increment;
  Vector perp;
  double radial = 0.0;
  double block_length = 0.0;
};

/// One block per consecutive pair (w_k, w_{k+1}).
std::vector<RenewalBlock> renewal_increments(const Exploration& run);

enum class CouplingOutcome { kNegated, kNoRenewal, kCouplingBroken, kNegationFailed };
std::string to_string(CouplingOutcome outcome);

struct CouplingReport {
  CouplingOutcome outcome = CouplingOutcome::kNoRenewal;
  std::size_t block = 0;
  std::size_t w_start = 0;
  std::size_t w_end = 0;
  /// p_perp_{pi_{w_start}}(pi_{w_end}) on the original and reflected runs.
  Vector perp_original;
  Vector perp_reflected;
  double negation_error = 0.0;
  /// First step where the reflected run's scalar data diverged, if any.
  std::optional<std::size_t> divergence_step;
  /// Signed coordinate of perp_original along first_orthogonal_direction.
  double first_coordinate = 0.0;
};

/// Tolerance for comparing scalars and perpendicular parts across the pair.
inline constexpr double kCouplingTolerance = 1e-9;

/// Runs exploration on the points and on their reflection about pi0
/// (block 0) or pi_up(pi_{w_block}) (block >= 1), and checks that
/// p_perp_{pi_{w_block}}(pi_{w_{block+1}}) flips sign.
CouplingReport run_coupling(const Vector& pi0, const PointSet& points, const Constants& constants,
                            std::size_t block = 1);

/// Convenience: samples N on B(0, |pi0|) from the field seed first.
CouplingReport run_coupling(const Vector& pi0, std::uint64_t seed, const Constants& constants,
                            std::size_t block = 1);

/// Every point reflected by reflect_in_ball(axis, .); ids kept.
PointSet reflect_points(const PointSet& points, const Vector& axis);

/// n,x1..xd,R,r,L,is_tau,is_Q,is_w,theta
void write_trace_csv(std::ostream& os, const Exploration& run);
/// block,w_start,w_end,block_length,perp1..perpd
void write_renewal_csv(std::ostream& os, const std::vector<RenewalBlock>& blocks, std::size_t dim);

}  // namespace rstlab

#endif  // RSTLAB_EXPLORATION_HPP_
