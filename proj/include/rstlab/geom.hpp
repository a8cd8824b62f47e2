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

// Dimension-generic geometry: vectors, open balls, lenses, cones, the axial
// reflection used by the symmetry coupling, and the constructive witnesses and
// checkers for the deterministic lemmas on radially cropped balls.
//
// Conventions: all balls are open. Membership uses strict inequalities.
// Dimension is runtime data; every binary operation rejects mixed dimensions.

#ifndef RSTLAB_GEOM_HPP_
#define RSTLAB_GEOM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

#include <boost/container/small_vector.hpp>

#include "rstlab/random.hpp"

namespace rstlab {

/// Raised when a lemma checker is handed an instance outside its hypotheses.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A point of R^d. Coordinates are finite; the constructors that accept
/// external data reject NaN and infinities.
class Vector {
 public:
  using Storage = boost::container::small_vector<double, 4>;

  Vector() = default;
  explicit Vector(std::size_t dim) : coords_(dim, 0.0) {}
  Vector(std::initializer_list<double> coords);
  explicit Vector(std::span<const double> coords);

  /// Standard basis vector e_{axis+1} of R^dim.
  static Vector unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return {coords_.data(), coords_.size()}; }

  double dot(const Vector& other) const;
  double norm2() const;
  double norm() const;
  bool is_zero() const;

  Vector& operator+=(const Vector& other);
  Vector& operator-=(const Vector& other);
  Vector& operator*=(double s);

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator-(Vector a) { return a *= -1.0; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend bool operator==(const Vector& a, const Vector& b) {
    return a.coords_ == b.coords_;
  }

  /// Strict lexicographic order on coordinates; breaks exact distance ties.
  friend bool lex_less(const Vector& a, const Vector& b);

 private:
  Storage coords_;
};

std::string to_string(const Vector& v);

/// Throws std::invalid_argument unless both vectors share a dimension.
void require_same_dim(const Vector& a, const Vector& b, const char* what);

double distance(const Vector& a, const Vector& b);

/// Unsigned angle between nonzero vectors, via a clamped arccos.
double angle_between(const Vector& a, const Vector& b);

/// Lebesgue measure of a d-dimensional ball of radius r.
double ball_volume(int d, double r);

/// u minus its projection on the line through x; u itself when x = 0.
Vector perp_component(const Vector& x, const Vector& u);

/// Reflection through the axis generated by x, applied inside B(0, |x|) and
/// the identity outside. Involutive and norm preserving.
Vector reflect_in_ball(const Vector& x, const Vector& y);

/// Deterministic unit vector orthogonal to x: the standard basis vector least
/// aligned with x, orthogonalized against x. Requires x != 0 and d >= 2.
Vector first_orthogonal_direction(const Vector& x);

/// B(center, radius) intersected with B(0, |center|).
struct Lens {
  Vector center;
  double radius = 0.0;

  /// Infimum of |p| over the lens: max(|center| - radius, 0).
  double inner_reach() const;
  bool contains(const Vector& p) const;
  bool contains(std::span<const double> p) const;
  /// Membership in the closure.
  bool contains_closed(std::span<const double> p) const;
};

bool lens_contains(const Lens& lens, const Vector& p);

/// C[direction, aperture] = {x : x.direction >= |x| cos(aperture)}.
class Cone {
 public:
  Cone(Vector direction, double aperture);
  const Vector& direction() const { return direction_; }
  double aperture() const { return aperture_; }
  bool contains(const Vector& x) const;

 private:
  Vector direction_;
  double aperture_;
};

struct Ball {
  Vector center;
  double radius = 0.0;
};

/// sqrt(2 - ell) - 1 for ell in [0, 1].
double alpha(double ell);

/// Empty ball inside the normalized lens B0(-e_d, ell): center
/// -(1 - ell + alpha(ell) ell / 2) e_d, radius alpha(ell) ell / 2.
Ball empty_ball_witness(double ell, std::size_t dim);

/// 1 + c.e_d <= 2 ell^2 (+1e-12) for an admissible (c, rho, ell).
/// Throws PreconditionViolation otherwise.
bool check_flatness_bound(const Vector& c, double rho, double ell);

/// 1 - |x| >= (h - 1/2) rho (-1e-12) for an admissible (x, rho, h).
/// Throws PreconditionViolation otherwise.
bool check_radial_progress(const Vector& x, double rho, double h);

// ---------------------------------------------------------------------------
// Fuzz instances for the three lemmas. Generators count rejected draws so a
// campaign can report how much of the sampled space was vacuous.

inline constexpr double kLemmaSlack = 1e-12;

struct GeneratorStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  double rejection_rate() const;
};

struct EmptyBallInstance {
  double ell = 0.0;
  Vector c;
  double rho = 0.0;
};

struct EmptyBallVerdict {
  bool disjoint = false;      // |x_l - c| >= rho + r_w
  bool inside_unit = false;   // |x_l| + r_w <= 1
  bool inside_lens = false;   // |x_l + e_d| + r_w <= ell
  bool ok() const { return disjoint && inside_unit && inside_lens; }
};

struct FlatnessInstance {
  double ell = 0.0;
  Vector c;
  double rho = 0.0;
};

struct RadialProgressInstance {
  double rho = 0.0;
  double h = 0.0;
  Vector x;
};

/// Random point uniformly distributed on the unit sphere of R^dim.
Vector random_direction(std::size_t dim, Stream& rng);

/// ell ~ U[0,1], |c| ~ U[1,3] with uniform direction,
/// rho = min(ell + |c| - 1, |c + e_d|) * U[0,1].
EmptyBallInstance generate_empty_ball_instance(std::size_t dim, Stream& rng,
                                               GeneratorStats& stats);
/// Checks the admissibility of an empty-ball instance.
bool empty_ball_admissible(const EmptyBallInstance& inst);
EmptyBallVerdict check_empty_ball(const EmptyBallInstance& inst);

/// ell ~ U[0,1/2]; c uniform in B(-e_d, 1) rejected unless |c| >= 1 and the
/// admissible interval for rho is nonempty; rho uniform on that interval.
FlatnessInstance generate_flatness_instance(std::size_t dim, Stream& rng,
                                            GeneratorStats& stats);

/// rho ~ U[0,1], h ~ U[1/2,1], x uniform in B(-e_d, rho) rejected until it
/// lies in B(0,1) with 1 + x.e_d >= h rho.
RadialProgressInstance generate_radial_progress_instance(std::size_t dim, Stream& rng,
                                                         GeneratorStats& stats);

}  // namespace rstlab

#endif  // RSTLAB_GEOM_HPP_
