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

#include "rstlab/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/random/normal_distribution.hpp>

namespace rstlab {

namespace {

void require_finite(std::span<const double> coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw std::invalid_argument("vector coordinate is not finite");
  }
}

}  // namespace

Vector::Vector(std::initializer_list<double> coords) : coords_(coords.begin(), coords.end()) {
  require_finite(this->coords());
}

Vector::Vector(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {
  require_finite(this->coords());
}

Vector Vector::unit(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::invalid_argument("unit vector axis out of range");
  Vector v(dim);
  v[axis] = 1.0;
  return v;
}

double Vector::dot(const Vector& other) const {
  require_same_dim(*this, other, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other.coords_[i];
  return s;
}

double Vector::norm2() const {
  double s = 0.0;
  for (double c : coords_) s += c * c;
  return s;
}

double Vector::norm() const { return std::sqrt(norm2()); }

bool Vector::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

Vector& Vector::operator+=(const Vector& other) {
  require_same_dim(*this, other, "addition");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Vector& Vector::operator-=(const Vector& other) {
  require_same_dim(*this, other, "subtraction");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Vector& Vector::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.coords_.begin(), a.coords_.end(), b.coords_.begin(),
                                      b.coords_.end());
}

std::string to_string(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string("dimension mismatch in ") + what + ": " +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

double angle_between(const Vector& a, const Vector& b) {
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) throw std::invalid_argument("angle with a zero vector");
  return std::acos(std::clamp(a.dot(b) / denom, -1.0, 1.0));
}

double ball_volume(int d, double r) {
  if (d < 1) throw std::invalid_argument("ball_volume: dimension must be >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("ball_volume: radius must be >= 0");
  const double half = 0.5 * d;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0)) * std::pow(r, d);
}

Vector perp_component(const Vector& x, const Vector& u) {
  require_same_dim(x, u, "perp_component");
  const double xx = x.norm2();
  if (xx == 0.0) return u;
  return u - (x.dot(u) / xx) * x;
}

Vector reflect_in_ball(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "reflect_in_ball");
  if (x.is_zero()) throw std::invalid_argument("reflect_in_ball: axis must be nonzero");
  if (y.norm2() >= x.norm2()) return y;
  // y - 2 p(y) = 2 proj_x(y) - y.
  return (2.0 * x.dot(y) / x.norm2()) * x - y;
}

Vector first_orthogonal_direction(const Vector& x) {
  if (x.is_zero()) throw std::invalid_argument("orthogonal direction of the zero vector");
  if (x.dim() < 2) throw std::invalid_argument("orthogonal direction needs dimension >= 2");
  // Pick the basis vector least aligned with x for a well-conditioned result,
  // scanning in axis order so the choice is deterministic.
  const Vector xhat = x * (1.0 / x.norm());
  std::size_t best = 0;
  double best_align = 2.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double a = std::abs(xhat[i]);
    if (a < best_align) {
      best_align = a;
      best = i;
    }
  }
  Vector v = perp_component(xhat, Vector::unit(x.dim(), best));
  return v * (1.0 / v.norm());
}

double Lens::inner_reach() const { return std::max(center.norm() - radius, 0.0); }

bool Lens::contains(std::span<const double> p) const {
  double dc = 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double t = p[i] - center[i];
    dc += t * t;
    pn += p[i] * p[i];
  }
  return dc < radius * radius && pn < center.norm2();
}

bool Lens::contains(const Vector& p) const {
  require_same_dim(center, p, "lens membership");
  return contains(p.coords());
}

bool Lens::contains_closed(std::span<const double> p) const {
  double dc = 0.0;
  double pn = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double t = p[i] - center[i];
    dc += t * t;
    pn += p[i] * p[i];
  }
  return dc <= radius * radius && pn <= center.norm2();
}

bool lens_contains(const Lens& lens, const Vector& p) { return lens.contains(p); }

Cone::Cone(Vector direction, double aperture)
    : direction_(std::move(direction)), aperture_(aperture) {
  if (std::abs(direction_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("cone direction must have unit norm");
  }
  if (!(aperture >= 0.0 && aperture <= std::numbers::pi)) {
    throw std::invalid_argument("cone aperture must lie in [0, pi]");
  }
}

bool Cone::contains(const Vector& x) const {
  return x.dot(direction_) >= x.norm() * std::cos(aperture_);
}

double alpha(double ell) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw std::invalid_argument("alpha: ell must lie in [0, 1]");
  return std::sqrt(2.0 - ell) - 1.0;
}

Ball empty_ball_witness(double ell, std::size_t dim) {
  const double a = alpha(ell);
  if (dim < 1) throw std::invalid_argument("empty_ball_witness: dimension must be >= 1");
  const double r = 0.5 * a * ell;
  Vector center(dim);
  center[dim - 1] = -(1.0 - ell + r);
  return {std::move(center), r};
}

bool check_flatness_bound(const Vector& c, double rho, double ell) {
  const std::size_t d = c.dim();
  if (d < 1) throw PreconditionViolation("flatness: empty vector");
  if (!(ell >= 0.0 && ell <= 0.5)) throw PreconditionViolation("flatness: ell outside [0, 1/2]");
  if (!(rho >= 0.0)) throw PreconditionViolation("flatness: negative rho");
  const double cn = c.norm();
  if (cn < 1.0 - kLemmaSlack) throw PreconditionViolation("flatness: |c| < 1");
  if (rho > ell + cn - 1.0 + kLemmaSlack) {
    throw PreconditionViolation("flatness: B(c, rho) meets B(0, 1 - ell)");
  }
  Vector ced = c;
  ced[d - 1] += 1.0;
  if (ced.norm() > rho + ell + kLemmaSlack) {
    throw PreconditionViolation("flatness: closed balls around c and -e_d are disjoint");
  }
  return 1.0 + c[d - 1] <= 2.0 * ell * ell + kLemmaSlack;
}

bool check_radial_progress(const Vector& x, double rho, double h) {
  const std::size_t d = x.dim();
  if (d < 1) throw PreconditionViolation("radial progress: empty vector");
  if (!(rho >= 0.0 && rho <= 1.0)) throw PreconditionViolation("radial progress: rho outside [0, 1]");
  if (!(h >= 0.5 && h <= 1.0)) throw PreconditionViolation("radial progress: h outside [1/2, 1]");
  Vector xed = x;
  xed[d - 1] += 1.0;
  if (xed.norm() > rho + kLemmaSlack || x.norm() > 1.0 + kLemmaSlack) {
    throw PreconditionViolation("radial progress: x outside the closed lens B0(-e_d, rho)");
  }
  if (1.0 + x[d - 1] < h * rho - kLemmaSlack) {
    throw PreconditionViolation("radial progress: height constraint 1 + x.e_d >= h rho fails");
  }
  return 1.0 - x.norm() >= (h - 0.5) * rho - kLemmaSlack;
}

double GeneratorStats::rejection_rate() const {
  const std::uint64_t total = accepted + rejected;
  return total == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(total);
}

Vector random_direction(std::size_t dim, Stream& rng) {
  boost::random::normal_distribution<double> gauss;
  Vector v(dim);
  double n2 = 0.0;
  do {
    for (std::size_t i = 0; i < dim; ++i) v[i] = gauss(rng);
    n2 = v.norm2();
  } while (n2 == 0.0);
  return v * (1.0 / std::sqrt(n2));
}

namespace {

Vector uniform_in_ball(const Vector& center, double radius, Stream& rng) {
  const std::size_t d = center.dim();
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  return center + r * random_direction(d, rng);
}

Vector minus_ed(std::size_t dim) { return -Vector::unit(dim, dim - 1); }

}  // namespace

EmptyBallInstance generate_empty_ball_instance(std::size_t dim, Stream& rng,
                                               GeneratorStats& stats) {
  for (;;) {
    EmptyBallInstance inst;
    inst.ell = rng.uniform();
    inst.c = rng.uniform(1.0, 3.0) * random_direction(dim, rng);
    Vector ced = inst.c;
    ced[dim - 1] += 1.0;
    inst.rho = std::min(inst.ell + inst.c.norm() - 1.0, ced.norm()) * rng.uniform();
    // The construction is admissible by design; the check guards against
    // rounding at the edges of the parameter box.
    if (empty_ball_admissible(inst)) {
      ++stats.accepted;
      return inst;
    }
    ++stats.rejected;
  }
}

bool empty_ball_admissible(const EmptyBallInstance& inst) {
  const std::size_t d = inst.c.dim();
  if (!(inst.ell >= 0.0 && inst.ell <= 1.0) || !(inst.rho >= 0.0)) return false;
  const double cn = inst.c.norm();
  Vector ced = inst.c;
  ced[d - 1] += 1.0;
  return cn >= 1.0 && inst.rho <= inst.ell + cn - 1.0 && inst.rho <= ced.norm();
}

EmptyBallVerdict check_empty_ball(const EmptyBallInstance& inst) {
  const std::size_t d = inst.c.dim();
  const Ball w = empty_ball_witness(inst.ell, d);
  EmptyBallVerdict v;
  v.disjoint = distance(w.center, inst.c) >= inst.rho + w.radius - kLemmaSlack;
  v.inside_unit = w.center.norm() + w.radius <= 1.0 + kLemmaSlack;
  v.inside_lens = distance(w.center, minus_ed(d)) + w.radius <= inst.ell + kLemmaSlack;
  return v;
}

FlatnessInstance generate_flatness_instance(std::size_t dim, Stream& rng,
                                            GeneratorStats& stats) {
  const Vector base = minus_ed(dim);
  for (;;) {
    FlatnessInstance inst;
    inst.ell = rng.uniform(0.0, 0.5);
    inst.c = uniform_in_ball(base, 1.0, rng);
    const double cn = inst.c.norm();
    const double hi = inst.ell + cn - 1.0;
    const double lo = std::max(0.0, distance(inst.c, base) - inst.ell);
    if (cn < 1.0 || lo > hi) {
      ++stats.rejected;
      continue;
    }
    inst.rho = rng.uniform(lo, hi);
    ++stats.accepted;
    return inst;
  }
}

RadialProgressInstance generate_radial_progress_instance(std::size_t dim, Stream& rng,
                                                         GeneratorStats& stats) {
  const Vector base = minus_ed(dim);
  constexpr int kAttemptsPerShape = 256;
  for (;;) {
    RadialProgressInstance inst;
    inst.rho = rng.uniform();
    inst.h = rng.uniform(0.5, 1.0);
    for (int attempt = 0; attempt < kAttemptsPerShape; ++attempt) {
      inst.x = uniform_in_ball(base, inst.rho, rng);
      if (inst.x.norm() < 1.0 && 1.0 + inst.x[dim - 1] >= inst.h * inst.rho) {
        ++stats.accepted;
        return inst;
      }
      ++stats.rejected;
    }
  }
}

}  // namespace rstlab
