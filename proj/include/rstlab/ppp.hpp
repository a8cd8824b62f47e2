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

// Unit-intensity homogeneous Poisson point process.
//
// Two samplers are provided. sample_ball draws N inside one ball in a single
// shot. LazyField realizes N one lattice cell at a time; the contents of a
// cell depend only on (seed, cell coordinates), so any window of the same
// field can be materialized in any order and always agrees on overlaps.

#ifndef RSTLAB_PPP_HPP_
#define RSTLAB_PPP_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rstlab/geom.hpp"
#include "rstlab/lattice.hpp"

namespace rstlab {

/// Points stored row-major; point i occupies coords[i*d, (i+1)*d).
struct PointSet {
  std::size_t dimension = 0;
  std::vector<double> coords;
  std::vector<std::uint64_t> ids;
  /// Radius of the origin-centered ball the points were sampled in, if known.
  std::optional<double> window_radius;

  PointSet() = default;
  explicit PointSet(std::size_t dim) : dimension(dim) {}

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dimension, dimension};
  }
  Vector vector(std::size_t i) const { return Vector(point(i)); }
  void push_back(std::span<const double> p, std::uint64_t id);
};

/// Number of duplicate-coordinate draws that were redrawn, process-wide.
std::uint64_t duplicate_redraws();

/// N inside B(0, R): Poisson(|B(0,R)|) i.i.d. uniform points, ids 1..n.
PointSet sample_ball(std::size_t dim, double radius, std::uint64_t seed);

/// Region kinds used for lazy realization and resampling. Balls and annuli
/// are origin-centered; ball-minus-lenses removes the closures of the lenses.
struct RegionSpec {
  enum class Kind { kBall, kAnnulus, kBallMinusLenses };

  Kind kind = Kind::kBall;
  double inner = 0.0;
  double outer = 0.0;
  std::vector<Lens> lenses;

  static RegionSpec ball(double radius);
  static RegionSpec annulus(double inner, double outer);
  static RegionSpec ball_minus_lenses(double radius, std::vector<Lens> lenses);
  static RegionSpec empty() { return ball(0.0); }

  /// Throws std::invalid_argument on negative, inverted or unbounded radii.
  void validate() const;
  bool contains(std::span<const double> p) const;
  double bounding_radius() const { return outer; }
};

/// Lattice of cubic cells of side cell_size; each cell carries
/// Poisson(cell_size^d) uniform points drawn from its own counter-based stream.
///
/// Thread-safe: concurrent requests for the same cell realize it once
/// (insert-if-absent under a shared mutex); cell contents never change.
class LazyField {
 public:
  LazyField(std::size_t dim, std::uint64_t seed, double cell_size = 1.0);

  std::size_t dimension() const { return dim_; }
  double cell_size() const { return cell_size_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t realized_cells() const;

  /// Points of the given cell, realizing it on first access. The span stays
  /// valid for the lifetime of the field.
  std::span<const double> cell(std::span<const std::int64_t> key);

  /// Pure generator behind cell(): row-major coordinates of the cell's points.
  static std::vector<double> generate_cell(std::size_t dim, std::uint64_t seed, double cell_size,
                                           std::span<const std::int64_t> key);

  /// Lattice coordinate of the cell containing x along one axis.
  std::int64_t axis_cell(double x) const;

 private:
  struct KeyHash {
    std::size_t operator()(const lattice::CellKey& k) const;
  };

  std::size_t dim_;
  std::uint64_t seed_;
  double cell_size_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<lattice::CellKey, std::vector<double>, KeyHash> cells_;
};

/// All field points inside the region, realizing exactly the cells whose box
/// meets the region's bounding ball. Output is ordered by cell (lexicographic)
/// then by in-cell index, with ids 1..n in that order.
PointSet realize_cells(LazyField& field, const RegionSpec& region);

/// base with its points inside the region replaced by a fresh Poisson sample
/// of the region (thinning of a sample of the bounding ball). Fresh points get
/// ids above the largest id of base.
PointSet resample_region(const PointSet& base, const RegionSpec& region, std::uint64_t seed);

/// CSV with header id,x1,...,xd; 17 significant digits.
void write_points_csv(std::ostream& os, const PointSet& points);
PointSet read_points_csv(std::istream& is);

/// 17-significant-digit rendering used by every CSV writer (round-trips).
std::string format_double(double v);

}  // namespace rstlab

#endif  // RSTLAB_PPP_HPP_
