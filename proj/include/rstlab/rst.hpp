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

// The radial spanning tree.
//
// psi(x) is the point of N u {0} nearest to x among those strictly closer to
// the origin than x. The RST links every point to its psi. Because psi(x) only
// looks at |y| < |x|, sampling B(0, R) gives the exact restriction of the
// infinite-process tree to that ball; no boundary correction is needed.

#ifndef RSTLAB_RST_HPP_
#define RSTLAB_RST_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rstlab/geom.hpp"
#include "rstlab/ppp.hpp"

namespace rstlab {

/// Exact distance ties seen by any psi query, process-wide. Ties have
/// probability zero; a nonzero count flags degenerate input.
std::uint64_t tie_events();
void reset_tie_events();
/// Bumps the tie counter; used by boundary-hit detection elsewhere.
void record_tie_event();

/// Uniform-grid index over a PointSet with cells of roughly unit occupancy.
/// Points are copied in cell order so a cell scan is a contiguous read.
class GridIndex {
 public:
  explicit GridIndex(const PointSet& points);

  std::size_t dimension() const { return dim_; }
  std::size_t size() const { return order_.size(); }
  double cell_size() const { return cell_; }
  const PointSet& points() const { return *points_; }

  /// Index (into the PointSet) of psi(x), or nullopt for the origin.
  std::optional<std::size_t> psi_index(std::span<const double> x) const;

  /// Calls fn(index) for every point with |p - center| <= radius.
  void visit_closed_ball(std::span<const double> center, double radius,
                         const std::function<void(std::size_t)>& fn) const;

 private:
  std::span<const double> cell_points(std::span<const std::int64_t> key, std::size_t& first) const;
  bool in_grid(std::span<const std::int64_t> key) const;

  const PointSet* points_;
  std::size_t dim_;
  double cell_;
  std::vector<std::int64_t> lo_, hi_;
  std::vector<std::size_t> stride_;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> order_;
  std::vector<double> sorted_;
};

/// A point field that supports psi queries and closed-ball scans. Exploration
/// runs against this interface so eager and lazy fields are interchangeable.
class PointSource {
 public:
  virtual ~PointSource() = default;
  virtual std::size_t dimension() const = 0;
  virtual Vector psi(const Vector& x) = 0;
  virtual void visit_closed_ball(const Vector& center, double radius,
                                 const std::function<void(std::span<const double>)>& fn) = 0;
};

/// Eager source: an owned PointSet with its grid index.
class IndexedSource final : public PointSource {
 public:
  explicit IndexedSource(PointSet points);
  // The index points into points_, so the source must stay put.
  IndexedSource(const IndexedSource&) = delete;
  IndexedSource& operator=(const IndexedSource&) = delete;
  std::size_t dimension() const override { return points_.dimension; }
  Vector psi(const Vector& x) override;
  void visit_closed_ball(const Vector& center, double radius,
                         const std::function<void(std::span<const double>)>& fn) override;
  const PointSet& points() const { return points_; }

 private:
  PointSet points_;
  GridIndex index_;
};

/// Lazy source: realizes only the cells a query touches.
class LazySource final : public PointSource {
 public:
  explicit LazySource(LazyField& field) : field_(&field) {}
  std::size_t dimension() const override { return field_->dimension(); }
  Vector psi(const Vector& x) override;
  void visit_closed_ball(const Vector& center, double radius,
                         const std::function<void(std::span<const double>)>& fn) override;

 private:
  LazyField* field_;
};

/// psi over an indexed point set. x must be nonzero.
Vector psi(const Vector& x, const GridIndex& index);
/// psi over a lazy field, realizing the cells of an expanding ring search
/// clipped to B(0, |x|).
Vector psi(const Vector& x, LazyField& field);

/// Parent structure over a point set plus the origin (id 0).
struct RstTree {
  std::size_t dimension = 0;
  PointSet vertices;
  /// parent[i] is the index of vertex i's parent, or kOrigin.
  std::vector<std::int64_t> parent;

  static constexpr std::int64_t kOrigin = -1;

  std::size_t size() const { return parent.size(); }
  std::uint64_t parent_id(std::size_t i) const {
    return parent[i] == kOrigin ? 0 : vertices.ids[static_cast<std::size_t>(parent[i])];
  }
  /// Children lists in CSR form: children of vertex i (index i+1) and of the
  /// origin (index 0).
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> children_csr() const;
};

RstTree build_rst(const PointSet& points);

struct TreeCheck {
  std::uint64_t norm_violations = 0;
  std::uint64_t cycle_or_orphan = 0;
  bool edge_count_ok = false;
  bool ok() const { return norm_violations == 0 && cycle_or_orphan == 0 && edge_count_ok; }
};

/// Strict norm decrease on every edge, every vertex reaches the origin,
/// edge count equals vertex count.
TreeCheck validate_tree(const RstTree& tree);

struct StraightnessRecord {
  std::uint64_t vertex_id = 0;
  double norm = 0.0;
  double max_angle = 0.0;
};

struct StraightnessProfile {
  std::vector<StraightnessRecord> records;

  /// Ids of vertices with max_angle > |u|^(-1/2 + epsilon).
  std::vector<std::uint64_t> violations(double epsilon) const;
  /// Median max_angle among vertices with norm in [lo, hi); nullopt if empty.
  std::optional<double> band_median(double lo, double hi) const;
};

/// Per-vertex max angle between u and any vertex of the subtree rooted at u.
StraightnessProfile straightness_profile(const RstTree& tree);

/// Largest angle between one of `probes` fixed pseudo-random unit directions
/// and the nearest direction of a vertex with norm >= min_norm; pi when no
/// vertex qualifies. A finite-window, descriptive measure of how
/// omnidirectional the far vertices are.
double direction_gap(const RstTree& tree, double min_norm, std::size_t probes = 256);

/// In-degree -> number of nodes (vertices plus origin) with that in-degree.
std::map<std::size_t, std::uint64_t> in_degree_histogram(const RstTree& tree);

/// Proper crossings between tree edges in the plane, as pairs of child ids
/// (first < second). Edges sharing an endpoint never count. d must be 2.
std::vector<std::pair<std::uint64_t, std::uint64_t>> check_planarity(const RstTree& tree);

void write_tree_csv(std::ostream& os, const RstTree& tree);
void write_straightness_csv(std::ostream& os, const StraightnessProfile& profile);
void write_crossings_csv(std::ostream& os,
                         const std::vector<std::pair<std::uint64_t, std::uint64_t>>& crossings);
void write_in_degree_csv(std::ostream& os, const std::map<std::size_t, std::uint64_t>& histogram);

}  // namespace rstlab

#endif  // RSTLAB_RST_HPP_
