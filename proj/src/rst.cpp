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

#include "rstlab/rst.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "rstlab/lattice.hpp"
#include "rstlab/random.hpp"

namespace rstlab {

namespace {

std::atomic<std::uint64_t> g_ties{0};

struct Best {
  double d2;
  const double* coords;  // nullptr is the origin
};

bool lex_less_span(const double* a, const double* b, std::size_t d) {
  static const double kZero[16] = {};
  // The origin has all-zero coordinates; d > 16 never reaches a tie against
  // the origin in practice, but fall back to an explicit loop anyway.
  for (std::size_t i = 0; i < d; ++i) {
    const double x = a ? a[i] : (i < 16 ? kZero[i] : 0.0);
    const double y = b ? b[i] : (i < 16 ? kZero[i] : 0.0);
    if (x < y) return true;
    if (y < x) return false;
  }
  return false;
}

// Expanding ring search for psi. cell(key) returns the row-major coordinates
// stored for that cell; lo/hi clip the lattice. Terminates because the origin
// caps the best distance at |x|.
template <typename CellFn>
Best ring_psi(std::span<const double> x, double s, std::span<const std::int64_t> lo,
              std::span<const std::int64_t> hi, CellFn&& cell) {
  const std::size_t d = x.size();
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  Best best{r2, nullptr};
  lattice::CellKey center(d);
  for (std::size_t i = 0; i < d; ++i) center[i] = lattice::axis_cell(x[i], s);

  for (std::int64_t k = 0;; ++k) {
    if (k >= 1) {
      const double gap = static_cast<double>(k - 1) * s;
      if (gap * gap > best.d2) break;
      // Once the ring has left the clip box on every axis, no cell remains.
      bool outside = true;
      for (std::size_t i = 0; i < d && outside; ++i) outside = center[i] - k < lo[i] && center[i] + k > hi[i];
      if (outside) break;
    }
    lattice::for_each_ring_cell(lattice::view(center), k, lo, hi, [&](std::span<const std::int64_t> key) {
      if (lattice::box_min_norm2(key, s) >= r2) return;
      if (lattice::box_distance2(x, key, s) > best.d2) return;
      std::span<const double> pts = cell(key);
      for (std::size_t j = 0; j * d < pts.size(); ++j) {
        const double* p = pts.data() + j * d;
        double n2 = 0.0;
        double d2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          n2 += p[i] * p[i];
          const double t = p[i] - x[i];
          d2 += t * t;
        }
        if (!(n2 < r2)) continue;
        if (d2 < best.d2) {
          best = {d2, p};
        } else if (d2 == best.d2) {
          g_ties.fetch_add(1, std::memory_order_relaxed);
          if (lex_less_span(p, best.coords, d)) best = {d2, p};
        }
      }
    });
  }
  return best;
}

Vector best_to_vector(const Best& b, std::size_t d) {
  if (b.coords == nullptr) return Vector(d);
  return Vector(std::span<const double>(b.coords, d));
}

void require_nonzero(const Vector& x) {
  if (x.is_zero()) throw std::invalid_argument("psi: query point must be nonzero");
}

}  // namespace

std::uint64_t tie_events() { return g_ties.load(std::memory_order_relaxed); }
void reset_tie_events() { g_ties.store(0, std::memory_order_relaxed); }
void record_tie_event() { g_ties.fetch_add(1, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(const PointSet& points) : points_(&points), dim_(points.dimension), cell_(1.0) {
  const std::size_t n = points.size();
  const std::size_t d = dim_;
  if (d == 0) throw std::invalid_argument("GridIndex: dimension must be >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max() / 2) {
    throw std::invalid_argument("GridIndex: too many points");
  }
  lo_.assign(d, 0);
  hi_.assign(d, -1);
  stride_.assign(d, 0);
  cell_start_.assign(1, 0);
  if (n == 0) return;

  std::vector<double> mn(d, std::numeric_limits<double>::infinity());
  std::vector<double> mx(d, -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) {
    auto p = points.point(j);
    for (std::size_t i = 0; i < d; ++i) {
      mn[i] = std::min(mn[i], p[i]);
      mx[i] = std::max(mx[i], p[i]);
    }
  }
  // Flat or single-point sets would otherwise get a vanishing cell size.
  double widest = 0.0;
  for (std::size_t i = 0; i < d; ++i) widest = std::max(widest, mx[i] - mn[i]);
  const double floor_extent = std::max(1e-3 * widest, 1e-9);
  double log_vol = 0.0;
  for (std::size_t i = 0; i < d; ++i) log_vol += std::log(std::max(mx[i] - mn[i], floor_extent));
  cell_ = std::exp((log_vol - std::log(static_cast<double>(n))) / static_cast<double>(d));
  if (!(cell_ > 0.0) || !std::isfinite(cell_)) cell_ = 1.0;

  auto total_cells = [&]() {
    double t = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      t *= static_cast<double>(lattice::axis_cell(mx[i], cell_) - lattice::axis_cell(mn[i], cell_) + 1);
    }
    return t;
  };
  while (total_cells() > 4.0 * static_cast<double>(n) + 16.0) cell_ *= 1.25;

  std::size_t total = 1;
  for (std::size_t ii = d; ii-- > 0;) {
    lo_[ii] = lattice::axis_cell(mn[ii], cell_);
    hi_[ii] = lattice::axis_cell(mx[ii], cell_);
    stride_[ii] = total;
    total *= static_cast<std::size_t>(hi_[ii] - lo_[ii] + 1);
  }

  std::vector<std::uint32_t> cell_of(n);
  cell_start_.assign(total + 1, 0);
  for (std::size_t j = 0; j < n; ++j) {
    auto p = points.point(j);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      flat += static_cast<std::size_t>(lattice::axis_cell(p[i], cell_) - lo_[i]) * stride_[i];
    }
    cell_of[j] = static_cast<std::uint32_t>(flat);
    ++cell_start_[flat + 1];
  }
  std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());
  order_.resize(n);
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t j = 0; j < n; ++j) order_[fill[cell_of[j]]++] = static_cast<std::uint32_t>(j);
  sorted_.resize(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    auto p = points.point(order_[k]);
    std::copy(p.begin(), p.end(), sorted_.begin() + static_cast<std::ptrdiff_t>(k * d));
  }
}

bool GridIndex::in_grid(std::span<const std::int64_t> key) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (key[i] < lo_[i] || key[i] > hi_[i]) return false;
  }
  return true;
}

std::span<const double> GridIndex::cell_points(std::span<const std::int64_t> key,
                                               std::size_t& first) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dim_; ++i) {
    flat += static_cast<std::size_t>(key[i] - lo_[i]) * stride_[i];
  }
  first = cell_start_[flat];
  const std::size_t count = cell_start_[flat + 1] - first;
  return {sorted_.data() + first * dim_, count * dim_};
}

std::optional<std::size_t> GridIndex::psi_index(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("psi: dimension mismatch");
  if (order_.empty()) return std::nullopt;
  const Best b = ring_psi(x, cell_, lo_, hi_, [&](std::span<const std::int64_t> key) {
    std::size_t first = 0;
    return cell_points(key, first);
  });
  if (b.coords == nullptr) return std::nullopt;
  const auto pos = static_cast<std::size_t>(b.coords - sorted_.data()) / dim_;
  return order_[pos];
}

void GridIndex::visit_closed_ball(std::span<const double> center, double radius,
                                  const std::function<void(std::size_t)>& fn) const {
  if (order_.empty()) return;
  lattice::CellKey a(dim_), b(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    a[i] = std::max(lattice::axis_cell(center[i] - radius, cell_), lo_[i]);
    b[i] = std::min(lattice::axis_cell(center[i] + radius, cell_), hi_[i]);
  }
  const double r2 = radius * radius;
  lattice::for_each_cell(lattice::view(a), lattice::view(b), [&](std::span<const std::int64_t> key) {
    if (lattice::box_distance2(center, key, cell_) > r2) return;
    std::size_t first = 0;
    auto pts = cell_points(key, first);
    for (std::size_t j = 0; j * dim_ < pts.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        const double t = pts[j * dim_ + i] - center[i];
        d2 += t * t;
      }
      if (d2 <= r2) fn(order_[first + j]);
    }
  });
}

// ---------------------------------------------------------------------------
// Sources

Vector psi(const Vector& x, const GridIndex& index) {
  require_nonzero(x);
  auto i = index.psi_index(x.coords());
  return i ? index.points().vector(*i) : Vector(x.dim());
}

Vector psi(const Vector& x, LazyField& field) {
  require_nonzero(x);
  if (x.dim() != field.dimension()) throw std::invalid_argument("psi: dimension mismatch");
  const std::size_t d = x.dim();
  const double rx = x.norm();
  lattice::CellKey lo(d, field.axis_cell(-rx)), hi(d, field.axis_cell(rx));
  const Best b = ring_psi(x.coords(), field.cell_size(), lattice::view(lo), lattice::view(hi),
                          [&](std::span<const std::int64_t> key) { return field.cell(key); });
  return best_to_vector(b, d);
}

IndexedSource::IndexedSource(PointSet points) : points_(std::move(points)), index_(points_) {}

Vector IndexedSource::psi(const Vector& x) { return rstlab::psi(x, index_); }

void IndexedSource::visit_closed_ball(const Vector& center, double radius,
                                      const std::function<void(std::span<const double>)>& fn) {
  index_.visit_closed_ball(center.coords(), radius,
                           [&](std::size_t i) { fn(points_.point(i)); });
}

Vector LazySource::psi(const Vector& x) { return rstlab::psi(x, *field_); }

void LazySource::visit_closed_ball(const Vector& center, double radius,
                                   const std::function<void(std::span<const double>)>& fn) {
  const std::size_t d = field_->dimension();
  const double s = field_->cell_size();
  lattice::CellKey a(d), b(d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i] = field_->axis_cell(center[i] - radius);
    b[i] = field_->axis_cell(center[i] + radius);
  }
  const double r2 = radius * radius;
  lattice::for_each_cell(lattice::view(a), lattice::view(b), [&](std::span<const std::int64_t> key) {
    if (lattice::box_distance2(center.coords(), key, s) > r2) return;
    auto pts = field_->cell(key);
    for (std::size_t j = 0; j * d < pts.size(); ++j) {
      auto p = pts.subspan(j * d, d);
      double d2 = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double t = p[i] - center[i];
        d2 += t * t;
      }
      if (d2 <= r2) fn(p);
    }
  });
}

// ---------------------------------------------------------------------------
// Tree

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> RstTree::children_csr() const {
  const std::size_t n = parent.size();
  std::vector<std::size_t> offsets(n + 2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t node = parent[i] == kOrigin ? 0 : static_cast<std::size_t>(parent[i]) + 1;
    ++offsets[node + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> children(n);
  std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t node = parent[i] == kOrigin ? 0 : static_cast<std::size_t>(parent[i]) + 1;
    children[fill[node]++] = i + 1;
  }
  return {std::move(offsets), std::move(children)};
}

RstTree build_rst(const PointSet& points) {
  RstTree tree;
  tree.dimension = points.dimension;
  tree.vertices = points;
  tree.parent.assign(points.size(), RstTree::kOrigin);
  const GridIndex index(tree.vertices);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = index.psi_index(tree.vertices.point(i));
    tree.parent[i] = p ? static_cast<std::int64_t>(*p) : RstTree::kOrigin;
  }
  return tree;
}

TreeCheck validate_tree(const RstTree& tree) {
  TreeCheck check;
  const std::size_t n = tree.size();
  check.edge_count_ok = tree.parent.size() == tree.vertices.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = tree.vertices.vector(i).norm();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t p = tree.parent[i];
    if (p != RstTree::kOrigin && (p < 0 || static_cast<std::size_t>(p) >= n)) {
      ++check.cycle_or_orphan;
      continue;
    }
    const double pn = p == RstTree::kOrigin ? 0.0 : norms[static_cast<std::size_t>(p)];
    if (!(pn < norms[i])) ++check.norm_violations;
  }
  // 0 unknown, 1 on current walk, 2 reaches origin.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::size_t> walk;
  for (std::size_t start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    walk.clear();
    std::size_t v = start;
    bool good = false;
    for (;;) {
      if (state[v] == 2) {
        good = true;
        break;
      }
      if (state[v] == 1) break;  // cycle
      state[v] = 1;
      walk.push_back(v);
      const std::int64_t p = tree.parent[v];
      if (p == RstTree::kOrigin) {
        good = true;
        break;
      }
      if (p < 0 || static_cast<std::size_t>(p) >= n) break;
      v = static_cast<std::size_t>(p);
    }
    for (std::size_t w : walk) state[w] = good ? 2 : 3;
    if (!good) check.cycle_or_orphan += walk.size();
  }
  return check;
}

std::vector<std::uint64_t> StraightnessProfile::violations(double epsilon) const {
  std::vector<std::uint64_t> out;
  for (const auto& r : records) {
    if (r.norm > 0.0 && r.max_angle > std::pow(r.norm, -0.5 + epsilon)) out.push_back(r.vertex_id);
  }
  return out;
}

std::optional<double> StraightnessProfile::band_median(double lo, double hi) const {
  std::vector<double> v;
  for (const auto& r : records) {
    if (r.norm >= lo && r.norm < hi) v.push_back(r.max_angle);
  }
  if (v.empty()) return std::nullopt;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

StraightnessProfile straightness_profile(const RstTree& tree) {
  const std::size_t n = tree.size();
  const std::size_t d = tree.dimension;
  auto [offsets, children] = tree.children_csr();

  // Preorder over the forest hanging from the origin; subtree of the vertex
  // at preorder position p is the contiguous range (p, end[p]).
  std::vector<std::size_t> pre;  // vertex indices
  pre.reserve(n);
  std::vector<std::size_t> end_of(n, 0);
  std::vector<std::size_t> pos_of(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // node, next child slot
  stack.emplace_back(0, offsets[0]);
  while (!stack.empty()) {
    auto& [node, slot] = stack.back();
    if (slot < offsets[node + 1]) {
      const std::size_t child = children[slot++];
      const std::size_t v = child - 1;
      pos_of[v] = pre.size();
      pre.push_back(v);
      stack.emplace_back(child, offsets[child]);
    } else {
      if (node != 0) end_of[node - 1] = pre.size();
      stack.pop_back();
    }
  }

  std::vector<double> unit(n * d);
  std::vector<double> norms(n);
  for (std::size_t p = 0; p < pre.size(); ++p) {
    auto x = tree.vertices.point(pre[p]);
    double nn = 0.0;
    for (double c : x) nn += c * c;
    nn = std::sqrt(nn);
    norms[pre[p]] = nn;
    for (std::size_t i = 0; i < d; ++i) unit[p * d + i] = x[i] / nn;
  }

  StraightnessProfile profile;
  profile.records.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = pos_of[v];
    const double* u = unit.data() + p * d;
    double min_cos = 1.0;
    for (std::size_t q = p + 1; q < end_of[v]; ++q) {
      const double* w = unit.data() + q * d;
      double c = 0.0;
      for (std::size_t i = 0; i < d; ++i) c += u[i] * w[i];
      min_cos = std::min(min_cos, c);
    }
    profile.records.push_back({tree.vertices.ids[v], norms[v], std::acos(std::clamp(min_cos, -1.0, 1.0))});
  }
  return profile;
}

double direction_gap(const RstTree& tree, double min_norm, std::size_t probes) {
  const std::size_t d = tree.dimension;
  std::vector<Vector> dirs;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Vector v = tree.vertices.vector(i);
    const double n = v.norm();
    if (n >= min_norm && n > 0.0) dirs.push_back(v * (1.0 / n));
  }
  if (dirs.empty()) return std::numbers::pi;
  // Box-Muller on a fixed stream, so the probes depend only on d.
  Stream rng(stream_key(0, StreamTag::kFuzz, {d, probes}));
  double gap = 0.0;
  std::vector<double> g(d);
  for (std::size_t k = 0; k < probes; ++k) {
    for (auto& x : g) {
      const double u = 1.0 - rng.uniform();
      x = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * rng.uniform());
    }
    const Vector probe = Vector(std::span<const double>(g));
    const Vector unit = probe * (1.0 / probe.norm());
    double best = -1.0;
    for (const Vector& v : dirs) best = std::max(best, v.dot(unit));
    gap = std::max(gap, std::acos(std::clamp(best, -1.0, 1.0)));
  }
  return gap;
}

std::map<std::size_t, std::uint64_t> in_degree_histogram(const RstTree& tree) {
  std::vector<std::size_t> deg(tree.size() + 1, 0);
  for (std::int64_t p : tree.parent) ++deg[p == RstTree::kOrigin ? 0 : static_cast<std::size_t>(p) + 1];
  std::map<std::size_t, std::uint64_t> hist;
  for (std::size_t k : deg) ++hist[k];
  return hist;
}

namespace {

double orient(const double* a, const double* b, const double* c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> check_planarity(const RstTree& tree) {
  if (tree.dimension != 2) throw std::invalid_argument("check_planarity: dimension must be 2");
  const std::size_t n = tree.size();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (n < 2) return out;

  static const double kOriginXY[2] = {0.0, 0.0};
  auto start = [&](std::size_t i) { return tree.vertices.point(i).data(); };
  auto stop = [&](std::size_t i) {
    return tree.parent[i] == RstTree::kOrigin ? kOriginXY
                                              : tree.vertices.point(static_cast<std::size_t>(tree.parent[i])).data();
  };

  double mn[2] = {0.0, 0.0}, mx[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    auto p = tree.vertices.point(i);
    for (int a = 0; a < 2; ++a) {
      mn[a] = std::min(mn[a], p[a]);
      mx[a] = std::max(mx[a], p[a]);
    }
  }
  const double s = std::max(1.0, std::sqrt((mx[0] - mn[0]) * (mx[1] - mn[1]) / static_cast<double>(n)) * 2.0);
  const auto nx = static_cast<std::int64_t>(std::floor((mx[0] - mn[0]) / s)) + 1;
  const auto ny = static_cast<std::int64_t>(std::floor((mx[1] - mn[1]) / s)) + 1;
  auto cx = [&](double x) { return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x - mn[0]) / s)), 0, nx - 1); };
  auto cy = [&](double y) { return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((y - mn[1]) / s)), 0, ny - 1); };

  struct Box { std::int64_t x0, x1, y0, y1; };
  std::vector<Box> boxes(n);
  std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(nx * ny));
  for (std::size_t i = 0; i < n; ++i) {
    const double* a = start(i);
    const double* b = stop(i);
    Box bx{cx(std::min(a[0], b[0])), cx(std::max(a[0], b[0])), cy(std::min(a[1], b[1])), cy(std::max(a[1], b[1]))};
    boxes[i] = bx;
    for (std::int64_t gx = bx.x0; gx <= bx.x1; ++gx) {
      for (std::int64_t gy = bx.y0; gy <= bx.y1; ++gy) {
        buckets[static_cast<std::size_t>(gx * ny + gy)].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  auto node_id = [&](std::size_t i) -> std::uint64_t { return tree.vertices.ids[i]; };
  for (std::int64_t gx = 0; gx < nx; ++gx) {
    for (std::int64_t gy = 0; gy < ny; ++gy) {
      const auto& bucket = buckets[static_cast<std::size_t>(gx * ny + gy)];
      for (std::size_t ia = 0; ia < bucket.size(); ++ia) {
        for (std::size_t ib = ia + 1; ib < bucket.size(); ++ib) {
          const std::size_t i = bucket[ia], j = bucket[ib];
          // Report each pair only from the first cell shared by both boxes.
          if (std::max(boxes[i].x0, boxes[j].x0) != gx || std::max(boxes[i].y0, boxes[j].y0) != gy) continue;
          const std::uint64_t pi = tree.parent_id(i), pj = tree.parent_id(j);
          if (pi == pj || pi == node_id(j) || pj == node_id(i)) continue;
          const double *a = start(i), *b = stop(i), *c = start(j), *e = stop(j);
          const double o1 = orient(a, b, c), o2 = orient(a, b, e);
          const double o3 = orient(c, e, a), o4 = orient(c, e, b);
          if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
            out.emplace_back(std::min(node_id(i), node_id(j)), std::max(node_id(i), node_id(j)));
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_tree_csv(std::ostream& os, const RstTree& tree) {
  os << "child_id,parent_id\n";
  for (std::size_t i = 0; i < tree.size(); ++i) os << tree.vertices.ids[i] << ',' << tree.parent_id(i) << '\n';
}

void write_straightness_csv(std::ostream& os, const StraightnessProfile& profile) {
  os << "vertex_id,norm,max_angle\n";
  for (const auto& r : profile.records) {
    os << r.vertex_id << ',' << format_double(r.norm) << ',' << format_double(r.max_angle) << '\n';
  }
}

void write_crossings_csv(std::ostream& os,
                         const std::vector<std::pair<std::uint64_t, std::uint64_t>>& crossings) {
  os << "edge_a_child,edge_b_child\n";
  for (const auto& [a, b] : crossings) os << a << ',' << b << '\n';
}

void write_in_degree_csv(std::ostream& os, const std::map<std::size_t, std::uint64_t>& histogram) {
  os << "in_degree,count\n";
  for (const auto& [k, c] : histogram) os << k << ',' << c << '\n';
}

}  // namespace rstlab
