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

#include "rstlab/ppp.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace rstlab {

namespace {

std::atomic<std::uint64_t> g_duplicate_redraws{0};

std::uint64_t poisson_count(double mean, Stream& rng) {
  if (mean <= 0.0) return 0;
  boost::random::poisson_distribution<std::int64_t, double> dist(mean);
  return static_cast<std::uint64_t>(dist(rng));
}

void uniform_in_ball(std::size_t d, double radius, Stream& rng, double* out) {
  boost::random::normal_distribution<double> gauss;
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      out[i] = gauss(rng);
      n2 += out[i] * out[i];
    }
  } while (n2 == 0.0);
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / std::sqrt(n2);
  for (std::size_t i = 0; i < d; ++i) out[i] *= r;
}

// Redraws points whose coordinates coincide exactly with an earlier point.
// draw(p) overwrites the d coordinates at p with a fresh draw.
template <typename Draw>
void redraw_duplicates(std::size_t d, std::vector<double>& coords, Draw&& draw) {
  const std::size_t n = d == 0 ? 0 : coords.size() / d;
  if (n < 2) return;
  for (;;) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(coords.begin() + a * d, coords.begin() + (a + 1) * d,
                                          coords.begin() + b * d, coords.begin() + (b + 1) * d);
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<std::size_t> dups;
    for (std::size_t k = 1; k < n; ++k) {
      if (std::equal(coords.begin() + order[k] * d, coords.begin() + (order[k] + 1) * d,
                     coords.begin() + order[k - 1] * d)) {
        dups.push_back(std::max(order[k], order[k - 1]));
      }
    }
    if (dups.empty()) return;
    std::sort(dups.begin(), dups.end());
    dups.erase(std::unique(dups.begin(), dups.end()), dups.end());
    for (std::size_t i : dups) {
      draw(coords.data() + i * d);
      g_duplicate_redraws.fetch_add(1, std::memory_order_relaxed);
    }
  }
}

double norm2(std::span<const double> p) {
  double s = 0.0;
  for (double c : p) s += c * c;
  return s;
}

}  // namespace

void PointSet::push_back(std::span<const double> p, std::uint64_t id) {
  if (p.size() != dimension) throw std::invalid_argument("point dimension mismatch");
  coords.insert(coords.end(), p.begin(), p.end());
  ids.push_back(id);
}

std::uint64_t duplicate_redraws() { return g_duplicate_redraws.load(std::memory_order_relaxed); }

PointSet sample_ball(std::size_t dim, double radius, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("sample_ball: radius must be positive and finite");
  }
  Stream rng(stream_key(seed, StreamTag::kBallSample, {dim}));
  const std::uint64_t n = poisson_count(ball_volume(static_cast<int>(dim), radius), rng);
  PointSet out(dim);
  out.window_radius = radius;
  out.coords.resize(n * dim);
  for (std::uint64_t i = 0; i < n; ++i) uniform_in_ball(dim, radius, rng, out.coords.data() + i * dim);
  redraw_duplicates(dim, out.coords, [&](double* p) { uniform_in_ball(dim, radius, rng, p); });
  out.ids.resize(n);
  std::iota(out.ids.begin(), out.ids.end(), std::uint64_t{1});
  return out;
}

RegionSpec RegionSpec::ball(double radius) {
  RegionSpec r;
  r.kind = Kind::kBall;
  r.outer = radius;
  r.validate();
  return r;
}

RegionSpec RegionSpec::annulus(double inner, double outer) {
  RegionSpec r;
  r.kind = Kind::kAnnulus;
  r.inner = inner;
  r.outer = outer;
  r.validate();
  return r;
}

RegionSpec RegionSpec::ball_minus_lenses(double radius, std::vector<Lens> lenses) {
  RegionSpec r;
  r.kind = Kind::kBallMinusLenses;
  r.outer = radius;
  r.lenses = std::move(lenses);
  r.validate();
  return r;
}

void RegionSpec::validate() const {
  if (!std::isfinite(outer) || !std::isfinite(inner)) {
    throw std::invalid_argument("region must be bounded");
  }
  if (outer < 0.0 || inner < 0.0) throw std::invalid_argument("region radii must be nonnegative");
  if (kind == Kind::kAnnulus && inner > outer) {
    throw std::invalid_argument("annulus inner radius exceeds outer radius");
  }
  for (const Lens& l : lenses) {
    if (!(l.radius >= 0.0)) throw std::invalid_argument("lens radius must be nonnegative");
  }
}

bool RegionSpec::contains(std::span<const double> p) const {
  const double n2 = norm2(p);
  if (!(n2 < outer * outer)) return false;
  switch (kind) {
    case Kind::kBall:
      return true;
    case Kind::kAnnulus:
      return n2 >= inner * inner;
    case Kind::kBallMinusLenses:
      for (const Lens& l : lenses) {
        if (l.contains_closed(p)) return false;
      }
      return true;
  }
  return false;
}

LazyField::LazyField(std::size_t dim, std::uint64_t seed, double cell_size)
    : dim_(dim), seed_(seed), cell_size_(cell_size) {
  if (dim < 1) throw std::invalid_argument("LazyField: dimension must be >= 1");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw std::invalid_argument("LazyField: cell size must be positive");
  }
}

std::size_t LazyField::KeyHash::operator()(const lattice::CellKey& k) const {
  std::uint64_t h = 0x51ed270b27f3a5c5ULL;
  for (std::int64_t v : k) h = mix64(h ^ static_cast<std::uint64_t>(v));
  return static_cast<std::size_t>(h);
}

std::size_t LazyField::realized_cells() const {
  std::shared_lock lock(mutex_);
  return cells_.size();
}

std::int64_t LazyField::axis_cell(double x) const { return lattice::axis_cell(x, cell_size_); }

std::vector<double> LazyField::generate_cell(std::size_t dim, std::uint64_t seed, double cell_size,
                                             std::span<const std::int64_t> key) {
  Stream rng(stream_key(seed, StreamTag::kCell, key));
  const std::uint64_t n = poisson_count(std::pow(cell_size, static_cast<double>(dim)), rng);
  std::vector<double> pts(n * dim);
  auto draw = [&](double* p) {
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] = (static_cast<double>(key[i]) + rng.uniform()) * cell_size;
    }
  };
  for (std::uint64_t j = 0; j < n; ++j) draw(pts.data() + j * dim);
  redraw_duplicates(dim, pts, draw);
  return pts;
}

std::span<const double> LazyField::cell(std::span<const std::int64_t> key) {
  lattice::CellKey k(key.begin(), key.end());
  {
    std::shared_lock lock(mutex_);
    auto it = cells_.find(k);
    if (it != cells_.end()) return {it->second.data(), it->second.size()};
  }
  std::vector<double> pts = generate_cell(dim_, seed_, cell_size_, key);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cells_.try_emplace(std::move(k), std::move(pts));
  return {it->second.data(), it->second.size()};
}

PointSet realize_cells(LazyField& field, const RegionSpec& region) {
  region.validate();
  const std::size_t d = field.dimension();
  const double s = field.cell_size();
  const double R = region.bounding_radius();
  PointSet out(d);
  out.window_radius = R;
  if (R <= 0.0) return out;
  lattice::CellKey lo(d, field.axis_cell(-R)), hi(d, field.axis_cell(R));
  const double inner2 = region.kind == RegionSpec::Kind::kAnnulus ? region.inner * region.inner : 0.0;
  std::uint64_t next_id = 1;
  lattice::for_each_cell(lattice::view(lo), lattice::view(hi), [&](std::span<const std::int64_t> key) {
    if (lattice::box_min_norm2(key, s) >= R * R) return;
    if (inner2 > 0.0 && lattice::box_max_norm2(key, s) < inner2) return;
    std::span<const double> pts = field.cell(key);
    for (std::size_t j = 0; j * d < pts.size(); ++j) {
      std::span<const double> p = pts.subspan(j * d, d);
      if (region.contains(p)) out.push_back(p, next_id++);
    }
  });
  return out;
}

PointSet resample_region(const PointSet& base, const RegionSpec& region, std::uint64_t seed) {
  region.validate();
  const std::size_t d = base.dimension;
  const double R = region.bounding_radius();
  if (base.window_radius && R > *base.window_radius * (1.0 + 1e-12)) {
    throw std::invalid_argument("resample_region: region exceeds the sampling window");
  }
  PointSet out(d);
  out.window_radius = base.window_radius;
  std::uint64_t max_id = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    max_id = std::max(max_id, base.ids[i]);
    if (!region.contains(base.point(i))) out.push_back(base.point(i), base.ids[i]);
  }
  if (R <= 0.0) return out;

  Stream rng(stream_key(seed, StreamTag::kResample, {d}));
  const std::uint64_t proposals = poisson_count(ball_volume(static_cast<int>(d), R), rng);
  std::vector<double> p(d);
  std::vector<double> fresh;
  std::uint64_t accepted = 0;
  for (std::uint64_t k = 0; k < proposals; ++k) {
    uniform_in_ball(d, R, rng, p.data());
    if (region.contains(p)) {
      fresh.insert(fresh.end(), p.begin(), p.end());
      ++accepted;
    }
  }
  constexpr double kMinAcceptance = 1e-4;
  if (proposals >= 10000 && static_cast<double>(accepted) < kMinAcceptance * static_cast<double>(proposals)) {
    throw std::runtime_error("resample_region: acceptance rate below 1e-4");
  }
  redraw_duplicates(d, fresh, [&](double* q) {
    do {
      uniform_in_ball(d, R, rng, q);
    } while (!region.contains(std::span<const double>(q, d)));
  });
  for (std::uint64_t j = 0; j < accepted; ++j) {
    out.push_back(std::span<const double>(fresh.data() + j * d, d), ++max_id);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_points_csv(std::ostream& os, const PointSet& points) {
  os << "id";
  for (std::size_t i = 1; i <= points.dimension; ++i) os << ",x" << i;
  os << '\n';
  for (std::size_t j = 0; j < points.size(); ++j) {
    os << points.ids[j];
    for (double c : points.point(j)) os << ',' << format_double(c);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t row) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("points csv: bad number '" + s + "' on row " + std::to_string(row));
  }
  return v;
}

}  // namespace

PointSet read_points_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("points csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "id") {
    throw std::invalid_argument("points csv: header must be id,x1,...,xd");
  }
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] != "x" + std::to_string(i)) {
      throw std::invalid_argument("points csv: unexpected column '" + header[i] + "'");
    }
  }
  PointSet out(header.size() - 1);
  std::vector<double> p(out.dimension);
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("points csv: wrong column count on row " + std::to_string(row));
    }
    std::uint64_t id = 0;
    auto res = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
    if (res.ec != std::errc() || res.ptr != fields[0].data() + fields[0].size() || id == 0) {
      throw std::invalid_argument("points csv: bad id on row " + std::to_string(row));
    }
    for (std::size_t i = 0; i < out.dimension; ++i) p[i] = parse_double(fields[i + 1], row);
    out.push_back(p, id);
  }
  return out;
}

}  // namespace rstlab
