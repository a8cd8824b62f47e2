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


#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rstlab/ppp.hpp"
#include "rstlab/rst.hpp"

using namespace rstlab;

namespace {

PointSet points_of(std::size_t d, std::initializer_list<Vector> vs) {
  PointSet p(d);
  std::uint64_t id = 1;
  for (const auto& v : vs) p.push_back(v.coords(), id++);
  return p;
}

// Parent coordinates keyed by child coordinates, to compare trees built from
// differently ordered point sets.
std::map<std::vector<double>, std::vector<double>> edge_map(const RstTree& t) {
  std::map<std::vector<double>, std::vector<double>> m;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto c = t.vertices.point(i);
    std::vector<double> p(t.dimension, 0.0);
    if (t.parent[i] != RstTree::kOrigin) {
      const auto q = t.vertices.point(static_cast<std::size_t>(t.parent[i]));
      p.assign(q.begin(), q.end());
    }
    m[{c.begin(), c.end()}] = p;
  }
  return m;
}

}  // namespace

TEST_CASE("psi examples") {
  const PointSet p = points_of(2, {{2.5, 0.5}, {1, 1}, {3.5, 0}});
  GridIndex idx(p);
  CHECK(psi({3, 0}, idx) == Vector{2.5, 0.5});
  CHECK(oracle::brute_psi({3, 0}, p) == Vector{2.5, 0.5});
  GridIndex empty(PointSet(2));
  CHECK(psi({3, 0}, empty) == Vector{0, 0});
  CHECK_THROWS_AS(psi({0, 0}, idx), std::invalid_argument);
}

TEST_CASE("psi ties break lexicographically and are counted") {
  const PointSet p = points_of(2, {{1, 1}, {1, -1}});
  GridIndex idx(p);
  const auto before = tie_events();
  CHECK(psi({2, 0}, idx) == Vector{1, -1});
  CHECK(tie_events() > before);
  CHECK(oracle::brute_psi({2, 0}, p) == Vector{1, -1});
}

TEST_CASE("psi over grid, lazy field and brute force agree") {
  for (std::size_t d : {2u, 3u}) {
    LazyField field(d, 77);
    const PointSet pts = realize_cells(field, RegionSpec::ball(9.0));
    GridIndex idx(pts);
    Stream rng(stream_key(5, StreamTag::kFuzz, {d}));
    for (int i = 0; i < 300; ++i) {
      Vector x(d);
      do {
        for (std::size_t k = 0; k < d; ++k) x[k] = rng.uniform(-9, 9);
      } while (x.norm() >= 9.0 || x.is_zero());
      const Vector expect = oracle::brute_psi(x, pts);
      REQUIRE(psi(x, idx) == expect);
      REQUIRE(psi(x, field) == expect);
      // The origin sits at distance exactly |x|; any real point is closer.
      if (expect.is_zero()) {
        REQUIRE(distance(expect, x) == x.norm());
      } else {
        REQUIRE(distance(expect, x) < x.norm());
      }
    }
  }
}

TEST_CASE("build_rst equals the quadratic construction") {
  for (std::size_t d : {2u, 3u, 4u}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const double radius = std::pow(150.0 / ball_volume(static_cast<int>(d), 1.0), 1.0 / static_cast<double>(d));
      const PointSet p = sample_ball(d, radius, 300 + s);
      REQUIRE(build_rst(p).parent == oracle::brute_parents(p));
    }
  }
}

TEST_CASE("small trees") {
  const RstTree one = build_rst(points_of(2, {{0.5, 0.5}}));
  CHECK(one.parent == std::vector<std::int64_t>{RstTree::kOrigin});
  CHECK(in_degree_histogram(one) == std::map<std::size_t, std::uint64_t>{{0, 1}, {1, 1}});
  const RstTree two = build_rst(points_of(2, {{1, 0}, {2, 0}}));
  CHECK(two.parent == std::vector<std::int64_t>{RstTree::kOrigin, 0});
  CHECK(two.parent_id(1) == 1);
  CHECK(two.parent_id(0) == 0);
  CHECK(check_planarity(two).empty());
  CHECK(validate_tree(two).ok());
}

TEST_CASE("tree does not depend on point order") {
  PointSet p = sample_ball(2, 12.0, 8);
  const auto original = edge_map(build_rst(p));
  std::vector<std::size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), 0);
  Stream rng(3);
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  PointSet q(2);
  for (std::size_t i : perm) q.push_back(p.point(i), p.ids[i]);
  CHECK(edge_map(build_rst(q)) == original);
}

TEST_CASE("a window gives the exact parents of its points") {
  LazyField f(2, 21);
  const auto small = edge_map(build_rst(realize_cells(f, RegionSpec::ball(10.0))));
  const auto large = edge_map(build_rst(realize_cells(f, RegionSpec::ball(20.0))));
  std::size_t checked = 0;
  for (const auto& [child, parent] : large) {
    if (Vector(child).norm() >= 10.0) continue;
    REQUIRE(small.at(child) == parent);
    ++checked;
  }
  CHECK(checked == small.size());
}

TEST_CASE("validate_tree flags corrupted trees") {
  RstTree t = build_rst(sample_ball(2, 6.0, 4));
  REQUIRE(validate_tree(t).ok());
  RstTree cyc = t;
  cyc.parent[0] = 1;
  cyc.parent[1] = 0;
  CHECK_FALSE(validate_tree(cyc).ok());
  CHECK(validate_tree(cyc).cycle_or_orphan > 0);
  RstTree missing = t;
  missing.parent.pop_back();
  CHECK_FALSE(validate_tree(missing).ok());
}

TEST_CASE("straightness examples") {
  const RstTree chain = build_rst(points_of(2, {{1, 1}, {2, 2}}));
  const auto c = straightness_profile(chain);
  REQUIRE(c.records.size() == 2);
  for (const auto& r : c.records) CHECK(r.max_angle == doctest::Approx(0.0).epsilon(1e-7));

  const RstTree t = build_rst(points_of(2, {{2, 0}, {2, 1}}));
  const auto prof = straightness_profile(t);
  std::map<std::uint64_t, double> by_id;
  for (const auto& r : prof.records) by_id[r.vertex_id] = r.max_angle;
  CHECK(by_id[1] == doctest::Approx(std::atan(0.5)).epsilon(1e-12));
  CHECK(by_id[2] == 0.0);
  CHECK(by_id[1] == doctest::Approx(0.4636).epsilon(1e-4));
}

TEST_CASE("straightness matches ancestor walks") {
  for (std::size_t d : {2u, 3u}) {
    const RstTree t = build_rst(sample_ball(d, d == 2 ? 20.0 : 7.0, 40 + d));
    const auto brute = oracle::brute_subtree_angles(t);
    const auto prof = straightness_profile(t);
    REQUIRE(prof.records.size() == t.size());
    std::map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < t.size(); ++i) index[t.vertices.ids[i]] = i;
    for (const auto& r : prof.records) {
      const std::size_t i = index.at(r.vertex_id);
      REQUIRE(r.max_angle >= 0.0);
      REQUIRE(r.max_angle <= M_PI);
      REQUIRE(r.max_angle == doctest::Approx(brute[i]).epsilon(1e-9));
      REQUIRE(r.norm == doctest::Approx(t.vertices.vector(i).norm()));
    }
    const auto viol = prof.violations(0.25);
    for (std::uint64_t id : viol) {
      const auto& r = prof.records[index.at(id)];
      CHECK(r.max_angle > std::pow(r.norm, -0.25));
    }
  }
}

TEST_CASE("band median") {
  StraightnessProfile p;
  p.records = {{1, 1.0, 0.4}, {2, 1.5, 0.2}, {3, 1.7, 0.3}, {4, 1.9, 0.1}, {5, 3.0, 0.9}};
  CHECK(*p.band_median(1.0, 2.0) == doctest::Approx(0.25));
  CHECK(*p.band_median(1.4, 2.0) == doctest::Approx(0.2));
  CHECK_FALSE(p.band_median(5.0, 6.0).has_value());
}

TEST_CASE("in-degree histogram") {
  const RstTree t = build_rst(sample_ball(2, 50.0, 99));
  const auto h = in_degree_histogram(t);
  std::uint64_t weighted = 0, nodes = 0;
  for (const auto& [deg, count] : h) {
    weighted += deg * count;
    nodes += count;
  }
  CHECK(weighted == t.size());
  CHECK(nodes == t.size() + 1);
  CHECK(h.rbegin()->first <= 20);
}

TEST_CASE("planarity") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const RstTree t = build_rst(sample_ball(2, 30.0, 500 + s));
    CHECK(check_planarity(t).empty());
  }
  // Hand-made crossing: C=(2,1) hangs from B=(1,-1), D=(2,-1) from A=(1,1).
  RstTree x;
  x.dimension = 2;
  x.vertices = points_of(2, {{1, 1}, {1, -1}, {2, 1}, {2, -1}});
  x.parent = {RstTree::kOrigin, RstTree::kOrigin, 1, 0};
  REQUIRE(validate_tree(x).ok());
  const auto cross = check_planarity(x);
  REQUIRE(cross.size() == 1);
  CHECK(cross[0] == std::pair<std::uint64_t, std::uint64_t>{3, 4});
  CHECK_THROWS_AS(check_planarity(build_rst(sample_ball(3, 3.0, 1))), std::invalid_argument);
}

TEST_CASE("planarity scan agrees with the quadratic scan on scrambled trees") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    RstTree t = build_rst(sample_ball(2, 8.0, 700 + s));
    Stream rng(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (rng.uniform() < 0.3) {
        const std::uint64_t j = rng() % t.size();
        if (j != i) t.parent[i] = static_cast<std::int64_t>(j);
      }
    }
    CHECK(check_planarity(t).size() == oracle::brute_crossings(t));
  }
}

TEST_CASE("CSV exports") {
  const RstTree t = build_rst(points_of(2, {{1, 0}, {2, 0}}));
  std::ostringstream tree, straight, deg, cross;
  write_tree_csv(tree, t);
  CHECK(tree.str() == "child_id,parent_id\n1,0\n2,1\n");
  write_straightness_csv(straight, straightness_profile(t));
  CHECK(straight.str().rfind("vertex_id,norm,max_angle\n", 0) == 0);
  write_in_degree_csv(deg, in_degree_histogram(t));
  CHECK(deg.str() == "in_degree,count\n0,1\n1,2\n");
  write_crossings_csv(cross, {{3, 4}});
  CHECK(cross.str() == "edge_a_child,edge_b_child\n3,4\n");
}

TEST_CASE("direction gap") {
  CHECK(direction_gap(build_rst(PointSet(2)), 0.0) == doctest::Approx(std::numbers::pi));
  // One direction: the worst probe sits nearly opposite it.
  const double lone = direction_gap(build_rst(points_of(2, {{3, 0}})), 1.0);
  CHECK(lone > 3.0);
  CHECK(lone <= std::numbers::pi);
  // The probes are fixed, so dropping vertices can only widen the gap.
  const RstTree dense = build_rst(sample_ball(2, 30.0, 3));
  CHECK(direction_gap(dense, 15.0) < 0.05);
  CHECK(direction_gap(dense, 15.0) <= direction_gap(dense, 25.0));
  CHECK(direction_gap(dense, 25.0) <= direction_gap(dense, 29.5));
  const RstTree t3 = build_rst(sample_ball(3, 5.0, 8));
  CHECK(direction_gap(t3, 2.5) > 0.0);
  CHECK(direction_gap(t3, 2.5) < std::numbers::pi / 2);
}
