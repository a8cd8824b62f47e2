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

// Small helpers over integer cell lattices shared by the samplers and the
// spatial index.

#ifndef RSTLAB_LATTICE_HPP_
#define RSTLAB_LATTICE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include <boost/container/small_vector.hpp>

namespace rstlab::lattice {

using CellKey = boost::container::small_vector<std::int64_t, 4>;

inline std::span<const std::int64_t> view(const CellKey& k) { return {k.data(), k.size()}; }

/// Visits every cell of the box [lo, hi] (inclusive) in lexicographic order.
template <typename Fn>
void for_each_cell(std::span<const std::int64_t> lo, std::span<const std::int64_t> hi, Fn&& fn) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i) {
    if (lo[i] > hi[i]) return;
  }
  CellKey key(lo.begin(), lo.end());
  for (;;) {
    fn(std::span<const std::int64_t>(key.data(), d));
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (key[axis] < hi[axis]) {
        ++key[axis];
        break;
      }
      key[axis] = lo[axis];
      if (axis == 0) return;
    }
    if (d == 0) return;
  }
}

/// Visits the cells at Chebyshev distance exactly k from center, clipped to
/// [lo, hi], in lexicographic order.
template <typename Fn>
void for_each_ring_cell(std::span<const std::int64_t> center, std::int64_t k,
                        std::span<const std::int64_t> lo, std::span<const std::int64_t> hi,
                        Fn&& fn) {
  const std::size_t d = center.size();
  CellKey a(d), b(d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i] = std::max(center[i] - k, lo[i]);
    b[i] = std::min(center[i] + k, hi[i]);
    if (a[i] > b[i]) return;
  }
  if (k == 0) {
    fn(std::span<const std::int64_t>(center.data(), d));
    return;
  }
  // Odometer over the first d-1 axes; the last axis takes its full range only
  // when an earlier axis already sits on the ring, otherwise just its ends.
  CellKey key(a.begin(), a.end());
  const std::size_t last = d - 1;
  for (;;) {
    bool on_ring = false;
    for (std::size_t i = 0; i < last; ++i) {
      if (key[i] == center[i] - k || key[i] == center[i] + k) {
        on_ring = true;
        break;
      }
    }
    if (on_ring) {
      for (std::int64_t v = a[last]; v <= b[last]; ++v) {
        key[last] = v;
        fn(std::span<const std::int64_t>(key.data(), d));
      }
    } else {
      const std::int64_t lo_end = center[last] - k;
      const std::int64_t hi_end = center[last] + k;
      if (lo_end >= a[last]) {
        key[last] = lo_end;
        fn(std::span<const std::int64_t>(key.data(), d));
      }
      if (hi_end <= b[last]) {
        key[last] = hi_end;
        fn(std::span<const std::int64_t>(key.data(), d));
      }
    }
    std::size_t axis = last;
    bool advanced = false;
    while (axis > 0) {
      --axis;
      if (key[axis] < b[axis]) {
        ++key[axis];
        advanced = true;
        break;
      }
      key[axis] = a[axis];
    }
    if (!advanced) return;
  }
}

/// Squared distance from point p to the box of cell key (side s).
inline double box_distance2(std::span<const double> p, std::span<const std::int64_t> key,
                            double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = static_cast<double>(key[i]) * s;
    const double hi = lo + s;
    double t = 0.0;
    if (p[i] < lo) {
      t = lo - p[i];
    } else if (p[i] > hi) {
      t = p[i] - hi;
    }
    acc += t * t;
  }
  return acc;
}

/// Squared norm of the box point closest to the origin.
inline double box_min_norm2(std::span<const std::int64_t> key, double s) {
  double acc = 0.0;
  for (std::int64_t k : key) {
    const double lo = static_cast<double>(k) * s;
    const double hi = lo + s;
    const double t = (lo > 0.0) ? lo : (hi < 0.0 ? -hi : 0.0);
    acc += t * t;
  }
  return acc;
}

/// Squared norm of the box point farthest from the origin.
inline double box_max_norm2(std::span<const std::int64_t> key, double s) {
  double acc = 0.0;
  for (std::int64_t k : key) {
    const double lo = static_cast<double>(k) * s;
    const double t = std::max(std::abs(lo), std::abs(lo + s));
    acc += t * t;
  }
  return acc;
}

inline std::int64_t axis_cell(double x, double s) {
  return static_cast<std::int64_t>(std::floor(x / s));
}

}  // namespace rstlab::lattice

#endif  // RSTLAB_LATTICE_HPP_
