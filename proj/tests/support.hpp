#pragma once

#include <random>

#include "rclab/geometry.hpp"

namespace testsupport {

using rclab::geometry::Point;
using rclab::geometry::PointSet;

inline PointSet cube(int d) {
  PointSet s(d);
  for (int mask = 0; mask < (1 << d); ++mask) {
    Point p(d);
    for (int j = 0; j < d; ++j) p[j] = (mask >> j) & 1;
    s.add(p);
  }
  return s;
}

inline PointSet cross(int d) {
  PointSet s(d);
  s.add(Point(d, 0));
  for (int j = 0; j < d; ++j) {
    for (int sg : {1, -1}) {
      Point p(d, 0);
      p[j] = sg;
      s.add(p);
    }
  }
  return s;
}

inline PointSet simplex(int d) {
  PointSet s(d);
  s.add(Point(d, 0));
  for (int j = 0; j < d; ++j) {
    Point p(d, 0);
    p[j] = 1;
    s.add(p);
  }
  return s;
}

/// Integer points at ℓ∞ distance exactly 1 from {0,1}².
inline PointSet square_ring() {
  PointSet y(2);
  for (int a = -1; a <= 2; ++a) {
    for (int b = -1; b <= 2; ++b) {
      if (a >= 0 && a <= 1 && b >= 0 && b <= 1) continue;
      y.add({a, b});
    }
  }
  return y;
}

}  // namespace testsupport
