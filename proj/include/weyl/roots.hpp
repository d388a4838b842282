#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "weyl/numeric.hpp"

namespace weyl {

struct Root {
  cplx location;
  int multiplicity = 1;
};

struct Rect {
  double x0, x1, y0, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(cplx z) const { return z.real() > x0 && z.real() < x1 && z.imag() > y0 && z.imag() < y1; }
};

// f and f' at a point. Only the argument of f matters for counting, so f may
// carry a positive (even non-analytic) normalization factor.
using AnalyticFn = std::function<std::pair<cplx, cplx>(cplx)>;

struct RootOptions {
  double min_step = 1e-6;      // smallest contour step before giving up
  double cluster_size = 1e-6;  // boxes this small holding n > 1 zeros are one multiple root
  int max_boxes = 200000;
};

// Number of zeros inside r by accumulating arg f along the boundary with
// |delta arg| < pi/4 per step. WindowOnPole if f vanishes on (or too near) the boundary.
int winding_number(const AnalyticFn& f, const Rect& r, const RootOptions& opt = {});

// All zeros inside r, each polished by Newton's method.
std::vector<Root> find_roots(const AnalyticFn& f, const Rect& r, const RootOptions& opt = {});

}  // namespace weyl
