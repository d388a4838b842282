#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "weyl/errors.hpp"

namespace weyl {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Map x to the representative in (-pi, pi].
double wrap_to_pi(double x);

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}
}  // namespace detail

// Globally adaptive Gauss-Kronrod (G7/K15 panels from Boost). The panel with
// the largest error estimate is bisected until the summed error meets the
// tolerance. Breakpoints seed the initial partition; integrable endpoint or
// interior log singularities are resolved by repeated bisection. Panels whose
// error is at the roundoff level of their L1 norm are not refined further.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {},
                     const std::vector<double>& breakpoints = {}) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  struct Panel {
    double lo, hi, value, error, l1;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  QuadResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  auto eval_panel = [&](double lo, double hi) {
    double err = 0.0, l1 = 0.0;
    double v = GK::integrate(f, lo, hi, 0, 0.0, &err, &l1);
    // With max_depth 0 boost reports the error on the reference interval [-1, 1].
    err *= 0.5 * (hi - lo);
    if (!std::isfinite(v) || !std::isfinite(err))
      fail(ErrorCode::QuadratureFailure,
           "non-finite integrand on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return Panel{lo, hi, v, err, l1};
  };
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> heap;
  double total = 0.0, total_err = 0.0, noise_err = 0.0, stuck_err = 0.0, settled = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = eval_panel(cuts[i], cuts[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int count = static_cast<int>(heap.size());
  const double width_floor = 64.0 * kEps * std::max(std::abs(a), std::abs(b));
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (!heap.empty() && total_err - noise_err - stuck_err > target()) {
    if (count >= opt.max_intervals)
      fail(ErrorCode::QuadratureFailure, "refinement budget exhausted on [" + detail::sci(a) + ", " +
                                             detail::sci(b) + "] (error " + detail::sci(total_err) + ", value " +
                                             detail::sci(total) + ")");
    Panel p = heap.top();
    heap.pop();
    if (p.error <= 50.0 * kEps * p.l1) {
      noise_err += p.error;
      settled += p.value;
      continue;
    }
    if (p.hi - p.lo <= width_floor) {
      stuck_err += p.error;
      settled += p.value;
      continue;
    }
    const double mid = 0.5 * (p.lo + p.hi);
    Panel l = eval_panel(p.lo, mid), r = eval_panel(mid, p.hi);
    total += l.value + r.value - p.value;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  double v = settled, e = noise_err + stuck_err;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  if (stuck_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(v)))
    fail(ErrorCode::QuadratureFailure, "unresolvable singularity");
  out.value = sign * v;
  out.error = e;
  out.intervals = count;
  return out;
}

// Root of a continuous f on a sign-change bracket [a, b], located to |b-a| <= tol.
template <class F>
double find_root_bracketed(F&& f, double a, double b, double fa, double fb, double tol = 1e-12) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) fail(ErrorCode::DomainError, "root bracket without sign change");
  std::uintmax_t iters = 200;
  auto done = [tol](double x, double y) { return std::abs(y - x) <= tol; };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, iters);
  // Prefer a bracket end that hits the root exactly (common for near-linear f).
  double best = 0.5 * (r.first + r.second), fbest = std::abs(f(best));
  for (double x : {r.first, r.second}) {
    const double v = std::abs(f(x));
    if (v < fbest) {
      best = x;
      fbest = v;
    }
  }
  return best;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// n points geometrically spaced in [a, b] (inclusive).
std::vector<double> geometric_grid(double a, double b, int n);
// Geometric grid with the given number of points per decade, inclusive of both ends.
std::vector<double> decade_grid(double a, double b, int per_decade = 16);
std::vector<double> linear_grid(double a, double b, int n);

// Worker count: WEYL_LAB_THREADS if set, else hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n); results must be written to per-index slots so
// the outcome does not depend on scheduling. The lowest-index exception wins.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace weyl
