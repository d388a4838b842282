#pragma once

#include <functional>
#include <vector>

#include <boost/math/interpolators/makima.hpp>
#include <boost/math/interpolators/quintic_hermite.hpp>

#include "weyl/inner.hpp"

namespace weyl {

inline constexpr double kAxisEpsilon = 1e-3;

// (1 - |B|^2)/(2 Im z) off the axis, theta'(Re z) within axis_eps of it.
double chi(const InnerFunction& b, cplx z, double axis_eps = kAxisEpsilon);
double chi(const InnerFunctionSpec& spec, cplx z, double axis_eps = kAxisEpsilon);

// Curvature. Off the axis 1/(4y^2) - |B'|^2/(1-|B|^2)^2, evaluated in the upper
// half-plane so that omega(conj z) == omega(z) holds exactly.
double omega(const InnerFunction& b, cplx z, double axis_eps = kAxisEpsilon);
double omega(const InnerFunctionSpec& spec, cplx z, double axis_eps = kAxisEpsilon);
// (1/4)[t1^2/3 + (2/3) t3/t1 - (t2/t1)^2] from phase derivatives at u.
double omega_on_axis(const InnerFunction& b, double u);
double omega_from_phase_derivatives(double t1, double t2, double t3);

double omega_from_weyl(const WeylFunction& m, cplx z);

// Schwarzian f'''/f' - (3/2)(f''/f')^2.
double schwarzian_from_derivatives(double f1, double f2, double f3);
double schwarzian(const WeylFunction& m, double u);
// Exact derivatives through Taylor-jet arithmetic.
double schwarzian(const std::function<RJet(const RJet&)>& f, double u);
// Five-point finite differences with step h.
double schwarzian_fd(const std::function<double(double)>& f, double u, double h = 1e-2);

enum class CurvatureSource { FromInner, FromWeyl, FromPolynomials, Analytic };

// Sampled curvature with a modified-Akima interpolant between the samples.
class CurvatureProfile {
 public:
  CurvatureProfile(std::vector<double> grid, std::vector<double> omega_values, CurvatureSource source);
  static CurvatureProfile constant(double value, double lo, double hi, int n = 65);
  static CurvatureProfile sample(const std::function<double(double)>& f, double lo, double hi, int n,
                                 CurvatureSource source);
  static CurvatureProfile from_inner(const InnerFunction& b, double lo, double hi, int n);

  double operator()(double u) const;
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  CurvatureSource source() const { return source_; }
  double lo() const { return grid_.front(); }
  double hi() const { return grid_.back(); }
  double max_value() const;
  double max_spacing() const;

 private:
  std::vector<double> grid_, values_;
  CurvatureSource source_;
  bool flat_ = false;
  std::shared_ptr<boost::math::interpolators::makima<std::vector<double>>> interp_;
};

// One solution of y'' + 3 omega y = 0 with Hermite dense output.
class SLTrajectory {
 public:
  SLTrajectory(std::vector<double> u, std::vector<double> y, std::vector<double> yp, std::vector<double> ypp,
               std::vector<double> yppp);
  double operator()(double u) const;
  double derivative(double u) const;
  double lo() const { return u_.front(); }
  double hi() const { return u_.back(); }
  const std::vector<double>& knots() const { return u_; }
  // Sign-change scan at the given step, then bracketed refinement to 1e-12.
  std::vector<double> zeros(double step) const;

 private:
  std::vector<double> u_;
  std::shared_ptr<boost::math::interpolators::quintic_hermite<std::vector<double>>> y_, yp_;
};

struct SLSolution {
  std::vector<double> grid, y1_values, y2_values;
  double wronskian = 0.0;
  double wronskian_spread = 0.0;  // max relative deviation across the grid
};

// Largest grid spacing that still resolves oscillations of the profile.
double sl_resolution(const CurvatureProfile& omega);

SLTrajectory sl_solve(const CurvatureProfile& omega, double u0, double u1, double y0, double yp0);
// W = y2 y1' - y1 y2' sampled on grid; fails if y1 and y2 share a zero.
SLSolution sl_pair(const SLTrajectory& y1, const SLTrajectory& y2, const std::vector<double>& grid);

// Normalized phase reconstructed from curvature: theta(0)=0, theta'(0)=1, theta''(0)=0.
class PhaseCurve {
 public:
  PhaseCurve(std::vector<double> u, std::vector<double> theta, std::vector<double> theta_prime,
             std::vector<double> theta_second, std::vector<double> theta_third);
  double operator()(double u) const;
  double derivative(double u) const;
  double lo() const { return u_.front(); }
  double hi() const { return u_.back(); }

 private:
  std::vector<double> u_;
  std::shared_ptr<boost::math::interpolators::quintic_hermite<std::vector<double>>> theta_, theta_prime_;
};

PhaseCurve phase_from_curvature(const CurvatureProfile& omega, double lo, double hi);

}  // namespace weyl
