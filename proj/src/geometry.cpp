#include "weyl/geometry.hpp"

#include <array>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace weyl {

namespace odeint = boost::numeric::odeint;

// ---------------------------------------------------------------- chi / omega

double chi(const InnerFunction& b, cplx z, double axis_eps) {
  const double y = z.imag();
  if (std::abs(y) <= axis_eps) {
    double t = b.phase_derivatives(z.real())[0];
    if (!std::isfinite(t)) fail(ErrorCode::PoleEvaluation, "chi at a pole");
    return t;
  }
  const double om = b.one_minus_abs2(z);
  if (!std::isfinite(om)) fail(ErrorCode::PoleEvaluation, "chi at a pole of B");
  return om / (2.0 * y);
}

double chi(const InnerFunctionSpec& spec, cplx z, double axis_eps) { return chi(RieszSmirnovInner(spec), z, axis_eps); }

double omega_from_phase_derivatives(double t1, double t2, double t3) {
  if (!(t1 > 0.0)) fail(ErrorCode::DegenerateDerivative, "phase derivative must be positive");
  const double r = t2 / t1;
  return 0.25 * (t1 * t1 / 3.0 + (2.0 / 3.0) * t3 / t1 - r * r);
}

double omega_on_axis(const InnerFunction& b, double u) {
  auto d = b.phase_derivatives(u);
  return omega_from_phase_derivatives(d[0], d[1], d[2]);
}

double omega(const InnerFunction& b, cplx z, double axis_eps) {
  if (std::abs(z.imag()) <= axis_eps) return omega_on_axis(b, z.real());
  if (z.imag() < 0.0) z = std::conj(z);
  const double y = z.imag();
  const double la = b.log_abs2(z);
  const double om = b.one_minus_abs2(z);
  if (!std::isfinite(om) || om <= 0.0) fail(ErrorCode::PoleEvaluation, "omega: |B| not below 1 in the upper half-plane");
  double bp2;  // |B'|^2
  if (la == -std::numeric_limits<double>::infinity()) {
    ProjectiveJet t = b.taylor(z);
    cplx d0 = t.den.c[0];
    bp2 = std::norm((t.num.c[1] * d0 - t.num.c[0] * t.den.c[1]) / (d0 * d0));
  } else {
    bp2 = std::exp(la) * std::norm(b.log_derivatives(z)[0]);
  }
  return 1.0 / (4.0 * y * y) - bp2 / (om * om);
}

double omega(const InnerFunctionSpec& spec, cplx z, double axis_eps) {
  return omega(RieszSmirnovInner(spec), z, axis_eps);
}

double omega_from_weyl(const WeylFunction& m, cplx z) {
  const double y = z.imag();
  if (y == 0.0) fail(ErrorCode::DomainError, "omega_from_weyl needs Im z != 0");
  CJet j = m.taylor(z);
  const double ratio = std::abs(j.c[1]) / (j.c[0].imag() / y);
  return (1.0 - ratio * ratio) / (4.0 * y * y);
}

// ---------------------------------------------------------------- Schwarzian

double schwarzian_from_derivatives(double f1, double f2, double f3) {
  if (std::abs(f1) < 1e-12) fail(ErrorCode::DegenerateDerivative, "|f'| < 1e-12 in Schwarzian");
  const double r = f2 / f1;
  return f3 / f1 - 1.5 * r * r;
}

double schwarzian(const WeylFunction& m, double u) {
  CJet j = m.taylor(cplx(u, 0.0));
  return schwarzian_from_derivatives(j.derivative(1).real(), j.derivative(2).real(), j.derivative(3).real());
}

double schwarzian(const std::function<RJet(const RJet&)>& f, double u) {
  RJet j = f(RJet::variable(u));
  return schwarzian_from_derivatives(j.derivative(1), j.derivative(2), j.derivative(3));
}

double schwarzian_fd(const std::function<double(double)>& f, double u, double h) {
  const double fm2 = f(u - 2 * h), fm1 = f(u - h), f0 = f(u), fp1 = f(u + h), fp2 = f(u + 2 * h);
  const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
  const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
  const double d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h * h * h);
  return schwarzian_from_derivatives(d1, d2, d3);
}

// ---------------------------------------------------------------- profiles

CurvatureProfile::CurvatureProfile(std::vector<double> grid, std::vector<double> omega_values,
                                   CurvatureSource source)
    : grid_(std::move(grid)), values_(std::move(omega_values)), source_(source) {
  if (grid_.size() < 4 || grid_.size() != values_.size())
    fail(ErrorCode::ValidationError, "curvature profile needs >= 4 matching samples");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (i > 0 && !(grid_[i] > grid_[i - 1])) fail(ErrorCode::ValidationError, "profile grid must increase strictly");
    if (!(values_[i] >= -1e-10)) fail(ErrorCode::ValidationError, "curvature samples must be nonnegative");
  }
  flat_ = std::all_of(values_.begin(), values_.end(), [&](double v) { return v == values_.front(); });
  auto x = grid_;
  auto y = values_;
  interp_ = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(std::move(x), std::move(y));
}

CurvatureProfile CurvatureProfile::constant(double value, double lo, double hi, int n) {
  return CurvatureProfile(linear_grid(lo, hi, n), std::vector<double>(n, value), CurvatureSource::Analytic);
}

CurvatureProfile CurvatureProfile::sample(const std::function<double(double)>& f, double lo, double hi, int n,
                                          CurvatureSource source) {
  std::vector<double> g = linear_grid(lo, hi, n), v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  return CurvatureProfile(std::move(g), std::move(v), source);
}

CurvatureProfile CurvatureProfile::from_inner(const InnerFunction& b, double lo, double hi, int n) {
  return sample([&b](double u) { return omega_on_axis(b, u); }, lo, hi, n, CurvatureSource::FromInner);
}

double CurvatureProfile::operator()(double u) const {
  if (u < lo() || u > hi()) fail(ErrorCode::DomainError, "curvature requested outside the profile grid");
  if (flat_) return values_.front();
  return (*interp_)(u);
}

double CurvatureProfile::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double CurvatureProfile::max_spacing() const {
  double h = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) h = std::max(h, grid_[i] - grid_[i - 1]);
  return h;
}

// ---------------------------------------------------------------- Sturm-Liouville

namespace {

using State2 = std::array<double, 2>;
using State3 = std::array<double, 3>;

template <class State, class System, class Observer>
void integrate_both_ways(System sys, State x0, double from, double to, Observer obs) {
  if (from == to) {
    obs(x0, from);
    return;
  }
  auto stepper = odeint::make_controlled(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
  const double dt = (to > from ? 1.0 : -1.0) * 1e-3 * std::max(1.0, std::abs(to - from));
  odeint::integrate_adaptive(stepper, sys, x0, from, to, dt, obs);
}

}  // namespace

SLTrajectory::SLTrajectory(std::vector<double> u, std::vector<double> y, std::vector<double> yp,
                           std::vector<double> ypp, std::vector<double> yppp)
    : u_(u) {
  if (u.size() < 2) fail(ErrorCode::DomainError, "trajectory needs at least two knots");
  auto u2 = u;
  auto ypp2 = ypp;
  auto yp2 = yp;
  y_ = std::make_shared<boost::math::interpolators::quintic_hermite<std::vector<double>>>(
      std::move(u), std::move(y), std::move(yp), std::move(ypp));
  yp_ = std::make_shared<boost::math::interpolators::quintic_hermite<std::vector<double>>>(
      std::move(u2), std::move(yp2), std::move(ypp2), std::move(yppp));
}

double SLTrajectory::operator()(double u) const { return (*y_)(u); }
double SLTrajectory::derivative(double u) const { return (*yp_)(u); }

std::vector<double> SLTrajectory::zeros(double step) const {
  std::vector<double> out;
  const int n = std::max(2, static_cast<int>(std::ceil((hi() - lo()) / step)) + 1);
  std::vector<double> g = linear_grid(lo(), hi(), n);
  double prev = (*this)(g[0]);
  if (prev == 0.0) out.push_back(g[0]);
  for (int i = 1; i < n; ++i) {
    double cur = (*this)(g[i]);
    if (cur == 0.0) {
      out.push_back(g[i]);
    } else if (prev != 0.0 && (prev > 0.0) != (cur > 0.0)) {
      out.push_back(find_root_bracketed([this](double x) { return (*this)(x); }, g[i - 1], g[i], prev, cur, 1e-12));
    }
    prev = cur;
  }
  return out;
}

double sl_resolution(const CurvatureProfile& omega) {
  const double m = omega.max_value();
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  return kPi / (10.0 * std::sqrt(3.0 * m));
}

SLTrajectory sl_solve(const CurvatureProfile& omega, double u0, double u1, double y0, double yp0) {
  if (std::min(u0, u1) < omega.lo() || std::max(u0, u1) > omega.hi())
    fail(ErrorCode::DomainError, "interval leaves the curvature grid");
  if (omega.max_spacing() > sl_resolution(omega))
    fail(ErrorCode::GridTooCoarse, "curvature grid spacing exceeds the oscillation resolution");
  std::vector<double> u, y, yp;
  auto sys = [&omega](const State2& x, State2& dx, double t) {
    dx[0] = x[1];
    dx[1] = -3.0 * omega(t) * x[0];
  };
  auto obs = [&](const State2& x, double t) {
    u.push_back(t);
    y.push_back(x[0]);
    yp.push_back(x[1]);
  };
  integrate_both_ways(sys, State2{y0, yp0}, u0, u1, obs);
  if (u.size() < 2) fail(ErrorCode::DomainError, "sl_solve needs u0 != u1");
  if (u1 < u0) {
    std::reverse(u.begin(), u.end());
    std::reverse(y.begin(), y.end());
    std::reverse(yp.begin(), yp.end());
  }
  std::vector<double> ypp(u.size()), yppp(u.size());
  const double h = 1e-6 * std::max(1.0, std::abs(u1 - u0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double w = omega(u[i]);
    // omega' from the interpolant by a one-sided difference inside the grid.
    double a = std::max(omega.lo(), u[i] - h), b = std::min(omega.hi(), u[i] + h);
    const double dw = (omega(b) - omega(a)) / (b - a);
    ypp[i] = -3.0 * w * y[i];
    yppp[i] = -3.0 * (dw * y[i] + w * yp[i]);
  }
  return SLTrajectory(std::move(u), std::move(y), std::move(yp), std::move(ypp), std::move(yppp));
}

SLSolution sl_pair(const SLTrajectory& y1, const SLTrajectory& y2, const std::vector<double>& grid) {
  SLSolution s;
  s.grid = grid;
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = y1(grid[i]), b = y2(grid[i]);
    if (a == 0.0 && b == 0.0) fail(ErrorCode::DomainError, "solutions share a zero");
    s.y1_values.push_back(a);
    s.y2_values.push_back(b);
    w[i] = b * y1.derivative(grid[i]) - a * y2.derivative(grid[i]);
  }
  if (w.empty()) return s;
  s.wronskian = w.front();
  for (double v : w) s.wronskian_spread = std::max(s.wronskian_spread, std::abs(v - s.wronskian) / std::abs(s.wronskian));
  return s;
}

// ---------------------------------------------------------------- phase from curvature

PhaseCurve::PhaseCurve(std::vector<double> u, std::vector<double> theta, std::vector<double> theta_prime,
                       std::vector<double> theta_second, std::vector<double> theta_third)
    : u_(u) {
  auto u2 = u;
  auto tp = theta_prime;
  auto ts = theta_second;
  theta_ = std::make_shared<boost::math::interpolators::quintic_hermite<std::vector<double>>>(
      std::move(u), std::move(theta), std::move(theta_prime), std::move(theta_second));
  theta_prime_ = std::make_shared<boost::math::interpolators::quintic_hermite<std::vector<double>>>(
      std::move(u2), std::move(tp), std::move(ts), std::move(theta_third));
}

double PhaseCurve::operator()(double u) const { return (*theta_)(u); }
double PhaseCurve::derivative(double u) const { return (*theta_prime_)(u); }

PhaseCurve phase_from_curvature(const CurvatureProfile& omega, double lo, double hi) {
  if (!(lo <= 0.0 && hi >= 0.0 && lo < hi)) fail(ErrorCode::DomainError, "interval must contain 0");
  if (lo < omega.lo() || hi > omega.hi()) fail(ErrorCode::DomainError, "interval leaves the curvature grid");
  // sigma = ln theta'; sigma'' = 6 omega - e^{2 sigma}/2 + sigma'^2/2.
  constexpr double kSigmaCap = 27.631021115928547;  // ln 1e12
  auto sys = [&omega](const State3& x, State3& dx, double t) {
    const double s = std::clamp(x[1], -40.0, 40.0);
    dx[0] = std::exp(s);
    dx[1] = x[2];
    dx[2] = 6.0 * omega(t) - 0.5 * std::exp(2.0 * s) + 0.5 * x[2] * x[2];
  };
  std::vector<double> u_f, u_b;
  std::vector<State3> x_f, x_b;
  auto observer = [](std::vector<double>& us, std::vector<State3>& xs) {
    return [&us, &xs](const State3& x, double t) {
      if (!std::isfinite(x[1]) || std::abs(x[1]) > kSigmaCap)
        fail(ErrorCode::BlowUp, "theta' left (1e-12, 1e12) at u = " + std::to_string(t));
      us.push_back(t);
      xs.push_back(x);
    };
  };
  if (hi > 0.0) integrate_both_ways(sys, State3{0.0, 0.0, 0.0}, 0.0, hi, observer(u_f, x_f));
  if (lo < 0.0) integrate_both_ways(sys, State3{0.0, 0.0, 0.0}, 0.0, lo, observer(u_b, x_b));
  std::vector<double> u, th, t1, t2, t3;
  auto push = [&](double t, const State3& x) {
    const double e = std::exp(x[1]);
    State3 dx;
    sys(x, dx, t);
    u.push_back(t);
    th.push_back(x[0]);
    t1.push_back(e);
    t2.push_back(e * x[2]);
    t3.push_back(e * (dx[2] + x[2] * x[2]));
  };
  for (std::size_t i = u_b.size(); i-- > 1;) push(u_b[i], x_b[i]);
  if (u_f.empty()) {
    push(0.0, State3{0.0, 0.0, 0.0});
  } else {
    for (std::size_t i = 0; i < u_f.size(); ++i) push(u_f[i], x_f[i]);
  }
  if (u_f.empty() && u_b.empty()) fail(ErrorCode::DomainError, "empty interval");
  return PhaseCurve(std::move(u), std::move(th), std::move(t1), std::move(t2), std::move(t3));
}

}  // namespace weyl
