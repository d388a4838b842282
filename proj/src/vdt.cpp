#include "weyl/vdt.hpp"

#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace weyl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool unimodular(cplx c) { return std::abs(std::abs(c) - 1.0) <= 1e-12; }

// Real roots of theta(u) = arg c (mod 2 pi) in the open interval (a, b).
std::vector<Root> self_adjoint_roots(const InnerFunction& b, cplx c, double a, double e) {
  std::vector<Root> out;
  if (!(a < e)) return out;
  const double alpha = std::arg(c);
  const double ta = b.phase(a), tb = b.phase(e);
  const long kmin = static_cast<long>(std::floor((ta - alpha) / kTwoPi)) + 1;
  const long kmax = static_cast<long>(std::ceil((tb - alpha) / kTwoPi)) - 1;
  double lo = a, flo = ta;
  const double tol = 1e-15 * std::max({1.0, std::abs(a), std::abs(e)});
  for (long k = kmin; k <= kmax; ++k) {
    const double target = alpha + kTwoPi * static_cast<double>(k);
    auto g = [&](double u) { return b.phase(u) - target; };
    const double glo = flo - target, ghi = tb - target;
    if (!(glo < 0.0) || !(ghi > 0.0)) continue;
    const double u = find_root_bracketed(g, lo, e, glo, ghi, tol);
    out.push_back({cplx(u, 0.0), 1});
    lo = u;
    flo = b.phase(u);
  }
  return out;
}

// Roots of B = c with |c| < 1 inside a rectangle of the closed upper half-plane.
std::vector<Root> upper_roots(const InnerFunction& b, cplx c, const Rect& r, const SpectrumOptions& opt) {
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) return {};
  if (auto* cg = dynamic_cast<const CongruentInner*>(&b)) {
    ProjectiveValue p = cg->pull_back(ProjectiveValue(c, 1.0));
    return upper_roots(*cg->base(), p.value(), r, opt);
  }
  if (c == cplx(0.0)) {
    if (auto* pr = dynamic_cast<const ProductInner*>(&b)) {
      std::vector<Root> out;
      for (const auto& f : pr->factors()) {
        auto part = upper_roots(*f, c, r, opt);
        out.insert(out.end(), part.begin(), part.end());
      }
      // Coincident zeros from different factors merge into one root.
      std::sort(out.begin(), out.end(), [](const Root& x, const Root& y) {
        return std::make_pair(x.location.real(), x.location.imag()) < std::make_pair(y.location.real(), y.location.imag());
      });
      std::vector<Root> merged;
      for (const auto& x : out) {
        if (!merged.empty() && std::abs(merged.back().location - x.location) <= 1e-12 * std::max(1.0, std::abs(x.location)))
          merged.back().multiplicity += x.multiplicity;
        else
          merged.push_back(x);
      }
      return merged;
    }
  }
  if (auto* rs = dynamic_cast<const RieszSmirnovInner*>(&b)) {
    const auto& spec = rs->spec();
    if (c == cplx(0.0)) {
      std::vector<Root> out;
      for (const auto& z : spec.zeros())
        if (r.contains(z.location)) out.push_back({z.location, z.multiplicity});
      return out;
    }
    if (spec.zeros().empty()) {
      // gamma e^{ibz} = c in closed form.
      const double bb = spec.mean_type();
      if (bb == 0.0) return {};
      const cplx w = c / spec.gamma();
      const double im = -std::log(std::abs(w)) / bb, re0 = std::arg(w) / bb, period = kTwoPi / bb;
      std::vector<Root> out;
      if (!(im > r.y0 && im < r.y1)) return out;
      const long k0 = static_cast<long>(std::ceil((r.x0 - re0) / period));
      for (long k = k0;; ++k) {
        const double x = re0 + period * static_cast<double>(k);
        if (x >= r.x1) break;
        cplx z(x, im);
        if (r.contains(z)) out.push_back({z, 1});
      }
      return out;
    }
  }
  AnalyticFn f = [&b, c](cplx z) {
    ProjectiveJet t = b.taylor(z);
    return std::make_pair(t.num.c[0] - c * t.den.c[0], t.num.c[1] - c * t.den.c[1]);
  };
  return find_roots(f, r, opt.roots);
}

void sort_roots(std::vector<Root>& v) {
  std::sort(v.begin(), v.end(), [](const Root& x, const Root& y) {
    if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
    return x.location.imag() < y.location.imag();
  });
}

}  // namespace

// ---------------------------------------------------------------- boundary conditions

cplx BoundaryCondition::value() const {
  if (inf_) fail(ErrorCode::DomainError, "boundary condition at infinity has no finite value");
  return c_;
}

BoundaryCondition::Kind BoundaryCondition::kind() const {
  if (inf_) return Kind::Accumulative;
  if (unimodular(c_)) return Kind::SelfAdjoint;
  return std::abs(c_) < 1.0 ? Kind::Dissipative : Kind::Accumulative;
}

const char* to_string(BoundaryCondition::Kind k) {
  switch (k) {
    case BoundaryCondition::Kind::SelfAdjoint: return "self-adjoint";
    case BoundaryCondition::Kind::Dissipative: return "dissipative";
    case BoundaryCondition::Kind::Accumulative: return "accumulative";
  }
  return "?";
}

BoundaryCondition BoundaryCondition::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return infinity();
  std::istringstream is(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(is >> re)) fail(ErrorCode::ParseError, "bad boundary condition '" + text + "'");
  if (is >> comma) {
    if (comma != ',' || !(is >> im)) fail(ErrorCode::ParseError, "bad boundary condition '" + text + "'");
  }
  std::string rest;
  if (is >> rest) fail(ErrorCode::ParseError, "bad boundary condition '" + text + "'");
  return at(cplx(re, im));
}

std::string BoundaryCondition::to_string() const {
  if (inf_) return "inf";
  std::ostringstream os;
  os << std::setprecision(17) << c_.real() << "," << c_.imag();
  return os.str();
}

bool Window::contains(cplx z) const {
  const bool in_x = z.real() > rect.x0 && z.real() < rect.x1;
  const bool in_y = z.imag() > rect.y0 && z.imag() < rect.y1;
  return in_x && in_y && (!radius || std::abs(z) < *radius);
}

// ---------------------------------------------------------------- spectrum

std::vector<Root> spectrum(const InnerFunction& b, const BoundaryCondition& bc, const Window& w,
                           const SpectrumOptions& opt) {
  std::vector<Root> out;
  const Rect& r = w.rect;
  if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) fail(ErrorCode::DomainError, "empty window");
  if (bc.kind() == BoundaryCondition::Kind::SelfAdjoint) {
    if (!(r.y0 < 0.0 && r.y1 > 0.0)) return out;
    double a = r.x0, e = r.x1;
    if (w.radius) {
      a = std::max(a, -*w.radius);
      e = std::min(e, *w.radius);
    }
    out = self_adjoint_roots(b, bc.value(), a, e);
  } else if (bc.kind() == BoundaryCondition::Kind::Dissipative) {
    if (r.y1 > 0.0) out = upper_roots(b, bc.value(), Rect{r.x0, r.x1, std::max(r.y0, 0.0), r.y1}, opt);
  } else {
    // B(conj z) = 1/conj(B(z)): roots of B = c in the lower half-plane mirror roots of B = 1/conj(c).
    const cplx cm = bc.is_infinite() ? cplx(0.0) : 1.0 / std::conj(bc.value());
    if (r.y0 < 0.0) {
      out = upper_roots(b, cm, Rect{r.x0, r.x1, std::max(-r.y1, 0.0), -r.y0}, opt);
      for (auto& x : out) x.location = std::conj(x.location);
    }
  }
  std::vector<Root> kept;
  for (const auto& x : out)
    if (w.contains(x.location)) kept.push_back(x);
  sort_roots(kept);
  return kept;
}

std::vector<Root> spectrum(const InnerFunctionSpec& spec, const BoundaryCondition& bc, const Window& w,
                           const SpectrumOptions& opt) {
  return spectrum(RieszSmirnovInner(spec), bc, w, opt);
}

double counting_function(const std::vector<Root>& roots, double r) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "counting function needs r > 0");
  double n = 0.0;
  for (const auto& x : roots) {
    const double a = std::abs(x.location);
    if (a <= 1e-12)
      n += x.multiplicity * std::log(r);
    else if (a < r)
      n += x.multiplicity * std::log(r / a);
  }
  return n;
}

// ---------------------------------------------------------------- proximity

double log_chordal(const InnerFunction& b, cplx z, const BoundaryCondition& bc) {
  if (bc.is_infinite() || bc.value() == cplx(0.0)) {
    const double la = b.log_abs2(z);
    if (std::isnan(la)) fail(ErrorCode::QuadratureFailure, "undefined |B|");
    const double l = 0.5 * la;  // ln |B|
    if (!bc.is_infinite()) {
      if (l == -kInf) return -kInf;
      if (l == kInf) return 0.0;
      return l <= 0.0 ? l - 0.5 * std::log1p(std::exp(2.0 * l)) : -0.5 * std::log1p(std::exp(-2.0 * l));
    }
    if (l == kInf) return -kInf;
    if (l == -kInf) return 0.0;
    return l <= 0.0 ? -0.5 * std::log1p(std::exp(2.0 * l)) : -l - 0.5 * std::log1p(std::exp(-2.0 * l));
  }
  ProjectiveValue v = b.value(z);
  const cplx c = bc.value();
  const cplx n = v.numerator(), d = v.denominator();
  const double s = std::max(std::abs(n), std::abs(d));
  const cplx ns = n / s, ds = d / s;
  return std::log(std::abs(ns - c * ds)) - 0.5 * std::log(std::norm(ns) + std::norm(ds)) -
         0.5 * std::log1p(std::norm(c));
}

namespace {

std::vector<double> circle_breakpoints(double r) {
  std::vector<double> bp{kPi};
  for (double s = 0.5 / r; s < 0.5; s *= 2.0) {
    bp.push_back(s);
    bp.push_back(kPi - s);
    bp.push_back(kPi + s);
    bp.push_back(kTwoPi - s);
  }
  return bp;
}

}  // namespace

double proximity(const InnerFunction& b, const BoundaryCondition& bc, double r, const VdtOptions& opt) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "proximity needs r > 0");
  for (int attempt = 0;; ++attempt) {
    try {
      auto g = [&](double phi) { return -log_chordal(b, std::polar(r, phi), bc); };
      QuadResult q = integrate(g, 0.0, kTwoPi, opt.quad, circle_breakpoints(r));
      return q.value / kTwoPi;
    } catch (const Error& e) {
      // A root sitting on the circle: nudge the radius.
      if (e.code() != ErrorCode::QuadratureFailure || attempt >= 2) throw;
      r *= 1.0 + 1e-9;
    }
  }
}

double proximity(const InnerFunctionSpec& spec, const BoundaryCondition& bc, double r, const VdtOptions& opt) {
  return proximity(RieszSmirnovInner(spec), bc, r, opt);
}

// ---------------------------------------------------------------- height

double height(const InnerFunction& b, double r, const VdtOptions& opt) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "height needs r > 0");
  const double t0 = b.phase_derivatives(0.0)[0];
  auto g = [&](double u) {
    const double s = b.phase_derivatives(u)[0] + b.phase_derivatives(-u)[0] - 2.0 * t0;
    return s * std::log(r / u);
  };
  std::vector<double> bp;
  for (double x : b.feature_points()) bp.push_back(std::abs(x));
  for (double s = r / 2.0; s > 1e-3 && bp.size() < 64; s /= 2.0) bp.push_back(s);
  QuadResult q = integrate(g, 0.0, r, opt.quad, bp);
  return q.value / kTwoPi + t0 * r / kPi;
}

double height(const InnerFunctionSpec& spec, double r, const VdtOptions& opt) {
  return height(RieszSmirnovInner(spec), r, opt);
}

// ---------------------------------------------------------------- T_F

double charfn_TF(const InnerFunction& b, double r, const VdtOptions& opt) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "T_F needs r > 0");
  const double eps = opt.axis_epsilon;
  // Off-axis omega cancels two terms of size 1/(4y^2); near the band edge that costs
  // about 1e-10 relative, so tighter tolerances only chase noise.
  QuadOptions inner_q{1e-11, 1e-8, 4000};
  auto ring = [&](double rho) {
    auto w = [&](double phi) { return omega(b, std::polar(rho, phi), eps); };
    std::vector<double> bp;
    for (double c : {0.01, 0.1, 1.0, 10.0}) {
      const double a = c / rho;
      if (a < kPi / 2.0) {
        bp.push_back(a);
        bp.push_back(kPi - a);
      }
    }
    if (eps < rho) {
      const double a = std::asin(eps / rho);
      bp.push_back(a);
      bp.push_back(kPi - a);
    }
    return integrate(w, 0.0, kPi, inner_q, bp).value;
  };
  auto g = [&](double rho) { return rho * std::log(r / rho) * ring(rho); };
  std::vector<double> bp;
  for (double x : b.feature_points()) bp.push_back(std::abs(x));
  for (double s = r / 2.0; s > 1e-3 && bp.size() < 64; s /= 2.0) bp.push_back(s);
  QuadResult q = integrate(g, 0.0, r, QuadOptions{1e-9 * std::max(1.0, r), 1e-8, 4000}, bp);
  return 2.0 * q.value / kPi;
}

double charfn_TF(const InnerFunctionSpec& spec, double r, const VdtOptions& opt) {
  return charfn_TF(RieszSmirnovInner(spec), r, opt);
}

// ---------------------------------------------------------------- entire functions

double nevanlinna_T_entire_log(const std::function<double(cplx)>& log_abs_f, double r, const QuadOptions& q) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "characteristic needs r > 0");
  auto g = [&](double phi) {
    const double l = log_abs_f(std::polar(r, phi));
    if (std::isnan(l)) fail(ErrorCode::QuadratureFailure, "NaN modulus");
    return l > 0.0 ? l : 0.0;
  };
  return integrate(g, 0.0, kTwoPi, q, {kPi / 2.0, kPi, 1.5 * kPi}).value / kTwoPi;
}

double nevanlinna_T_entire(const std::function<cplx(cplx)>& f, double r, const QuadOptions& q) {
  return nevanlinna_T_entire_log([&f](cplx z) { return std::log(std::abs(f(z))); }, r, q);
}

// ---------------------------------------------------------------- defect and fits

GrowthReport defect(const InnerFunction& b, const BoundaryCondition& bc, const std::vector<double>& r_grid,
                    bool with_tf, const VdtOptions& opt) {
  if (r_grid.size() < 2) fail(ErrorCode::InsufficientRange, "defect needs an r grid");
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1])) fail(ErrorCode::DomainError, "r grid must increase");
  if (r_grid.back() < 10.0 * r_grid.front() * (1.0 - 1e-12))
    fail(ErrorCode::InsufficientRange, "r grid must span at least one decade");
  GrowthReport g;
  g.r_grid = r_grid;
  const std::size_t n = r_grid.size();
  g.h_values.resize(n);
  g.m_values.resize(n);
  g.N_values.resize(n);
  if (with_tf) g.TF_values.resize(n);
  const double rmax = r_grid.back() * (1.0 + 1e-6);
  Window w = bc.kind() == BoundaryCondition::Kind::SelfAdjoint ? Window::interval(-rmax, rmax) : Window::disc(rmax);
  const auto roots = spectrum(b, bc, w);
  parallel_for(n, [&](std::size_t i) {
    const double r = r_grid[i];
    g.h_values[i] = height(b, r, opt);
    g.m_values[i] = proximity(b, bc, r, opt);
    g.N_values[i] = counting_function(roots, r);
    if (with_tf) g.TF_values[i] = charfn_TF(b, r, opt);
  });
  double est = kInf;
  for (std::size_t i = n / 2; i < n; ++i) est = std::min(est, g.m_values[i] / g.h_values[i]);
  g.defect_estimate = std::max(0.0, est);
  return g;
}

OrderTypeFit order_type_fit(const std::vector<double>& r_grid, const std::vector<double>& values) {
  if (r_grid.size() != values.size() || r_grid.empty()) fail(ErrorCode::DomainError, "mismatched grids");
  const double top = r_grid.back();
  std::vector<double> lx, ly, rs, vs;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] >= top / 10.0 * (1.0 - 1e-12)) {
      if (!(values[i] > 0.0)) fail(ErrorCode::DomainError, "values must be positive on the top decade");
      lx.push_back(std::log(r_grid[i]));
      ly.push_back(std::log(values[i]));
      rs.push_back(r_grid[i]);
      vs.push_back(values[i]);
    }
  }
  if (lx.size() < 8 || r_grid.front() > top / 10.0 * (1.0 + 1e-12))
    fail(ErrorCode::InsufficientRange, "need at least 8 grid points spanning the top decade");
  LinearFit fit = least_squares(lx, ly);
  OrderTypeFit out;
  out.order = fit.slope;
  out.rms_residual = fit.rms_residual;
  out.points = static_cast<int>(lx.size());
  for (std::size_t i = 0; i < rs.size(); ++i) out.type = std::max(out.type, vs[i] / std::pow(rs[i], out.order));
  // ln r has log-log slope 1/ln r, still about 0.15 at r = 1000.
  out.subpolynomial = out.order < 0.25;
  return out;
}

}  // namespace weyl
