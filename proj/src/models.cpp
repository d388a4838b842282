#include "weyl/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "weyl/geometry.hpp"

namespace weyl {

namespace {

// Below this |l - conj m| relative to the local rate the kernels switch to
// their Taylor form; the direct quotient would lose about 8 digits at 1e-4.
constexpr double kDiagonalSwitch = 1e-4;

CJet conj_coefficients(const CJet& j) {
  return CJet(std::conj(j.c[0]), std::conj(j.c[1]), std::conj(j.c[2]), std::conj(j.c[3]));
}

double rel_mismatch(cplx a, cplx b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

CJet DeBrangesFunction::e_sharp_jet(cplx z) const { return conj_coefficients(e_(std::conj(z))); }

DeBrangesFunction debranges_from_inner(const InnerFunctionSpec& spec) {
  // conj(kappa)/kappa must equal gamma prod (conj l / l)^m.
  cplx unit = spec.gamma();
  for (const auto& z : spec.zeros()) unit *= std::pow(std::conj(z.location) / z.location, z.multiplicity);
  const cplx kappa = std::polar(1.0, -0.5 * std::arg(unit));
  const double b = spec.mean_type();
  auto zeros = spec.zeros();
  DeBrangesFunction e([kappa, b, zeros](cplx z) {
    CJet j = exp(CJet(-0.5 * kI * b * z, -0.5 * kI * b, 0.0, 0.0)) * kappa;
    for (const auto& zk : zeros) j = j * pow(CJet::variable(z) - std::conj(zk.location), zk.multiplicity);
    return j;
  });

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const cplx z(re(rng), im(rng));
    const ProjectiveValue bv = eval_inner(spec, z, 0);
    const cplx lhs = e.e_sharp(z) * bv.denominator(), rhs = e.e(z) * bv.numerator();
    if (rel_mismatch(lhs, rhs) > 1e-10) {
      std::ostringstream os;
      os << "e#/e differs from B at " << z << " (relative " << rel_mismatch(lhs, rhs) << ")";
      fail(ErrorCode::ConstructionMismatch, os.str());
    }
  }
  return e;
}

cplx kernel_K1(const DeBrangesFunction& e, cplx l, cplx m) {
  const cplx w = std::conj(m);
  const cplx h = w - l;
  const CJet el = e.e_jet(l), sl = e.e_sharp_jet(l);
  const double rate = std::abs(el.c[1] / el.c[0]) + std::abs(sl.c[1] / sl.c[0]) + 1.0;
  if (std::abs(h) * rate < kDiagonalSwitch) {
    // N(w) = e(l) e#(w) - e(w) e#(l) vanishes at w = l; K1 = -i N(w)/h.
    const CJet n = el.c[0] * sl - el * sl.c[0];
    return -kI * (n.c[1] + h * (n.c[2] + h * n.c[3]));
  }
  return kI * (el.c[0] * e.e_sharp(w) - e.e(w) * sl.c[0]) / (l - w);
}

cplx kernel_K2(const InnerFunction& b, cplx l, cplx m) {
  const cplx w = std::conj(m);
  const cplx h = w - l;
  if (std::abs(h) < 1.0) {
    const ProjectiveValue bl = b.value(l);
    if (bl.numerator() != cplx(0.0) && !bl.is_infinite()) {
      const auto d = b.log_derivatives(l);
      const double rate = std::abs(d[0]) + std::sqrt(std::abs(d[1])) + std::cbrt(std::abs(d[2])) + 1.0;
      if (std::abs(h) * rate < kDiagonalSwitch) {
        // conj B(m) = 1/B(w), so 1 - B(l)/B(w) = -expm1(-s) with s = ln B(w) - ln B(l).
        const cplx s = h * (d[0] + h * (d[1] / 2.0 + h * d[2] / 6.0));
        if (h == cplx(0.0)) return kI * (-d[0]);
        const cplx em1 = std::abs(s) < 1e-5 ? -s + s * s / 2.0 - s * s * s / 6.0 : std::exp(-s) - 1.0;
        return kI * em1 / h;
      }
    }
  }
  const cplx bl = b.value(l).value(), bm = b.value(m).value();
  return kI * (1.0 - bl * std::conj(bm)) / (l - w);
}

cplx kernel_K2(const InnerFunctionSpec& spec, cplx l, cplx m) { return kernel_K2(RieszSmirnovInner(spec), l, m); }

cplx kernel_K3(const WeylFunction& mf, cplx l, cplx mu) {
  const cplx w = std::conj(mu);
  const cplx h = w - l;
  const CJet ml = mf.taylor(l);
  const double rate = std::abs(ml.c[1]) / std::max(std::abs(ml.c[0]), 1.0) + 1.0;
  if (std::abs(h) * rate < kDiagonalSwitch) return ml.c[1] + h * (ml.c[2] + h * ml.c[3]);
  return (ml.c[0] - std::conj(mf.value(mu))) / (l - w);
}

double kernel_K4(const DeBrangesFunction& e, double u, double v) {
  const double nu = kernel_K1(e, u, u).real(), nv = kernel_K1(e, v, v).real();
  if (nu <= 1e-14 || nv <= 1e-14) fail(ErrorCode::DegenerateNorm, "kernel diagonal vanishes");
  if (u == v) return 1.0;
  return kernel_K1(e, u, v).real() / std::sqrt(nu * nv);
}

double kernel_K5(const InnerFunction& b, double li, double lj) {
  for (double x : {li, lj}) {
    const double r = wrap_to_pi(b.phase(x));
    if (std::abs(r) > 1e-8) {
      std::ostringstream os;
      os << x << " is not an eigenvalue of T_1 (theta mod 2pi = " << r << ")";
      fail(ErrorCode::NotAnEigenvalue, os.str());
    }
  }
  if (std::abs(li - lj) > 1e-12 * std::max(1.0, std::abs(li))) return 0.0;
  return b.phase_derivatives(li)[0];
}

double kernel_K5(const InnerFunctionSpec& spec, double li, double lj) {
  return kernel_K5(RieszSmirnovInner(spec), li, lj);
}

const char* to_string(KernelId id) {
  switch (id) {
    case KernelId::K1: return "K1";
    case KernelId::K2: return "K2";
    case KernelId::K3: return "K3";
    case KernelId::K4: return "K4";
    case KernelId::K5: return "K5";
  }
  return "?";
}

double KernelMatrix::hermitian_defect() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double KernelMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool KernelMatrix::is_psd() const {
  const double scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
  return hermitian_defect() <= 1e-10 * scale && min_eigenvalue() >= -1e-8 * std::abs(trace());
}

KernelMatrix kernel_matrix(KernelId id, const std::vector<cplx>& points,
                           const std::function<cplx(cplx, cplx)>& kernel) {
  const auto n = static_cast<Eigen::Index>(points.size());
  KernelMatrix km{points, Eigen::MatrixXcd(n, n), id};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) km.entries(i, j) = kernel(points[i], points[j]);
  return km;
}

Reconstruction sample_reconstruct(const InnerFunction& b, const std::vector<Sample>& samples, cplx l,
                                  const SamplingOptions& opt) {
  int left = 0, right = 0;
  for (const auto& s : samples) (s.node < l.real() ? left : right)++;
  if (left < opt.min_nodes_each_side || right < opt.min_nodes_each_side) {
    std::ostringstream os;
    os << "need " << opt.min_nodes_each_side << " nodes on each side of Re l, have " << left << " and " << right;
    fail(ErrorCode::InsufficientWindow, os.str());
  }
  Reconstruction out{0.0, 0.0};
  std::vector<std::pair<double, double>> left_terms, right_terms;  // (distance, |term|)
  for (const auto& s : samples) {
    const double tp = kernel_K5(b, s.node, s.node);
    const cplx term = s.value == cplx(0.0) ? cplx(0.0) : s.value * kernel_K2(b, l, s.node) / tp;
    out.value += term;
    const double dist = std::abs(s.node - l.real());
    (s.node < l.real() ? left_terms : right_terms).push_back({dist, std::abs(term)});
  }
  // Each side: fit |term| ~ A d^-p on the outer decade, then sum the continuation
  // with the local node density.
  for (auto* side : {&left_terms, &right_terms}) {
    std::sort(side->begin(), side->end());
    const double dmax = side->back().first;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, mass = 0;
    int n = 0;
    for (const auto& [d, t] : *side) {
      if (d < 0.1 * dmax || d <= 0.0) continue;
      mass += t;
      if (t <= 0.0) continue;
      const double x = std::log(d), y = std::log(t);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (mass == 0.0) continue;
    if (n < 3) {
      out.tail_bound = std::numeric_limits<double>::infinity();
      continue;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double p = -slope;
    // Envelope rather than the fit so oscillating terms are not underestimated.
    double envelope = 0.0;
    for (const auto& [d, t] : *side)
      if (d >= 0.5 * dmax) envelope = std::max(envelope, t * std::pow(d / dmax, p));
    const double density = static_cast<double>(side->size()) / std::max(dmax, 1e-300);
    if (p <= 1.0) {
      out.tail_bound = std::numeric_limits<double>::infinity();
      continue;
    }
    out.tail_bound += density * envelope * dmax / (p - 1.0);
  }
  return out;
}

Reconstruction sample_reconstruct(const InnerFunctionSpec& spec, const std::vector<Sample>& samples, cplx l,
                                  const SamplingOptions& opt) {
  return sample_reconstruct(RieszSmirnovInner(spec), samples, l, opt);
}

namespace {

double weighted_integral(const std::function<double(double)>& g, double a, double b) {
  const int panels = std::max(8, static_cast<int>(std::ceil(4.0 * (b - a))));
  std::vector<double> cuts;
  for (int k = 1; k < panels; ++k) cuts.push_back(a + (b - a) * k / panels);
  return integrate(g, a, b, {1e-14, 1e-10, 20000}, cuts).value / kTwoPi;
}

}  // namespace

NormResult he_norm(const std::function<cplx(cplx)>& f, const DeBrangesFunction& e, double U) {
  if (!(U > 0.0)) fail(ErrorCode::DomainError, "truncation radius must be positive");
  auto g = [&](double x) { return std::norm(f(x) / e.e(x)); };
  NormResult out;
  out.value = weighted_integral(g, -U, U);
  // Two half-decade bands on each side give the local power p from
  // J_outer/J_inner = 10^{(1-p)/2}.
  const double a = U / 10.0, m = U / std::sqrt(10.0);
  for (double sgn : {-1.0, 1.0}) {
    auto gs = [&](double x) { return g(sgn * x); };
    const double j1 = weighted_integral(gs, a, m), j2 = weighted_integral(gs, m, U);
    if (j2 == 0.0 && j1 == 0.0) continue;
    if (j1 <= 0.0) fail(ErrorCode::NonDecaying, "|f/e|^2 grows over the last decade");
    const double p = 1.0 - 2.0 * std::log10(j2 / j1);
    if (p <= 1.05) {
      std::ostringstream os;
      os << "|f/e|^2 decays like x^-" << p << " over [" << sgn * a << ", " << sgn * U << "]";
      fail(ErrorCode::NonDecaying, os.str());
    }
    out.tail += j2 / (std::pow(10.0, 0.5 * (p - 1.0)) - 1.0);
  }
  out.value += out.tail;
  return out;
}

cplx he_inner(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g, const DeBrangesFunction& e,
              double U) {
  auto w = [&](double x) { return f(x) * std::conj(g(x)) / std::norm(e.e(x)); };
  const double re = weighted_integral([&](double x) { return w(x).real(); }, -U, U);
  const double im = weighted_integral([&](double x) { return w(x).imag(); }, -U, U);
  return {re, im};
}

cplx discriminant_G(const DeBrangesFunction& e, cplx l) {
  const CJet a = e.e_jet(l), s = e.e_sharp_jet(l);
  return a.c[0] * s.c[1] - a.c[1] * s.c[0];
}

std::vector<Root> discriminant_zeros(const DeBrangesFunction& e, const Rect& r) {
  AnalyticFn g = [&e](cplx z) {
    const CJet a = e.e_jet(z), s = e.e_sharp_jet(z);
    const cplx v = a.c[0] * s.c[1] - a.c[1] * s.c[0];
    // G' = e (e#)'' - e'' e#.
    const cplx d = 2.0 * (a.c[0] * s.c[2] - a.c[2] * s.c[0]);
    return std::make_pair(v, d);
  };
  return find_roots(g, r);
}

}  // namespace weyl
