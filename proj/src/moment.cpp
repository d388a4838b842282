#include "weyl/moment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace weyl {

JacobiSpec::JacobiSpec(std::vector<double> a, std::vector<double> b, std::string provenance)
    : a_(std::move(a)), b_(std::move(b)), provenance_(std::move(provenance)) {
  if (a_.size() != b_.size()) fail(ErrorCode::ValidationError, "a and b must have the same length");
  if (a_.size() < 8) fail(ErrorCode::ValidationError, "at least 8 recurrence coefficients are required");
  for (std::size_t n = 0; n < a_.size(); ++n) {
    if (!(a_[n] > 0.0) || !std::isfinite(a_[n]))
      fail(ErrorCode::ValidationError, "a[" + std::to_string(n) + "] must be positive");
    if (!std::isfinite(b_[n])) fail(ErrorCode::ValidationError, "b[" + std::to_string(n) + "] must be finite");
  }
}

JacobiSpec JacobiSpec::power_family(double power, int n_max, double scale) {
  std::vector<double> a(n_max), b(n_max, 0.0);
  for (int n = 0; n < n_max; ++n) a[n] = scale * std::pow(n + 1.0, power);
  std::ostringstream os;
  os << "a_n = " << scale << " (n+1)^" << power << ", b_n = 0";
  return JacobiSpec(std::move(a), std::move(b), os.str());
}

double JacobiSpec::carleman_sum() const {
  double s = 0.0;
  for (double v : a_) s += 1.0 / v;
  return s;
}

bool JacobiSpec::carleman_warning() const {
  double upper = 0.0;
  for (std::size_t n = a_.size() / 2; n < a_.size(); ++n) upper += 1.0 / a_[n];
  return upper > 0.05 * carleman_sum();
}

JacobiSpec JacobiSpec::shifted() const {
  return JacobiSpec(std::vector<double>(a_.begin() + 1, a_.end()), std::vector<double>(b_.begin() + 1, b_.end()),
                    provenance_ + ", shifted");
}

namespace {

// Forward recurrence for P_n and Q_n as Taylor jets in z, plus the values at 0.
struct Recurrence {
  const JacobiSpec& s;
  CJet x;
  CJet p_prev{0.0}, p{1.0}, q_prev{0.0}, q{0.0};
  double p0_prev = 0.0, p0 = 1.0, q0_prev = 0.0, q0 = 0.0;
  int n = 0;

  Recurrence(const JacobiSpec& spec, cplx z) : s(spec), x(CJet::variable(z)) {}

  // Moves from index n to n + 1.
  void advance() {
    if (n + 1 > s.size()) fail(ErrorCode::IndexBeyondCap, "recurrence index beyond N_max");
    const double an = s.a(n), bn = s.b(n);
    const double am1 = n == 0 ? 0.0 : s.a(n - 1);
    // a_{-1} Q_{-1} := -1 gives Q_1 = 1/a_0.
    const CJet aqm1 = n == 0 ? CJet(-1.0) : q_prev * cplx(am1);
    const double aq0m1 = n == 0 ? -1.0 : am1 * q0_prev;
    CJet pn = ((x - bn) * p - p_prev * cplx(am1)) / cplx(an);
    CJet qn = ((x - bn) * q - aqm1) / cplx(an);
    const double p0n = ((-bn) * p0 - am1 * p0_prev) / an;
    const double q0n = ((-bn) * q0 - aq0m1) / an;
    p_prev = p;
    p = pn;
    q_prev = q;
    q = qn;
    p0_prev = p0;
    p0 = p0n;
    q0_prev = q0;
    q0 = q0n;
    ++n;
  }
};

template <std::size_t K>
struct SeriesSum {
  std::array<cplx, K> sum{};
  int terms = 0;
  double tail = 0.0;
  bool extrapolated = false;
};

template <std::size_t K>
double max_abs(const std::array<cplx, K>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Sums term(n) for n = 0, 1, ... Stops after 5 consecutive terms below
// tol * max|partial sum|. If the cap comes first, the partial sums at
// N/8, N/4, N/2, N are extrapolated assuming an error expansion in N^-p,
// N^-(p+1), N^-(p+2) with p estimated from the data. N is rounded down to a
// multiple of 16 so every checkpoint is even: P_n(0) vanishes for odd n when
// b = 0, and odd and even partial sums follow different expansions.
template <std::size_t K, class Term>
SeriesSum<K> sum_series(Term&& term, int cap, const SeriesOptions& opt) {
  if (opt.fixed_terms > 0) {
    if (opt.fixed_terms > cap) fail(ErrorCode::IndexBeyondCap, "fixed truncation beyond N_max");
    SeriesSum<K> out;
    std::array<double, 5> recent{};
    for (int n = 0; n < opt.fixed_terms; ++n) {
      const std::array<cplx, K> t = term(n);
      for (std::size_t k = 0; k < K; ++k) out.sum[k] += t[k];
      recent[n % 5] = max_abs(t);
    }
    for (double r : recent) out.tail += r;
    out.terms = opt.fixed_terms;
    return out;
  }
  const int n_total = (cap / 16) * 16;
  if (n_total < 16) fail(ErrorCode::IndexBeyondCap, "series needs at least 16 terms");
  const std::array<int, 4> marks{n_total / 8, n_total / 4, n_total / 2, n_total};
  std::array<std::array<cplx, K>, 4> at{};
  SeriesSum<K> out;
  std::array<double, 5> recent{};
  int small = 0, mark = 0;
  for (int n = 0; n < n_total; ++n) {
    const std::array<cplx, K> t = term(n);
    for (std::size_t k = 0; k < K; ++k) out.sum[k] += t[k];
    const double tm = max_abs(t);
    recent[n % 5] = tm;
    small = tm <= opt.tol * max_abs(out.sum) ? small + 1 : 0;
    out.terms = n + 1;
    if (out.terms == marks[mark]) at[mark++] = out.sum;
    if (small >= 5) {
      for (double r : recent) out.tail += r;
      return out;
    }
  }
  const double scale = std::max(1.0, max_abs(out.sum));
  auto diff = [](const std::array<cplx, K>& u, const std::array<cplx, K>& v) {
    double m = 0.0;
    for (std::size_t k = 0; k < K; ++k) m = std::max(m, std::abs(u[k] - v[k]));
    return m;
  };
  const double d2 = diff(at[2], at[1]), d3 = diff(at[3], at[2]);
  if (d3 <= 1e3 * 2.2e-16 * scale) {
    out.tail = d3;
    return out;
  }
  const double p_hat = std::log2(d2 / d3);
  const double p = std::round(2.0 * p_hat) / 2.0;
  if (!(p >= 0.5) || std::abs(p_hat - p) > 0.2) {
    std::ostringstream os;
    os << "series not converged after " << n_total << " terms and its tail does not follow a power law (exponent "
       << p_hat << ")";
    fail(ErrorCode::NoConvergence, os.str());
  }
  std::array<std::array<cplx, K>, 4> t = at;  // column k of the table, indices k..3 valid
  std::array<cplx, K> prev{};
  for (int k = 1; k <= 3; ++k) {
    const double f = std::pow(2.0, p + k - 1);
    if (k == 3) prev = t[3];
    for (int i = 3; i >= k; --i)
      for (std::size_t c = 0; c < K; ++c) t[i][c] = (f * t[i][c] - t[i - 1][c]) / (f - 1.0);
  }
  out.sum = t[3];
  out.tail = diff(t[3], prev);
  out.extrapolated = true;
  if (out.tail > opt.extrapolation_tol * std::max(1.0, max_abs(out.sum))) {
    std::ostringstream os;
    os << "series not converged after " << n_total << " terms; extrapolation error " << out.tail
       << " exceeds tolerance";
    fail(ErrorCode::NoConvergence, os.str());
  }
  return out;
}

void pack(std::array<cplx, 16>& dst, int slot, const CJet& j) {
  for (int k = 0; k < 4; ++k) dst[4 * slot + k] = j.c[k];
}

CJet unpack(const std::array<cplx, 16>& src, int slot) {
  return CJet(src[4 * slot], src[4 * slot + 1], src[4 * slot + 2], src[4 * slot + 3]);
}

}  // namespace

cplx poly_first(const JacobiSpec& spec, int n, cplx z) {
  if (n < 0) fail(ErrorCode::DomainError, "negative polynomial index");
  if (n > spec.size()) fail(ErrorCode::IndexBeyondCap, "P_n requested beyond N_max");
  Recurrence r(spec, z);
  while (r.n < n) r.advance();
  return r.p.value();
}

cplx poly_second(const JacobiSpec& spec, int n, cplx z) {
  if (n < 0) fail(ErrorCode::DomainError, "negative polynomial index");
  if (n > spec.size()) fail(ErrorCode::IndexBeyondCap, "Q_n requested beyond N_max");
  Recurrence r(spec, z);
  while (r.n < n) r.advance();
  return r.q.value();
}

NevanlinnaJets nevanlinna_jets(const JacobiSpec& spec, cplx z, const SeriesOptions& opt) {
  Recurrence r(spec, z);
  auto term = [&](int n) {
    while (r.n < n) r.advance();
    std::array<cplx, 16> t;
    pack(t, 0, r.q * cplx(r.q0));
    pack(t, 1, r.p * cplx(r.q0));
    pack(t, 2, r.q * cplx(r.p0));
    pack(t, 3, r.p * cplx(r.p0));
    return t;
  };
  const auto s = sum_series<16>(term, spec.size(), opt);
  const CJet x = CJet::variable(z);
  NevanlinnaJets out;
  out.a = x * unpack(s.sum, 0);
  out.b = x * unpack(s.sum, 1) - 1.0;
  out.c = x * unpack(s.sum, 2) + 1.0;
  out.d = x * unpack(s.sum, 3);
  out.truncation_n = s.terms;
  out.tail_estimate = s.tail * std::max(1.0, std::abs(z));
  out.extrapolated = s.extrapolated;
  return out;
}

NevanlinnaMatrixValue nevanlinna_entries(const JacobiSpec& spec, cplx z, const SeriesOptions& opt) {
  const NevanlinnaJets j = nevanlinna_jets(spec, z, opt);
  return {z, j.a.value(), j.b.value(), j.c.value(), j.d.value(), j.truncation_n, j.tail_estimate, j.extrapolated};
}

PNorm P_norm(const JacobiSpec& spec, cplx z, const SeriesOptions& opt) {
  // Value-only recurrence; jets are not needed here.
  cplx prev = 0.0, cur = 1.0;
  int at = 0;
  auto term = [&](int n) {
    while (at < n) {
      const double am1 = at == 0 ? 0.0 : spec.a(at - 1);
      const cplx next = ((z - spec.b(at)) * cur - am1 * prev) / spec.a(at);
      prev = cur;
      cur = next;
      ++at;
    }
    return std::array<cplx, 1>{std::norm(cur)};
  };
  const auto s = sum_series<1>(term, spec.size(), opt);
  PNorm out;
  out.value = std::sqrt(s.sum[0].real());
  out.tail_estimate = s.tail / (2.0 * out.value);
  out.truncation_n = s.terms;
  return out;
}

double TF_moment(const JacobiSpec& spec, double r, const SeriesOptions& opt) {
  if (!(r > 0.0)) fail(ErrorCode::DomainError, "TF_moment needs r > 0");
  SeriesOptions o = opt;
  o.extrapolation_tol = std::max(o.extrapolation_tol, 1e-4);
  const double base = std::log(P_norm(spec, 0.0, o).value);
  auto f = [&](double phi) { return std::log(P_norm(spec, std::polar(r, phi), o).value) - base; };
  return integrate(f, 0.0, kPi, {1e-12, 1e-9, 2000}).value / kPi;
}

namespace {

struct PhasePoint {
  double u, phi, rate;  // phi = arg(b + i d), rate = dphi/du
  double b, d;
};

PhasePoint phase_point(const JacobiSpec& spec, double u, const SeriesOptions& opt) {
  const NevanlinnaJets j = nevanlinna_jets(spec, u, opt);
  const double b = j.b.c[0].real(), d = j.d.c[0].real();
  const double bp = j.b.c[1].real(), dp = j.d.c[1].real();
  const double n2 = b * b + d * d;
  return {u, std::atan2(d, b), (b * dp - d * bp) / n2, b, d};
}

// Walks from u0 to u1 keeping the realized change of arg(b + i d) below pi/2
// per step; visit(prev, next, unwrapped phi at next) is called for each step.
template <class Visit>
void phase_walk(const JacobiSpec& spec, double u0, double u1, const SeriesOptions& opt, double base_step,
                Visit&& visit) {
  PhasePoint cur = phase_point(spec, u0, opt);
  double unwrapped = cur.phi;
  const double dir = u1 >= u0 ? 1.0 : -1.0;
  while (dir * (u1 - cur.u) > 0.0) {
    double h = std::min(base_step, (kPi / 4.0) / std::max(std::abs(cur.rate), 1e-300));
    for (int refine = 0;; ++refine) {
      const double un = dir > 0 ? std::min(u1, cur.u + h) : std::max(u1, cur.u - h);
      PhasePoint nx = phase_point(spec, un, opt);
      const double dphi = wrap_to_pi(nx.phi - cur.phi);
      if (std::abs(dphi) <= kPi / 2.0 && std::abs(nx.rate) * h <= kPi / 2.0) {
        unwrapped += dphi;
        visit(cur, nx, unwrapped - dphi, unwrapped);
        cur = nx;
        break;
      }
      if (refine >= 2) {
        std::ostringstream os;
        os << "phase of b + i d changes too fast near u = " << cur.u << " for the scan step";
        fail(ErrorCode::ScanResolution, os.str());
      }
      h *= 0.5;
    }
  }
}

}  // namespace

std::vector<double> von_neumann_spectrum(const JacobiSpec& spec, ExtensionParameter t, double lo, double hi,
                                         const SeriesOptions& opt) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorCode::DomainError, "window must be bounded");
  // b + t d = 0 exactly when arg(b + i d) = phi_t mod pi.
  const double phi_t = t ? std::atan2(1.0, -*t) : 0.0;
  auto g = [&](double u) {
    const NevanlinnaJets j = nevanlinna_jets(spec, u, opt);
    const double b = j.b.c[0].real(), d = j.d.c[0].real();
    return (t ? b + *t * d : d) / std::hypot(b, d);
  };
  std::vector<double> roots;
  phase_walk(spec, lo, hi, opt, (hi - lo) / 400.0,
             [&](const PhasePoint& a, const PhasePoint& b, double phi_a, double phi_b) {
               const double ka = std::floor((phi_a - phi_t) / kPi), kb = std::floor((phi_b - phi_t) / kPi);
               const int crossings = static_cast<int>(std::abs(ka - kb));
               if (crossings == 0) return;
               if (crossings > 1) {
                 std::ostringstream os;
                 os << "two zeros of b + t d closer than the scan step near " << a.u;
                 fail(ErrorCode::ScanResolution, os.str());
               }
               const double ga = (t ? a.b + *t * a.d : a.d) / std::hypot(a.b, a.d);
               const double gb = (t ? b.b + *t * b.d : b.d) / std::hypot(b.b, b.d);
               if (ga == 0.0 && a.u == lo) return;  // on the open window's edge
               if (gb == 0.0 && b.u == hi) return;
               roots.push_back(find_root_bracketed(g, a.u, b.u, ga, gb, 1e-12));
             });
  roots.erase(std::unique(roots.begin(), roots.end(), [](double x, double y) { return std::abs(x - y) < 1e-10; }),
              roots.end());
  return roots;
}

DiscreteMeasure von_neumann_measure(const JacobiSpec& spec, ExtensionParameter t, double lo, double hi,
                                    const SeriesOptions& opt) {
  DiscreteMeasure m;
  m.nodes = von_neumann_spectrum(spec, t, lo, hi, opt);
  for (double x : m.nodes) {
    const NevanlinnaJets j = nevanlinna_jets(spec, x, opt);
    // I_t ~ mass/(x - z) near the node, so the mass is (a + t c)/(b' + t d').
    const cplx num = t ? j.a.c[0] + *t * j.c.c[0] : j.c.c[0];
    const cplx den = t ? j.b.c[1] + *t * j.d.c[1] : j.d.c[1];
    m.masses.push_back((num / den).real());
  }
  return m;
}

cplx resolvent_I(const JacobiSpec& spec, std::optional<cplx> t, cplx z, const SeriesOptions& opt) {
  const NevanlinnaMatrixValue v = nevanlinna_entries(spec, z, opt);
  const cplx num = t ? v.a_val + *t * v.c_val : v.c_val;
  const cplx den = t ? v.b_val + *t * v.d_val : v.d_val;
  const double scale = t ? std::abs(v.b_val) + std::abs(*t) * std::abs(v.d_val) : std::abs(v.d_val) + 1.0;
  if (std::abs(den) < 1e-12 * std::max(scale, 1.0)) {
    std::ostringstream os;
    os << z << " is (numerically) in the spectrum of the extension";
    fail(ErrorCode::SpectralPoint, os.str());
  }
  return -num / den;
}

double moments_from_jacobi(const JacobiSpec& spec, int i) {
  if (i < 0) fail(ErrorCode::DomainError, "negative moment index");
  if (i > 2 * spec.size() - 2) fail(ErrorCode::IndexBeyondCap, "moment index beyond 2 N_max - 2");
  // <J^i e0, e0> = <J^k e0, J^(i-k) e0> with k = ceil(i/2); J^m e0 lives on coordinates 0..m.
  const int k = (i + 1) / 2;
  std::vector<double> v(k + 1, 0.0), half;
  v[0] = 1.0;
  if (i / 2 == 0) half = v;
  for (int step = 1; step <= k; ++step) {
    std::vector<double> w(k + 1, 0.0);
    for (int n = 0; n < step; ++n) {
      w[n] += spec.b(n) * v[n];
      w[n + 1] += spec.a(n) * v[n];
      if (n >= 1) w[n - 1] += spec.a(n - 1) * v[n];
    }
    v = std::move(w);
    if (step == i / 2) half = v;
  }
  double s = 0.0;
  for (int n = 0; n <= k; ++n) s += v[n] * half[n];
  return s;
}

PolyCurvature curvature_from_polys(const JacobiSpec& spec, double u, const SeriesOptions& opt) {
  Recurrence r(spec, u);
  auto term = [&](int n) {
    while (r.n < n) r.advance();
    const double p = r.p.c[0].real(), dp = r.p.c[1].real();
    return std::array<cplx, 3>{p * p, p * dp, dp * dp};
  };
  const auto s = sum_series<3>(term, spec.size(), opt);
  const double s0 = s.sum[0].real(), s1 = s.sum[1].real(), s2 = s.sum[2].real();
  return {(s0 * s2 - s1 * s1) / (s0 * s0), s2 / s0};
}

SLSolution sturm_solutions(const JacobiSpec& spec, const std::vector<double>& grid, const SeriesOptions& opt) {
  SLSolution out;
  out.grid = grid;
  double wmin = 0.0, wmax = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const NevanlinnaJets j = nevanlinna_jets(spec, grid[k], opt);
    const double b = j.b.derivative(0).real(), b1 = j.b.derivative(1).real(), b2 = j.b.derivative(2).real();
    const double d = j.d.derivative(0).real(), d1 = j.d.derivative(1).real(), d2 = j.d.derivative(2).real();
    const double w = d * b1 - b * d1;
    if (!(w > 0.0)) {
      std::ostringstream os;
      os << "det[[d, b], [d', b']] = " << w << " <= 0 at u = " << grid[k];
      fail(ErrorCode::WronskianSignError, os.str());
    }
    const double w1 = d * b2 - b * d2;
    const double f = 1.0 / std::sqrt(w), f1 = -0.5 * w1 / (w * std::sqrt(w));
    const double y1 = f * b, y2 = f * d;
    const double y1p = f1 * b + f * b1, y2p = f1 * d + f * d1;
    out.y1_values.push_back(y1);
    out.y2_values.push_back(y2);
    const double wr = y2 * y1p - y1 * y2p;
    if (k == 0) wmin = wmax = wr;
    wmin = std::min(wmin, wr);
    wmax = std::max(wmax, wr);
  }
  out.wronskian = 0.5 * (wmin + wmax);
  out.wronskian_spread = out.wronskian != 0.0 ? (wmax - wmin) / std::abs(out.wronskian) : 0.0;
  return out;
}

PedersenCheck shift_and_pedersen(const JacobiSpec& spec, cplx z, const SeriesOptions& opt) {
  const NevanlinnaMatrixValue n = nevanlinna_entries(spec, z, opt);
  const NevanlinnaMatrixValue s = nevanlinna_entries(spec.shifted(), z, opt);
  const double a02 = spec.a(0) * spec.a(0);
  auto rel = [](cplx x, cplx y) {
    const double m = std::max(std::abs(x), std::abs(y));
    return m == 0.0 ? 0.0 : std::abs(x - y) / m;
  };
  PedersenCheck p;
  p.a_val = n.a_val;
  p.d_tilde_val = s.d_val;
  p.mismatch = rel(n.a_val, s.d_val / a02);
  p.c_val = n.c_val;
  p.c_rhs = -(spec.b(0) / a02) * s.d_val - s.b_val;
  p.c_mismatch = rel(p.c_val, p.c_rhs);
  return p;
}

ProjectiveJet JacobiInner::taylor(cplx z) const {
  const NevanlinnaJets j = nevanlinna_jets(spec_, z, opt_);
  ProjectiveJet pj{j.b - kI * j.d, j.b + kI * j.d};
  normalize(pj);
  return pj;
}

double JacobiInner::phase(double u) const {
  // B = exp(-2 i arg(b + i d)) on the line and B(0) = 1.
  if (u == 0.0) return 0.0;
  double start = 0.0, end = 0.0;
  bool first = true;
  phase_walk(spec_, 0.0, u, opt_, std::max(std::abs(u) / 64.0, 1e-3),
             [&](const PhasePoint&, const PhasePoint&, double prev, double next) {
               if (first) start = prev;
               first = false;
               end = next;
             });
  return -2.0 * (end - start);
}

CJet JacobiWeyl::taylor(cplx z) const {
  const NevanlinnaJets j = nevanlinna_jets(spec_, z, opt_);
  if (std::abs(j.d.c[0]) <= 1e-300) fail(ErrorCode::PoleEvaluation, "Weyl function evaluated at a zero of d");
  return j.b / j.d;
}

}  // namespace weyl
