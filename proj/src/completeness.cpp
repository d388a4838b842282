#include "weyl/completeness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weyl {

MeanTypeEstimate mean_type_estimate(const InnerFunction& b, double y0, double y1, int points) {
  if (!(y0 > 0.0) || !(y1 >= 100.0 * y0)) fail(ErrorCode::DomainError, "mean type grid needs y1/y0 >= 100");
  if (points < 8) fail(ErrorCode::DomainError, "mean type grid needs at least 8 points");
  const double floor = std::log(1e-300);
  std::vector<double> ys, ls;
  MeanTypeEstimate out;
  for (int k = 0; k < points; ++k) {
    const double y = y0 * std::pow(y1 / y0, double(k) / (points - 1));
    const double l = 0.5 * b.log_abs2(cplx(0.0, y));
    if (l < floor) {
      out.shortened = true;
      break;
    }
    ys.push_back(y);
    ls.push_back(l);
  }
  if (ys.size() < 4) {
    std::ostringstream os;
    os << "|B(iy)| < 1e-300 already at y = " << (ys.empty() ? y0 : ys.back());
    fail(ErrorCode::Underflow, os.str());
  }
  const double n = static_cast<double>(ys.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < ys.size(); ++k) {
    sx += ys[k];
    sy += ls[k];
    sxx += ys[k] * ys[k];
    sxy += ys[k] * ls[k];
  }
  out.estimate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.y_end = ys.back();
  out.points = static_cast<int>(ys.size());
  return out;
}

const char* to_string(Completeness c) { return c == Completeness::Complete ? "COMPLETE" : "INCOMPLETE"; }

CompletenessResult is_complete(const InnerFunctionSpec& spec) {
  return {spec.mean_type() == 0.0 ? Completeness::Complete : Completeness::Incomplete,
          mean_type_estimate(RieszSmirnovInner(spec))};
}

const char* to_string(RieszVerdict v) { return v == RieszVerdict::LikelyRiesz ? "LIKELY_RIESZ" : "LIKELY_NOT"; }

namespace {

void check_eigenvalues(const std::vector<cplx>& l) {
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (!(l[j].imag() < 0.0)) fail(ErrorCode::DomainError, "eigenvalues of T_inf must lie in the lower half-plane");
    for (std::size_t k = 0; k < j; ++k)
      if (l[j] == l[k]) {
        std::ostringstream os;
        os << "eigenvalue " << l[j] << " appears twice";
        fail(ErrorCode::DuplicateEigenvalue, os.str());
      }
  }
}

// ln |B_j(conj l_j)| and the smallest single factor over the first n eigenvalues.
std::pair<double, double> log_partial(const std::vector<cplx>& l, std::size_t j, std::size_t n) {
  double s = 0.0, sep = 1.0;
  const cplx w = std::conj(l[j]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    const double f = std::abs((w - std::conj(l[k])) / (w - l[k]));
    s += std::log(f);
    sep = std::min(sep, f);
  }
  return {s, sep};
}

cplx b_j_at_conj(const std::vector<cplx>& l, std::size_t j) {
  // B_j(conj l_j) = prod_all (l_k/conj l_k) prod_{k != j} (conj l_j - conj l_k)/(conj l_j - l_k).
  cplx v = 1.0;
  const cplx w = std::conj(l[j]);
  for (std::size_t k = 0; k < l.size(); ++k) {
    v *= l[k] / std::conj(l[k]);
    if (k != j) v *= (w - std::conj(l[k])) / (w - l[k]);
  }
  return v;
}

}  // namespace

RieszDiagnostic riesz_diagnostic(const std::vector<cplx>& eigenvalues) {
  check_eigenvalues(eigenvalues);
  RieszDiagnostic d;
  d.zeros = eigenvalues;
  const std::size_t n = eigenvalues.size(), half = std::max<std::size_t>(1, n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    auto [lp, sep] = log_partial(eigenvalues, j, n);
    d.partial_products.push_back(std::exp(lp));
    d.min_partial = std::min(d.min_partial, d.partial_products.back());
    d.separation_delta = std::min(d.separation_delta, sep);
    if (j < half) d.min_partial_half = std::min(d.min_partial_half, std::exp(log_partial(eigenvalues, j, half).first));
  }
  // Stable under doubling and clear of underflow-level values.
  const bool stable = d.min_partial >= 0.9 * d.min_partial_half && d.min_partial > 1e-6;
  d.verdict = stable ? RieszVerdict::LikelyRiesz : RieszVerdict::LikelyNot;
  return d;
}

InnerFunctionSpec blaschke_of_eigenvalues(const std::vector<cplx>& eigenvalues) {
  check_eigenvalues(eigenvalues);
  std::vector<Zero> zeros;
  for (cplx l : eigenvalues) zeros.push_back({std::conj(l), 1});
  return InnerFunctionSpec(1.0, 0.0, zeros);
}

cplx normalized_eigenvector(const std::vector<cplx>& eigenvalues, int j, cplx u) {
  const cplx l = eigenvalues.at(j);
  return std::sqrt(-2.0 * l.imag()) / (u - l);
}

cplx biorthogonal_vector(const std::vector<cplx>& eigenvalues, int j, cplx u) {
  const cplx l = eigenvalues.at(j);
  const cplx b = eval_inner(blaschke_of_eigenvalues(eigenvalues), u, 0).value();
  return std::sqrt(-2.0 * l.imag()) * b / (b_j_at_conj(eigenvalues, j) * (u - std::conj(l)));
}

cplx biorthogonal_pairing(const std::vector<cplx>& eigenvalues, int k, int j) {
  check_eigenvalues(eigenvalues);
  const RieszSmirnovInner b(blaschke_of_eigenvalues(eigenvalues));
  const cplx bk = b_j_at_conj(eigenvalues, k);
  const cplx lk = eigenvalues.at(k), lj = eigenvalues.at(j);
  const double nk = std::sqrt(-2.0 * lk.imag()), nj = std::sqrt(-2.0 * lj.imag());
  // u = tan(t) maps the line onto (-pi/2, pi/2); the integrand decays like 1/u^2.
  auto integrand = [&](double t) {
    const double c = std::cos(t);
    if (c <= 0.0) return cplx(0.0);
    const double u = std::tan(t);
    const cplx v = nk * b.value(u).value() / (bk * (u - std::conj(lk))) * std::conj(nj / (u - lj));
    return v / (c * c);
  };
  std::vector<double> cuts;
  for (cplx l : eigenvalues) cuts.push_back(std::atan(l.real()));
  const QuadOptions q{1e-12, 1e-10, 20000};
  const double h = 0.5 * kPi;
  const double re = integrate([&](double t) { return integrand(t).real(); }, -h, h, q, cuts).value;
  const double im = integrate([&](double t) { return integrand(t).imag(); }, -h, h, q, cuts).value;
  return cplx(re, im) / kTwoPi;
}

SectorSum sector_summability(const std::vector<cplx>& zeros, double delta) {
  if (!(delta > 0.0 && delta < 0.5 * kPi)) fail(ErrorCode::DomainError, "sector angle must lie in (0, pi/2)");
  std::vector<double> moduli;
  for (cplx z : zeros) {
    const double a = std::arg(z);
    if (a > delta && a < kPi - delta) moduli.push_back(std::abs(z));
  }
  SectorSum s;
  if (moduli.empty()) return s;
  const double top = *std::max_element(moduli.begin(), moduli.end());
  for (double m : moduli) {
    s.sum += 1.0 / m;
    if (m > 0.1 * top) s.last_decade_increment += 1.0 / m;
  }
  s.count = static_cast<int>(moduli.size());
  return s;
}

}  // namespace weyl
