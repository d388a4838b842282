#include "weyl/inner.hpp"

#include <algorithm>
#include <limits>

namespace weyl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void rescale(cplx& a, cplx& b) {
  double s = std::max(std::abs(a), std::abs(b));
  if (s > 0.0 && (s < 1e-150 || s > 1e150)) {
    a /= s;
    b /= s;
  }
}

void rescale(ProjectiveJet& pj) {
  double s = std::max(std::abs(pj.num.c[0]), std::abs(pj.den.c[0]));
  if (s > 0.0 && (s < 1e-150 || s > 1e150)) {
    pj.num = pj.num / cplx(s);
    pj.den = pj.den / cplx(s);
  }
}

// Jet of 1/(a - h) about h = 0.
CJet inverse_shift(cplx a) {
  cplx r = 1.0 / a;
  return CJet(r, r * r, r * r * r, r * r * r * r);
}

std::array<cplx, 3> jet_log_derivatives(const ProjectiveJet& pj) {
  if (pj.num.c[0] == cplx(0.0) || pj.den.c[0] == cplx(0.0))
    fail(ErrorCode::PoleEvaluation, "logarithmic derivative at a zero or pole");
  CJet l = log_derivative(pj.num) - log_derivative(pj.den);
  return {l.c[0], l.c[1], 2.0 * l.c[2]};
}

}  // namespace

// ---------------------------------------------------------------- values

ProjectiveValue::ProjectiveValue(cplx num, cplx den) : num_(num), den_(den) {
  if (num == cplx(0.0) && den == cplx(0.0))
    fail(ErrorCode::ValidationError, "projective value with zero numerator and denominator");
}

cplx ProjectiveValue::value() const {
  if (is_infinite()) fail(ErrorCode::PoleEvaluation, "scalar value requested at a pole");
  return num_ / den_;
}

double chordal_distance(const ProjectiveValue& z, const ProjectiveValue& w) {
  cplx a = z.numerator(), b = z.denominator(), c = w.numerator(), d = w.denominator();
  double sa = std::max(std::abs(a), std::abs(b)), sc = std::max(std::abs(c), std::abs(d));
  a /= sa;
  b /= sa;
  c /= sc;
  d /= sc;
  return std::abs(a * d - b * c) / (std::sqrt(std::norm(a) + std::norm(b)) * std::sqrt(std::norm(c) + std::norm(d)));
}

// ---------------------------------------------------------------- specs

InnerFunctionSpec::InnerFunctionSpec(cplx gamma, double mean_type_b, std::vector<Zero> zeros)
    : gamma_(gamma), b_(mean_type_b), zeros_(std::move(zeros)) {
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) fail(ErrorCode::ValidationError, "|gamma| must be 1");
  if (!(mean_type_b >= 0.0) || !std::isfinite(mean_type_b))
    fail(ErrorCode::ValidationError, "mean_type_b must be >= 0");
  for (const auto& z : zeros_) {
    if (!(z.location.imag() > 0.0))
      fail(ErrorCode::ValidationError, "zero locations must have positive imaginary part");
    if (z.multiplicity < 1) fail(ErrorCode::ValidationError, "zero multiplicities must be positive");
  }
}

int InnerFunctionSpec::degree() const {
  int n = 0;
  for (const auto& z : zeros_) n += z.multiplicity;
  return n;
}

double InnerFunctionSpec::blaschke_sum() const {
  double s = 0.0;
  for (const auto& z : zeros_) s += z.multiplicity * z.location.imag() / std::norm(z.location);
  return s;
}

MoebiusParams::MoebiusParams(cplx g, cplx t) : gamma(g), tau(t) {
  if (std::abs(std::abs(g) - 1.0) > 1e-12) fail(ErrorCode::ValidationError, "Moebius gamma must be unimodular");
  if (!(std::abs(t) < 1.0)) fail(ErrorCode::ValidationError, "Moebius tau must satisfy |tau| < 1");
}

HerglotzSpec::HerglotzSpec(double c, double d, std::vector<double> poles, std::vector<double> weights)
    : c_(c), d_(d), poles_(std::move(poles)), weights_(std::move(weights)) {
  if (!std::isfinite(c)) fail(ErrorCode::ValidationError, "c must be finite");
  if (!(d >= 0.0)) fail(ErrorCode::ValidationError, "d must be >= 0");
  if (poles_.size() != weights_.size()) fail(ErrorCode::ValidationError, "poles and weights differ in length");
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (!(weights_[i] > 0.0)) fail(ErrorCode::ValidationError, "weights must be positive");
    if (i > 0 && !(poles_[i] > poles_[i - 1]))
      fail(ErrorCode::ValidationError, "poles must be strictly increasing");
  }
}

void normalize(ProjectiveJet& pj) {
  double s = std::max(std::abs(pj.num.c[0]), std::abs(pj.den.c[0]));
  if (s > 0.0 && std::isfinite(s)) {
    pj.num = pj.num / cplx(s);
    pj.den = pj.den / cplx(s);
  }
}

// ---------------------------------------------------------------- base defaults

ProjectiveValue InnerFunction::value(cplx z) const {
  ProjectiveJet t = taylor(z);
  return ProjectiveValue(t.num.c[0], t.den.c[0]);
}

std::array<cplx, 3> InnerFunction::log_derivatives(cplx z) const { return jet_log_derivatives(taylor(z)); }

double InnerFunction::log_abs2(cplx z) const {
  ProjectiveValue v = value(z);
  if (v.is_infinite()) return kInf;
  return 2.0 * (std::log(std::abs(v.numerator())) - std::log(std::abs(v.denominator())));
}

double InnerFunction::one_minus_abs2(cplx z) const { return -std::expm1(log_abs2(z)); }

std::array<double, 3> InnerFunction::phase_derivatives(double u) const {
  auto l = log_derivatives(cplx(u, 0.0));
  return {l[0].imag(), l[1].imag(), l[2].imag()};
}

// ---------------------------------------------------------------- Riesz-Smirnov

RieszSmirnovInner::RieszSmirnovInner(InnerFunctionSpec spec) : spec_(std::move(spec)) {
  double raw0 = 0.0, c = std::arg(spec_.gamma());
  for (const auto& z : spec_.zeros()) {
    raw0 += z.multiplicity * 2.0 * std::atan(-z.location.real() / z.location.imag());
    c += z.multiplicity * (-kPi - 2.0 * std::arg(z.location));
  }
  theta0_ = wrap_to_pi(c + raw0) - raw0;
}

ProjectiveValue RieszSmirnovInner::value(cplx z) const {
  cplx num = spec_.gamma(), den = 1.0;
  const double b = spec_.mean_type();
  if (b != 0.0) {
    if (z.imag() >= 0.0)
      num *= std::exp(kI * b * z);
    else
      den *= std::exp(-kI * b * z);
  }
  for (const auto& zk : spec_.zeros()) {
    const cplx l = zk.location;
    cplx fn = z - l, fd = z - std::conj(l);
    double s = std::max(std::abs(fn), std::abs(fd));
    fn = fn * (std::conj(l) / l) / s;
    fd /= s;
    for (int m = 0; m < zk.multiplicity; ++m) {
      num *= fn;
      den *= fd;
    }
    rescale(num, den);
  }
  double s = std::max(std::abs(num), std::abs(den));
  if (s > 0.0) {
    num /= s;
    den /= s;
  }
  return ProjectiveValue(num, den);
}

ProjectiveJet RieszSmirnovInner::taylor(cplx z) const {
  ProjectiveJet pj{CJet(spec_.gamma()), CJet(1.0)};
  const double b = spec_.mean_type();
  if (b != 0.0) {
    if (z.imag() >= 0.0)
      pj.num = pj.num * exp(CJet(kI * b * z, kI * b, 0.0, 0.0));
    else
      pj.den = pj.den * exp(CJet(-kI * b * z, -kI * b, 0.0, 0.0));
  }
  for (const auto& zk : spec_.zeros()) {
    const cplx l = zk.location;
    const cplx u = std::conj(l) / l;
    double s = std::max(std::abs(z - l), std::abs(z - std::conj(l)));
    CJet fn = CJet(z - l, 1.0, 0.0, 0.0) * (u / s);
    CJet fd = CJet(z - std::conj(l), 1.0, 0.0, 0.0) / cplx(s);
    pj.num = pj.num * pow(fn, zk.multiplicity);
    pj.den = pj.den * pow(fd, zk.multiplicity);
    rescale(pj);
  }
  normalize(pj);
  return pj;
}

std::array<cplx, 3> RieszSmirnovInner::log_derivatives(cplx z) const {
  std::array<cplx, 3> l{kI * spec_.mean_type(), 0.0, 0.0};
  for (const auto& zk : spec_.zeros()) {
    const cplx p = 1.0 / (z - zk.location), q = 1.0 / (z - std::conj(zk.location));
    if (!std::isfinite(std::abs(p)) || !std::isfinite(std::abs(q)) || z == zk.location ||
        z == std::conj(zk.location))
      fail(ErrorCode::PoleEvaluation, "logarithmic derivative at a zero or pole");
    const double m = zk.multiplicity;
    l[0] += m * (p - q);
    l[1] += m * (-(p * p) + q * q);
    l[2] += m * 2.0 * (p * p * p - q * q * q);
  }
  return l;
}

double RieszSmirnovInner::log_abs2(cplx z) const {
  const double y = z.imag();
  double s = -2.0 * spec_.mean_type() * y;
  for (const auto& zk : spec_.zeros()) {
    double d2 = std::norm(z - std::conj(zk.location));
    if (d2 == 0.0) return kInf;
    const double q = 4.0 * y * zk.location.imag() / d2;
    // log1p loses everything when z sits near the zero itself.
    s += zk.multiplicity * (q < 0.5 ? std::log1p(-q) : std::log(std::norm(z - zk.location) / d2));
  }
  return s;
}

double RieszSmirnovInner::phase(double u) const {
  double t = spec_.mean_type() * u + theta0_;
  for (const auto& zk : spec_.zeros())
    t += zk.multiplicity * 2.0 * std::atan((u - zk.location.real()) / zk.location.imag());
  return t;
}

std::array<double, 3> RieszSmirnovInner::phase_derivatives(double u) const {
  std::array<double, 3> d{spec_.mean_type(), 0.0, 0.0};
  for (const auto& zk : spec_.zeros()) {
    const double x = u - zk.location.real(), y = zk.location.imag(), m = zk.multiplicity;
    const double q = x * x + y * y;
    d[0] += m * 2.0 * y / q;
    d[1] += m * (-4.0 * y * x) / (q * q);
    d[2] += m * (-4.0 * y / (q * q) + 16.0 * y * x * x / (q * q * q));
  }
  return d;
}

std::vector<double> RieszSmirnovInner::feature_points() const {
  std::vector<double> out;
  for (const auto& z : spec_.zeros()) out.push_back(z.location.real());
  return out;
}

// ---------------------------------------------------------------- congruence

CongruentInner::CongruentInner(InnerPtr base, MoebiusParams params) : base_(std::move(base)), p_(params) {
  double r0 = raw_phase(0.0);
  offset_ = wrap_to_pi(r0) - r0;
}

ProjectiveValue CongruentInner::pull_back(const ProjectiveValue& c) const {
  // gamma (B - tau) = c (1 - conj(tau) B)  <=>  B = (c + gamma tau) / (gamma + c conj(tau)).
  const cplx cn = c.numerator(), cd = c.denominator();
  return ProjectiveValue(cn + p_.gamma * p_.tau * cd, p_.gamma * cd + cn * std::conj(p_.tau));
}

ProjectiveJet CongruentInner::taylor(cplx z) const {
  ProjectiveJet b = base_->taylor(z);
  ProjectiveJet out{(b.num - b.den * p_.tau) * p_.gamma, b.den - b.num * std::conj(p_.tau)};
  normalize(out);
  return out;
}

ProjectiveValue CongruentInner::value(cplx z) const {
  ProjectiveValue b = base_->value(z);
  cplx n = p_.gamma * (b.numerator() - p_.tau * b.denominator());
  cplx d = b.denominator() - std::conj(p_.tau) * b.numerator();
  return ProjectiveValue(n, d);
}

std::array<cplx, 3> CongruentInner::log_derivatives(cplx z) const {
  if (p_.tau == cplx(0.0)) return base_->log_derivatives(z);
  return jet_log_derivatives(taylor(z));
}

double CongruentInner::log_abs2(cplx z) const {
  if (p_.tau == cplx(0.0)) return base_->log_abs2(z);
  return InnerFunction::log_abs2(z);
}

double CongruentInner::one_minus_abs2(cplx z) const {
  if (p_.tau == cplx(0.0)) return base_->one_minus_abs2(z);
  ProjectiveValue b = base_->value(z);
  const double k = 1.0 - std::norm(p_.tau);
  if (b.is_infinite()) return -k / std::norm(p_.tau);
  const double d2 = std::norm(b.denominator());
  return k * base_->one_minus_abs2(z) * d2 / std::norm(b.denominator() - std::conj(p_.tau) * b.numerator());
}

double CongruentInner::raw_phase(double u) const {
  const double th = base_->phase(u);
  const cplx w = 1.0 - p_.tau * std::exp(-kI * th);
  return std::arg(p_.gamma) + th + 2.0 * std::atan2(w.imag(), w.real());
}

double CongruentInner::phase(double u) const { return raw_phase(u) + offset_; }

std::array<double, 3> CongruentInner::phase_derivatives(double u) const {
  const auto t = base_->phase_derivatives(u);
  const cplx e = std::conj(p_.tau) * std::exp(kI * base_->phase(u));
  const double k = 1.0 - std::norm(p_.tau);
  const double q = 1.0 - 2.0 * e.real() + std::norm(p_.tau);
  const double q1 = 2.0 * e.imag(), q2 = 2.0 * e.real();
  const double p0 = k / q, p1 = -k * q1 / (q * q), p2 = -k * q2 / (q * q) + 2.0 * k * q1 * q1 / (q * q * q);
  return {p0 * t[0], p1 * t[0] * t[0] + p0 * t[1],
          p2 * t[0] * t[0] * t[0] + 3.0 * p1 * t[0] * t[1] + p0 * t[2]};
}

// ---------------------------------------------------------------- products

ProductInner::ProductInner(std::vector<InnerPtr> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorCode::ValidationError, "empty product");
  double r0 = 0.0;
  for (const auto& f : factors_) r0 += f->phase(0.0);
  offset_ = wrap_to_pi(r0) - r0;
}

ProjectiveJet ProductInner::taylor(cplx z) const {
  ProjectiveJet out{CJet(1.0), CJet(1.0)};
  for (const auto& f : factors_) {
    ProjectiveJet t = f->taylor(z);
    out.num = out.num * t.num;
    out.den = out.den * t.den;
    normalize(out);
  }
  return out;
}

ProjectiveValue ProductInner::value(cplx z) const {
  cplx n = 1.0, d = 1.0;
  for (const auto& f : factors_) {
    ProjectiveValue v = f->value(z);
    n *= v.numerator();
    d *= v.denominator();
    double s = std::max(std::abs(n), std::abs(d));
    if (s > 0.0) {
      n /= s;
      d /= s;
    }
  }
  return ProjectiveValue(n, d);
}

std::array<cplx, 3> ProductInner::log_derivatives(cplx z) const {
  std::array<cplx, 3> l{0.0, 0.0, 0.0};
  for (const auto& f : factors_) {
    auto t = f->log_derivatives(z);
    for (int k = 0; k < 3; ++k) l[k] += t[k];
  }
  return l;
}

double ProductInner::log_abs2(cplx z) const {
  double s = 0.0;
  for (const auto& f : factors_) s += f->log_abs2(z);
  return s;
}

double ProductInner::one_minus_abs2(cplx z) const {
  // 1 - |B1 B2|^2 = (1 - |B1|^2) + |B1|^2 (1 - |B2|^2); no cancellation off the axis.
  double om = 0.0, la = 0.0;
  for (const auto& f : factors_) {
    om += std::exp(la) * f->one_minus_abs2(z);
    la += f->log_abs2(z);
  }
  return om;
}

double ProductInner::phase(double u) const {
  double s = offset_;
  for (const auto& f : factors_) s += f->phase(u);
  return s;
}

std::array<double, 3> ProductInner::phase_derivatives(double u) const {
  std::array<double, 3> d{0.0, 0.0, 0.0};
  for (const auto& f : factors_) {
    auto t = f->phase_derivatives(u);
    for (int k = 0; k < 3; ++k) d[k] += t[k];
  }
  return d;
}

std::vector<double> ProductInner::feature_points() const {
  std::vector<double> out;
  for (const auto& f : factors_) {
    auto p = f->feature_points();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

// ---------------------------------------------------------------- Herglotz

namespace {

std::size_t nearest_pole(const std::vector<double>& t, cplx z) {
  auto it = std::lower_bound(t.begin(), t.end(), z.real());
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i == t.size()) return i - 1;
  if (i > 0 && std::abs(z - t[i - 1]) < std::abs(z - t[i])) return i - 1;
  return i;
}

struct RegularizedM {
  CJet mt;     // (t_n - z) M, or M when there are no poles
  CJet delta;  // t_n - z, or 1
  std::size_t n;
  bool has_pole;
};

RegularizedM regularized_m(const HerglotzSpec& s, cplx z) {
  const auto& t = s.poles();
  const auto& w = s.weights();
  RegularizedM r;
  r.has_pole = !t.empty();
  r.n = r.has_pole ? nearest_pole(t, z) : 0;
  CJet rest(s.c() + s.d() * z, s.d(), 0.0, 0.0);
  for (std::size_t m = 0; m < t.size(); ++m) {
    const double shift = t[m] / (1.0 + t[m] * t[m]);
    if (m == r.n) {
      rest -= CJet(w[m] * shift);
      continue;
    }
    rest += (inverse_shift(t[m] - z) - CJet(shift)) * cplx(w[m]);
  }
  if (r.has_pole) {
    r.delta = CJet(t[r.n] - z, -1.0, 0.0, 0.0);
    r.mt = CJet(w[r.n]) + r.delta * rest;
  } else {
    r.delta = CJet(1.0);
    r.mt = rest;
  }
  return r;
}

}  // namespace

HerglotzInner::HerglotzInner(HerglotzSpec spec) : spec_(std::move(spec)) {
  if (spec_.poles().empty() && spec_.d() == 0.0)
    fail(ErrorCode::ValidationError, "constant Herglotz function has no inner counterpart");
  double r0 = raw_phase(0.0);
  offset_ = wrap_to_pi(r0) - r0;
}

ProjectiveJet HerglotzInner::taylor(cplx z) const {
  RegularizedM r = regularized_m(spec_, z);
  ProjectiveJet pj{r.mt - kI * r.delta, r.mt + kI * r.delta};
  normalize(pj);
  return pj;
}

double HerglotzInner::log_abs2(cplx z) const {
  RegularizedM r = regularized_m(spec_, z);
  cplx n = r.mt.c[0] - kI * r.delta.c[0], d = r.mt.c[0] + kI * r.delta.c[0];
  if (d == cplx(0.0)) return kInf;
  return 2.0 * (std::log(std::abs(n)) - std::log(std::abs(d)));
}

double HerglotzInner::one_minus_abs2(cplx z) const {
  RegularizedM r = regularized_m(spec_, z);
  const cplx d = r.mt.c[0] + kI * r.delta.c[0];
  const double dd = std::norm(r.delta.c[0]);
  double im = spec_.d() * dd;  // |delta|^2 Im M / Im z
  const auto& t = spec_.poles();
  for (std::size_t m = 0; m < t.size(); ++m)
    im += (m == r.n) ? spec_.weights()[m] : spec_.weights()[m] * dd / std::norm(t[m] - z);
  return 4.0 * z.imag() * im / std::norm(d);
}

double HerglotzInner::raw_phase(double u) const {
  const auto& t = spec_.poles();
  auto it = std::lower_bound(t.begin(), t.end(), u);
  const double below = static_cast<double>(it - t.begin());
  if (it != t.end() && *it == u) return kTwoPi * (below + 1.0);
  const double m = herglotz_eval(spec_, cplx(u, 0.0)).real();
  return kTwoPi * below + kPi + 2.0 * std::atan(m);
}

double HerglotzInner::phase(double u) const { return raw_phase(u) + offset_; }

// ---------------------------------------------------------------- Weyl functions

cplx herglotz_eval(const HerglotzSpec& s, cplx z) {
  cplx m = s.c() + s.d() * z;
  for (std::size_t k = 0; k < s.poles().size(); ++k) {
    const double t = s.poles()[k];
    if (z == cplx(t, 0.0)) fail(ErrorCode::PoleEvaluation, "Herglotz function evaluated at a pole");
    m += s.weights()[k] * (1.0 / (t - z) - t / (1.0 + t * t));
  }
  return m;
}

cplx HerglotzWeyl::value(cplx z) const { return herglotz_eval(spec_, z); }

CJet HerglotzWeyl::taylor(cplx z) const {
  CJet m(spec_.c() + spec_.d() * z, spec_.d(), 0.0, 0.0);
  for (std::size_t k = 0; k < spec_.poles().size(); ++k) {
    const double t = spec_.poles()[k];
    if (z == cplx(t, 0.0)) fail(ErrorCode::PoleEvaluation, "Herglotz function evaluated at a pole");
    m += (inverse_shift(t - z) - CJet(t / (1.0 + t * t))) * cplx(spec_.weights()[k]);
  }
  return m;
}

CJet CayleyWeyl::taylor(cplx z) const {
  ProjectiveJet b = inner_->taylor(z);
  CJet d = b.den - b.num;
  if (d.c[0] == cplx(0.0)) fail(ErrorCode::PoleEvaluation, "Weyl function evaluated where B = 1");
  return kI * (b.den + b.num) / d;
}

cplx CayleyWeyl::value(cplx z) const {
  ProjectiveValue b = inner_->value(z);
  cplx d = b.denominator() - b.numerator();
  if (d == cplx(0.0)) fail(ErrorCode::PoleEvaluation, "Weyl function evaluated where B = 1");
  return kI * (b.denominator() + b.numerator()) / d;
}

// ---------------------------------------------------------------- free functions

ProjectiveValue eval_inner(const InnerFunctionSpec& spec, cplx z, int derivative_order) {
  if (derivative_order < 0 || derivative_order > 3)
    fail(ErrorCode::DomainError, "derivative_order must be in 0..3");
  RieszSmirnovInner b(spec);
  if (derivative_order == 0) return b.value(z);
  return ProjectiveValue(b.log_derivatives(z)[derivative_order - 1], 1.0);
}

double phase(const InnerFunctionSpec& spec, double u, int derivative_order) {
  if (derivative_order < 0 || derivative_order > 3)
    fail(ErrorCode::DomainError, "derivative_order must be in 0..3");
  RieszSmirnovInner b(spec);
  if (derivative_order == 0) return b.phase(u);
  return b.phase_derivatives(u)[derivative_order - 1];
}

InnerPtr make_inner(const InnerFunctionSpec& spec) { return std::make_shared<RieszSmirnovInner>(spec); }

InnerPtr congruence(InnerPtr base, const MoebiusParams& p) {
  return std::make_shared<CongruentInner>(std::move(base), p);
}

InnerPtr congruence(const InnerFunctionSpec& spec, const MoebiusParams& p) { return congruence(make_inner(spec), p); }

InnerPtr product(std::vector<InnerPtr> factors) { return std::make_shared<ProductInner>(std::move(factors)); }

WeylPtr cayley_to_weyl(InnerPtr inner) { return std::make_shared<CayleyWeyl>(std::move(inner)); }

WeylPtr cayley_to_weyl(const InnerFunctionSpec& spec) {
  if (spec.mean_type() == 0.0 && spec.zeros().empty() && spec.gamma() == cplx(1.0))
    fail(ErrorCode::DomainError, "B is identically 1; its Cayley transform is not defined");
  return cayley_to_weyl(make_inner(spec));
}

WeylPtr make_weyl(const HerglotzSpec& spec) { return std::make_shared<HerglotzWeyl>(spec); }

InnerPtr herglotz_to_inner(const HerglotzSpec& spec) { return std::make_shared<HerglotzInner>(spec); }

}  // namespace weyl
