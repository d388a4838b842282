#pragma once

#include <array>
#include <memory>
#include <vector>

#include "weyl/jet.hpp"
#include "weyl/numeric.hpp"

namespace weyl {

// A point of the Riemann sphere held as num/den so that poles stay finite.
class ProjectiveValue {
 public:
  ProjectiveValue(cplx num, cplx den);
  static ProjectiveValue infinity() { return ProjectiveValue(1.0, 0.0); }

  cplx numerator() const { return num_; }
  cplx denominator() const { return den_; }
  bool is_infinite() const { return den_ == cplx(0.0); }
  // Scalar accessor; throws PoleEvaluation at infinity.
  cplx value() const;

 private:
  cplx num_, den_;
};

// Chordal distance |z-w| / (sqrt(1+|z|^2) sqrt(1+|w|^2)) on the sphere.
double chordal_distance(const ProjectiveValue& z, const ProjectiveValue& w);

struct Zero {
  cplx location;
  int multiplicity = 1;
};

// Riesz-Smirnov data: B(z) = gamma e^{ibz} prod (conj(l)/l) ((z-l)/(z-conj(l)))^m.
class InnerFunctionSpec {
 public:
  InnerFunctionSpec(cplx gamma, double mean_type_b, std::vector<Zero> zeros);
  static InnerFunctionSpec exponential(double b) { return InnerFunctionSpec(1.0, b, {}); }

  cplx gamma() const { return gamma_; }
  double mean_type() const { return b_; }
  const std::vector<Zero>& zeros() const { return zeros_; }
  int degree() const;
  // Sum of m Im(l)/|l|^2; the tail of an infinite product beyond this list is the caller's to bound.
  double blaschke_sum() const;

 private:
  cplx gamma_;
  double b_;
  std::vector<Zero> zeros_;
};

struct MoebiusParams {
  cplx gamma{1.0};
  cplx tau{0.0};
  MoebiusParams() = default;
  MoebiusParams(cplx g, cplx t);
};

// M(z) = c + d z + sum w_n (1/(t_n - z) - t_n/(1 + t_n^2)).
class HerglotzSpec {
 public:
  HerglotzSpec(double c, double d, std::vector<double> poles, std::vector<double> weights);

  double c() const { return c_; }
  double d() const { return d_; }
  const std::vector<double>& poles() const { return poles_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  double c_, d_;
  std::vector<double> poles_, weights_;
};

struct ProjectiveJet {
  CJet num, den;
};

// Evaluator of a meromorphic inner function B.
class InnerFunction {
 public:
  virtual ~InnerFunction() = default;

  // Taylor jets of a projective representative (num, den) of B at z.
  virtual ProjectiveJet taylor(cplx z) const = 0;
  virtual ProjectiveValue value(cplx z) const;
  // (ln B)', (ln B)'', (ln B)''' at z.
  virtual std::array<cplx, 3> log_derivatives(cplx z) const;
  // ln |B(z)|^2, +inf at poles and -inf at zeros.
  virtual double log_abs2(cplx z) const;
  // 1 - |B(z)|^2 without cancellation near the real axis.
  virtual double one_minus_abs2(cplx z) const;
  // Continuous phase with exp(i theta(u)) = B(u), theta(0) in (-pi, pi].
  virtual double phase(double u) const = 0;
  // theta', theta'', theta'''.
  virtual std::array<double, 3> phase_derivatives(double u) const;
  // Real abscissae where the phase bends sharply (zeros near the axis, poles of M);
  // used to seed quadrature breakpoints.
  virtual std::vector<double> feature_points() const { return {}; }
};
using InnerPtr = std::shared_ptr<const InnerFunction>;

class RieszSmirnovInner final : public InnerFunction {
 public:
  explicit RieszSmirnovInner(InnerFunctionSpec spec);
  const InnerFunctionSpec& spec() const { return spec_; }

  ProjectiveJet taylor(cplx z) const override;
  ProjectiveValue value(cplx z) const override;
  std::array<cplx, 3> log_derivatives(cplx z) const override;
  double log_abs2(cplx z) const override;
  double phase(double u) const override;
  std::array<double, 3> phase_derivatives(double u) const override;
  std::vector<double> feature_points() const override;

 private:
  InnerFunctionSpec spec_;
  double theta0_ = 0.0;
};

// gamma (B - tau) / (1 - conj(tau) B).
class CongruentInner final : public InnerFunction {
 public:
  CongruentInner(InnerPtr base, MoebiusParams params);
  const InnerPtr& base() const { return base_; }
  const MoebiusParams& params() const { return p_; }
  // Point c' with base(z) = c' exactly when this(z) = c.
  ProjectiveValue pull_back(const ProjectiveValue& c) const;

  ProjectiveJet taylor(cplx z) const override;
  ProjectiveValue value(cplx z) const override;
  std::array<cplx, 3> log_derivatives(cplx z) const override;
  double log_abs2(cplx z) const override;
  double one_minus_abs2(cplx z) const override;
  double phase(double u) const override;
  std::array<double, 3> phase_derivatives(double u) const override;
  std::vector<double> feature_points() const override { return base_->feature_points(); }

 private:
  double raw_phase(double u) const;
  InnerPtr base_;
  MoebiusParams p_;
  double offset_ = 0.0;
};

class ProductInner final : public InnerFunction {
 public:
  explicit ProductInner(std::vector<InnerPtr> factors);
  const std::vector<InnerPtr>& factors() const { return factors_; }

  ProjectiveJet taylor(cplx z) const override;
  ProjectiveValue value(cplx z) const override;
  std::array<cplx, 3> log_derivatives(cplx z) const override;
  double log_abs2(cplx z) const override;
  double one_minus_abs2(cplx z) const override;
  double phase(double u) const override;
  std::array<double, 3> phase_derivatives(double u) const override;
  std::vector<double> feature_points() const override;

 private:
  std::vector<InnerPtr> factors_;
  double offset_ = 0.0;
};

// (M - i)/(M + i) for a Herglotz M, regularized at the nearest pole of M.
class HerglotzInner final : public InnerFunction {
 public:
  explicit HerglotzInner(HerglotzSpec spec);
  const HerglotzSpec& spec() const { return spec_; }

  ProjectiveJet taylor(cplx z) const override;
  double log_abs2(cplx z) const override;
  double one_minus_abs2(cplx z) const override;
  double phase(double u) const override;
  std::vector<double> feature_points() const override { return spec_.poles(); }

 private:
  double raw_phase(double u) const;
  HerglotzSpec spec_;
  double offset_ = 0.0;
};

// Evaluator of a meromorphic Herglotz (Weyl) function M.
class WeylFunction {
 public:
  virtual ~WeylFunction() = default;
  // M and its first three derivatives at z; PoleEvaluation at poles.
  virtual CJet taylor(cplx z) const = 0;
  virtual cplx value(cplx z) const { return taylor(z).value(); }
};
using WeylPtr = std::shared_ptr<const WeylFunction>;

class HerglotzWeyl final : public WeylFunction {
 public:
  explicit HerglotzWeyl(HerglotzSpec spec) : spec_(std::move(spec)) {}
  CJet taylor(cplx z) const override;
  cplx value(cplx z) const override;

 private:
  HerglotzSpec spec_;
};

// M = i (1 + B)/(1 - B).
class CayleyWeyl final : public WeylFunction {
 public:
  explicit CayleyWeyl(InnerPtr inner) : inner_(std::move(inner)) {}
  CJet taylor(cplx z) const override;
  cplx value(cplx z) const override;

 private:
  InnerPtr inner_;
};

ProjectiveValue eval_inner(const InnerFunctionSpec& spec, cplx z, int derivative_order);
double phase(const InnerFunctionSpec& spec, double u, int derivative_order);

InnerPtr make_inner(const InnerFunctionSpec& spec);
InnerPtr congruence(InnerPtr base, const MoebiusParams& p);
InnerPtr congruence(const InnerFunctionSpec& spec, const MoebiusParams& p);
InnerPtr product(std::vector<InnerPtr> factors);

WeylPtr cayley_to_weyl(InnerPtr inner);
WeylPtr cayley_to_weyl(const InnerFunctionSpec& spec);
cplx herglotz_eval(const HerglotzSpec& spec, cplx z);
WeylPtr make_weyl(const HerglotzSpec& spec);
InnerPtr herglotz_to_inner(const HerglotzSpec& spec);

// Scale both jets so the larger leading coefficient has modulus 1.
void normalize(ProjectiveJet& pj);

}  // namespace weyl
