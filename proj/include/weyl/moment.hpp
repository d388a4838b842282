#pragma once

#include <optional>
#include <string>
#include <vector>

#include "weyl/geometry.hpp"
#include "weyl/inner.hpp"

namespace weyl {

// Recurrence coefficients a_n > 0, b_n of a Jacobi operator, n < N_max.
class JacobiSpec {
 public:
  JacobiSpec(std::vector<double> a, std::vector<double> b, std::string provenance = "explicit list");
  // a_n = scale (n+1)^power, b_n = 0.
  static JacobiSpec power_family(double power, int n_max, double scale = 1.0);

  int size() const { return static_cast<int>(a_.size()); }
  double a(int n) const { return a_.at(n); }
  double b(int n) const { return b_.at(n); }
  const std::vector<double>& a_values() const { return a_; }
  const std::vector<double>& b_values() const { return b_; }
  const std::string& provenance() const { return provenance_; }
  // Sum of 1/a_n over the list. A large share from the upper half hints at a
  // divergent Carleman sum, i.e. a determinate problem.
  double carleman_sum() const;
  bool carleman_warning() const;
  // a~_n = a_{n+1}, b~_n = b_{n+1}.
  JacobiSpec shifted() const;

 private:
  std::vector<double> a_, b_;
  std::string provenance_;
};

struct SeriesOptions {
  double tol = 1e-12;
  // At the cap the partial sums are extrapolated; this bounds the accepted
  // extrapolation error relative to max(1, |sum|).
  double extrapolation_tol = 1e-6;
  // When positive, sum exactly this many terms: no stopping rule, no extrapolation.
  int fixed_terms = 0;
};

// P_n and Q_n by forward recurrence; IndexBeyondCap past N_max.
cplx poly_first(const JacobiSpec& spec, int n, cplx z);
cplx poly_second(const JacobiSpec& spec, int n, cplx z);

struct NevanlinnaJets {
  CJet a, b, c, d;
  int truncation_n = 0;
  double tail_estimate = 0.0;
  bool extrapolated = false;
};

struct NevanlinnaMatrixValue {
  cplx lambda, a_val, b_val, c_val, d_val;
  int truncation_n = 0;
  double tail_estimate = 0.0;
  bool extrapolated = false;
  cplx det() const { return a_val * d_val - b_val * c_val; }
};

NevanlinnaJets nevanlinna_jets(const JacobiSpec& spec, cplx z, const SeriesOptions& opt = {});
NevanlinnaMatrixValue nevanlinna_entries(const JacobiSpec& spec, cplx z, const SeriesOptions& opt = {});

struct PNorm {
  double value = 1.0;
  double tail_estimate = 0.0;
  int truncation_n = 0;
};

// (sum |P_n(z)|^2)^{1/2}.
PNorm P_norm(const JacobiSpec& spec, cplx z, const SeriesOptions& opt = {});

// (1/pi) int_0^pi ln P(r e^{i phi}) dphi - ln P(0). ln P is only needed to
// about 1e-4 here, so the extrapolation tolerance is relaxed to at least that.
double TF_moment(const JacobiSpec& spec, double r, const SeriesOptions& opt = {});

// t = nullopt stands for t = infinity.
using ExtensionParameter = std::optional<double>;

// Real zeros of b + t d in (lo, hi).
std::vector<double> von_neumann_spectrum(const JacobiSpec& spec, ExtensionParameter t, double lo, double hi,
                                         const SeriesOptions& opt = {});

struct DiscreteMeasure {
  std::vector<double> nodes, masses;
};

// Nodes of mu_t in (lo, hi) with masses (a + t c)/(b' + t d') at each node.
DiscreteMeasure von_neumann_measure(const JacobiSpec& spec, ExtensionParameter t, double lo, double hi,
                                    const SeriesOptions& opt = {});

// -(a + t c)/(b + t d), or -c/d for t = infinity.
cplx resolvent_I(const JacobiSpec& spec, std::optional<cplx> t, cplx z, const SeriesOptions& opt = {});

// <J^i e_0, e_0>.
double moments_from_jacobi(const JacobiSpec& spec, int i);

struct PolyCurvature {
  double omega = 0.0;
  double upper_bound = 0.0;  // sum P_n'^2 / P^2
};

PolyCurvature curvature_from_polys(const JacobiSpec& spec, double u, const SeriesOptions& opt = {});

// y1 = b/sqrt(W), y2 = d/sqrt(W) with W = d b' - b d'.
SLSolution sturm_solutions(const JacobiSpec& spec, const std::vector<double>& grid, const SeriesOptions& opt = {});

struct PedersenCheck {
  cplx a_val, d_tilde_val;
  double mismatch = 0.0;  // |a - d~/a0^2| relative
  cplx c_val, c_rhs;
  double c_mismatch = 0.0;  // |c + (b0/a0^2) d~ + b~| relative
};

PedersenCheck shift_and_pedersen(const JacobiSpec& spec, cplx z, const SeriesOptions& opt = {});

// B = (b - i d)/(b + i d), formed projectively.
class JacobiInner final : public InnerFunction {
 public:
  explicit JacobiInner(JacobiSpec spec, SeriesOptions opt = {}) : spec_(std::move(spec)), opt_(opt) {}
  const JacobiSpec& spec() const { return spec_; }

  ProjectiveJet taylor(cplx z) const override;
  double phase(double u) const override;

 private:
  JacobiSpec spec_;
  SeriesOptions opt_;
};

// M = b/d.
class JacobiWeyl final : public WeylFunction {
 public:
  explicit JacobiWeyl(JacobiSpec spec, SeriesOptions opt = {}) : spec_(std::move(spec)), opt_(opt) {}
  CJet taylor(cplx z) const override;

 private:
  JacobiSpec spec_;
  SeriesOptions opt_;
};

}  // namespace weyl
