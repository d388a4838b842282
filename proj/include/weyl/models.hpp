#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "weyl/inner.hpp"
#include "weyl/roots.hpp"

namespace weyl {

// Hermite-Biehler function e with e#(z) = conj(e(conj z)).
class DeBrangesFunction {
 public:
  using JetFn = std::function<CJet(cplx)>;
  explicit DeBrangesFunction(JetFn e) : e_(std::move(e)) {}

  CJet e_jet(cplx z) const { return e_(z); }
  CJet e_sharp_jet(cplx z) const;
  cplx e(cplx z) const { return e_(z).value(); }
  cplx e_sharp(cplx z) const { return e_sharp_jet(z).value(); }

 private:
  JetFn e_;
};

// e(z) = kappa e^{-ibz/2} prod (z - conj l)^m, kappa unimodular with e#/e = B.
// ConstructionMismatch if the ratio check at 20 sample points fails.
DeBrangesFunction debranges_from_inner(const InnerFunctionSpec& spec);

// i [e(l) e#(conj m) - e(conj m) e#(l)] / (l - conj m).
cplx kernel_K1(const DeBrangesFunction& e, cplx l, cplx m);
// i [1 - B(l) conj B(m)] / (l - conj m).
cplx kernel_K2(const InnerFunction& b, cplx l, cplx m);
cplx kernel_K2(const InnerFunctionSpec& spec, cplx l, cplx m);
// [M(l) - conj M(m)] / (l - conj m).
cplx kernel_K3(const WeylFunction& m, cplx l, cplx mu);
// K1(u, v) / (N(u) N(v)) with N(u) = sqrt K1(u, u).
double kernel_K4(const DeBrangesFunction& e, double u, double v);
// theta'(l_i) delta_ij on eigenvalues of T_1.
double kernel_K5(const InnerFunction& b, double li, double lj);
double kernel_K5(const InnerFunctionSpec& spec, double li, double lj);

enum class KernelId { K1, K2, K3, K4, K5 };
const char* to_string(KernelId id);

struct KernelMatrix {
  std::vector<cplx> points;
  Eigen::MatrixXcd entries;
  KernelId kernel_id = KernelId::K1;

  double trace() const { return entries.trace().real(); }
  // max |K_ij - conj K_ji|.
  double hermitian_defect() const;
  double min_eigenvalue() const;
  // Hermitian to 1e-10 and min eigenvalue >= -1e-8 trace.
  bool is_psd() const;
};

KernelMatrix kernel_matrix(KernelId id, const std::vector<cplx>& points,
                           const std::function<cplx(cplx, cplx)>& kernel);

struct Sample {
  double node;
  cplx value;
};

struct SamplingOptions {
  int min_nodes_each_side = 100;
};

struct Reconstruction {
  cplx value;
  // Power-law extrapolation of the discarded terms; infinite when they do not decay.
  double tail_bound = 0.0;
};

// f(l) = sum f(l_j) K2(l, l_j) / theta'(l_j) over the supplied eigenvalues of T_1.
Reconstruction sample_reconstruct(const InnerFunction& b, const std::vector<Sample>& samples, cplx l,
                                  const SamplingOptions& opt = {});
Reconstruction sample_reconstruct(const InnerFunctionSpec& spec, const std::vector<Sample>& samples, cplx l,
                                  const SamplingOptions& opt = {});

struct NormResult {
  double value = 0.0;
  double tail = 0.0;
};

// int_{-U}^{U} |f/e|^2 dx/2pi plus a power-law tail. NonDecaying if the
// integrand does not decay faster than 1/x over the last decade.
NormResult he_norm(const std::function<cplx(cplx)>& f, const DeBrangesFunction& e, double U = 50.0);
// Same quadrature for (f, g); the tail is not extrapolated.
cplx he_inner(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g, const DeBrangesFunction& e,
              double U = 50.0);

// e (e#)' - e' e#.
cplx discriminant_G(const DeBrangesFunction& e, cplx l);
// Zeros of G in the rectangle.
std::vector<Root> discriminant_zeros(const DeBrangesFunction& e, const Rect& r);

}  // namespace weyl
