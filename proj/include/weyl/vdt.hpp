#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weyl/geometry.hpp"
#include "weyl/inner.hpp"
#include "weyl/roots.hpp"

namespace weyl {

// A point of CP^1 selecting the extension T_c.
class BoundaryCondition {
 public:
  enum class Kind { SelfAdjoint, Dissipative, Accumulative };

  static BoundaryCondition at(cplx c) { return BoundaryCondition(c, false); }
  static BoundaryCondition infinity() { return BoundaryCondition(0.0, true); }
  // "re,im", "re" or "inf".
  static BoundaryCondition parse(const std::string& text);

  bool is_infinite() const { return inf_; }
  cplx value() const;
  ProjectiveValue point() const { return inf_ ? ProjectiveValue::infinity() : ProjectiveValue(c_, 1.0); }
  Kind kind() const;
  std::string to_string() const;

 private:
  BoundaryCondition(cplx c, bool inf) : c_(c), inf_(inf) {}
  cplx c_;
  bool inf_;
};

const char* to_string(BoundaryCondition::Kind k);

// Search region: the open rectangle, optionally intersected with |z| < radius.
struct Window {
  Rect rect;
  std::optional<double> radius;

  static Window interval(double a, double b) { return {{a, b, -1.0, 1.0}, std::nullopt}; }
  static Window rectangle(double x0, double x1, double y0, double y1) { return {{x0, x1, y0, y1}, std::nullopt}; }
  static Window disc(double r) { return {{-r, r, -r, r}, r}; }
  bool contains(cplx z) const;
};

struct SpectrumOptions {
  RootOptions roots;
};

// Roots of B(z) = c inside the window, sorted by real then imaginary part.
std::vector<Root> spectrum(const InnerFunction& b, const BoundaryCondition& bc, const Window& w,
                           const SpectrumOptions& opt = {});
std::vector<Root> spectrum(const InnerFunctionSpec& spec, const BoundaryCondition& bc, const Window& w,
                           const SpectrumOptions& opt = {});

// sum over 0 < |z| < r of m ln(r/|z|) plus n(0) ln r.
double counting_function(const std::vector<Root>& roots, double r);

// ln of the chordal distance between B(z) and c, computed without overflow.
double log_chordal(const InnerFunction& b, cplx z, const BoundaryCondition& bc);

struct VdtOptions {
  QuadOptions quad{1e-11, 1e-10, 20000};
  double axis_epsilon = kAxisEpsilon;
};

double proximity(const InnerFunction& b, const BoundaryCondition& bc, double r, const VdtOptions& opt = {});
double proximity(const InnerFunctionSpec& spec, const BoundaryCondition& bc, double r, const VdtOptions& opt = {});

// (1/2 pi) int_{-r}^{r} theta'(u) ln(r/|u|) du.
double height(const InnerFunction& b, double r, const VdtOptions& opt = {});
double height(const InnerFunctionSpec& spec, double r, const VdtOptions& opt = {});

// (1/pi) int_{|z|<r} omega(z) ln(r/|z|) dA.
double charfn_TF(const InnerFunction& b, double r, const VdtOptions& opt = {});
double charfn_TF(const InnerFunctionSpec& spec, double r, const VdtOptions& opt = {});

// int ln+ |f(r e^{i phi})| dphi / 2 pi. The log-modulus form avoids overflow for fast growth.
double nevanlinna_T_entire(const std::function<cplx(cplx)>& f, double r, const QuadOptions& q = {1e-12, 1e-10, 20000});
double nevanlinna_T_entire_log(const std::function<double(cplx)>& log_abs_f, double r,
                               const QuadOptions& q = {1e-12, 1e-10, 20000});

struct GrowthReport {
  std::vector<double> r_grid, h_values, TF_values, N_values, m_values;
  double defect_estimate = 0.0;
};

// Tabulates h, N and the proximity on r_grid (T_F too when with_tf is set).
// The defect estimate is min m/h over the upper half of the grid.
GrowthReport defect(const InnerFunction& b, const BoundaryCondition& bc, const std::vector<double>& r_grid,
                    bool with_tf = false, const VdtOptions& opt = {});

struct OrderTypeFit {
  double order = 0.0;
  double type = 0.0;
  double rms_residual = 0.0;
  int points = 0;
  bool subpolynomial = false;
};

// Least-squares fit of ln value against ln r over the top decade of the grid.
OrderTypeFit order_type_fit(const std::vector<double>& r_grid, const std::vector<double>& values);

}  // namespace weyl
