#pragma once

#include <functional>
#include <vector>

#include "weyl/inner.hpp"

namespace weyl {

struct MeanTypeEstimate {
  double estimate = 0.0;
  double y_end = 0.0;      // last grid point used
  bool shortened = false;  // |B(iy)| fell below 1e-300 before the end of the grid
  int points = 0;
};

// Minus the least-squares slope of ln|B(iy)| against y on a geometric grid.
MeanTypeEstimate mean_type_estimate(const InnerFunction& b, double y0 = 10.0, double y1 = 1e4, int points = 64);

enum class Completeness { Complete, Incomplete };
const char* to_string(Completeness c);

struct CompletenessResult {
  Completeness verdict;
  MeanTypeEstimate estimate;
};

CompletenessResult is_complete(const InnerFunctionSpec& spec);

enum class RieszVerdict { LikelyRiesz, LikelyNot };
const char* to_string(RieszVerdict v);

struct RieszDiagnostic {
  std::vector<cplx> zeros;               // eigenvalues of T_inf, lower half-plane
  std::vector<double> partial_products;  // |B_j(conj l_j)|
  double min_partial = 1.0;
  double separation_delta = 1.0;
  double min_partial_half = 1.0;  // min_partial for the first half of the list
  RieszVerdict verdict = RieszVerdict::LikelyRiesz;
};

// Truncation doubling: the first half of the list is compared with the whole.
RieszDiagnostic riesz_diagnostic(const std::vector<cplx>& eigenvalues);

// The Blaschke product with zeros conj(l_j), normalized as in the Riesz-Smirnov form.
InnerFunctionSpec blaschke_of_eigenvalues(const std::vector<cplx>& eigenvalues);

// f_j(u) = sqrt(-2 Im l_j)/(u - l_j).
cplx normalized_eigenvector(const std::vector<cplx>& eigenvalues, int j, cplx u);
// sqrt(-2 Im l_j) B(u) / (B_j(conj l_j) (u - conj l_j)).
cplx biorthogonal_vector(const std::vector<cplx>& eigenvalues, int j, cplx u);
// int f~_k conj(f_j) du/2pi over the real line.
cplx biorthogonal_pairing(const std::vector<cplx>& eigenvalues, int k, int j);

struct SectorSum {
  double sum = 0.0;
  // Contribution of the zeros with |l| in the top decade.
  double last_decade_increment = 0.0;
  int count = 0;
};

// Sum of 1/|l| over zeros with arg l in (delta, pi - delta).
SectorSum sector_summability(const std::vector<cplx>& zeros, double delta);

}  // namespace weyl
