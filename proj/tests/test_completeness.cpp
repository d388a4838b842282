#include <doctest.h>

#include <cmath>

#include "weyl/completeness.hpp"
#include "weyl/errors.hpp"

using namespace weyl;

TEST_CASE("mean type examples") {
  const InnerFunctionSpec one(1.0, 1.0, {{cplx(0, 1), 1}});
  CHECK(mean_type_estimate(RieszSmirnovInner(one), 10.0, 1000.0).estimate == doctest::Approx(1.0).epsilon(0.01));
  const InnerFunctionSpec blaschke(1.0, 0.0, {{cplx(0, 1), 1}, {cplx(1, 2), 1}});
  CHECK(std::abs(mean_type_estimate(RieszSmirnovInner(blaschke)).estimate) < 0.01);
  const MeanTypeEstimate e3 = mean_type_estimate(RieszSmirnovInner(InnerFunctionSpec::exponential(3.0)));
  CHECK(e3.estimate == doctest::Approx(3.0).epsilon(0.01));
  CHECK_THROWS_AS(mean_type_estimate(RieszSmirnovInner(one), 10.0, 50.0), Error);
}

TEST_CASE("mean type of a fast exponential shortens the grid") {
  // |B(iy)| = e^{-b y} underflows well before y = 1e4 for b = 1.
  const MeanTypeEstimate e = mean_type_estimate(RieszSmirnovInner(InnerFunctionSpec::exponential(1.0)));
  CHECK(e.estimate == doctest::Approx(1.0).epsilon(0.01));
  CHECK(e.y_end <= 1e4);
}

TEST_CASE("mean type adds under products") {
  auto a = make_inner(InnerFunctionSpec::exponential(0.5));
  auto b = make_inner(InnerFunctionSpec(1.0, 1.25, {{cplx(1, 1), 2}}));
  const double sum = mean_type_estimate(*a).estimate + mean_type_estimate(*b).estimate;
  CHECK(std::abs(mean_type_estimate(*product({a, b})).estimate - sum) < 0.02);
}

TEST_CASE("completeness verdicts") {
  CHECK(is_complete(InnerFunctionSpec(1.0, 0.0, {{cplx(0, 1), 1}, {cplx(-3, 0.5), 2}})).verdict ==
        Completeness::Complete);
  CHECK(is_complete(InnerFunctionSpec::exponential(1.0)).verdict == Completeness::Incomplete);
  const CompletenessResult r = is_complete(InnerFunctionSpec(1.0, 1.0, {{cplx(0, 1), 1}}));
  CHECK(r.verdict == Completeness::Incomplete);
  CHECK(r.estimate.estimate == doctest::Approx(1.0).epsilon(0.01));
  // A Moebius congruence with tau = 0 keeps the zero set, hence the verdict.
  auto c = congruence(InnerFunctionSpec(1.0, 0.0, {{cplx(0, 1), 1}}), MoebiusParams(std::polar(1.0, 0.8), 0.0));
  CHECK(std::abs(mean_type_estimate(*c).estimate) < 0.01);
}

TEST_CASE("riesz diagnostic on two zeros") {
  const RieszDiagnostic d = riesz_diagnostic({cplx(0, -1), cplx(1, -1)});
  REQUIRE(d.partial_products.size() == 2);
  for (double p : d.partial_products) CHECK(p == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(d.min_partial == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK(d.separation_delta == doctest::Approx(1.0 / std::sqrt(5.0)));
  CHECK_THROWS_AS(riesz_diagnostic({cplx(0, -1), cplx(0, -1)}), Error);
  CHECK_THROWS_AS(riesz_diagnostic({cplx(0, 1)}), Error);
}

TEST_CASE("riesz diagnostic on the two model sequences") {
  std::vector<cplx> squares;
  for (int j = 1; j <= 50; ++j) squares.emplace_back(0.0, -double(j) * j);
  const RieszDiagnostic sq = riesz_diagnostic(squares);
  CHECK(sq.verdict == RieszVerdict::LikelyNot);
  CHECK(sq.min_partial < 1e-3);
  CHECK(sq.min_partial < sq.min_partial_half);
  // Consecutive factor (2j+1)/(2j^2+2j+1) tends to 0; the smallest is the last pair.
  CHECK(sq.separation_delta == doctest::Approx(99.0 / 4901.0).epsilon(1e-12));

  std::vector<cplx> shifted;
  for (int j = 1; j <= 200; ++j) shifted.emplace_back(double(j), -1.0);
  const RieszDiagnostic sh = riesz_diagnostic(shifted);
  for (double p : sh.partial_products) {
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
  }
  // Stable under truncation doubling, though the floor sits near 0.025.
  CHECK(sh.min_partial > 0.02);
  CHECK(std::abs(sh.min_partial - sh.min_partial_half) < 0.1 * sh.min_partial);
}

TEST_CASE("biorthogonality") {
  const std::vector<cplx> ev{cplx(0, -1), cplx(1, -0.5), cplx(-2, -2), cplx(0.5, -3)};
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(biorthogonal_pairing(ev, k, j) - (k == j ? 1.0 : 0.0)) < 1e-6);
  // Norm of the biorthogonal vector is the reciprocal partial product.
  const RieszDiagnostic d = riesz_diagnostic(ev);
  for (int j = 0; j < 4; ++j) {
    auto g = [&](double t) {
      const double u = std::tan(t);
      return std::norm(biorthogonal_vector(ev, j, u)) * (1 + u * u);
    };
    const double n2 = integrate(g, -kPi / 2, kPi / 2, {1e-13, 1e-11, 4000}).value / kTwoPi;
    CHECK(std::sqrt(n2) * d.partial_products[j] == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("blaschke of eigenvalues has the conjugate zeros") {
  const std::vector<cplx> ev{cplx(0, -1), cplx(1, -0.5)};
  const InnerFunctionSpec s = blaschke_of_eigenvalues(ev);
  CHECK(s.mean_type() == 0.0);
  for (cplx l : ev) CHECK(std::abs(eval_inner(s, std::conj(l), 0).value()) < 1e-15);
}

TEST_CASE("sector sums") {
  std::vector<cplx> sq, near_real;
  for (int j = 1; j <= 100; ++j) {
    sq.emplace_back(0.0, double(j) * j);
    near_real.emplace_back(double(j), 0.01);
  }
  const SectorSum s = sector_summability(sq, kPi / 4);
  CHECK(s.count == 100);
  CHECK(s.sum < kPi * kPi / 6);
  CHECK(s.sum > 1.63);
  // |l| in the top decade [1000, 10000] means j = 32..100: about 1/31.5 - 1/100.5.
  CHECK(s.last_decade_increment == doctest::Approx(0.0218).epsilon(0.02));
  const SectorSum e = sector_summability(near_real, kPi / 4);
  CHECK(e.count == 0);
  CHECK(e.sum == 0.0);
  CHECK(sector_summability({kI}, kPi / 4).sum == doctest::Approx(1.0));
}
