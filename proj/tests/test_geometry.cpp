#include <doctest.h>

#include <cmath>
#include <random>

#include "weyl/errors.hpp"
#include "weyl/geometry.hpp"

using namespace weyl;

namespace {

const InnerFunctionSpec kOneZero(1.0, 0.0, {{cplx(0, 1), 1}});

std::vector<InnerFunctionSpec> specs() {
  return {
      InnerFunctionSpec::exponential(1.0),
      InnerFunctionSpec(std::polar(1.0, 0.4), 1.5, {{cplx(0, 1), 1}, {cplx(2, 1), 2}}),
      InnerFunctionSpec(cplx(0, 1), 0.25, {{cplx(-3, 0.3), 1}, {cplx(1, 0.5), 1}, {cplx(4, 3), 3}}),
  };
}

}  // namespace

TEST_CASE("chi examples") {
  for (double u : {-2.0, 0.0, 5.0}) CHECK(chi(InnerFunctionSpec::exponential(1.7), u) == doctest::Approx(1.7));
  for (cplx z : {cplx(0.0, 0.5), cplx(1.5, 2.0), cplx(-3.0, 0.01)})
    CHECK(chi(kOneZero, z) == doctest::Approx(2.0 / (z.real() * z.real() + (z.imag() + 1) * (z.imag() + 1))).epsilon(1e-12));
  CHECK(chi(kOneZero, 0.0) == doctest::Approx(2.0));
  for (const auto& s : specs())
    for (double u : {-1.0, 0.5}) CHECK(chi(s, cplx(u, 2.0)) < chi(s, cplx(u, 1.0)));
}

TEST_CASE("omega examples") {
  for (double b : {0.5, 1.0, 2.0})
    for (double u = -10.0; u <= 10.0; u += 0.25)
      CHECK(std::abs(omega(InnerFunctionSpec::exponential(b), u) - b * b / 12) < 1e-10);
  CHECK(omega(InnerFunctionSpec::exponential(2.0), 0.0) == doctest::Approx(1.0 / 3.0));
  for (double x = -5.0; x <= 5.0; x += 0.5)
    for (double y = -5.0; y <= 5.0; y += 0.5) {
      if (std::abs(y + 1.0) < 1e-12) continue;  // pole at -i
      CHECK(std::abs(omega(kOneZero, cplx(x, y))) <= 1e-8);
    }
}

TEST_CASE("omega symmetry, positivity and axis continuity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(0.01, 3.0);
  for (const auto& s : specs()) {
    RieszSmirnovInner b(s);
    for (int k = 0; k < 100; ++k) {
      const cplx z(re(rng), im(rng));
      const double w = omega(b, z);
      CHECK(w >= -1e-9);
      CHECK(std::abs(w - omega(b, std::conj(z))) <= 1e-10 * std::max(1.0, w));
    }
    for (double u : {-2.0, 0.3, 4.0}) {
      const double w0 = omega(b, u);
      const double e2 = std::abs(omega(b, cplx(u, 1e-2)) - w0);
      const double e3 = std::abs(omega(b, cplx(u, 2e-3)) - w0);
      CHECK(e3 < e2);
      CHECK(e3 < 1e-3 * std::max(1.0, w0));
    }
  }
}

TEST_CASE("omega from the Weyl function") {
  auto m = make_weyl(HerglotzSpec(0.0, 1.0, {}, {}));
  CHECK(std::abs(omega_from_weyl(*m, kI)) < 1e-14);
  const auto e1 = InnerFunctionSpec::exponential(1.0);
  auto mc = cayley_to_weyl(e1);
  CHECK(std::abs(omega_from_weyl(*mc, cplx(0.3, 0.2)) - omega(e1, cplx(0.3, 0.2))) < 1e-7);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.05, 3.0);
  auto mh = make_weyl(HerglotzSpec(0.5, 1.0, {-2, 0, 3}, {1, 0.5, 2}));
  for (int k = 0; k < 100; ++k) CHECK(omega_from_weyl(*mh, cplx(re(rng), im(rng))) >= -1e-9);
}

TEST_CASE("schwarzian") {
  auto m = cayley_to_weyl(InnerFunctionSpec::exponential(1.0));
  for (double u : {0.5, 1.0, 2.5}) CHECK(schwarzian(*m, u) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(schwarzian([](const RJet& x) { return x; }, 0.7)) < 1e-15);
  auto moebius = [](const RJet& x) { return (2.0 * x + 1.0) / (x - 3.0); };
  CHECK(std::abs(schwarzian(moebius, 0.7)) < 1e-8);
  CHECK(std::abs(schwarzian_fd([](double x) { return (2 * x + 1) / (x - 3); }, 0.7, 1e-3)) < 1e-5);
  CHECK_THROWS_AS(schwarzian([](const RJet& x) { return x * x; }, 0.0), Error);
}

TEST_CASE("omega equals a sixth of the Schwarzian of M") {
  for (const auto& s : specs()) {
    RieszSmirnovInner b(s);
    auto m = cayley_to_weyl(s);
    for (double u = -6.0; u <= 6.0; u += 0.37) {
      if (std::abs(wrap_to_pi(b.phase(u))) < 0.3) continue;  // near a pole of M
      const double w = omega(b, u);
      CHECK(std::abs(w - schwarzian(*m, u) / 6.0) <= 1e-6 * std::max(1.0, w));
    }
  }
}

TEST_CASE("Sturm-Liouville closed forms") {
  const auto w = CurvatureProfile::constant(1.0 / 12, -15.0, 15.0);
  const SLTrajectory y = sl_solve(w, 0.0, 10.0, 0.0, 1.0);
  for (double u : {1.0, 3.0, 6.0, 9.5}) CHECK(y(u) == doctest::Approx(2 * std::sin(u / 2)).epsilon(1e-8));
  const auto z = y.zeros(0.1);
  REQUIRE(z.size() >= 2);
  CHECK(z[1] == doctest::Approx(kTwoPi).epsilon(1e-9));
  const SLTrajectory flat = sl_solve(CurvatureProfile::constant(0.0, -5.0, 5.0), 0.0, 4.0, 1.0, 0.0);
  CHECK(flat(3.0) == doctest::Approx(1.0).epsilon(1e-12));
  // M = -cot(u/2) = -y1/y2 with y1 = cos(u/2): its zeros are odd multiples of pi.
  const SLTrajectory c = sl_solve(w, -10.0, 10.0, std::cos(5.0), 0.5 * std::sin(5.0));
  const auto zc = c.zeros(0.1);
  REQUIRE(zc.size() == 4);
  CHECK(zc[0] == doctest::Approx(-3 * kPi).epsilon(1e-9));
  CHECK(zc[1] == doctest::Approx(-kPi).epsilon(1e-9));
  CHECK(zc[3] == doctest::Approx(3 * kPi).epsilon(1e-9));
  const SLSolution pair = sl_pair(sl_solve(w, -10.0, 10.0, 0.0, 1.0), c, linear_grid(-9.0, 9.0, 37));
  CHECK(pair.wronskian_spread < 1e-6);
}

TEST_CASE("coarse curvature grids are rejected") {
  const CurvatureProfile w(linear_grid(0.0, 10.0, 4), {100.0, 100.0, 100.0, 100.0}, CurvatureSource::Analytic);
  CHECK_THROWS_AS(sl_solve(w, 0.0, 10.0, 0.0, 1.0), Error);
}

TEST_CASE("Sturm-Picone ordering") {
  // Between consecutive zeros of the omega_1 solution the omega_2 > omega_1 solution vanishes.
  const auto w1 = CurvatureProfile::constant(1.0 / 12, -1.0, 20.0);
  const auto w2 = CurvatureProfile::constant(1.0 / 6, -1.0, 20.0);
  const auto z1 = sl_solve(w1, 0.0, 19.0, 0.0, 1.0).zeros(0.05);
  const auto z2 = sl_solve(w2, 0.0, 19.0, 1.0, 0.3).zeros(0.05);
  REQUIRE(z1.size() >= 2);
  for (std::size_t k = 0; k + 1 < z1.size(); ++k) {
    bool inside = false;
    for (double t : z2) inside = inside || (t > z1[k] && t < z1[k + 1]);
    CHECK(inside);
  }
}

TEST_CASE("phase from curvature") {
  const PhaseCurve th = phase_from_curvature(CurvatureProfile::constant(1.0 / 12, -10.0, 10.0), -10.0, 10.0);
  for (double u = -10.0; u <= 10.0; u += 0.5) CHECK(std::abs(th(u) - u) < 1e-8);
  const PhaseCurve flat = phase_from_curvature(CurvatureProfile::constant(0.0, -5.0, 5.0), -5.0, 5.0);
  double prev = -1e300;
  for (double u = -5.0; u <= 5.0; u += 0.1) {
    CHECK(flat(u) > prev);
    prev = flat(u);
  }
}

TEST_CASE("curvature to phase and back") {
  RieszSmirnovInner b(InnerFunctionSpec(1.0, 1.0, {{cplx(0.5, 1.0), 1}}));
  const auto prof = CurvatureProfile::from_inner(b, -6.0, 6.0, 481);
  const PhaseCurve th = phase_from_curvature(prof, -4.0, 4.0);
  // Recover omega from the reconstructed phase with the on-axis formula.
  for (double u = -3.0; u <= 3.0; u += 0.5) {
    const double h = 1e-3;
    const double t1 = th.derivative(u);
    const double t2 = (th.derivative(u + h) - th.derivative(u - h)) / (2 * h);
    const double t3 = (th.derivative(u + h) - 2 * t1 + th.derivative(u - h)) / (h * h);
    CHECK(std::abs(omega_from_phase_derivatives(t1, t2, t3) - prof(u)) < 1e-4);
  }
}

TEST_CASE("phase derivative leaving its range is reported") {
  // With omega = 0 the normalized phase derivative is 1/(1 + u^2/4), below 1e-12 far out.
  CHECK_THROWS_AS(phase_from_curvature(CurvatureProfile::constant(0.0, -1e7, 1e7), -1e7, 1e7), Error);
}
