#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "weyl/errors.hpp"
#include "weyl/inner.hpp"

using namespace weyl;

namespace {

std::vector<InnerFunctionSpec> sample_specs() {
  return {
      InnerFunctionSpec::exponential(1.0),
      InnerFunctionSpec(1.0, 0.0, {{cplx(0, 1), 1}}),
      InnerFunctionSpec(std::polar(1.0, 0.4), 1.5, {{cplx(0, 1), 1}, {cplx(2, 1), 2}}),
      InnerFunctionSpec(cplx(0, 1), 0.25, {{cplx(-3, 0.1), 1}, {cplx(1, 0.5), 1}, {cplx(4, 3), 3}}),
  };
}

}  // namespace

TEST_CASE("eval_inner examples") {
  const auto e1 = InnerFunctionSpec::exponential(1.0);
  CHECK(std::abs(eval_inner(e1, kI, 0).value() - std::exp(-1.0)) < 1e-15);
  const InnerFunctionSpec z(1.0, 0.0, {{cplx(0, 1), 1}});
  CHECK(std::abs(eval_inner(z, kI, 0).value()) == 0.0);
  CHECK(std::abs(eval_inner(z, cplx(0, 2), 0).value() - (-1.0 / 3.0)) < 1e-15);
  // At the pole -i the value is projective infinity.
  CHECK(eval_inner(z, -kI, 0).is_infinite());
  CHECK_THROWS_AS(eval_inner(z, -kI, 0).value(), Error);
  CHECK_THROWS_AS(eval_inner(z, kI, 4), Error);
}

TEST_CASE("log derivatives match the closed-form sums") {
  const InnerFunctionSpec s(1.0, 2.0, {{cplx(1, 1), 2}});
  const cplx l(0.3, 0.7), a(1, 1), ac = std::conj(a);
  const cplx d1 = 2.0 * kI + 2.0 * (1.0 / (l - a) - 1.0 / (l - ac));
  const cplx d2 = 2.0 * (-1.0 / ((l - a) * (l - a)) + 1.0 / ((l - ac) * (l - ac)));
  const cplx d3 = 2.0 * 2.0 * (1.0 / std::pow(l - a, 3) - 1.0 / std::pow(l - ac, 3));
  CHECK(std::abs(eval_inner(s, l, 1).value() - d1) < 1e-13);
  CHECK(std::abs(eval_inner(s, l, 2).value() - d2) < 1e-13);
  CHECK(std::abs(eval_inner(s, l, 3).value() - d3) < 1e-13);
}

TEST_CASE("constructor invariants") {
  CHECK_THROWS_AS(InnerFunctionSpec(cplx(1.1, 0), 0.0, {}), Error);
  CHECK_THROWS_AS(InnerFunctionSpec(1.0, -1.0, {}), Error);
  CHECK_THROWS_AS(InnerFunctionSpec(1.0, 0.0, {{cplx(1, -1), 1}}), Error);
  CHECK_THROWS_AS(InnerFunctionSpec(1.0, 0.0, {{cplx(1, 1), 0}}), Error);
  CHECK_THROWS_AS(HerglotzSpec(0.0, -1.0, {}, {}), Error);
  CHECK_THROWS_AS(HerglotzSpec(0.0, 1.0, {1.0, 0.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(HerglotzSpec(0.0, 1.0, {0.0}, {-1.0}), Error);
  CHECK_THROWS_AS(MoebiusParams(1.0, 1.0), Error);
  const InnerFunctionSpec s(1.0, 0.0, {{cplx(0, 2), 3}});
  CHECK(s.degree() == 3);
  CHECK(s.blaschke_sum() == doctest::Approx(1.5));
}

TEST_CASE("phase examples and branch") {
  for (double b : {0.5, 1.0, 2.0})
    for (double u : {-3.0, 0.0, 2.5}) CHECK(phase(InnerFunctionSpec::exponential(b), u, 0) == doctest::Approx(b * u));
  const InnerFunctionSpec z(1.0, 0.0, {{cplx(0, 1), 1}});
  CHECK(phase(z, 1.0, 0) == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(phase(z, 1.0, 5), Error);
}

TEST_CASE("symmetry, contractivity and unimodularity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-6.0, 6.0), im(0.01, 4.0);
  for (const auto& s : sample_specs()) {
    RieszSmirnovInner b(s);
    for (int k = 0; k < 200; ++k) {
      const cplx z(re(rng), im(rng));
      const cplx bz = b.value(z).value();
      CHECK(std::abs(bz) < 1.0);
      CHECK(std::abs(bz * std::conj(b.value(std::conj(z)).value()) - 1.0) < 1e-10);
      CHECK(std::abs(std::abs(b.value(re(rng)).value()) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("phase agrees with B on the line and increases") {
  for (const auto& s : sample_specs()) {
    RieszSmirnovInner b(s);
    CHECK(b.phase(0.0) > -kPi);
    CHECK(b.phase(0.0) <= kPi);
    double prev = -1e300;
    for (double u = -20.0; u <= 20.0; u += 0.05) {
      const double t = b.phase(u);
      CHECK(std::abs(std::exp(kI * t) - b.value(u).value()) < 1e-10);
      CHECK(t > prev);
      CHECK(b.phase_derivatives(u)[0] > 0.0);
      prev = t;
    }
  }
}

TEST_CASE("phase derivative against central differences") {
  const InnerFunctionSpec s(1.0, 1.0, {{cplx(0.5, 0.8), 1}});
  RieszSmirnovInner b(s);
  for (double u : {-1.0, 0.2, 3.0}) {
    const double t1 = b.phase_derivatives(u)[0];
    const double e3 = std::abs(t1 - (b.phase(u + 1e-3) - b.phase(u - 1e-3)) / 2e-3);
    const double e4 = std::abs(t1 - (b.phase(u + 1e-4) - b.phase(u - 1e-4)) / 2e-4);
    CHECK(e3 < 1e-5);
    // Second order: a tenth of the step gives about a hundredth of the error.
    CHECK(e4 < 0.05 * e3 + 1e-9);
  }
}

TEST_CASE("congruence") {
  const InnerFunctionSpec s = InnerFunctionSpec::exponential(2.0);
  auto id = congruence(s, MoebiusParams());
  auto base = make_inner(s);
  for (cplx z : {cplx(0.3, 0.2), cplx(-1, 2)}) CHECK(std::abs(id->value(z).value() - base->value(z).value()) < 1e-15);
  const cplx g = std::polar(1.0, 1.1), c(0.5, 0.0);
  auto comp = congruence(s, MoebiusParams(g, c));
  for (cplx z : {cplx(0.3, 0.2), cplx(-1, 2), cplx(4, 0.01)}) {
    const cplx e = std::exp(2.0 * kI * z);
    CHECK(std::abs(comp->value(z).value() - g * (e - c) / (1.0 - std::conj(c) * e)) < 1e-13);
  }
  for (double u : {-3.0, 0.0, 7.0}) CHECK(std::abs(std::abs(comp->value(u).value()) - 1.0) < 1e-12);
}

TEST_CASE("cayley transform") {
  auto m = cayley_to_weyl(InnerFunctionSpec::exponential(1.0));
  for (double u : {0.7, 2.0, -1.3}) CHECK(m->value(u).real() == doctest::Approx(-1.0 / std::tan(u / 2)).epsilon(1e-12));
  CHECK(m->value(cplx(0, 2)).imag() > 0.0);
  CHECK_THROWS_AS(m->value(0.0), Error);
  // Zeros and poles of M on the line alternate.
  std::vector<std::pair<double, int>> marks;
  for (int k = -3; k <= 3; ++k) {
    marks.emplace_back(2 * k * kPi, 1);        // pole: B = 1
    marks.emplace_back((2 * k + 1) * kPi, 0);  // zero: B = -1
  }
  std::sort(marks.begin(), marks.end());
  for (std::size_t i = 1; i < marks.size(); ++i) CHECK(marks[i].second != marks[i - 1].second);
  CHECK(std::abs(m->value((2 * 1 + 1) * kPi)) < 1e-12);
}

TEST_CASE("herglotz evaluation and inner") {
  CHECK(std::abs(herglotz_eval(HerglotzSpec(0.0, 1.0, {}, {}), cplx(3, 2)) - cplx(3, 2)) < 1e-15);
  CHECK(std::abs(herglotz_eval(HerglotzSpec(0.0, 0.0, {0.0}, {1.0}), kI) - kI) < 1e-15);
  const HerglotzSpec h(0.5, 1.0, {-2, 0, 3}, {1, 0.5, 2});
  CHECK(herglotz_eval(h, kI).imag() > 0.0);
  CHECK_THROWS_AS(herglotz_eval(h, 3.0), Error);
  auto b = herglotz_to_inner(HerglotzSpec(0.0, 1.0, {}, {}));
  CHECK(std::abs(b->value(0.0).value() + 1.0) < 1e-15);
  CHECK(std::abs(b->value(cplx(0, 5)).value()) < 1.0);
  auto bh = herglotz_to_inner(h);
  for (double u : {-2.0, 0.5, 9.0}) CHECK(std::abs(std::abs(bh->value(u).value()) - 1.0) < 1e-12);
  // Poles of M map to B = 1.
  CHECK(std::abs(bh->value(3.0).value() - 1.0) < 1e-12);
}

TEST_CASE("cayley round trip reproduces B") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-5.0, 5.0), im(0.05, 3.0);
  for (const auto& s : sample_specs()) {
    auto b = make_inner(s);
    auto m = cayley_to_weyl(b);
    for (int k = 0; k < 50; ++k) {
      const cplx z(re(rng), im(rng));
      const cplx mz = m->value(z);
      CHECK(std::abs((mz - kI) / (mz + kI) - b->value(z).value()) < 1e-10);
    }
  }
}

TEST_CASE("product of inner functions") {
  auto a = make_inner(InnerFunctionSpec::exponential(1.0));
  auto c = make_inner(InnerFunctionSpec(1.0, 0.0, {{cplx(1, 1), 1}}));
  auto p = product({a, c});
  for (cplx z : {cplx(0.2, 0.3), cplx(-2, 1)}) CHECK(std::abs(p->value(z).value() - a->value(z).value() * c->value(z).value()) < 1e-14);
  for (double u : {-4.0, 0.0, 5.0}) CHECK(std::abs(std::exp(kI * p->phase(u)) - p->value(u).value()) < 1e-12);
}
