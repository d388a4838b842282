#include <doctest.h>

#include <atomic>
#include <cmath>

#include "weyl/errors.hpp"
#include "weyl/numeric.hpp"

using namespace weyl;

TEST_CASE("integrate smooth and singular integrands") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi).value == doctest::Approx(2.0).epsilon(1e-13));
  // Endpoint log singularity.
  CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value == doctest::Approx(-1.0).epsilon(1e-10));
  // Interior log singularity seeded as a breakpoint: int_{-1}^{1} ln|x| = -2.
  const QuadResult r = integrate([](double x) { return std::log(std::abs(x)); }, -1.0, 1.0, {}, {0.0});
  CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(r.error < 1e-9);
  // Reversed limits flip the sign.
  CHECK(integrate([](double x) { return x * x; }, 1.0, 0.0).value == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("integrate error estimate is scaled to the panel") {
  // A narrow Lorentzian: with unscaled panel errors this never settles.
  const double eps = 1e-4;
  auto f = [eps](double x) { return eps / (x * x + eps * eps); };
  const QuadResult r = integrate(f, -1.0, 1.0, {1e-12, 1e-10, 4000});
  CHECK(r.value == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-10));
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<double> x{0, 1, 2, 3, 4}, y{1, 3, 5, 7, 9};
  const LinearFit fit = least_squares(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.rms_residual < 1e-14);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1.0, 100.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(10.0));
  const auto d = decade_grid(1.0, 1000.0, 4);
  CHECK(d.front() == 1.0);
  CHECK(d.back() == doctest::Approx(1000.0));
  CHECK(d.size() == 13);
  const auto l = linear_grid(-1.0, 1.0, 5);
  CHECK(l[2] == doctest::Approx(0.0));
}

TEST_CASE("bracketed root and wrapping") {
  auto f = [](double x) { return std::cos(x); };
  CHECK(find_root_bracketed(f, 0.0, 2.0, f(0.0), f(2.0)) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(find_root_bracketed(f, 0.0, 1.0, f(0.0), f(1.0)), Error);
  CHECK(wrap_to_pi(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(-kPi / 2 + 4 * kPi) == doctest::Approx(-kPi / 2));
}

TEST_CASE("parallel_for visits every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK(worker_count() >= 1);
}

TEST_CASE("error codes split into input and numeric failures") {
  CHECK(is_input_error(ErrorCode::ValidationError));
  CHECK(is_input_error(ErrorCode::ParseError));
  CHECK_FALSE(is_input_error(ErrorCode::NoConvergence));
  try {
    fail(ErrorCode::BlowUp, "x");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BlowUp);
    CHECK(std::string(e.what()) == "BlowUp: x");
  }
}
