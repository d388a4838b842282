// Runs the twenty acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weyl/completeness.hpp"
#include "weyl/errors.hpp"
#include "weyl/geometry.hpp"
#include "weyl/models.hpp"
#include "weyl/moment.hpp"
#include "weyl/vdt.hpp"

using namespace weyl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

// Five fixed specs with mixed exponential and Blaschke parts.
std::vector<InnerFunctionSpec> random_specs() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.2, 2.5), bt(0.0, 2.0), ph(-kPi, kPi);
  std::vector<InnerFunctionSpec> out;
  for (int k = 0; k < 5; ++k) {
    std::vector<Zero> zeros;
    for (int j = 0; j < k + 1; ++j) zeros.push_back({cplx(re(rng), im(rng)), 1 + (j == 1 ? 1 : 0)});
    out.emplace_back(std::polar(1.0, ph(rng)), k == 2 ? 0.0 : bt(rng), zeros);
  }
  return out;
}

const InnerFunctionSpec kTwoZeros(1.0, 1.0, {{cplx(0, 1), 1}, {cplx(2, 1), 1}});

// ---------------------------------------------------------------- geometry

Outcome constant_curvature() {
  double worst = 0.0;
  for (double b : {0.5, 1.0, 2.0})
    for (double u : linear_grid(-10.0, 10.0, 2001))
      worst = std::max(worst, std::abs(omega(InnerFunctionSpec::exponential(b), u) - b * b / 12.0));
  return {worst <= 1e-10, fmt("max |omega - b^2/12| = %.2e", worst)};
}

Outcome rational_flatness() {
  const InnerFunctionSpec s(1.0, 0.0, {{cplx(0, 1), 1}});
  double worst = 0.0;
  for (double x : linear_grid(-5.0, 5.0, 40))
    for (double y : linear_grid(-5.0, 5.0, 40)) worst = std::max(worst, std::abs(omega(s, cplx(x, y))));
  return {worst <= 1e-8, fmt("max |omega| on 40x40 grid = %.2e", worst)};
}

Outcome phase_density() {
  double worst = 0.0;
  for (const auto& s : random_specs()) {
    RieszSmirnovInner b(s);
    for (double u : linear_grid(-10.0, 10.0, 801)) {
      const double t1 = b.phase_derivatives(u)[0];
      // Off-axis chi extrapolated to the axis from y = h and 2h.
      const double h = 1e-6 / std::max(1.0, t1);
      const double lim = 2.0 * chi(b, cplx(u, h), 0.0) - chi(b, cplx(u, 2.0 * h), 0.0);
      worst = std::max(worst, std::abs(lim - t1) / std::max(1.0, t1));
    }
  }
  return {worst <= 1e-8, fmt("max |chi - theta'| = %.2e", worst)};
}

Outcome schwarzian_identity() {
  double worst = 0.0;
  int used = 0;
  for (const auto& s : random_specs()) {
    RieszSmirnovInner b(s);
    auto m = cayley_to_weyl(s);
    for (double u : linear_grid(-10.0, 10.0, 401)) {
      if (std::abs(wrap_to_pi(b.phase(u))) < 0.3) continue;  // near a pole of M
      const double w = omega(b, u);
      worst = std::max(worst, std::abs(w - schwarzian(*m, u) / 6.0) / std::max(1.0, w));
      ++used;
    }
  }
  return {worst <= 1e-6, fmt("max |omega - S(M)/6| = %.2e over %g points", worst, used)};
}

// ---------------------------------------------------------------- value distribution

Outcome height_closed_form() {
  double worst = 0.0;
  for (double r : {1.0, kPi, 10.0, 100.0})
    worst = std::max(worst, std::abs(height(InnerFunctionSpec::exponential(1.0), r) - r / kPi));
  return {worst <= 1e-8, fmt("max |h - r/pi| = %.2e", worst)};
}

Outcome first_main_theorem() {
  RieszSmirnovInner b(kTwoZeros);
  const auto grid = decade_grid(20.0, 200.0, 16);
  double worst = 0.0;
  std::string detail;
  for (double c : {0.0, 0.5, 1.0}) {
    const BoundaryCondition bc = BoundaryCondition::at(c);
    const GrowthReport g = defect(b, bc, grid);
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double res = g.h_values[i] - g.N_values[i] - g.m_values[i];
      lo = std::min(lo, res);
      hi = std::max(hi, res);
    }
    worst = std::max(worst, hi - lo);
    detail += fmt("c=%g: %.3f  ", c, hi - lo);
  }
  return {worst < 0.5, "variation of h - N - m over [20, 200]: " + detail};
}

Outcome tf_height_band() {
  // r doubles up to 100; C is fitted on the lower half and must hold on the upper half.
  std::vector<double> rs;
  for (double r = 100.0 / 32.0; r <= 100.0 * (1 + 1e-12); r *= 2.0) rs.push_back(r);
  const std::size_t half = rs.size() / 2;
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<const char*, InnerFunctionSpec>> fams{{"e^{i l}", InnerFunctionSpec::exponential(1.0)},
                                                                    {"two zeros", kTwoZeros}};
  for (const auto& [name, s] : fams) {
    RieszSmirnovInner b(s);
    std::vector<double> d(rs.size());
    parallel_for(rs.size(), [&](std::size_t i) { d[i] = charfn_TF(b, rs[i]) - height(b, rs[i]); });
    auto need = [&](std::size_t i) {
      const double l = std::log(rs[i]);
      return std::max(-(d[i] + l), d[i] + 0.5 * l);
    };
    double c_fit = -kInf, c_up = -kInf;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      double& c = i < half ? c_fit : c_up;
      c = std::max(c, need(i));
    }
    // Stable: the upper half needs at most the fitted constant plus quadrature slack.
    ok = ok && c_up <= c_fit + 0.05;
    detail += name + fmt(": C_fit=%.3f C_upper=%.3f  ", c_fit, c_up);
  }
  return {ok, detail};
}

Outcome defect_value() {
  // e^{i l} times the congruence of e^{2 i l} at tau = 0.5; c = 0 sees only the second factor's zeros.
  auto b = product({make_inner(InnerFunctionSpec::exponential(1.0)),
                    congruence(InnerFunctionSpec::exponential(2.0), MoebiusParams(1.0, 0.5))});
  const BoundaryCondition bc = BoundaryCondition::at(0.0);
  const double r = 2000.0;
  const double h = height(*b, r), m = proximity(*b, bc, r);
  // Zeros in closed form: e^{2 i l} = 1/2 at l = pi k + i ln(2)/2.
  std::vector<Root> roots;
  for (int k = -700; k <= 700; ++k) roots.push_back({cplx(kPi * k, 0.5 * std::log(2.0)), 1});
  const double n = counting_function(roots, r);
  const double est = m / h;
  return {std::abs(est - 1.0 / 3.0) <= 0.05,
          fmt("m/h at r=2000 = %.4f (h=%.2f, h-N-m=%.3f)", est, h, h - n - m)};
}

// ---------------------------------------------------------------- models

Outcome kernel_intertwinings() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-4.0, 4.0), im(0.05, 3.0);
  double w12 = 0.0, w23 = 0.0, psd = 0.0;
  for (const auto& s : random_specs()) {
    const auto e = debranges_from_inner(s);
    RieszSmirnovInner b(s);
    auto m = cayley_to_weyl(s);
    for (int k = 0; k < 100; ++k) {
      const cplx l(re(rng), im(rng)), mu(re(rng), im(rng));
      const cplx k2 = kernel_K2(b, l, mu);
      w12 = std::max(w12, rel(kernel_K1(e, l, mu), e.e(l) * std::conj(e.e(mu)) * k2));
      w23 = std::max(w23, rel(k2, 2.0 * kernel_K3(*m, l, mu) / ((m->value(l) + kI) * std::conj(m->value(mu) + kI))));
    }
    std::vector<cplx> pts, reals, eig;
    for (int k = 0; k < 12; ++k) {
      pts.emplace_back(re(rng), im(rng));
      reals.emplace_back(-5.5 + k, 0.0);
    }
    for (const Root& r : spectrum(b, BoundaryCondition::at(1.0), Window::interval(-6, 6))) eig.push_back(r.location);
    if (eig.size() > 12) eig.resize(12);
    std::vector<KernelMatrix> ms{
        kernel_matrix(KernelId::K1, pts, [&](cplx x, cplx y) { return kernel_K1(e, x, y); }),
        kernel_matrix(KernelId::K2, pts, [&](cplx x, cplx y) { return kernel_K2(b, x, y); }),
        kernel_matrix(KernelId::K3, pts, [&](cplx x, cplx y) { return kernel_K3(*m, x, y); }),
        kernel_matrix(KernelId::K4, reals, [&](cplx x, cplx y) { return cplx(kernel_K4(e, x.real(), y.real())); }),
        kernel_matrix(KernelId::K5, eig, [&](cplx x, cplx y) { return cplx(kernel_K5(b, x.real(), y.real())); })};
    for (const auto& km : ms) psd = std::max(psd, std::max(0.0, -km.min_eigenvalue()) / km.trace());
  }
  return {w12 <= 1e-10 && w23 <= 1e-10 && psd <= 1e-8,
          fmt("K1/K2 %.2e, K2/K3 %.2e, worst negative eigenvalue / trace %.2e", w12, w23, psd)};
}

Outcome sampling() {
  const auto spec = InnerFunctionSpec::exponential(kTwoPi);
  auto f = [](cplx l) {
    const cplx a = kPi * (l - 1.0 / 3.0) / 2.0;
    const cplx s = std::sin(a) / a;
    return std::exp(kI * kPi * l) * s * s;
  };
  std::vector<Sample> samples;
  for (int n = -200; n <= 200; ++n) samples.push_back({double(n), f(cplx(n, 0.0))});
  double worst = 0.0;
  // Points where |f| is not negligible; near its zeros a relative error says nothing.
  for (double x : {0.25, 1.3, -2.7, 3.5, -0.5, 7.1, -9.9, 15.25, 0.01, 5.5})
    worst = std::max(worst, std::abs(sample_reconstruct(spec, samples, x).value - f(x)) / std::abs(f(x)));
  return {worst < 1e-3, fmt("max relative error at 10 points = %.2e", worst)};
}

// ---------------------------------------------------------------- completeness

Outcome completeness_classification() {
  const std::vector<InnerFunctionSpec> specs{
      InnerFunctionSpec(1.0, 0.0, {{cplx(0, 1), 1}}),
      InnerFunctionSpec(1.0, 0.0, {{cplx(0, 1), 1}, {cplx(1, 2), 1}}),
      InnerFunctionSpec::exponential(1.0),
      InnerFunctionSpec(1.0, 1.0, {{cplx(0, 1), 1}}),
      InnerFunctionSpec(cplx(0, 1), 0.25, {{cplx(-3, 0.3), 1}, {cplx(1, 0.5), 2}, {cplx(4, 3), 1}}),
      InnerFunctionSpec::exponential(3.0)};
  int right = 0;
  double worst = 0.0;
  for (const auto& s : specs) {
    const CompletenessResult r = is_complete(s);
    right += (r.verdict == Completeness::Complete) == (s.mean_type() == 0.0);
    worst = std::max(worst, std::abs(r.estimate.estimate - s.mean_type()));
  }
  return {right == 6 && worst <= 1e-2, fmt("%g/6 verdicts match, max |estimate - b| = %.2e", right, worst)};
}

Outcome riesz_examples() {
  std::vector<cplx> sq;
  for (int j = 1; j <= 50; ++j) sq.emplace_back(0.0, -double(j) * j);
  const RieszDiagnostic a = riesz_diagnostic(sq);
  std::vector<cplx> line;
  for (int j = 1; j <= 200; ++j) line.emplace_back(double(j), -1.0);
  const RieszDiagnostic b = riesz_diagnostic(line);
  const bool decays = a.min_partial < 1e-3 && a.verdict == RieszVerdict::LikelyNot;
  const bool stable = std::abs(b.min_partial - b.min_partial_half) <= 0.1 * b.min_partial_half;
  const bool floor = b.min_partial > 0.1;
  return {decays && stable && floor,
          fmt("-i j^2: min %.2e; j - i: min %.4f (truncation 100: %.4f), floor 0.1 not reached", a.min_partial,
              b.min_partial, b.min_partial_half)};
}

Outcome biorthogonality() {
  const std::vector<cplx> ev{cplx(0, -1), cplx(1, -2), cplx(-2, -0.5), cplx(3, -1.5)};
  double worst = 0.0;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(biorthogonal_pairing(ev, k, j) - (k == j ? 1.0 : 0.0)));
  return {worst <= 1e-6, fmt("max |pairing - delta| = %.2e", worst)};
}

// ---------------------------------------------------------------- moment problem

const JacobiSpec& squares(int n) {
  static std::map<int, JacobiSpec> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, JacobiSpec::power_family(2.0, n)).first;
  return it->second;
}

Outcome nevanlinna_det() {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi), rad(0.0, 20.0);
  std::vector<cplx> pts;
  for (int k = 0; k < 50; ++k) pts.push_back(std::polar(rad(rng), ang(rng)));
  std::vector<double> dev(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { dev[i] = std::abs(nevanlinna_entries(squares(1600), pts[i]).det() - 1.0); });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {worst < 1e-6, fmt("max |det N - 1| at 50 points = %.2e", worst)};
}

Outcome interlacing_partition() {
  const JacobiSpec& s = squares(1600);
  const auto zb = von_neumann_spectrum(s, 0.0, -20, 20);
  const auto zd = von_neumann_spectrum(s, std::nullopt, -20, 20);
  const auto z1 = von_neumann_spectrum(s, 1.0, -20, 20);
  std::vector<std::pair<double, int>> all;
  for (double x : zb) all.emplace_back(x, 0);
  for (double x : zd) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end());
  bool interlace = !zb.empty() && !zd.empty();
  for (std::size_t i = 1; i < all.size(); ++i) interlace = interlace && all[i].second != all[i - 1].second;
  double gap = kInf;
  const std::vector<const std::vector<double>*> sets{&zb, &zd, &z1};
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      for (double x : *sets[i])
        for (double y : *sets[j]) gap = std::min(gap, std::abs(x - y));
  return {interlace && gap > 1e-8, fmt("%g zeros of b, %g of d, min gap across t = %.3f", zb.size(), zd.size(), gap)};
}

Outcome moment_round_trip() {
  // Masses beyond |x| = 100 are below 1e-20; resolving nodes out there takes N = 25600.
  const JacobiSpec& s = squares(25600);
  double worst = 0.0;
  std::vector<ExtensionParameter> ts{0.0, 1.0};
  std::vector<DiscreteMeasure> mus(ts.size());
  parallel_for(ts.size(), [&](std::size_t k) { mus[k] = von_neumann_measure(s, ts[k], -100, 100); });
  for (const DiscreteMeasure& mu : mus)
    for (int i = 0; i <= 4; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < mu.nodes.size(); ++k) sum += mu.masses[k] * std::pow(mu.nodes[k], i);
      const double ref = moments_from_jacobi(s, i);
      worst = std::max(worst, std::abs(sum - ref) / std::max(1.0, std::abs(ref)));
    }
  return {worst <= 1e-4, fmt("max relative moment mismatch, i <= 4, t in {0, 1}: %.2e", worst)};
}

Outcome moment_growth() {
  const JacobiSpec& s = squares(6400);
  SeriesOptions o;
  o.extrapolation_tol = 1e-4;
  const auto rs = decade_grid(5.0, 100.0, 4);
  std::vector<std::array<double, 5>> vals(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    const double r = rs[i];
    std::map<std::pair<double, double>, std::array<cplx, 4>> memo;
    auto entry = [&](int k) {
      return [&, k](cplx z) {
        auto key = std::make_pair(z.real(), z.imag());
        auto it = memo.find(key);
        if (it == memo.end()) {
          const NevanlinnaMatrixValue v = nevanlinna_entries(s, z, o);
          it = memo.emplace(key, std::array<cplx, 4>{v.a_val, v.b_val, v.c_val, v.d_val}).first;
        }
        return it->second[k];
      };
    };
    vals[i][0] = TF_moment(s, r, o);
    for (int k = 0; k < 4; ++k) vals[i][k + 1] = nevanlinna_T_entire(entry(k), r, {1e-8, 1e-6, 4000});
  });
  const std::size_t half = rs.size() / 2;
  double c_fit = 0.0, c_up = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i)
    for (int k = 1; k <= 4; ++k) {
      double& c = i < half ? c_fit : c_up;
      c = std::max(c, std::abs(vals[i][0] - vals[i][k]) / std::log(rs[i]));
    }
  return {c_up <= c_fit, fmt("|TF - T_f| / ln r: fitted C = %.3f on r < %.0f, needed %.3f above", c_fit, rs[half], c_up)};
}

Outcome pedersen() {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const PedersenCheck p = shift_and_pedersen(squares(1600), cplx(u(rng), u(rng)));
    worst = std::max({worst, p.mismatch, p.c_mismatch});
  }
  return {worst < 1e-8, fmt("max relative mismatch = %.2e", worst)};
}

Outcome two_route_curvature() {
  const JacobiSpec& s = squares(1600);
  JacobiInner b(s);
  const auto us = linear_grid(-3.0, 3.0, 121);
  std::vector<double> dev(us.size());
  parallel_for(us.size(), [&](std::size_t i) { dev[i] = std::abs(curvature_from_polys(s, us[i]).omega - omega(b, us[i])); });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {worst <= 1e-5, fmt("max |omega_polys - omega| on [-3, 3] = %.2e", worst)};
}

// ---------------------------------------------------------------- comparison

Outcome eigenvalue_counts() {
  bool ok = true;
  std::string detail;
  for (double b : {1.0, kPi, 2.5})
    for (double r : {5.0, 20.0, 50.0}) {
      const auto ev = spectrum(InnerFunctionSpec::exponential(b), BoundaryCondition::at(1.0), Window::interval(-r, r));
      const double bound = std::floor(2.0 * r * std::sqrt(3.0 * b * b / 12.0) / kPi);
      const double n = static_cast<double>(ev.size());
      ok = ok && std::abs(n - bound) <= 1.0;
      if (r == 50.0) detail += fmt("b=%.3g r=50: %g vs %g  ", b, n, bound);
    }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"constant curvature", constant_curvature},
      {"rational flatness", rational_flatness},
      {"phase-density identity", phase_density},
      {"Schwarzian identity", schwarzian_identity},
      {"height closed form", height_closed_form},
      {"first main theorem residual", first_main_theorem},
      {"T_F vs height band", tf_height_band},
      {"defect value", defect_value},
      {"kernel intertwinings", kernel_intertwinings},
      {"sampling reconstruction", sampling},
      {"completeness classification", completeness_classification},
      {"Riesz examples", riesz_examples},
      {"biorthogonality", biorthogonality},
      {"Nevanlinna determinant", nevanlinna_det},
      {"interlacing and partition", interlacing_partition},
      {"moment round-trip", moment_round_trip},
      {"moment growth", moment_growth},
      {"Pedersen shift", pedersen},
      {"two-route curvature", two_route_curvature},
      {"eigenvalue-count bounds", eigenvalue_counts},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %-28s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
