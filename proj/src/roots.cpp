#include "weyl/roots.hpp"

#include <array>
#include <sstream>

namespace weyl {

namespace {

double edge_phase(const AnalyticFn& f, cplx a, cplx b, const RootOptions& opt) {
  const double len = std::abs(b - a);
  auto [fa, da] = f(a);
  if (fa == cplx(0.0)) fail(ErrorCode::WindowOnPole, "zero on the contour");
  auto fail_near = [&](cplx z) {
    std::ostringstream os;
    os << "contour passes through or too close to a zero near " << z;
    fail(ErrorCode::WindowOnPole, os.str());
  };
  // Step control: |f'/f| bounds the angular speed, and the realized change
  // of arg over a step must stay below pi/4.
  double t = 0.0, total = 0.0;
  while (t < 1.0) {
    const double speed = std::abs(da / fa) * len;
    double h = std::min(0.25, speed > 0.0 ? (kPi / 8.0) / speed : 0.25);
    for (;;) {
      if (h * len < opt.min_step) fail_near(a + (b - a) * t);
      const double tn = std::min(1.0, t + h);
      auto [fb, db] = f(a + (b - a) * tn);
      if (fb == cplx(0.0) || !std::isfinite(std::abs(fb))) fail_near(a + (b - a) * tn);
      const double d = std::arg(fb / fa);
      const double speed_b = std::abs(db / fb) * len;
      if (std::abs(d) > kPi / 4.0 || speed_b * h > kPi / 2.0) {
        h *= 0.5;
        continue;
      }
      total += d;
      t = tn;
      fa = fb;
      da = db;
      break;
    }
  }
  return total;
}

cplx newton(const AnalyticFn& f, cplx z, int mult, bool& ok) {
  ok = false;
  for (int it = 0; it < 60; ++it) {
    auto [v, d] = f(z);
    if (v == cplx(0.0)) {
      ok = true;
      return z;
    }
    if (d == cplx(0.0) || !std::isfinite(std::abs(d))) return z;
    const cplx step = double(mult) * v / d;
    z -= step;
    if (!std::isfinite(std::abs(z))) return z;
    if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(z))) {
      ok = true;
      return z;
    }
  }
  // Stagnation at roundoff level still counts.
  auto [v, d] = f(z);
  ok = d != cplx(0.0) && std::abs(double(mult) * v / d) <= 1e-12 * std::max(1.0, std::abs(z));
  return z;
}

}  // namespace

int winding_number(const AnalyticFn& f, const Rect& r, const RootOptions& opt) {
  const std::array<cplx, 4> c{cplx(r.x0, r.y0), cplx(r.x1, r.y0), cplx(r.x1, r.y1), cplx(r.x0, r.y1)};
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += edge_phase(f, c[k], c[(k + 1) % 4], opt);
  const double w = total / kTwoPi;
  const double n = std::round(w);
  if (std::abs(w - n) > 1e-3) fail(ErrorCode::WindowOnPole, "winding number is not an integer");
  return static_cast<int>(n);
}

std::vector<Root> find_roots(const AnalyticFn& f, const Rect& window, const RootOptions& opt) {
  struct Box {
    Rect r;
    int n;
  };
  std::vector<Root> out;
  const int n0 = winding_number(f, window, opt);
  if (n0 < 0) fail(ErrorCode::DomainError, "negative winding number: f has poles in the window");
  std::vector<Box> stack{{window, n0}};
  static constexpr double kOffsets[] = {0.5123, 0.4711, 0.5377, 0.4409, 0.5861};
  int boxes = 0;
  while (!stack.empty()) {
    Box b = stack.back();
    stack.pop_back();
    if (b.n == 0) continue;
    if (++boxes > opt.max_boxes) fail(ErrorCode::NoConvergence, "root subdivision budget exhausted");
    const cplx centre(0.5 * (b.r.x0 + b.r.x1), 0.5 * (b.r.y0 + b.r.y1));
    const double size = std::max(b.r.width(), b.r.height());
    if (b.n == 1) {
      bool ok;
      cplx z = newton(f, centre, 1, ok);
      if (ok && b.r.contains(z)) {
        out.push_back({z, 1});
        continue;
      }
      if (size < opt.cluster_size) {
        out.push_back({centre, 1});
        continue;
      }
    } else if (size < opt.cluster_size) {
      bool ok;
      cplx z = newton(f, centre, b.n, ok);
      out.push_back({ok && std::abs(z - centre) < size ? z : centre, b.n});
      continue;
    }
    // Split the longer side slightly off-centre; retry elsewhere if a zero sits on the cut.
    bool split = false;
    for (double frac : kOffsets) {
      Rect a = b.r, c = b.r;
      if (b.r.width() >= b.r.height()) {
        const double x = b.r.x0 + frac * b.r.width();
        a.x1 = x;
        c.x0 = x;
      } else {
        const double y = b.r.y0 + frac * b.r.height();
        a.y1 = y;
        c.y0 = y;
      }
      try {
        const int na = winding_number(f, a, opt);
        const int nc = b.n - na;
        if (na < 0 || nc < 0) continue;
        stack.push_back({a, na});
        stack.push_back({c, nc});
        split = true;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::WindowOnPole) throw;
      }
    }
    if (!split) {
      // Cannot separate: report as a cluster at the centre.
      out.push_back({centre, b.n});
    }
  }
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

}  // namespace weyl
