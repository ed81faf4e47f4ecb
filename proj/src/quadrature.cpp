#include "aoi2d/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "aoi2d/constants.hpp"
#include "aoi2d/error.hpp"

namespace aoi2d {

namespace {

struct Segment {
  double a, m, b;
  double fa, fm, fb;
  double whole;
  double tol;
  int depth;
};

double simpson(double fa, double fm, double fb, double width) {
  return width / 6.0 * (fa + 4.0 * fm + fb);
}

// Simpson refinement on [a, b] with explicit stack. Adds evaluations to `evals`.
QuadResult simpson_panel(const std::function<double(double)>& f, double a, double b, double fa,
                         double fb, double tol, long& evals, long max_evals) {
  QuadResult r;
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  ++evals;
  std::vector<Segment> stack;
  stack.push_back({a, m, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0});
  while (!stack.empty()) {
    Segment s = stack.back();
    stack.pop_back();
    const double lm = 0.5 * (s.a + s.m);
    const double rm = 0.5 * (s.m + s.b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    if (evals > max_evals) {
      std::ostringstream os;
      os << "quadrature: evaluation budget exhausted; achieved error estimate "
         << r.error_estimate << " on partial value " << r.value;
      throw NumericError(os.str());
    }
    const double sl = simpson(s.fa, flm, s.fm, s.m - s.a);
    const double sr = simpson(s.fm, frm, s.fb, s.b - s.m);
    const double diff = sl + sr - s.whole;
    if (std::abs(diff) <= 15.0 * s.tol || s.depth >= 50 || (s.b - s.a) <= 1e-13 * std::abs(s.b)) {
      r.value += sl + sr + diff / 15.0;
      r.error_estimate += std::abs(diff) / 15.0;
      continue;
    }
    stack.push_back({s.m, rm, s.b, s.fm, frm, s.fb, sr, 0.5 * s.tol, s.depth + 1});
    stack.push_back({s.a, lm, s.m, s.fa, flm, s.fm, sl, 0.5 * s.tol, s.depth + 1});
  }
  r.evaluations = evals;
  return r;
}

}  // namespace

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double abs_tol, long max_evaluations) {
  long evals = 2;
  auto r = simpson_panel(f, a, b, f(a), f(b), abs_tol, evals, max_evaluations);
  r.evaluations = evals;
  return r;
}

QuadResult integrate_tail(const TailIntegrand& in, double lo, const QuadOptions& opt) {
  const auto integrand = [&](double x) {
    const double v = in.f(x);
    return in.exp_weight ? (v == 0.0 ? 0.0 : v * std::exp(-x)) : v;
  };
  const auto next_break = [&](double x) {
    if (!in.next_break) return kInf;
    double b = in.next_break(x);
    // Guard against break generators that return x itself after round-off.
    int guard = 0;
    while (b <= x && guard++ < 8) b = in.next_break(std::nextafter(x, kInf) + 1e-12 * std::abs(x));
    return b > x ? b : kInf;
  };

  QuadResult total;
  long evals = 0;
  double a = lo;
  double width = opt.initial_width > 0.0 ? opt.initial_width : 1.0;
  double fa = integrand(a);
  ++evals;

  if (in.piecewise_constant) {
    while (true) {
      const double b = next_break(a);
      if (!std::isfinite(b)) {
        const double c = in.f(a + 1.0);
        ++evals;
        if (c == 0.0) break;
        if (in.exp_weight) {
          total.value += c * std::exp(-a);
          break;
        }
        throw NumericError("quadrature: constant non-zero tail, integral diverges");
      }
      const double c = in.f(0.5 * (a + b));
      ++evals;
      const double piece = in.exp_weight ? c * std::exp(-a) * -std::expm1(a - b) : c * (b - a);
      total.value += piece;
      if (c * (in.exp_weight ? std::exp(-b) : 1.0) < opt.truncation) break;
      a = b;
      if (evals > opt.max_evaluations) {
        std::ostringstream os;
        os << "quadrature: evaluation budget exhausted at x=" << a << " with integrand " << c;
        throw NumericError(os.str());
      }
    }
    total.evaluations = evals;
    return total;
  }

  while (true) {
    double b = a + width;
    const double nb = next_break(a);
    bool clipped = false;
    if (nb < b) {
      b = nb;
      clipped = true;
    }
    const double fb = integrand(b);
    ++evals;
    const double coarse = 0.5 * (fa + fb) * (b - a);
    const double scale = std::max(total.value + coarse, 1e-300);
    const double tol = std::max(opt.local_tol * (b - a) / width, 0.1 * opt.rel_tol * scale);
    const QuadResult p = simpson_panel(integrand, a, b, fa, fb, tol, evals, opt.max_evaluations);
    total.value += p.value;
    total.error_estimate += p.error_estimate;
    a = b;
    fa = fb;
    if (!std::isfinite(total.value)) throw NumericError("quadrature: non-finite integral");
    if (fb < opt.truncation && (fb == 0.0 || p.value < opt.rel_tol * total.value)) break;
    if (!clipped) width *= 2.0;
    if (evals > opt.max_evaluations || !std::isfinite(a)) {
      std::ostringstream os;
      os << "quadrature: no convergence; integrand " << fb << " at x=" << a
         << ", error estimate " << total.error_estimate;
      throw NumericError(os.str());
    }
  }
  total.evaluations = evals;
  if (total.error_estimate > std::max(opt.rel_tol * std::abs(total.value), 1e-12) * 10.0) {
    std::ostringstream os;
    os << "quadrature: achieved error estimate " << total.error_estimate << " exceeds tolerance";
    throw NumericError(os.str());
  }
  return total;
}

}  // namespace aoi2d
