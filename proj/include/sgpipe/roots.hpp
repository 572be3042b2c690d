#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "sgpipe/errors.hpp"

namespace sgpipe {

struct Bracket {
  double lo;
  double hi;
  double f_lo;
  double f_hi;
};

// Brent's method on a sign-changing bracket. Stops when the bracket is
// narrower than xtol (absolute) + rtol * |x|.
template <typename F>
double brent_root(F&& f, Bracket br, double rtol = 1e-15, double xtol = 0.0,
                  int max_iter = 200) {
  double a = br.lo, fa = br.f_lo;
  double b = br.hi, fb = br.f_hi;
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NonConvergence("brent_root: bracket has no sign change");

  double c = b, fc = fb;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                        0.5 * (xtol + rtol * std::abs(b));
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
  }
  throw NonConvergence("brent_root: iteration limit reached");
}

// Walks the points x_0 < x_1 < ... produced by next(i) and returns the
// first panel whose endpoint values differ in sign. A sample that is
// exactly zero is returned as a degenerate bracket [x, x].
template <typename F, typename Next>
std::optional<Bracket> first_sign_change(F&& f, Next&& next, int max_panels) {
  double x0 = next(0);
  double f0 = f(x0);
  if (f0 == 0.0) return Bracket{x0, x0, 0.0, 0.0};
  for (int i = 1; i <= max_panels; ++i) {
    const double x1 = next(i);
    const double f1 = f(x1);
    if (f1 == 0.0) return Bracket{x1, x1, 0.0, 0.0};
    if ((f0 > 0) != (f1 > 0)) return Bracket{x0, x1, f0, f1};
    x0 = x1;
    f0 = f1;
  }
  return std::nullopt;
}

}  // namespace sgpipe
