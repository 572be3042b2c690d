#include "doctest.h"

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "sgpipe/errors.hpp"
#include "sgpipe/specfun.hpp"

using namespace sgpipe;
using doctest::Approx;

namespace {

const cdouble I(0.0, 1.0);

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

cdouble ipow(int m) {
  const cdouble p[4] = {1.0, I, -1.0, -I};
  return p[((m % 4) + 4) % 4];
}

// I_n(x) by its (non-alternating) power series.
double series_bessel_i(int n, double x) {
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= 0.5 * x / k;
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= 0.25 * x * x / ((k + 1.0) * (k + 1.0 + n));
  }
  return sum;
}

}  // namespace

TEST_CASE("J_0(0) is one") { CHECK(cyl_eval(CylinderKind::J, 0, cdouble(0.0)) == cdouble(1.0)); }

TEST_CASE("J matches a compensated power series") {
  CHECK(rel(cyl_eval(CylinderKind::J, 1, cdouble(2.5)), oracle::series_bessel_j(1, 2.5)) < 1e-12);
  for (int n : {0, 1, 2, 3, 5, 8})
    for (double x : {0.3, 1.0, 1.99, 2.01, 4.7, 9.0}) {
      CAPTURE(n);
      CAPTURE(x);
      CHECK(std::abs(cyl_eval(CylinderKind::J, n, x) - oracle::series_bessel_j(n, x)) <
            1e-12 * std::max(1.0, std::abs(oracle::series_bessel_j(n, x))));
    }
}

TEST_CASE("I matches its power series") {
  for (int n : {0, 1, 3, 6})
    for (double x : {0.5, 2.0, 7.5, 15.0}) {
      CAPTURE(n);
      CAPTURE(x);
      CHECK(cyl_eval(CylinderKind::I, n, x) == Approx(series_bessel_i(n, x)).epsilon(1e-12));
    }
}

TEST_CASE("negative order of J and Y") {
  for (int m : {1, 2, 5}) {
    CHECK(rel(cyl_eval(CylinderKind::J, -m, cdouble(3.3)), (m % 2 ? -1.0 : 1.0) * cyl_eval(CylinderKind::J, m, cdouble(3.3))) < 1e-14);
    CHECK(rel(cyl_eval(CylinderKind::Y, -m, cdouble(3.3)), (m % 2 ? -1.0 : 1.0) * cyl_eval(CylinderKind::Y, m, cdouble(3.3))) < 1e-14);
  }
}

TEST_CASE("rotation J_m(ix) = i^m I_m(x)") {
  CHECK(rel(cyl_eval(CylinderKind::J, 3, I * 1.7), ipow(3) * cyl_eval(CylinderKind::I, 3, cdouble(1.7))) < 1e-12);
  for (int m = 0; m <= 10; ++m)
    for (double x = 0.25; x <= 20.0; x += 0.25) {
      const cdouble im = cyl_eval(CylinderKind::I, m, cdouble(x));
      CAPTURE(m);
      CAPTURE(x);
      CHECK(std::abs(cyl_eval(CylinderKind::J, m, I * x) - ipow(m) * im) < 1e-11 * std::abs(im));
    }
}

TEST_CASE("J'_0 = -J_1") {
  CHECK(rel(cyl_deriv(CylinderKind::J, 0, cdouble(3.1)), -cyl_eval(CylinderKind::J, 1, cdouble(3.1))) < 1e-14);
}

TEST_CASE("Wronskian of J and Y") {
  const double x = 4.2;
  const double w = cyl_eval(CylinderKind::J, 3, x) * cyl_deriv(CylinderKind::Y, 3, x) -
                   cyl_deriv(CylinderKind::J, 3, x) * cyl_eval(CylinderKind::Y, 3, x);
  CHECK(w == Approx(2.0 / (M_PI * x)).epsilon(1e-10));
  for (int m : {0, 1, 4, 7})
    for (double t : {0.6, 2.0, 11.0, 30.0}) {
      const double v = cyl_eval(CylinderKind::J, m, t) * cyl_deriv(CylinderKind::Y, m, t) -
                       cyl_deriv(CylinderKind::J, m, t) * cyl_eval(CylinderKind::Y, m, t);
      CHECK(v == Approx(2.0 / (M_PI * t)).epsilon(1e-10));
    }
}

TEST_CASE("Wronskian of I and K") {
  for (int m : {0, 1, 2, 5, 9})
    for (double x = 0.5; x <= 20.0; x += 0.5) {
      const double v = cyl_eval(CylinderKind::I, m, x) * cyl_deriv(CylinderKind::K, m, x) -
                       cyl_deriv(CylinderKind::I, m, x) * cyl_eval(CylinderKind::K, m, x);
      CAPTURE(m);
      CAPTURE(x);
      CHECK(v == Approx(-1.0 / x).epsilon(1e-10));
    }
}

TEST_CASE("three-term recurrence on real and complex arguments") {
  for (int m = 1; m <= 10; ++m)
    for (double r : {0.5, 1.5, 4.0, 12.0, 30.0, 50.0})
      for (double arg : {0.0, 0.7, 1.4}) {
        const cdouble z = std::polar(r, arg);
        const cdouble lhs = cyl_eval(CylinderKind::J, m - 1, z) + cyl_eval(CylinderKind::J, m + 1, z);
        const cdouble rhs = 2.0 * double(m) / z * cyl_eval(CylinderKind::J, m, z);
        const double scale = std::abs(cyl_eval(CylinderKind::J, m - 1, z)) + std::abs(cyl_eval(CylinderKind::J, m + 1, z));
        CAPTURE(m);
        CAPTURE(z);
        CHECK(std::abs(lhs - rhs) < 1e-10 * scale);
      }
}

TEST_CASE("derivatives agree with centred differences") {
  const double x = 1.3, h = 1e-5 * std::max(1.0, x);
  const double fd = (cyl_eval(CylinderKind::I, 2, x + h) - cyl_eval(CylinderKind::I, 2, x - h)) / (2 * h);
  CHECK(cyl_deriv(CylinderKind::I, 2, x) == Approx(fd).epsilon(1e-8));
  for (CylinderKind k : {CylinderKind::J, CylinderKind::Y, CylinderKind::I, CylinderKind::K})
    for (cdouble z : {cdouble(0.9, 0.0), cdouble(3.7, 1.2), cdouble(8.0, -2.5)}) {
      const double hz = 1e-5 * std::max(1.0, std::abs(z));
      const cdouble d = (cyl_eval(k, 3, z + hz) - cyl_eval(k, 3, z - hz)) / (2 * hz);
      CHECK(rel(cyl_deriv(k, 3, z), d) < 1e-8);
    }
}

TEST_CASE("series and recurrence branches agree at the crossover") {
  for (int m : {0, 1, 4, 10})
    for (double arg = 0.0; arg < 2 * M_PI; arg += 0.3) {
      const cdouble a = std::polar(2.0 - 1e-14, arg), b = std::polar(2.0 + 1e-14, arg);
      for (CylinderKind k : {CylinderKind::J, CylinderKind::I})
        CHECK(rel(cyl_eval(k, m, a), cyl_eval(k, m, b)) < 1e-11);
    }
}

TEST_CASE("paired value and derivative evaluators") {
  for (int n : {0, 3})
    for (double x : {0.4, 5.5, 40.0}) {
      const CylPair j = bessel_j_pair(n, x);
      CHECK(j.value == Approx(cyl_eval(CylinderKind::J, n, x)).epsilon(1e-13));
      CHECK(j.deriv == Approx(cyl_deriv(CylinderKind::J, n, x)).epsilon(1e-12));
      const CylPair i = bessel_i_pair(n, x);
      CHECK(i.value == Approx(cyl_eval(CylinderKind::I, n, x)).epsilon(1e-13));
      CHECK(i.deriv == Approx(cyl_deriv(CylinderKind::I, n, x)).epsilon(1e-12));
    }
}

TEST_CASE("entire reduced Bessel function") {
  CHECK(bessel_j_entire(0, 0.0) == 1.0);
  CHECK(bessel_j_entire(3, 0.0) == Approx(1.0 / 48.0).epsilon(1e-15));
  for (int n : {0, 2, 5}) {
    const double x = 7.3;
    CHECK(bessel_j_entire(n, x) == Approx(oracle::series_bessel_j(n, std::sqrt(x)) / std::pow(x, 0.5 * n)).epsilon(1e-12));
    CHECK(bessel_j_entire(n, -x) == Approx(series_bessel_i(n, std::sqrt(x)) / std::pow(x, 0.5 * n)).epsilon(1e-12));
    CHECK(bessel_j_entire(n, 1e-9) == Approx(bessel_j_entire(n, -1e-9)).epsilon(1e-9));
  }
}

TEST_CASE("zeros of J_k against bisection") {
  auto j0 = [](double x) { return oracle::series_bessel_j(0, x); };
  auto j1 = [](double x) { return oracle::series_bessel_j(1, x); };
  CHECK(bessel_j_zero(0, 1) == Approx(oracle::bisect(j0, 2.0, 3.0)).epsilon(1e-14));
  CHECK(bessel_j_zero(1, 1) == Approx(oracle::bisect(j1, 3.0, 4.0)).epsilon(1e-14));
  CHECK(bessel_j_zero(0, 1) == Approx(2.404825557695773).epsilon(1e-14));
  CHECK(bessel_j_zero(1, 1) == Approx(3.831705970207512).epsilon(1e-14));
  CHECK(bessel_j_zero(0, 2) > bessel_j_zero(0, 1));
}

TEST_CASE("zero residuals and interlacing over the supported range") {
  for (int k = 0; k <= 20; ++k) {
    const BesselZeroTable t = BesselZeroTable::build(k, 50);
    REQUIRE(t.zeros.size() == 50);
    for (int j = 0; j < 50; ++j) {
      const double z = t.zeros[j];
      CAPTURE(k);
      CAPTURE(j);
      CHECK(std::abs(cyl_eval(CylinderKind::J, k, z)) < 1e-12 * std::max(1.0, std::abs(cyl_deriv(CylinderKind::J, k, z)) * z));
      if (j > 0) CHECK(z > t.zeros[j - 1]);
      if (k < 20) CHECK(z < bessel_j_zero(k + 1, j + 1));
      if (k < 20 && j < 49) CHECK(bessel_j_zero(k + 1, j + 1) < t.zeros[j + 1]);
    }
  }
}

TEST_CASE("cross product function near its first roots") {
  CHECK(std::abs(cross_product_fn(3, 51.030)) < 1e-3 * cross_product_scale(3, 51.030));
  CHECK(std::abs(cross_product_fn(1, 21.260)) < 1e-3 * cross_product_scale(1, 21.260));
  // Dense scan: no sign change before the first true root, which lies in (40, 60).
  double first = 0.0;
  double prev = cross_product_fn(3, 0.01);
  for (double l = 0.02; l <= 60.0; l += 0.01) {
    const double v = cross_product_fn(3, l);
    if ((v > 0) != (prev > 0)) {
      first = l;
      break;
    }
    prev = v;
  }
  CHECK(first > 40.0);
  CHECK(first < 60.0);
  CHECK(std::abs(cross_product_fn(3, 1e-6)) < 1e-12);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(cyl_eval(CylinderKind::K, 0, cdouble(0.0)), DomainError);
  CHECK_THROWS_AS(cyl_eval(CylinderKind::Y, 1, cdouble(0.0)), DomainError);
  CHECK_THROWS_AS(cyl_eval(CylinderKind::I, -1, cdouble(1.0)), DomainError);
  CHECK_THROWS_AS(cyl_eval(CylinderKind::I, 0, cdouble(800.0)), OverflowError);
  CHECK_THROWS_AS(bessel_j_zero(21, 1), RangeError);
  CHECK_THROWS_AS(bessel_j_zero(0, 51), RangeError);
  CHECK_THROWS_AS(bessel_j_zero(0, 0), RangeError);
  CHECK_THROWS_AS(cross_product_fn(3, 0.0), DomainError);
}
