#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "reference_data.hpp"
#include "sgpipe/energystab.hpp"
#include "sgpipe/errors.hpp"
#include "sgpipe/linstab.hpp"

using namespace sgpipe;
using doctest::Approx;

namespace {

const cdouble I(0.0, 1.0);

// I_m(z) by its power series, complex argument.
cdouble series_bessel_i(int m, cdouble z) {
  cdouble term = 1.0;
  for (int k = 1; k <= m; ++k) term *= 0.5 * z / double(k);
  cdouble sum = 0.0;
  for (int k = 0; k < 300; ++k) {
    sum += term;
    term *= 0.25 * z * z / ((k + 1.0) * (k + 1.0 + m));
  }
  return sum;
}

// Determinant built from companion-matrix roots and series Bessel values,
// divided by the phase i^m (-2i); real on the real R axis.
double oracle_determinant(int m, double R, double eps) {
  const double K = 0.25 * m * m * std::pow(R, 4);
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(1, 0) = comp(2, 1) = 1.0;
  comp(0, 2) = -K;
  comp(1, 2) = 2.0 * K * eps;
  comp(2, 2) = -K * eps * eps;
  const Eigen::Vector3cd ev = comp.eigenvalues();
  cdouble xi[3];
  int real_idx = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(ev(k).imag()) < std::abs(ev(real_idx).imag())) real_idx = k;
  xi[0] = ev(real_idx).real();
  for (int k = 0, n = 1; k < 3; ++k)
    if (k != real_idx) xi[n++] = ev(k);
  if (xi[1].imag() < 0) std::swap(xi[1], xi[2]);
  Eigen::Matrix3cd M;
  for (int k = 0; k < 3; ++k) {
    const cdouble s = std::sqrt(xi[k]);
    const cdouble v = series_bessel_i(m, s);
    const cdouble d = 0.5 * (series_bessel_i(m + 1, s) + (m > 0 ? series_bessel_i(m - 1, s) : series_bessel_i(1, s)));
    M(0, k) = v / xi[k];
    M(1, k) = v;
    M(2, k) = s * d;
  }
  const cdouble phase = std::pow(I, m) * (-2.0 * I);
  return (M.determinant() / phase).real();
}

double oracle_first_root(int m, double eps) {
  auto f = [&](double R) { return oracle_determinant(m, R, eps); };
  double prev = f(0.5);
  for (double R = 0.52; R <= 60.0; R += 0.02) {
    const double v = f(R);
    if ((v > 0) != (prev > 0)) return oracle::bisect(f, R - 0.02, R);
    prev = v;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("cubic roots at eps = 0") {
  const double R = 12.87;
  for (int m : {1, 3}) {
    const CubicRoots c = cubic_roots(m, R, 0.0);
    const double k = std::cbrt(0.25 * m * m * std::pow(R, 4));
    CHECK(c.xi1 == Approx(-k).epsilon(1e-12));
    CHECK(std::abs(c.xi2 - std::polar(k, M_PI / 3)) < 1e-12 * k);
    CHECK(std::abs(c.xi3 - std::conj(c.xi2)) < 1e-12 * k);
  }
}

TEST_CASE("cubic roots satisfy Vieta and match Cardano") {
  const CubicRoots c0 = cubic_roots(1, 12.87, 0.0);
  CHECK(c0.xi1 == Approx(oracle::cardano_real_root(0.0, 0.0, 0.25 * std::pow(12.87, 4))).epsilon(1e-12));
  for (int m : {1, 2, 5, 8})
    for (double R : {1.0, 11.0, 40.0})
      for (double eps : {0.0, 1e-3, 0.02, 0.5}) {
        const double K = 0.25 * m * m * std::pow(R, 4);
        const double a = K * eps * eps, b = -2.0 * K * eps, cc = K;
        const CubicRoots c = cubic_roots(m, R, eps);
        const cdouble x1 = c.xi1, x2 = c.xi2, x3 = c.xi3;
        const double s = std::abs(x1) + std::abs(x2) + std::abs(x3);
        CAPTURE(m);
        CAPTURE(R);
        CAPTURE(eps);
        CHECK(c.xi1 < 0.0);
        CHECK(c.xi2.imag() > 0.0);
        CHECK(std::abs(x3 - std::conj(x2)) < 1e-12 * s);
        CHECK(std::abs(x1 + x2 + x3 + a) < 1e-12 * std::max(s, std::abs(a)));
        CHECK(std::abs(x1 * x2 + x1 * x3 + x2 * x3 - b) < 1e-12 * std::max(s * s, std::abs(b)));
        CHECK(std::abs(x1 * x2 * x3 + cc) < 1e-12 * std::max(s * s * s, cc));
        CHECK(c.xi1 == Approx(oracle::cardano_real_root(a, b, cc)).epsilon(1e-10));
      }
}

TEST_CASE("determinant vanishes near the tabulated thresholds") {
  for (auto [m, eps, R] : {std::tuple{1, 0.0, 12.87}, std::tuple{2, 0.02, 10.83}}) {
    CAPTURE(m);
    CHECK(std::abs(el_determinant(m, R, eps)) < 1e-4 * el_determinant_scale(m, R, eps));
    CHECK((el_determinant(m, R - 0.01, eps) > 0) != (el_determinant(m, R + 0.01, eps) > 0));
  }
}

TEST_CASE("determinant matches an independent construction") {
  for (int m : {1, 2, 4})
    for (double eps : {0.0, 0.01, 0.05})
      for (double R : {3.0, 9.5, 14.0}) {
        const double d = el_determinant(m, R, eps);
        CAPTURE(m);
        CAPTURE(eps);
        CAPTURE(R);
        CHECK(std::abs(d - oracle_determinant(m, R, eps)) < 1e-9 * el_determinant_scale(m, R, eps));
      }
}

TEST_CASE("solve_Rm agrees with a dense-scan oracle") {
  for (int m = 1; m <= 8; ++m)
    for (double eps : {0.0, 0.003, 0.02, 0.05}) {
      CAPTURE(m);
      CAPTURE(eps);
      CHECK(solve_Rm(m, eps) == Approx(oracle_first_root(m, eps)).epsilon(1e-7));
    }
}

TEST_CASE("solve_Rm examples") {
  CHECK(solve_Rm(1, 1e-4) == Approx(12.8648).epsilon(5e-4));
  CHECK(solve_Rm(3, 0.05) == Approx(8.37062).epsilon(5e-4));
}

TEST_CASE("threshold table") {
  for (const refdata::EnergyRow& row : refdata::kEnergyTable) {
    const EnergyReport rep = energy_threshold(row.epsilon);
    CAPTURE(row.epsilon);
    REQUIRE(rep.per_m.size() == 8);
    for (int m = 1; m <= 5; ++m) {
      CAPTURE(m);
      CHECK(rep.per_m[m - 1].first == m);
      CHECK(std::abs(rep.per_m[m - 1].second - row.R[m - 1]) <= 0.01 + 1e-9);
    }
    CHECK(std::abs(rep.R_E - row.R_E) <= 0.01 + 1e-9);
    CHECK(rep.minimizing_m == row.minimizing_m);
    CHECK_FALSE(rep.at_window_edge);
    CHECK(rep.warning.empty());
  }
}

TEST_CASE("window edge warning and argument ranges") {
  const EnergyReport rep = energy_threshold(0.05, 5);
  CHECK(rep.minimizing_m == 5);
  CHECK(rep.at_window_edge);
  CHECK_FALSE(rep.warning.empty());
  CHECK(energy_threshold(0.05, 8).R_E <= rep.R_E);
  CHECK_THROWS_AS(energy_threshold(0.01, 4), RangeError);
  CHECK_THROWS_AS(energy_threshold(0.01, 9), RangeError);
  CHECK_THROWS_AS(energy_threshold(-0.01), DomainError);
  CHECK_THROWS_AS(solve_Rm(9, 0.01), RangeError);
  CHECK_THROWS_AS(solve_Rm(0, 0.01), RangeError);
  CHECK_THROWS_AS(cubic_roots(1, -1.0, 0.0), DomainError);
}

TEST_CASE("decay rate") {
  const double eta = std::pow(bessel_j_zero(0, 1), 2);
  CHECK(eta == Approx(5.7832).epsilon(1e-4));
  const double RE = energy_threshold(0.0).R_E;
  CHECK(std::abs(decay_rate({0.0, RE}, RE)) < 1e-14);
  CHECK(decay_rate({0.0, 0.5 * RE}, RE) == Approx(3.0 * eta / RE).epsilon(1e-12));
  CHECK(decay_rate({0.01, 2.0 * RE}, RE) < 0.0);
  CHECK_THROWS_AS(decay_rate({0.0, 1.0}, 0.0), DomainError);
}

TEST_CASE("energy threshold lies below the linear threshold") {
  double prev_gap = 1e300;
  for (double eps : refdata::kCriticalEps) {
    const double RE = energy_threshold(eps).R_E;
    const double Rc = critical_reynolds(eps).reynolds;
    CAPTURE(eps);
    CHECK(RE < Rc);
    CHECK(Rc - RE < prev_gap);
    prev_gap = Rc - RE;
  }
}

TEST_CASE("R_m curves") {
  for (int m = 1; m <= 3; ++m) {
    double prev = 1e300;
    for (int i = 0; i < 20; ++i) {
      const double eps = refdata::curve_epsilon(i);
      const double R = solve_Rm(m, eps);
      CAPTURE(m);
      CAPTURE(eps);
      CHECK(R == Approx(refdata::kEnergyCurves[m - 1][i]).epsilon(5e-4));
      CHECK(R < prev);
      prev = R;
    }
  }
}

TEST_CASE("mode crossings") {
  const double e12 = mode_crossing(1, 2, 1e-3, 0.02);
  const double e23 = mode_crossing(2, 3, 0.01, 0.05);
  CHECK(std::abs(e12 - refdata::kCrossing12) <= refdata::kCrossing12Tol);
  CHECK(std::abs(e23 - refdata::kCrossing23) <= refdata::kCrossing23Tol);
  CHECK(solve_Rm(1, e12) == Approx(solve_Rm(2, e12)).epsilon(1e-6));
  CHECK_THROWS_AS(mode_crossing(1, 2, 0.02, 0.05), NonConvergence);
}

TEST_CASE("Euler-Lagrange eigenfunction is a critical point of the energy quotient") {
  for (auto [m, eps] : {std::pair{1, 0.0}, std::pair{2, 0.02}, std::pair{3, 0.01}}) {
    const double R = solve_Rm(m, eps);
    const AzimuthalField f = el_eigenfunction(m, R, eps);
    CAPTURE(m);
    CHECK(std::abs(f.w.value(1.0)) < 1e-10);
    CHECK(std::abs(f.psi.value(1.0)) < 1e-10);
    CHECK(std::abs(f.psi.derivative(1.0)) < 1e-10);
    const EnergyForms F = energy_forms(f, eps);
    REQUIRE(F.I2 > 0.0);
    CHECK(std::sqrt(F.I1 / F.I2) == Approx(R).epsilon(1e-6));
    // Energy growth -I1 / R + R I2 changes sign across R_m.
    CHECK(-F.I1 / (0.9 * R) + 0.9 * R * F.I2 < 0.0);
    CHECK(-F.I1 / (1.1 * R) + 1.1 * R * F.I2 > 0.0);
    CHECK_THROWS_AS(el_eigenfunction(m, 0.9 * R, eps), DegenerateError);
  }
}
