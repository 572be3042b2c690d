#include "sgpipe/energystab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sgpipe/errors.hpp"
#include "sgpipe/quadrature.hpp"
#include "sgpipe/roots.hpp"
#include "sgpipe/specfun.hpp"

namespace sgpipe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kScanLo = 0.5;
constexpr double kScanHi = 60.0;
constexpr int kScanPanels = 600;

struct Cubic {
  double a, b, c;  // xi^3 + a xi^2 + b xi + c

  cdouble operator()(cdouble x) const { return ((x + a) * x + b) * x + c; }
  cdouble deriv(cdouble x) const { return (3.0 * x + 2.0 * a) * x + b; }
  double scale(cdouble x) const {
    const double t = std::abs(x);
    return t * t * t + std::abs(a) * t * t + std::abs(b) * t + std::abs(c);
  }
};

Cubic el_cubic(int m, double reynolds, double epsilon) {
  const double K = 0.25 * m * m * std::pow(reynolds, 4);
  return {K * epsilon * epsilon, -2.0 * K * epsilon, K};
}

void check_args(int m, double reynolds, double epsilon) {
  if (m < 1) throw RangeError("energy stability: m must be >= 1");
  if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw DomainError("energy stability: R must be > 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("energy stability: epsilon must be >= 0");
}

struct DeterminantColumns {
  Eigen::Matrix3cd matrix;
  cdouble sqrt_xi[3];
  cdouble xi[3];
};

DeterminantColumns determinant_columns(int m, double reynolds, double epsilon) {
  const CubicRoots roots = cubic_roots(m, reynolds, epsilon);
  DeterminantColumns out;
  out.xi[0] = roots.xi1;
  out.xi[1] = roots.xi2;
  out.xi[2] = roots.xi3;
  out.sqrt_xi[0] = std::sqrt(cdouble(roots.xi1, 0.0));
  out.sqrt_xi[1] = std::sqrt(roots.xi2);
  out.sqrt_xi[2] = std::conj(out.sqrt_xi[1]);
  for (int k = 0; k < 3; ++k) {
    const cdouble s = out.sqrt_xi[k];
    const cdouble i_m = cyl_eval(CylinderKind::I, m, s);
    out.matrix(0, k) = i_m / out.xi[k];
    out.matrix(1, k) = i_m;
    out.matrix(2, k) = s * cyl_deriv(CylinderKind::I, m, s);
  }
  return out;
}

cdouble determinant_phase(int m) {
  static const cdouble powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return powers[m % 4] * cdouble(0.0, -2.0);
}

}  // namespace

CubicRoots cubic_roots(int m, double reynolds, double epsilon) {
  check_args(m, reynolds, epsilon);
  const Cubic p = el_cubic(m, reynolds, epsilon);
  const double D = 18 * p.a * p.b * p.c - 4 * p.a * p.a * p.a * p.c + p.a * p.a * p.b * p.b - 4 * p.b * p.b * p.b -
                   27 * p.c * p.c;
  if (!(D < 0.0)) throw DomainError("cubic_roots: discriminant is not negative");

  // p(0) = K > 0 and the real root is negative; bracket it with the Cauchy bound.
  auto real_p = [&](double x) { return p(cdouble(x, 0.0)).real(); };
  const double bound = 1.0 + std::max({std::abs(p.a), std::abs(p.b), std::abs(p.c)});
  double x1 = brent_root(real_p, {-bound, 0.0, real_p(-bound), real_p(0.0)}, 1e-15);

  // Deflate: the pair solves xi^2 + (a + x1) xi - c / x1 = 0.
  const double pb = p.a + x1;
  const double pc = -p.c / x1;
  const double disc = pb * pb - 4.0 * pc;
  if (!(disc < 0.0)) throw DomainError("cubic_roots: expected a complex-conjugate pair");
  cdouble x2(-0.5 * pb, 0.5 * std::sqrt(-disc));
  for (int it = 0; it < 3; ++it) {
    const cdouble d = p.deriv(x2);
    if (d == cdouble(0.0)) break;
    x2 -= p(x2) / d;
  }
  for (const cdouble x : {cdouble(x1, 0.0), x2}) {
    if (std::abs(p(x)) > 1e-10 * p.scale(x)) throw NonConvergence("cubic_roots: residual too large");
  }
  if (x2.imag() < 0.0) x2 = std::conj(x2);
  return {x1, x2, std::conj(x2)};
}

double el_determinant(int m, double reynolds, double epsilon) {
  const DeterminantColumns cols = determinant_columns(m, reynolds, epsilon);
  const cdouble det = cols.matrix.determinant() / determinant_phase(m);
  // Near a root |det| is round-off itself, so measure against the column scale.
  double scale = 0.5;
  for (int k = 0; k < 3; ++k) scale *= cols.matrix.col(k).norm();
  if (std::abs(det.imag()) > 1e-8 * std::max(std::abs(det), 1e-6 * scale))
    throw DomainError("el_determinant: imaginary part exceeds tolerance (branch inconsistency)");
  return det.real();
}

double el_determinant_scale(int m, double reynolds, double epsilon) {
  const DeterminantColumns cols = determinant_columns(m, reynolds, epsilon);
  double s = 0.5;
  for (int k = 0; k < 3; ++k) s *= cols.matrix.col(k).norm();
  return s;
}

double solve_Rm(int m, double epsilon) {
  if (m < 1 || m > 8) throw RangeError("solve_Rm: m must be in [1, 8]");
  auto f = [&](double R) { return el_determinant(m, R, epsilon); };
  const double step = (kScanHi - kScanLo) / kScanPanels;
  double lo = kScanLo, flo = f(lo);
  for (int i = 1; i <= kScanPanels; ++i) {
    const double hi = kScanLo + i * step;
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if ((flo > 0) != (fhi > 0)) return brent_root(f, {lo, hi, flo, fhi}, 1e-13);
    lo = hi;
    flo = fhi;
  }
  throw NonConvergence("solve_Rm: no sign change in (0.5, 60]");
}

EnergyReport energy_threshold(double epsilon, int m_max) {
  if (m_max < 5 || m_max > 8) throw RangeError("energy_threshold: m_max must be in [5, 8]");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("energy_threshold: epsilon must be >= 0");
  EnergyReport rep;
  rep.epsilon = epsilon;
  rep.R_E = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= m_max; ++m) {
    const double Rm = solve_Rm(m, epsilon);
    rep.per_m.emplace_back(m, Rm);
    if (Rm < rep.R_E) {
      rep.R_E = Rm;
      rep.minimizing_m = m;
    }
  }
  if (rep.minimizing_m == m_max) {
    rep.at_window_edge = true;
    rep.warning = "R_E attained at m = m_max; a larger m window may lower it";
  }
  return rep;
}

double mode_crossing(int m_a, int m_b, double lo, double hi, double tol) {
  auto g = [&](double eps) { return solve_Rm(m_a, eps) - solve_Rm(m_b, eps); };
  double glo = g(lo);
  const double ghi = g(hi);
  if ((glo > 0) == (ghi > 0)) throw NonConvergence("mode_crossing: no sign change in the epsilon window");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double decay_rate(const FluidParams& params, double R_E) {
  params.validate();
  if (!(R_E > 0.0)) throw DomainError("decay_rate: R_E must be > 0");
  const double alpha = bessel_j_zero(0, 1);
  const double eta = alpha * alpha;
  const double R = params.reynolds;
  return 2.0 * R * eta / (1.0 + params.epsilon * eta) * (1.0 / (R * R) - 1.0 / (R_E * R_E));
}

AzimuthalField el_eigenfunction(int m, double reynolds, double epsilon) {
  const DeterminantColumns cols = determinant_columns(m, reynolds, epsilon);
  const cdouble half_mR2(0.0, -0.5 * m * reynolds * reynolds);
  Eigen::Matrix3cd bc;
  cdouble d_factor[3];
  for (int k = 0; k < 3; ++k) {
    d_factor[k] = half_mR2 * (1.0 / cols.xi[k] - epsilon);
    bc(0, k) = d_factor[k] * cols.matrix(1, k);
    bc(1, k) = cols.matrix(1, k);
    bc(2, k) = cols.matrix(2, k);
  }
  Eigen::Vector3d col_norm;
  for (int k = 0; k < 3; ++k) {
    col_norm(k) = bc.col(k).norm();
    bc.col(k) /= col_norm(k);
  }
  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(bc, Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv(2) > 1e-6 * sv(0)) throw DegenerateError("el_eigenfunction: R is not a root of the determinant");
  const Eigen::Vector3cd c = svd.matrixV().col(2);
  RadialProfile w(m), psi(m);
  for (int k = 0; k < 3; ++k) {
    const cdouble ck = c(k) / col_norm(k);
    psi.add(RadialBasis::BesselI, cols.sqrt_xi[k], ck);
    w.add(RadialBasis::BesselI, cols.sqrt_xi[k], d_factor[k] * ck);
  }
  return {m, w, psi};
}

EnergyForms energy_forms(const AzimuthalField& f, double epsilon, int nodes) {
  const int m = f.m;
  const RadialProfile lap_w = f.w.laplacian();
  const RadialProfile lap_psi = f.psi.laplacian();
  const RadialProfile g = one_minus_eps_laplacian(f.w, epsilon);
  auto grad_w = [&](double r) {
    const cdouble v = f.w.value(r), d = f.w.derivative(r);
    return cdouble(std::norm(d) + m * m * std::norm(v) / (r * r), 0.0);
  };
  auto lap2 = [&](double r) { return cdouble(std::norm(lap_psi.value(r)), 0.0); };
  auto cross = [&](double r) { return cdouble(0.0, m) * f.psi.value(r) * std::conj(g.value(r)); };
  const double I1 = kPi * (radial_quadrature(grad_w, nodes).value.real() + radial_quadrature(lap2, nodes).value.real());
  const double I2 = kPi * radial_quadrature(cross, nodes).value.real();
  return {I1, I2};
}

}  // namespace sgpipe
