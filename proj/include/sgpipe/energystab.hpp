#pragma once

#include <string>
#include <vector>

#include "sgpipe/params.hpp"
#include "sgpipe/profile.hpp"

namespace sgpipe {

// Roots of p(xi) = xi^3 + (m^2 R^4 / 4)(1 - eps xi)^2: one negative real
// root and a conjugate pair with xi2.imag() > 0.
struct CubicRoots {
  double xi1;
  cdouble xi2;
  cdouble xi3;
};

CubicRoots cubic_roots(int m, double reynolds, double epsilon);

// Real form of the 3x3 determinant with columns
// (xi_k^{-1} I_m(sqrt xi_k), I_m(sqrt xi_k), sqrt xi_k I_m'(sqrt xi_k)),
// obtained by dividing out the constant phase i^m (-2i).
double el_determinant(int m, double reynolds, double epsilon);

// Hadamard bound of the same determinant (product of column norms / 2).
double el_determinant_scale(int m, double reynolds, double epsilon);

// Smallest R in (0.5, 60] where el_determinant changes sign, 1 <= m <= 8.
double solve_Rm(int m, double epsilon);

struct EnergyReport {
  double epsilon = 0.0;
  std::vector<std::pair<int, double>> per_m;  // (m, R_m)
  double R_E = 0.0;
  int minimizing_m = 0;
  bool at_window_edge = false;  // minimum attained at m = m_max
  std::string warning;
};

EnergyReport energy_threshold(double epsilon, int m_max = 8);

// epsilon in [lo, hi] where R_{m_a} = R_{m_b}, by bisection.
double mode_crossing(int m_a, int m_b, double lo, double hi, double tol = 1e-7);

// c_R = 2 R eta_1 / (1 + eps eta_1) (1/R^2 - 1/R_E^2), eta_1 = alpha_{0,1}^2.
double decay_rate(const FluidParams& params, double R_E);

// Euler-Lagrange eigenfunction e^{i m theta}(w, psi) at a root R of the
// determinant, psi = sum c_k I_m(sqrt(xi_k) r).
AzimuthalField el_eigenfunction(int m, double reynolds, double epsilon);

struct EnergyForms {
  double I1;  // |grad w|^2 + |Delta psi|^2
  double I2;  // <psi_theta, w - eps Delta w>
};

// Energy functionals of the real field Re(f), by radial quadrature.
EnergyForms energy_forms(const AzimuthalField& f, double epsilon, int nodes = 200);

}  // namespace sgpipe
