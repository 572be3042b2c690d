#pragma once

#include <vector>

#include "sgpipe/operators.hpp"
#include "sgpipe/params.hpp"
#include "sgpipe/profile.hpp"

namespace sgpipe {

struct LambdaMu {
  double lambda;
  double mu;
};

// lambda = (sqrt(eps) m R - beta) / (1/R + eps beta), mu = (-sqrt(eps) m R - beta) / (1/R + eps beta)
LambdaMu lambda_mu(int m, double beta, const FluidParams& params);

// sqrt(l) J_m(sqrt(l)) J_{m+1}(sqrt(u)) + sqrt(u) J_m(sqrt(u)) J_{m+1}(sqrt(l)) with the
// phase of negative arguments removed: |l u|^{(m+1)/2} * dispersion_reduced.
double dispersion(int m, double beta, const FluidParams& params);

// Magnitude reference for dispersion (sum of the absolute values of both products).
double dispersion_scale(int m, double beta, const FluidParams& params);

// Jh_m(l) Jh_{m+1}(u) + Jh_m(u) Jh_{m+1}(l) with Jh_n(x) = J_n(sqrt x) / x^{n/2}.
// Entire in (l, u): no branch choice and no spurious zeros at l = 0 or u = 0.
double dispersion_reduced(int m, double lambda, double mu);

// Smallest positive root of cross_product_fn(m, .), 1 <= m <= 20.
double solve_lambda_m1(int m);

struct CriticalPoint {
  double reynolds;
  int m;
};

// R_c = eps^{-1/4} min_{1 <= m <= 6} sqrt(lambda_{m,1} / m).
CriticalPoint critical_reynolds(double epsilon);

// beta_{m,1} >= beta_{m,2} >= ... ; the first `count` branches.
std::vector<double> solve_beta_branches(int m, int count, const FluidParams& params);
double solve_beta(int m, int j, const FluidParams& params);

// Which m = 0 family a merged index belongs to: 1 (w only) or 2 (psi only),
// and its index k inside that family.
struct ZeroModeIndex {
  int family;
  int k;
};
ZeroModeIndex zero_mode_index(int j, const FluidParams& params);

// d beta_{3,1} / dR at R_c by a centred difference with step 1e-4 R_c.
double pes_slope(double epsilon);

struct SpectralMode {
  int m = 0;
  int j = 1;
  double beta = 0.0;
  FluidParams params;
  AzimuthalField phi;      // eigenfunction, unit norm
  AzimuthalField adjoint;  // scaled so that <phi, M adjoint> = 1
};

// Eigenpair (m, j) with its adjoint; the mode for -m is the conjugate of the mode for m.
SpectralMode build_mode(int m, int j, const FluidParams& params, int nodes = 200);

struct LambdaBound {
  int m;
  double lower;   // bound on lambda_{m,1}^2
  double lambda;  // lambda_{m,1}
  double upper;
  bool holds;
};
std::vector<LambdaBound> verify_lambda_bounds(int m_max);

}  // namespace sgpipe
