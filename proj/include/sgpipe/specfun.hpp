#pragma once

#include <complex>
#include <vector>

namespace sgpipe {

using cdouble = std::complex<double>;

enum class CylinderKind { J, Y, I, K };

// Cylinder functions of integer order. Accurate to about 12 significant
// digits for |z| <= 200, |Im z| <= 50 (away from zeros of the function).
// J and I are entire; Y and K have a branch cut on the negative real axis
// and are evaluated on its upper lip there.
cdouble cyl_eval(CylinderKind kind, int order, cdouble z);
double cyl_eval(CylinderKind kind, int order, double x);

// Derivative with respect to the argument, from the three-term recurrences.
cdouble cyl_deriv(CylinderKind kind, int order, cdouble z);
double cyl_deriv(CylinderKind kind, int order, double x);

// Value and first derivative of J_n or I_n at a real argument in one pass.
struct CylPair {
  double value;
  double deriv;
};
CylPair bessel_j_pair(int order, double x);
CylPair bessel_i_pair(int order, double x);

// J_n(sqrt(x)) / x^(n/2) continued to x < 0 as I_n(sqrt(-x)) / |x|^(n/2).
// Entire and real in x; equals 1 / (2^n n!) at the origin.
double bessel_j_entire(int order, double x);

// k-th order, j-th positive zero of J_k. Supported for k <= 20, j <= 50.
double bessel_j_zero(int k, int j);

struct BesselZeroTable {
  int order = 0;
  std::vector<double> zeros;  // ascending

  static BesselZeroTable build(int order, int count);
};

// I_m(x) J_m'(x) - J_m(x) I_m'(x) at x = sqrt(lambda).
double cross_product_fn(int m, double lambda);

// Magnitude reference for cross_product_fn: |I_m J_m'| + |J_m I_m'|.
double cross_product_scale(int m, double lambda);

}  // namespace sgpipe
