#pragma once

#include <functional>

#include <Eigen/Dense>

#include "sgpipe/specfun.hpp"

namespace sgpipe {

// Gauss-Legendre rule mapped to [0, 1].
struct RadialGrid {
  Eigen::VectorXd r;
  Eigen::VectorXd weight;

  static RadialGrid gauss_legendre(int n);
  int size() const { return static_cast<int>(r.size()); }
};

struct QuadratureResult {
  cdouble value;
  cdouble doubled;   // the same integral with 2n nodes
  double rel_change;
  bool converged;    // rel_change <= 1e-8
};

// integral_0^1 integrand(r) r dr, checked against a rule with twice the nodes.
QuadratureResult radial_quadrature(const std::function<cdouble(double)>& integrand, int n = 200);

}  // namespace sgpipe
