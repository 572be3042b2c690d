#include "sgpipe/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "sgpipe/errors.hpp"

namespace sgpipe {

RadialGrid RadialGrid::gauss_legendre(int n) {
  if (n < 2) throw DomainError("gauss_legendre: need at least 2 nodes");
  RadialGrid g;
  g.r.resize(n);
  g.weight.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // nodes ascending in r
    g.r[i] = 0.5 * (1.0 - x);
    g.r[n - 1 - i] = 0.5 * (1.0 + x);
    g.weight[i] = g.weight[n - 1 - i] = 0.5 * w;
  }
  return g;
}

QuadratureResult radial_quadrature(const std::function<cdouble(double)>& integrand, int n) {
  if (n < 16) throw DomainError("radial_quadrature: n must be at least 16");
  auto apply = [&](int nodes) {
    const RadialGrid g = RadialGrid::gauss_legendre(nodes);
    cdouble sum = 0.0;
    for (int i = 0; i < nodes; ++i) sum += g.weight[i] * g.r[i] * integrand(g.r[i]);
    return sum;
  };
  QuadratureResult res;
  res.value = apply(n);
  res.doubled = apply(2 * n);
  const double scale = std::max(std::abs(res.doubled), 1e-300);
  res.rel_change = std::abs(res.value - res.doubled) / scale;
  res.converged = res.rel_change <= 1e-8;
  return res;
}

}  // namespace sgpipe
