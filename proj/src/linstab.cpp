#include "sgpipe/linstab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "sgpipe/errors.hpp"
#include "sgpipe/roots.hpp"
#include "sgpipe/specfun.hpp"

namespace sgpipe {

namespace {

constexpr int kMaxLambdaOrder = 20;
// Scan step in sqrt(lambda); J_m oscillates with period ~ 2 pi in that variable.
constexpr double kScanStep = 0.05;
constexpr double kScanRootLimit = 300.0;

void require_order(int m, const char* what) {
  if (m < 0) throw DomainError(std::string(what) + ": m must be >= 0");
}

double denominator(double beta, const FluidParams& p) {
  const double c = 1.0 / p.reynolds + p.epsilon * beta;
  if (std::abs(c) < 1e-14) throw DomainError("lambda_mu: 1/R + eps beta vanishes");
  return c;
}

double beta_from_s(double s, const FluidParams& p) { return -s / (p.reynolds * (1.0 + p.epsilon * s)); }

const std::array<double, kMaxLambdaOrder + 1>& lambda_table() {
  static const std::array<double, kMaxLambdaOrder + 1> table = [] {
    std::array<double, kMaxLambdaOrder + 1> t{};
    for (int m = 1; m <= kMaxLambdaOrder; ++m) {
      // bracket in x = sqrt(lambda); the analytic upper bound keeps x below ~ 2 (m + 5)
      auto f = [m](double x) { return cross_product_fn(m, x * x); };
      const double x_max = 4.0 * (m + 5);
      const int panels = static_cast<int>(x_max / kScanStep);
      auto br = first_sign_change(f, [](int i) { return 0.5 + kScanStep * i; }, panels);
      if (!br) throw NonConvergence("solve_lambda_m1: no sign change below the analytic bound");
      const double x = br->lo == br->hi ? br->lo : brent_root(f, *br, 1e-15);
      t[m] = x * x;
    }
    return t;
  }();
  return table;
}

struct BesselColumn {
  RadialBasis basis;
  double scale;
  double value;  // at r = 1
  double deriv;
};

// J_m(sqrt(x) r) for x > 0, I_m(sqrt(-x) r) for x < 0 (the rotation identity up to the constant i^m).
BesselColumn bessel_column(int m, double x) {
  if (x == 0.0) throw DegenerateError("build_mode: lambda or mu vanishes");
  const double a = std::sqrt(std::abs(x));
  const CylPair p = x > 0.0 ? bessel_j_pair(m, a) : bessel_i_pair(m, a);
  return {x > 0.0 ? RadialBasis::BesselJ : RadialBasis::BesselI, a, p.value, a * p.deriv};
}

// Null vector of a 3x3 boundary system with c_0 = 1 after column equilibration.
Eigen::Vector3cd null_vector(const Eigen::Matrix3cd& b) {
  Eigen::Vector3d col_scale;
  Eigen::Matrix3cd a = b;
  for (int k = 0; k < 3; ++k) {
    const double s = a.col(k).cwiseAbs().maxCoeff();
    if (s == 0.0) throw DegenerateError("build_mode: boundary matrix has a zero column");
    col_scale[k] = 1.0 / s;
    a.col(k) *= col_scale[k];
  }
  Eigen::JacobiSVD<Eigen::Matrix3cd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();
  if (sv[1] < 1e-10 * sv[0]) throw DegenerateError("build_mode: boundary matrix has rank < 2 (double root)");

  Eigen::Vector3cd y;
  Eigen::ColPivHouseholderQR<Eigen::Matrix<cdouble, 3, 2>> qr(a.rightCols<2>());
  const auto& r = qr.matrixR();
  if (std::abs(r(1, 1)) < 1e-10 * std::abs(r(0, 0))) {
    y = svd.matrixV().col(2);
  } else {
    const Eigen::Vector2cd rest = qr.solve(Eigen::Vector3cd(-a.col(0)));
    y << 1.0, rest[0], rest[1];
  }
  return col_scale.cast<cdouble>().asDiagonal() * y;
}

double max_abs_on_uniform(const RadialProfile& f, double& r_star) {
  double best = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double r = k / 1000.0;
    const double v = std::abs(f.value(r));
    if (v > best) {
      best = v;
      r_star = r;
    }
  }
  return best;
}

void normalize(SpectralMode& mode, const RadialGrid& grid) {
  const double norm = std::sqrt(std::real(inner_product(mode.phi, mode.phi, grid)));
  if (!(norm > 0.0)) throw DegenerateError("build_mode: eigenfunction has zero norm");
  double r_star = 0.0;
  const RadialProfile& ref = mode.phi.w.empty() ? mode.phi.psi : mode.phi.w;
  max_abs_on_uniform(ref, r_star);
  const cdouble v = ref.value(r_star);
  mode.phi = mode.phi.scaled(std::conj(v) / (std::abs(v) * norm));
  const cdouble s = inner_product(mode.phi, apply_M(mode.adjoint, mode.params.epsilon), grid);
  if (std::abs(s) < 1e-300) throw DegenerateError("build_mode: <phi, M phi*> vanishes");
  mode.adjoint = mode.adjoint.scaled(1.0 / std::conj(s));
}

SpectralMode zero_mode(int j, const FluidParams& p, const RadialGrid& grid) {
  const ZeroModeIndex idx = zero_mode_index(j, p);
  SpectralMode mode;
  mode.m = 0;
  mode.j = j;
  mode.params = p;
  RadialProfile w(0), psi(0);
  if (idx.family == 1) {
    const double a = bessel_j_zero(0, idx.k);
    w.add(RadialBasis::BesselJ, a, 1.0);
    mode.beta = -a * a / (p.reynolds * (1.0 + p.epsilon * a * a));
  } else {
    const double a = bessel_j_zero(1, idx.k);
    psi.add(RadialBasis::BesselJ, a, 1.0);
    psi.add(RadialBasis::Power, 0.0, -bessel_j_pair(0, a).value);
    mode.beta = -a * a / (p.reynolds * (1.0 + p.epsilon * a * a));
  }
  mode.phi = AzimuthalField(0, w, psi);
  // the m = 0 problem is self-adjoint
  mode.adjoint = mode.phi;
  normalize(mode, grid);
  return mode;
}

}  // namespace

LambdaMu lambda_mu(int m, double beta, const FluidParams& params) {
  require_order(m, "lambda_mu");
  const double c = denominator(beta, params);
  const double s = std::sqrt(params.epsilon) * m * params.reynolds;
  return {(s - beta) / c, (-s - beta) / c};
}

double dispersion_reduced(int m, double lambda, double mu) {
  return bessel_j_entire(m, lambda) * bessel_j_entire(m + 1, mu) +
         bessel_j_entire(m, mu) * bessel_j_entire(m + 1, lambda);
}

double dispersion(int m, double beta, const FluidParams& params) {
  const LambdaMu lm = lambda_mu(m, beta, params);
  return std::pow(std::abs(lm.lambda * lm.mu), 0.5 * (m + 1)) * dispersion_reduced(m, lm.lambda, lm.mu);
}

double dispersion_scale(int m, double beta, const FluidParams& params) {
  const LambdaMu lm = lambda_mu(m, beta, params);
  const double a = std::abs(bessel_j_entire(m, lm.lambda) * bessel_j_entire(m + 1, lm.mu));
  const double b = std::abs(bessel_j_entire(m, lm.mu) * bessel_j_entire(m + 1, lm.lambda));
  return std::pow(std::abs(lm.lambda * lm.mu), 0.5 * (m + 1)) * (a + b);
}

double solve_lambda_m1(int m) {
  if (m < 1 || m > kMaxLambdaOrder) throw RangeError("solve_lambda_m1: m must be in [1, 20]");
  return lambda_table()[m];
}

CriticalPoint critical_reynolds(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw DomainError("critical_reynolds: epsilon must be > 0 (the flow is linearly stable at epsilon = 0)");
  CriticalPoint best{0.0, 0};
  double best_v = 0.0;
  for (int m = 1; m <= 6; ++m) {
    const double v = std::sqrt(solve_lambda_m1(m) / m);
    if (best.m == 0 || v < best_v) {
      best_v = v;
      best.m = m;
    }
  }
  best.reynolds = std::pow(epsilon, -0.25) * best_v;
  return best;
}

ZeroModeIndex zero_mode_index(int j, const FluidParams& params) {
  if (j < 1) throw RangeError("zero_mode_index: j must be >= 1");
  (void)params;  // beta is monotone in alpha for every admissible (eps, R)
  int k1 = 1, k2 = 1;
  ZeroModeIndex idx{1, 1};
  for (int n = 1; n <= j; ++n) {
    if (bessel_j_zero(0, k1) < bessel_j_zero(1, k2))
      idx = {1, k1++};
    else
      idx = {2, k2++};
  }
  return idx;
}

std::vector<double> solve_beta_branches(int m, int count, const FluidParams& params) {
  params.validate();
  if (count < 1) throw RangeError("solve_beta: j must be >= 1");
  std::vector<double> roots;
  if (m == 0) {
    for (int j = 1; j <= count; ++j) {
      const ZeroModeIndex idx = zero_mode_index(j, params);
      const double a = bessel_j_zero(idx.family == 1 ? 0 : 1, idx.k);
      roots.push_back(-a * a / (params.reynolds * (1.0 + params.epsilon * a * a)));
    }
    return roots;
  }
  const int am = std::abs(m);
  const double eps = params.epsilon;
  const double sigma = std::sqrt(eps) * am * params.reynolds * params.reynolds;
  const double stretch = 1.0 + eps * sigma;
  // beta = -s / (R (1 + eps s)) gives lambda = s + sigma (1 + eps s), mu = s - sigma (1 + eps s);
  // eigenvalues have s in (-sigma / (1 + eps sigma), inf), i.e. lambda > 0.
  auto f = [&](double s) { return dispersion_reduced(am, s + sigma * (1.0 + eps * s), s - sigma * (1.0 + eps * s)); };

  auto collect = [&](auto&& to_s, double t0, double t1, int panels) {
    double a = t0, fa = f(to_s(a));
    for (int i = 1; i <= panels && static_cast<int>(roots.size()) < count; ++i) {
      const double b = i == panels ? t1 : t0 + (t1 - t0) * i / panels;
      const double fb = f(to_s(b));
      if (fb == 0.0) {
        roots.push_back(beta_from_s(to_s(b), params));
      } else if (fa != 0.0 && (fa > 0) != (fb > 0)) {
        const double t = brent_root([&](double x) { return f(to_s(x)); }, {a, b, fa, fb}, 1e-15);
        roots.push_back(beta_from_s(to_s(t), params));
      }
      a = b;
      fa = fb;
    }
  };

  const double dt = kScanStep / std::sqrt(stretch);
  if (sigma > 0.0) {
    // s = s_min (1 - v^2) on [s_min, 0] so that sqrt(lambda) is linear in v; the
    // last sample is exactly s = 0, where the next region starts
    const double s_min = -sigma / stretch;
    const int panels = std::max(50, static_cast<int>(std::ceil(std::sqrt(-s_min) / dt)));
    collect([s_min](double v) { return s_min * (1.0 - v * v); }, 0.0, 1.0, panels);
  }
  if (static_cast<int>(roots.size()) < count) {
    // s = kappa^2 on [0, inf) until sqrt(lambda) exceeds the scan limit
    const double kappa_max = kScanRootLimit / std::sqrt(stretch);
    const int panels = static_cast<int>(std::ceil(kappa_max / dt));
    collect([](double k) { return k * k; }, 0.0, dt * panels, panels);
  }
  if (static_cast<int>(roots.size()) < count)
    throw NonConvergence("solve_beta: branch j = " + std::to_string(count) + " not resolved in the scan window");
  return roots;
}

double solve_beta(int m, int j, const FluidParams& params) { return solve_beta_branches(m, j, params).back(); }

double pes_slope(double epsilon) {
  const double rc = critical_reynolds(epsilon).reynolds;
  const double h = 1e-4 * rc;
  const double up = solve_beta(3, 1, {epsilon, rc + h});
  const double down = solve_beta(3, 1, {epsilon, rc - h});
  return (up - down) / (2.0 * h);
}

SpectralMode build_mode(int m, int j, const FluidParams& params, int nodes) {
  params.validate();
  const RadialGrid grid = RadialGrid::gauss_legendre(nodes);
  if (m == 0) return zero_mode(j, params, grid);
  if (params.epsilon == 0.0)
    throw DomainError("build_mode: m != 0 modes need epsilon > 0 (the closed-form basis degenerates)");
  if (m < 0) {
    SpectralMode mode = build_mode(-m, j, params, nodes);
    mode.m = m;
    mode.phi = mode.phi.conj();
    mode.adjoint = mode.adjoint.conj();
    return mode;
  }

  SpectralMode mode;
  mode.m = m;
  mode.j = j;
  mode.params = params;
  mode.beta = solve_beta(m, j, params);
  const LambdaMu lm = lambda_mu(m, mode.beta, params);
  const double se = std::sqrt(params.epsilon);
  const BesselColumn b2 = bessel_column(m, lm.lambda);
  const BesselColumn b3 = bessel_column(m, lm.mu);
  const cdouble i{0.0, 1.0};

  // psi coefficients d_k = k_k c_k
  const cdouble k1 = -i * mode.beta / (m * params.reynolds);
  const cdouble k2 = -i * se;
  const cdouble k3 = i * se;
  Eigen::Matrix3cd bc;
  bc << 1.0, b2.value, b3.value,
        k1, k2 * b2.value, k3 * b3.value,
        k1 * double(m), k2 * b2.deriv, k3 * b3.deriv;
  const Eigen::Vector3cd c = null_vector(bc);

  RadialProfile w(m), psi(m);
  w.add(RadialBasis::Power, 0.0, c[0]).add(b2.basis, b2.scale, c[1]).add(b3.basis, b3.scale, c[2]);
  psi.add(RadialBasis::Power, 0.0, k1 * c[0]).add(b2.basis, b2.scale, k2 * c[1]).add(b3.basis, b3.scale, k3 * c[2]);
  mode.phi = AzimuthalField(m, w, psi);

  // Adjoint: psi* = d1 r^m + d2 b2 + d3 b3, w* = i lambda sqrt(eps) d2 b2 - i mu sqrt(eps) d3 b3.
  const cdouble a2 = i * lm.lambda * se;
  const cdouble a3 = -i * lm.mu * se;
  Eigen::Matrix3cd abc;
  abc << 1.0, b2.value, b3.value,
         double(m), b2.deriv, b3.deriv,
         0.0, a2 * b2.value, a3 * b3.value;
  // the first column of the w* row is zero, so equilibrate on the psi* rows
  const Eigen::Vector3cd d = null_vector(abc);
  RadialProfile wa(m), psia(m);
  wa.add(b2.basis, b2.scale, a2 * d[1]).add(b3.basis, b3.scale, a3 * d[2]);
  psia.add(RadialBasis::Power, 0.0, d[0]).add(b2.basis, b2.scale, d[1]).add(b3.basis, b3.scale, d[2]);
  mode.adjoint = AzimuthalField(m, wa, psia);

  normalize(mode, grid);
  return mode;
}

std::vector<LambdaBound> verify_lambda_bounds(int m_max) {
  if (m_max < 1 || m_max > kMaxLambdaOrder) throw RangeError("verify_lambda_bounds: m_max must be in [1, 20]");
  std::vector<LambdaBound> out;
  for (int m = 1; m <= m_max; ++m) {
    const double a = 16.0 * (m + 1) * (m + 2) * (m + 3);
    // Euler-Rayleigh pair: sigma_2^{-1/2} < lambda^2 < sigma_1 / sigma_2
    const double lower = a * std::sqrt((m + 4.0) * (m + 5.0)) / std::sqrt(5.0 * m + 17.0);
    const double upper = a * (m + 4.0) * (m + 5.0) / (5.0 * m + 17.0);
    const double lambda = solve_lambda_m1(m);
    out.push_back({m, lower, lambda, upper, lower < lambda * lambda && lambda * lambda < upper});
  }
  return out;
}

}  // namespace sgpipe
