#include "sgpipe/transition.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "sgpipe/errors.hpp"

namespace sgpipe {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

cdouble pairing(const SpectralMode& mode, const AzimuthalField& phi, const RadialGrid& grid) {
  return inner_product(phi, apply_M(mode.adjoint, mode.params.epsilon), grid);
}

// Im A at round-off level is the reflection-symmetric case: no rotation.
bool rotation_free(cdouble a) { return std::abs(a.imag()) <= 1e-12 * std::abs(a); }

cdouble divide_checked(cdouble num, cdouble den, const char* what) {
  if (std::abs(den) < 1e-12) throw DegenerateError(std::string(what) + ": denominator vanishes (secondary mode is critical)");
  return num / den;
}

}  // namespace

std::string to_string(TransitionType t) {
  switch (t) {
    case TransitionType::TypeI: return "Type-I";
    case TransitionType::TypeII: return "Type-II";
    case TransitionType::Degenerate: return "degenerate";
  }
  return "degenerate";
}

CriticalInteraction::CriticalInteraction(double epsilon, int nodes, HForm form)
    : epsilon_(epsilon), form_(form), grid_(RadialGrid::gauss_legendre(nodes)) {
  params_ = {epsilon, critical_reynolds(epsilon).reynolds};
  critical_ = build_mode(3, 1, params_, nodes);
  rescale_critical(1.0);
}

void CriticalInteraction::rescale_critical(cdouble c) {
  critical_.phi = critical_.phi.scaled(c);
  critical_pairing_ = pairing(critical_, critical_.phi, grid_);
  hs_mixed_ = symmetric_H(critical_.phi, critical_.phi.conj(), epsilon_, grid_, form_);
  h_double_ = bilinear_H(critical_.phi, critical_.phi, epsilon_, grid_, form_);
}

const SpectralMode& CriticalInteraction::secondary(int m, int j) const {
  if (j < 1) throw RangeError("secondary mode index must be >= 1");
  auto& cache = m == 0 ? modes0_ : modes6_;
  while (static_cast<int>(cache.size()) < j)
    cache.push_back(build_mode(m, static_cast<int>(cache.size()) + 1, params_, grid_.size()));
  return cache[j - 1];
}

CmCoefficients CriticalInteraction::cm_coefficients(int j) const {
  const SpectralMode& m0 = secondary(0, j);
  const SpectralMode& m6 = secondary(6, j);
  CmCoefficients out;
  out.phi0 = divide_checked(inner_product(hs_mixed_, m0.adjoint, grid_), -m0.beta * pairing(m0, m0.phi, grid_),
                            "cm_coefficients");
  out.phi6 = divide_checked(inner_product(h_double_, m6.adjoint, grid_), -m6.beta * pairing(m6, m6.phi, grid_),
                            "cm_coefficients");
  return out;
}

InteractionTerms CriticalInteraction::terms(int j) const {
  const CmCoefficients cm = cm_coefficients(j);
  const SpectralMode& m0 = secondary(0, j);
  const SpectralMode& m6 = secondary(6, j);
  const AzimuthalField& phi = critical_.phi;
  const GridField h0 = symmetric_H(phi, m0.phi, epsilon_, grid_, form_);
  const GridField h6 = symmetric_H(phi.conj(), m6.phi, epsilon_, grid_, form_);
  InteractionTerms out;
  out.a0 = divide_checked(cm.phi0 * inner_product(h0, critical_.adjoint, grid_), critical_pairing_, "transition_number");
  out.a6 = divide_checked(cm.phi6 * inner_product(h6, critical_.adjoint, grid_), critical_pairing_, "transition_number");
  return out;
}

cdouble CriticalInteraction::direct_reduced_coefficient(int N, cdouble z) const {
  if (z == cdouble(0.0)) throw DomainError("direct_reduced_coefficient: z must be nonzero");
  const AzimuthalField& phi = critical_.phi;
  const Field x{phi.scaled(z), phi.conj().scaled(std::conj(z))};
  AzimuthalField p0(0, RadialProfile(0), RadialProfile(0));
  AzimuthalField p6(6, RadialProfile(6), RadialProfile(6));
  const double z2 = std::norm(z);
  for (int j = 1; j <= N; ++j) {
    const CmCoefficients cm = cm_coefficients(j);
    const AzimuthalField a = secondary(0, j).phi.scaled(z2 * cm.phi0);
    const AzimuthalField b = secondary(6, j).phi.scaled(z * z * cm.phi6);
    p0.w += a.w;
    p0.psi += a.psi;
    p6.w += b.w;
    p6.psi += b.psi;
  }
  const Field cm_field{p0, p6, p6.conj()};
  const GridFieldSum h = symmetric_H(x, cm_field, epsilon_, grid_, form_);
  return inner_product(h, Field{critical_.adjoint}, grid_) / (z2 * z * critical_pairing_);
}

CmCoefficients cm_coefficients(int j, double epsilon, int nodes) {
  return CriticalInteraction(epsilon, nodes).cm_coefficients(j);
}

TransitionReport assemble_report(const CriticalInteraction& ci, int N, double degenerate_tol) {
  if (N < 1 || N > 20) throw RangeError("transition_number: N must be in [1, 20]");
  TransitionReport rep;
  rep.epsilon = ci.epsilon();
  rep.N = N;
  rep.reynolds = ci.reynolds();
  cdouble sum = 0.0;
  double re0 = 0.0, re6 = 0.0;
  for (int j = 1; j <= N; ++j) {
    const InteractionTerms t = ci.terms(j);
    rep.terms_0.push_back(t.a0);
    rep.terms_6.push_back(t.a6);
    sum += t.a0 + t.a6;
    re0 += t.a0.real();
    re6 += t.a6.real();
    rep.partial.push_back(sum);
    rep.b_profile.push_back(re6 / re0);
  }
  const double re1 = std::abs(rep.partial.front().real());
  for (const cdouble& a : rep.partial) rep.scaled_profile.push_back(a.real() / re1);
  rep.A_N = sum;
  rep.B_N = rep.b_profile.back();
  rep.a1_error = std::abs(sum.real() - rep.partial.front().real()) / re1;
  if (std::abs(sum.real()) < degenerate_tol * std::abs(sum))
    rep.classification = TransitionType::Degenerate;
  else
    rep.classification = sum.real() < 0.0 ? TransitionType::TypeI : TransitionType::TypeII;
  rep.amplitude_coeff = 2.0 / std::sqrt(std::abs(sum.real()));
  rep.period_coeff = rotation_free(sum) ? std::numeric_limits<double>::infinity() : kTwoPi * sum.real() / sum.imag();
  return rep;
}

TransitionReport transition_number(double epsilon, int N, int nodes, HForm form, double degenerate_tol) {
  if (N < 1 || N > 20) throw RangeError("transition_number: N must be in [1, 20]");
  return assemble_report(CriticalInteraction(epsilon, nodes, form), N, degenerate_tol);
}

ReducedTrajectory integrate_reduced(cdouble z0, double beta, cdouble A, double dt, double t_end) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw DomainError("integrate_reduced: dt and t_end must be positive");
  const double rate = std::max(std::abs(beta), std::abs(A) * std::norm(z0));
  if (rate > 0.0 && dt > 0.01 / rate * (1.0 + 1e-12))
    throw DomainError("integrate_reduced: dt must not exceed 0.01 / max(|beta|, |A| |z0|^2)");

  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  auto rhs = [&](cdouble z) { return beta * z + A * std::norm(z) * z; };
  const double eq = A.real() != 0.0 ? std::sqrt(std::abs(beta / A.real())) : 0.0;
  const double ball = 10.0 * std::max(std::abs(z0), eq);
  const double rtol = 1e-10, atol = 1e-14;

  ReducedTrajectory out;
  double t = 0.0, h = dt;
  cdouble z = z0;
  out.t.push_back(t);
  out.z.push_back(z);
  cdouble k1 = rhs(z);
  while (t < t_end) {
    if (t + h > t_end) h = t_end - t;
    const cdouble k2 = rhs(z + h * (a21 * k1));
    const cdouble k3 = rhs(z + h * (a31 * k1 + a32 * k2));
    const cdouble k4 = rhs(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const cdouble k5 = rhs(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const cdouble k6 = rhs(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const cdouble z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const cdouble k7 = rhs(z5);
    const cdouble err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double tol = atol + rtol * std::max(std::abs(z), std::abs(z5));
    const double ratio = std::abs(err) / tol;
    if (ratio <= 1.0 && std::isfinite(std::abs(z5))) {
      t += h;
      z = z5;
      k1 = k7;
      out.t.push_back(t);
      out.z.push_back(z);
      if (std::abs(z) > ball) {
        out.diverged = true;
        return out;
      }
    }
    const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
    h = std::min(dt, h * std::clamp(factor, 0.2, 5.0));
    if (h < 1e-14 * std::max(1.0, t)) {
      out.diverged = true;
      return out;
    }
  }
  return out;
}

PolarGrid PolarGrid::uniform(int nr, int ntheta) {
  if (nr < 2 || ntheta < 3) throw DomainError("PolarGrid: need nr >= 2 and ntheta >= 3");
  PolarGrid g;
  for (int i = 0; i < nr; ++i) g.r.push_back(static_cast<double>(i) / (nr - 1));
  for (int k = 0; k < ntheta; ++k) g.theta.push_back(kTwoPi * k / ntheta);
  return g;
}

BifurcatedSolution::BifurcatedSolution(double epsilon, double reynolds, int N, int nodes, HForm form) {
  const FluidParams params{epsilon, reynolds};
  params.validate(true);
  A_ = sgpipe::transition_number(epsilon, N, nodes, form).A_N;
  mode_ = build_mode(3, 1, params, nodes);
  const double beta = mode_.beta;
  if (!(beta * A_.real() < 0.0))
    throw DomainError("periodic_field: beta_{3,1} and Re(A) must have opposite signs for a real amplitude");
  amplitude_ = 2.0 * std::sqrt(std::abs(beta / A_.real()));
  period_ = rotation_free(A_) ? std::numeric_limits<double>::infinity() : kTwoPi * A_.real() / (A_.imag() * beta);
}

PolarField BifurcatedSolution::evaluate(double period_fraction, const PolarGrid& grid) const {
  const double frac = std::isfinite(period_) ? period_fraction - std::floor(period_fraction) : 0.0;
  // t = frac |T| in exp(2 pi i t / T)
  const cdouble rot = std::polar(1.0, (period_ < 0.0 ? -kTwoPi : kTwoPi) * frac);
  const int nr = static_cast<int>(grid.r.size());
  const int nt = static_cast<int>(grid.theta.size());
  PolarField out{Eigen::MatrixXd(nr, nt), Eigen::MatrixXd(nr, nt)};
  for (int i = 0; i < nr; ++i) {
    const cdouble w = rot * mode_.phi.w.value(grid.r[i]);
    const cdouble psi = rot * mode_.phi.psi.value(grid.r[i]);
    for (int k = 0; k < nt; ++k) {
      const cdouble e = std::polar(1.0, 3.0 * grid.theta[k]);
      out.w(i, k) = amplitude_ * std::real(e * w);
      out.psi(i, k) = amplitude_ * std::real(e * psi);
    }
  }
  return out;
}

PolarField periodic_field(double period_fraction, const PolarGrid& grid, double epsilon, double reynolds,
                          HForm form) {
  return BifurcatedSolution(epsilon, reynolds, 10, 200, form).evaluate(period_fraction, grid);
}

}  // namespace sgpipe
