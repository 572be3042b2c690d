#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sgpipe/linstab.hpp"
#include "sgpipe/operators.hpp"

namespace sgpipe {

// Form of H used for the transition number unless a caller overrides it. The
// vorticity form is the one that follows from the governing equations.
constexpr HForm kDefaultHForm = HForm::VorticityPsi;

enum class TransitionType { TypeI, TypeII, Degenerate };

std::string to_string(TransitionType t);

struct CmCoefficients {
  cdouble phi0;  // coefficient of |z|^2 phi_{0,j}
  cdouble phi6;  // coefficient of z^2 phi_{6,j}
};

struct InteractionTerms {
  cdouble a0;
  cdouble a6;
};

// The critical pair phi_{3,1}, phi_{-3,1} at R = R_c(eps) together with
// everything that does not depend on the secondary mode index j.
class CriticalInteraction {
 public:
  explicit CriticalInteraction(double epsilon, int nodes = 200, HForm form = kDefaultHForm);

  double epsilon() const { return epsilon_; }
  double reynolds() const { return params_.reynolds; }
  const SpectralMode& critical() const { return critical_; }
  const RadialGrid& grid() const { return grid_; }

  // Replaces phi_{3,1} by c phi_{3,1} (the adjoint is kept); A scales by |c|^2.
  void rescale_critical(cdouble c);

  CmCoefficients cm_coefficients(int j) const;
  InteractionTerms terms(int j) const;

  // <H_s(x, Phi), phi*_{3,1}> / (|z|^2 z <phi_{3,1}, M phi*_{3,1}>) with x and
  // the centre-manifold field Phi assembled as explicit sums of harmonics.
  cdouble direct_reduced_coefficient(int N, cdouble z) const;

 private:
  const SpectralMode& secondary(int m, int j) const;

  double epsilon_;
  FluidParams params_;
  HForm form_;
  RadialGrid grid_;
  SpectralMode critical_;
  cdouble critical_pairing_;
  GridField hs_mixed_;  // H_s(phi, conj phi), m = 0
  GridField h_double_;  // H(phi, phi), m = 6
  mutable std::vector<SpectralMode> modes0_, modes6_;
};

CmCoefficients cm_coefficients(int j, double epsilon, int nodes = 200);

struct TransitionReport {
  double epsilon = 0.0;
  int N = 0;
  double reynolds = 0.0;             // R_c
  std::vector<cdouble> terms_0;      // A_{0,j}
  std::vector<cdouble> terms_6;      // A_{6,j}
  std::vector<cdouble> partial;      // A^n, n = 1..N
  std::vector<double> scaled_profile;  // Re(A^n) / |Re(A^1)|
  std::vector<double> b_profile;     // B^n
  cdouble A_N;
  double B_N = 0.0;
  double a1_error = 0.0;             // |Re A^N - Re A^1| / |Re A^1|
  TransitionType classification = TransitionType::Degenerate;
  double amplitude_coeff = 0.0;      // 2 / sqrt(|Re A|)
  double period_coeff = 0.0;         // 2 pi Re A / Im A
};

// Classification is degenerate when |Re A_N| < degenerate_tol |A_N|.
constexpr double kDegenerateTol = 1e-10;

TransitionReport transition_number(double epsilon, int N = 10, int nodes = 200, HForm form = kDefaultHForm,
                                   double degenerate_tol = kDegenerateTol);
TransitionReport assemble_report(const CriticalInteraction& ci, int N, double degenerate_tol = kDegenerateTol);

struct ReducedTrajectory {
  std::vector<double> t;
  std::vector<cdouble> z;
  bool diverged = false;
};

// Adaptive Dormand-Prince integration of dz/dt = beta z + A |z|^2 z with
// maximum step dt. Stops with diverged = true once |z| leaves the ball of
// radius 10 max(|z0|, sqrt(|beta / Re A|)) or the step size underflows.
ReducedTrajectory integrate_reduced(cdouble z0, double beta, cdouble A, double dt, double t_end);

struct PolarGrid {
  std::vector<double> r;
  std::vector<double> theta;

  static PolarGrid uniform(int nr, int ntheta);
};

struct PolarField {
  Eigen::MatrixXd w;    // rows: r, columns: theta
  Eigen::MatrixXd psi;
};

// Leading-order bifurcated solution at Reynolds number R near R_c.
class BifurcatedSolution {
 public:
  BifurcatedSolution(double epsilon, double reynolds, int N = 10, int nodes = 200, HForm form = kDefaultHForm);

  double beta() const { return mode_.beta; }
  cdouble transition_number() const { return A_; }
  double amplitude() const { return amplitude_; }
  double period() const { return period_; }

  // 2 sqrt(|beta / Re A|) Re(exp(2 pi i t / T) e^{3 i theta} phi_{3,1}(r)) with t
  // given as a fraction of the period T. With Im A = 0 the period is infinite
  // and the pattern is steady, so the fraction is ignored.
  PolarField evaluate(double period_fraction, const PolarGrid& grid) const;

 private:
  SpectralMode mode_;
  cdouble A_;
  double amplitude_;
  double period_;
};

PolarField periodic_field(double period_fraction, const PolarGrid& grid, double epsilon, double reynolds,
                          HForm form = kDefaultHForm);

}  // namespace sgpipe
