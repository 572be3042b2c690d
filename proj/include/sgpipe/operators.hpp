#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sgpipe/params.hpp"
#include "sgpipe/profile.hpp"
#include "sgpipe/quadrature.hpp"

namespace sgpipe {

// e^{i m theta} (w, psi) held as samples on a RadialGrid. Products of basis
// functions leave the closed basis, so nonlinear terms live here.
struct GridField {
  int m = 0;
  Eigen::VectorXcd w;
  Eigen::VectorXcd psi;
};

// Harmonics with distinct wavenumbers.
using GridFieldSum = std::vector<GridField>;

// int_0^{2 pi} int_0^1 (w_f conj(w_g) + psi_f conj(psi_g)) r dr dtheta
cdouble inner_product(const AzimuthalField& f, const AzimuthalField& g, const RadialGrid& grid);
cdouble inner_product(const GridField& f, const AzimuthalField& g, const RadialGrid& grid);
cdouble inner_product(const GridFieldSum& f, const Field& g, const RadialGrid& grid);

// M(w, psi) = ((1 - eps Delta) w, Delta (eps Delta - 1) psi)
AzimuthalField apply_M(const AzimuthalField& f, double epsilon);

// N(w, psi) = (Delta w / R + R psi_theta, eps R Delta w_theta - Delta^2 psi / R)
AzimuthalField apply_N(const AzimuthalField& f, const FluidParams& params);

// Radial part of J(e^{i m1 theta} F, e^{i m2 theta} G) = (1/r)(f_r g_theta - f_theta g_r),
// i.e. (i/r)(m2 F' G - m1 F G'), wavenumber m1 + m2.
Eigen::VectorXcd advection_J(int m1, const RadialProfile& f, int m2, const RadialProfile& g,
                             const RadialGrid& grid);

// Which field carries the (1 - eps Delta) Delta factor in the second
// component of H: the operator as stated, J((1-eps Delta) Delta w_I, psi_J),
// or the form read off the vorticity equation, J((1-eps Delta) Delta psi_I, psi_J).
enum class HForm { StatedW, VorticityPsi };

// H(fI, fJ) = (J(psi_I, (1 - eps Delta) w_J),
//              J((1 - eps Delta) Delta X_I, psi_J) + eps J(Delta w_I, w_J))
GridField bilinear_H(const AzimuthalField& fi, const AzimuthalField& fj, double epsilon,
                     const RadialGrid& grid, HForm form);

// H(fI, fJ) + H(fJ, fI)
GridField symmetric_H(const AzimuthalField& fi, const AzimuthalField& fj, double epsilon,
                      const RadialGrid& grid, HForm form);

// Bilinear extension to sums of harmonics, accumulated by wavenumber.
GridFieldSum bilinear_H(const Field& fi, const Field& fj, double epsilon, const RadialGrid& grid,
                        HForm form);
GridFieldSum symmetric_H(const Field& fi, const Field& fj, double epsilon, const RadialGrid& grid,
                         HForm form);

}  // namespace sgpipe
