#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sgpipe/specfun.hpp"

namespace sgpipe {

enum class RadialBasis { Power, BesselJ, BesselI };

struct RadialTerm {
  RadialBasis basis;
  cdouble scale;  // ignored for Power
  cdouble coeff;
};

// Linear combination of r^|m|, J_|m|(a r) and I_|m|(a r). The set is closed
// under the radial Laplacian Delta_m = d2/dr2 + (1/r) d/dr - m^2/r^2.
class RadialProfile {
 public:
  RadialProfile() = default;
  explicit RadialProfile(int order) : order_(order < 0 ? -order : order) {}

  int order() const { return order_; }
  const std::vector<RadialTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Adds coeff * basis(scale r); merges with an existing identical basis term.
  RadialProfile& add(RadialBasis basis, cdouble scale, cdouble coeff);

  cdouble value(double r) const;
  cdouble derivative(double r) const;

  RadialProfile laplacian() const;
  RadialProfile conj() const;

  // Value and derivative at every node.
  void sample(const Eigen::VectorXd& r, Eigen::VectorXcd& f, Eigen::VectorXcd& df) const;
  Eigen::VectorXcd sample(const Eigen::VectorXd& r) const;

  RadialProfile& operator+=(const RadialProfile& other);
  RadialProfile& operator*=(cdouble c);

 private:
  int order_ = 0;
  std::vector<RadialTerm> terms_;
};

RadialProfile operator+(RadialProfile a, const RadialProfile& b);
RadialProfile operator-(RadialProfile a, const RadialProfile& b);
RadialProfile operator*(cdouble c, RadialProfile a);

// (1 - eps Delta_m) f
RadialProfile one_minus_eps_laplacian(const RadialProfile& f, double eps);

// e^{i m theta} (w(r), psi(r))
struct AzimuthalField {
  int m = 0;
  RadialProfile w;
  RadialProfile psi;

  AzimuthalField() = default;
  AzimuthalField(int m_, RadialProfile w_, RadialProfile psi_)
      : m(m_), w(std::move(w_)), psi(std::move(psi_)) {}

  AzimuthalField conj() const { return {-m, w.conj(), psi.conj()}; }
  AzimuthalField scaled(cdouble c) const { return {m, c * w, c * psi}; }
};

// A sum of azimuthal harmonics; real fields carry each harmonic together
// with its conjugate.
using Field = std::vector<AzimuthalField>;

}  // namespace sgpipe
