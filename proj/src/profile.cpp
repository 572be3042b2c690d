#include "sgpipe/profile.hpp"

#include <cmath>

namespace sgpipe {

namespace {

bool same_term(const RadialTerm& t, RadialBasis basis, cdouble scale) {
  if (t.basis != basis) return false;
  return basis == RadialBasis::Power || t.scale == scale;
}

// basis(scale r) and its r-derivative
void eval_basis(int m, const RadialTerm& t, double r, cdouble& f, cdouble& df) {
  switch (t.basis) {
    case RadialBasis::Power:
      f = std::pow(r, m);
      df = m == 0 ? 0.0 : m * std::pow(r, m - 1);
      return;
    case RadialBasis::BesselJ:
    case RadialBasis::BesselI: {
      const bool is_j = t.basis == RadialBasis::BesselJ;
      if (t.scale.imag() == 0.0) {
        const double a = t.scale.real();
        const CylPair p = is_j ? bessel_j_pair(m, a * r) : bessel_i_pair(m, a * r);
        f = p.value;
        df = a * p.deriv;
      } else {
        const CylinderKind kind = is_j ? CylinderKind::J : CylinderKind::I;
        const cdouble z = t.scale * r;
        f = cyl_eval(kind, m, z);
        df = t.scale * cyl_deriv(kind, m, z);
      }
      return;
    }
  }
}

}  // namespace

RadialProfile& RadialProfile::add(RadialBasis basis, cdouble scale, cdouble coeff) {
  if (basis == RadialBasis::Power) scale = 0.0;
  for (auto& t : terms_) {
    if (same_term(t, basis, scale)) {
      t.coeff += coeff;
      return *this;
    }
  }
  terms_.push_back({basis, scale, coeff});
  return *this;
}

cdouble RadialProfile::value(double r) const {
  cdouble sum = 0.0;
  for (const auto& t : terms_) {
    cdouble f, df;
    eval_basis(order_, t, r, f, df);
    sum += t.coeff * f;
  }
  return sum;
}

cdouble RadialProfile::derivative(double r) const {
  cdouble sum = 0.0;
  for (const auto& t : terms_) {
    cdouble f, df;
    eval_basis(order_, t, r, f, df);
    sum += t.coeff * df;
  }
  return sum;
}

RadialProfile RadialProfile::laplacian() const {
  RadialProfile out(order_);
  for (const auto& t : terms_) {
    if (t.basis == RadialBasis::Power) continue;
    const cdouble a2 = t.scale * t.scale;
    out.terms_.push_back({t.basis, t.scale, t.basis == RadialBasis::BesselJ ? -a2 * t.coeff : a2 * t.coeff});
  }
  return out;
}

RadialProfile RadialProfile::conj() const {
  RadialProfile out(order_);
  for (const auto& t : terms_) out.terms_.push_back({t.basis, std::conj(t.scale), std::conj(t.coeff)});
  return out;
}

void RadialProfile::sample(const Eigen::VectorXd& r, Eigen::VectorXcd& f, Eigen::VectorXcd& df) const {
  f.setZero(r.size());
  df.setZero(r.size());
  for (const auto& t : terms_) {
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      cdouble v, dv;
      eval_basis(order_, t, r[i], v, dv);
      f[i] += t.coeff * v;
      df[i] += t.coeff * dv;
    }
  }
}

Eigen::VectorXcd RadialProfile::sample(const Eigen::VectorXd& r) const {
  Eigen::VectorXcd f, df;
  sample(r, f, df);
  return f;
}

RadialProfile& RadialProfile::operator+=(const RadialProfile& other) {
  if (terms_.empty()) order_ = other.order_;
  for (const auto& t : other.terms_) add(t.basis, t.scale, t.coeff);
  return *this;
}

RadialProfile& RadialProfile::operator*=(cdouble c) {
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

RadialProfile operator+(RadialProfile a, const RadialProfile& b) { return a += b; }

RadialProfile operator-(RadialProfile a, const RadialProfile& b) { return a += cdouble(-1.0) * b; }

RadialProfile operator*(cdouble c, RadialProfile a) { return a *= c; }

RadialProfile one_minus_eps_laplacian(const RadialProfile& f, double eps) {
  return f - cdouble(eps) * f.laplacian();
}

}  // namespace sgpipe
