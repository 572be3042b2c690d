#include "sgpipe/operators.hpp"

#include <cmath>
#include <map>

#include "sgpipe/errors.hpp"

namespace sgpipe {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

cdouble weighted_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const RadialGrid& grid) {
  cdouble sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) sum += grid.weight[i] * grid.r[i] * a[i] * std::conj(b[i]);
  return sum;
}

GridFieldSum collect(std::map<int, GridField>& acc) {
  GridFieldSum out;
  for (auto& [m, g] : acc) out.push_back(std::move(g));
  return out;
}

void accumulate(std::map<int, GridField>& acc, GridField g) {
  auto it = acc.find(g.m);
  if (it == acc.end()) {
    acc.emplace(g.m, std::move(g));
  } else {
    it->second.w += g.w;
    it->second.psi += g.psi;
  }
}

}  // namespace

void FluidParams::validate(bool require_positive_eps) const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be finite and >= 0");
  if (require_positive_eps && epsilon == 0.0) throw DomainError("epsilon must be > 0");
  if (!(reynolds > 0.0) || !std::isfinite(reynolds)) throw DomainError("Reynolds number must be finite and > 0");
}

cdouble inner_product(const AzimuthalField& f, const AzimuthalField& g, const RadialGrid& grid) {
  if (f.m != g.m) return 0.0;
  return kTwoPi * (weighted_dot(f.w.sample(grid.r), g.w.sample(grid.r), grid) +
                   weighted_dot(f.psi.sample(grid.r), g.psi.sample(grid.r), grid));
}

cdouble inner_product(const GridField& f, const AzimuthalField& g, const RadialGrid& grid) {
  if (f.m != g.m) return 0.0;
  if (f.w.size() != grid.size() || f.psi.size() != grid.size())
    throw DomainError("inner_product: samples do not match the grid");
  return kTwoPi * (weighted_dot(f.w, g.w.sample(grid.r), grid) + weighted_dot(f.psi, g.psi.sample(grid.r), grid));
}

cdouble inner_product(const GridFieldSum& f, const Field& g, const RadialGrid& grid) {
  cdouble sum = 0.0;
  for (const auto& a : f)
    for (const auto& b : g) sum += inner_product(a, b, grid);
  return sum;
}

AzimuthalField apply_M(const AzimuthalField& f, double epsilon) {
  const RadialProfile lap_psi = f.psi.laplacian();
  return {f.m, one_minus_eps_laplacian(f.w, epsilon), cdouble(epsilon) * lap_psi.laplacian() - lap_psi};
}

AzimuthalField apply_N(const AzimuthalField& f, const FluidParams& params) {
  const double R = params.reynolds;
  const cdouble imR{0.0, f.m * R};
  const RadialProfile lap_w = f.w.laplacian();
  const RadialProfile w_out = cdouble(1.0 / R) * lap_w + imR * f.psi;
  const RadialProfile psi_out = (params.epsilon * imR) * lap_w - cdouble(1.0 / R) * f.psi.laplacian().laplacian();
  return {f.m, w_out, psi_out};
}

Eigen::VectorXcd advection_J(int m1, const RadialProfile& f, int m2, const RadialProfile& g,
                             const RadialGrid& grid) {
  const int n = grid.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  if ((m1 == 0 && m2 == 0) || f.empty() || g.empty()) return out;
  Eigen::VectorXcd F, dF, G, dG;
  f.sample(grid.r, F, dF);
  g.sample(grid.r, G, dG);
  const cdouble i{0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    const double r = grid.r[k];
    if (r <= 0.0) throw DomainError("advection_J: grid must exclude r = 0");
    out[k] = i / r * (static_cast<double>(m2) * dF[k] * G[k] - static_cast<double>(m1) * F[k] * dG[k]);
    if (!std::isfinite(std::abs(out[k]))) throw DomainError("advection_J: non-finite value");
  }
  return out;
}

GridField bilinear_H(const AzimuthalField& fi, const AzimuthalField& fj, double epsilon,
                     const RadialGrid& grid, HForm form) {
  GridField h;
  h.m = fi.m + fj.m;
  h.w = advection_J(fi.m, fi.psi, fj.m, one_minus_eps_laplacian(fj.w, epsilon), grid);
  const RadialProfile& carrier = form == HForm::StatedW ? fi.w : fi.psi;
  const RadialProfile lead = one_minus_eps_laplacian(carrier.laplacian(), epsilon);
  h.psi = advection_J(fi.m, lead, fj.m, fj.psi, grid);
  if (epsilon != 0.0) h.psi += epsilon * advection_J(fi.m, fi.w.laplacian(), fj.m, fj.w, grid);
  return h;
}

GridField symmetric_H(const AzimuthalField& fi, const AzimuthalField& fj, double epsilon,
                      const RadialGrid& grid, HForm form) {
  GridField a = bilinear_H(fi, fj, epsilon, grid, form);
  const GridField b = bilinear_H(fj, fi, epsilon, grid, form);
  a.w += b.w;
  a.psi += b.psi;
  return a;
}

GridFieldSum bilinear_H(const Field& fi, const Field& fj, double epsilon, const RadialGrid& grid,
                        HForm form) {
  std::map<int, GridField> acc;
  for (const auto& a : fi)
    for (const auto& b : fj) accumulate(acc, bilinear_H(a, b, epsilon, grid, form));
  return collect(acc);
}

GridFieldSum symmetric_H(const Field& fi, const Field& fj, double epsilon, const RadialGrid& grid,
                         HForm form) {
  std::map<int, GridField> acc;
  for (const auto& a : fi)
    for (const auto& b : fj) accumulate(acc, symmetric_H(a, b, epsilon, grid, form));
  return collect(acc);
}

}  // namespace sgpipe
