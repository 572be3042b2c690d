#include "sgpipe/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "sgpipe/errors.hpp"
#include "sgpipe/roots.hpp"

namespace sgpipe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesRadius = 2.0;
constexpr double kRescale = 1e250;
const cdouble kI{0.0, 1.0};

// i^n for any integer n.
cdouble ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double sign_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

int miller_start(int nmax, double az) {
  const double big = std::max(static_cast<double>(nmax), az);
  int start = static_cast<int>(big + 40.0 + 10.0 * std::cbrt(big + 1.0));
  return start + (start % 2);
}

template <typename T>
T check_finite(T v, const char* what) {
  if (!std::isfinite(std::abs(v))) throw OverflowError(std::string(what) + ": result overflows double");
  return v;
}

// sum_k (s z^2/4)^k / (k! (n+k)!) * (z/2)^n, s = -1 for J, +1 for I.
template <typename T>
T power_series(int n, T z, double s) {
  T term = T(1.0);
  for (int k = 1; k <= n; ++k) term *= z / (2.0 * k);
  const T q = s * z * z / 4.0;
  T sum = term;
  // Neumaier-compensated accumulation.
  T comp = T(0.0);
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    const T t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum + comp;
}

// exp(-Re z) I_k(z), k = 0..nmax, Re z >= 0, by downward recurrence
// normalised with exp(z) = I_0 + 2 sum_k I_k.
void i_scaled_miller(int nmax, cdouble z, cdouble* out) {
  const int start = miller_start(nmax + 1, std::abs(z));
  const cdouble two_over_z = 2.0 / z;
  cdouble next = 0.0, cur = 1.0, sum = 0.0;
  std::fill(out, out + nmax + 1, cdouble(0.0));
  if (start <= nmax) out[start] = cur;
  sum += 2.0 * cur;
  for (int k = start; k >= 1; --k) {
    const cdouble prev = (static_cast<double>(k) * two_over_z) * cur + next;
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx <= nmax) out[idx] = cur;
    sum += (idx == 0 ? 1.0 : 2.0) * cur;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      sum /= kRescale;
      for (int i = idx; i <= nmax; ++i) out[i] /= kRescale;
    }
  }
  const cdouble norm = std::exp(cdouble(0.0, z.imag())) / sum;
  for (int i = 0; i <= nmax; ++i) out[i] *= norm;
}

// J_k(x), k = 0..nmax, x > 0, normalised with 1 = J_0 + 2 sum J_2k.
void j_real_miller(int nmax, double x, double* out) {
  const int start = miller_start(nmax + 1, x);
  const double two_over_x = 2.0 / x;
  double next = 0.0, cur = 1.0, sum = 0.0;
  std::fill(out, out + nmax + 1, 0.0);
  if (start <= nmax) out[start] = cur;
  if (start % 2 == 0) sum += 2.0 * cur;
  for (int k = start; k >= 1; --k) {
    const double prev = k * two_over_x * cur - next;
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx <= nmax) out[idx] = cur;
    if (idx % 2 == 0) sum += (idx == 0 ? 1.0 : 2.0) * cur;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      sum /= kRescale;
      for (int i = idx; i <= nmax; ++i) out[i] /= kRescale;
    }
  }
  for (int i = 0; i <= nmax; ++i) out[i] /= sum;
}

// exp(-x) I_k(x), k = 0..nmax, x > 0.
void i_real_scaled_miller(int nmax, double x, double* out) {
  const int start = miller_start(nmax + 1, x);
  const double two_over_x = 2.0 / x;
  double next = 0.0, cur = 1.0, sum = 2.0;
  std::fill(out, out + nmax + 1, 0.0);
  if (start <= nmax) out[start] = cur;
  for (int k = start; k >= 1; --k) {
    const double prev = k * two_over_x * cur + next;
    next = cur;
    cur = prev;
    const int idx = k - 1;
    if (idx <= nmax) out[idx] = cur;
    sum += (idx == 0 ? 1.0 : 2.0) * cur;
    if (cur > kRescale) {
      cur /= kRescale;
      next /= kRescale;
      sum /= kRescale;
      for (int i = idx; i <= nmax; ++i) out[i] /= kRescale;
    }
  }
  for (int i = 0; i <= nmax; ++i) out[i] /= sum;
}

// I_n(z) for Re z >= 0.
cdouble bessel_i_right(int n, cdouble z) {
  if (z == cdouble(0.0)) return n == 0 ? 1.0 : 0.0;
  if (std::abs(z) <= kSeriesRadius) return power_series(n, z, 1.0);
  std::array<cdouble, 64> small{};
  std::vector<cdouble> large;
  cdouble* out = small.data();
  if (n + 1 > static_cast<int>(small.size())) {
    large.resize(n + 1);
    out = large.data();
  }
  i_scaled_miller(n, z, out);
  if (z.real() > 700.0) throw OverflowError("cyl_eval: I_n overflows double");
  return check_finite(out[n] * std::exp(z.real()), "cyl_eval");
}

cdouble bessel_i(int n, cdouble z) {
  if (z.real() < 0.0) return sign_pow(n) * bessel_i_right(n, -z);
  return bessel_i_right(n, z);
}

cdouble bessel_j(int n, cdouble z) {
  if (z.imag() >= 0.0) return ipow(n) * bessel_i_right(n, -kI * z);
  return ipow(n) * sign_pow(n) * bessel_i_right(n, kI * z);
}

double bessel_j_real(int n, double x) {
  if (x < 0.0) return sign_pow(n) * bessel_j_real(n, -x);
  if (x <= kSeriesRadius) return power_series(n, x, -1.0);
  std::array<double, 64> small{};
  std::vector<double> large;
  double* out = small.data();
  if (n + 1 > static_cast<int>(small.size())) {
    large.resize(n + 1);
    out = large.data();
  }
  j_real_miller(n, x, out);
  return out[n];
}

double bessel_i_real(int n, double x) {
  if (x < 0.0) return sign_pow(n) * bessel_i_real(n, -x);
  if (x <= kSeriesRadius) return power_series(n, x, 1.0);
  if (x > 700.0) throw OverflowError("cyl_eval: I_n overflows double");
  std::array<double, 64> small{};
  std::vector<double> large;
  double* out = small.data();
  if (n + 1 > static_cast<int>(small.size())) {
    large.resize(n + 1);
    out = large.data();
  }
  i_real_scaled_miller(n, x, out);
  return out[n] * std::exp(x);
}

// K_0 and K_1 for Re z >= 0, z != 0.
std::array<cdouble, 2> bessel_k01(cdouble z) {
  if (std::abs(z) <= kSeriesRadius) {
    const cdouble q = z * z / 4.0;
    const cdouble log_half = std::log(z / 2.0);
    // K_0 = -(ln(z/2) + gamma) I_0 + sum q^k/(k!)^2 H_k
    cdouble t = 1.0, k0 = 0.0, k1_sum = 0.0;
    double harmonic = 0.0;
    // K_1 = 1/z + ln(z/2) I_1 - (z/4) sum q^k/(k!(k+1)!) (psi(k+1) + psi(k+2))
    cdouble t1 = 1.0;
    for (int k = 0; k < 60; ++k) {
      if (k > 0) {
        harmonic += 1.0 / k;
        t *= q / (static_cast<double>(k) * k);
        t1 *= q / (static_cast<double>(k) * (k + 1));
      }
      k0 += t * harmonic;
      const double psi_sum = 2.0 * (-kEulerGamma + harmonic) + 1.0 / (k + 1);
      k1_sum += t1 * psi_sum;
      if (std::abs(t) < 1e-18 && std::abs(t1) < 1e-18) break;
    }
    const cdouble i0 = power_series(0, z, 1.0);
    const cdouble i1 = power_series(1, z, 1.0);
    const cdouble kk0 = -(log_half + kEulerGamma) * i0 + k0;
    const cdouble kk1 = 1.0 / z + log_half * i1 - (z / 4.0) * k1_sum;
    return {kk0, kk1};
  }
  // Steed's continued fraction (Temme's CF2) at order 0.
  const double eps = 1e-16;
  cdouble b = 2.0 * (1.0 + z);
  cdouble d = 1.0 / b;
  cdouble h = d, delh = d;
  cdouble q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  cdouble q = a1, c = a1;
  double a = -a1;
  cdouble s = 1.0 + q * delh;
  int i = 1;
  for (; i < 100000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const cdouble qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const cdouble dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps * std::abs(s)) break;
  }
  if (i >= 100000) throw NonConvergence("cyl_eval: K continued fraction did not converge");
  h = a1 * h;
  const cdouble k0 = std::sqrt(kPi / (2.0 * z)) * std::exp(-z) / s;
  const cdouble k1 = k0 * (z + 0.5 - h) / z;
  return {k0, k1};
}

cdouble bessel_k_right(int n, cdouble z) {
  auto [k0, k1] = bessel_k01(z);
  if (n == 0) return check_finite(k0, "cyl_eval");
  for (int k = 1; k < n; ++k) {
    const cdouble k2 = k0 + (2.0 * k / z) * k1;
    k0 = k1;
    k1 = check_finite(k2, "cyl_eval");
  }
  return check_finite(k1, "cyl_eval");
}

cdouble bessel_k(int n, cdouble z) {
  if (z.real() >= 0.0) return bessel_k_right(n, z);
  if (z.imag() < 0.0) return std::conj(bessel_k(n, std::conj(z)));
  // Upper half plane (and upper lip of the cut), Re z < 0.
  return sign_pow(n) * bessel_k_right(n, -z) - kI * kPi * bessel_i_right(n, -z);
}

cdouble bessel_y(int n, cdouble w) {
  if (w.imag() < 0.0) return std::conj(bessel_y(n, std::conj(w)));
  const cdouble h1 = (2.0 / kPi) * ipow(-(n + 1)) * bessel_k_right(n, -kI * w);
  return (h1 - bessel_j(n, w)) / kI;
}

}  // namespace

cdouble cyl_eval(CylinderKind kind, int order, cdouble z) {
  switch (kind) {
    case CylinderKind::J:
      if (order < 0) return sign_pow(order) * bessel_j(-order, z);
      return bessel_j(order, z);
    case CylinderKind::I:
      if (order < 0) throw DomainError("cyl_eval: I requires order >= 0");
      return bessel_i(order, z);
    case CylinderKind::Y:
      if (z == cdouble(0.0)) throw DomainError("cyl_eval: Y is singular at z = 0");
      if (order < 0) return sign_pow(order) * bessel_y(-order, z);
      return bessel_y(order, z);
    case CylinderKind::K:
      if (order < 0) throw DomainError("cyl_eval: K requires order >= 0");
      if (z == cdouble(0.0)) throw DomainError("cyl_eval: K is singular at z = 0");
      return bessel_k(order, z);
  }
  throw DomainError("cyl_eval: unknown kind");
}

double cyl_eval(CylinderKind kind, int order, double x) {
  switch (kind) {
    case CylinderKind::J:
      if (order < 0) return sign_pow(order) * bessel_j_real(-order, x);
      return bessel_j_real(order, x);
    case CylinderKind::I:
      if (order < 0) throw DomainError("cyl_eval: I requires order >= 0");
      return bessel_i_real(order, x);
    case CylinderKind::Y:
    case CylinderKind::K:
      if (x <= 0.0) throw DomainError("cyl_eval: Y and K require a positive real argument");
      return cyl_eval(kind, order, cdouble(x)).real();
  }
  throw DomainError("cyl_eval: unknown kind");
}

cdouble cyl_deriv(CylinderKind kind, int order, cdouble z) {
  if (kind == CylinderKind::I || kind == CylinderKind::K) {
    if (order < 0) throw DomainError("cyl_deriv: I and K require order >= 0");
    // I_{-1} = I_1, K_{-1} = K_1
    const int lower = order == 0 ? 1 : order - 1;
    const cdouble sum = cyl_eval(kind, lower, z) + cyl_eval(kind, order + 1, z);
    return kind == CylinderKind::I ? 0.5 * sum : -0.5 * sum;
  }
  return 0.5 * (cyl_eval(kind, order - 1, z) - cyl_eval(kind, order + 1, z));
}

double cyl_deriv(CylinderKind kind, int order, double x) {
  if (kind == CylinderKind::Y || kind == CylinderKind::K) {
    if (x <= 0.0) throw DomainError("cyl_deriv: Y and K require a positive real argument");
    return cyl_deriv(kind, order, cdouble(x)).real();
  }
  if (kind == CylinderKind::I) {
    if (order < 0) throw DomainError("cyl_deriv: I requires order >= 0");
    return bessel_i_pair(order, x).deriv;
  }
  if (order < 0) return sign_pow(order) * bessel_j_pair(-order, x).deriv;
  return bessel_j_pair(order, x).deriv;
}

CylPair bessel_j_pair(int order, double x) {
  if (order < 0) throw DomainError("bessel_j_pair: order must be >= 0");
  const double sgn = x < 0.0 ? sign_pow(order) : 1.0;  // J_n(-x) = (-1)^n J_n(x)
  const double ax = std::abs(x);
  double jm1, j0, jp1;
  if (ax <= kSeriesRadius) {
    j0 = power_series(order, ax, -1.0);
    jp1 = power_series(order + 1, ax, -1.0);
    jm1 = order == 0 ? -jp1 : power_series(order - 1, ax, -1.0);
  } else {
    std::array<double, 66> small{};
    std::vector<double> large;
    double* out = small.data();
    if (order + 2 > static_cast<int>(small.size())) {
      large.resize(order + 2);
      out = large.data();
    }
    j_real_miller(order + 1, ax, out);
    j0 = out[order];
    jp1 = out[order + 1];
    jm1 = order == 0 ? -jp1 : out[order - 1];
  }
  // the derivative has the opposite parity
  const double dsgn = x < 0.0 ? -sgn : 1.0;
  return {sgn * j0, dsgn * 0.5 * (jm1 - jp1)};
}

CylPair bessel_i_pair(int order, double x) {
  if (order < 0) throw DomainError("bessel_i_pair: order must be >= 0");
  const double sgn = x < 0.0 ? sign_pow(order) : 1.0;
  const double ax = std::abs(x);
  double im1, i0, ip1;
  if (ax <= kSeriesRadius) {
    i0 = power_series(order, ax, 1.0);
    ip1 = power_series(order + 1, ax, 1.0);
    im1 = order == 0 ? ip1 : power_series(order - 1, ax, 1.0);
  } else {
    if (ax > 700.0) throw OverflowError("bessel_i_pair: I_n overflows double");
    std::array<double, 66> small{};
    std::vector<double> large;
    double* out = small.data();
    if (order + 2 > static_cast<int>(small.size())) {
      large.resize(order + 2);
      out = large.data();
    }
    i_real_scaled_miller(order + 1, ax, out);
    const double e = std::exp(ax);
    i0 = out[order] * e;
    ip1 = out[order + 1] * e;
    im1 = (order == 0 ? out[1] : out[order - 1]) * e;
  }
  const double d = 0.5 * (im1 + ip1);
  return {sgn * i0, (x < 0.0 ? -sgn : sgn) * d};
}

double bessel_j_entire(int order, double x) {
  if (order < 0) throw DomainError("bessel_j_entire: order must be >= 0");
  if (std::abs(x) <= 4.0) {
    double term = 1.0;
    for (int k = 1; k <= order; ++k) term /= 2.0 * k;
    double sum = term;
    const double q = -x / 4.0;
    for (int k = 1; k < 100; ++k) {
      term *= q / (static_cast<double>(k) * (order + k));
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const double root = std::sqrt(std::abs(x));
  const double denom = std::pow(root, order);
  if (x > 0.0) return bessel_j_real(order, root) / denom;
  return bessel_i_real(order, root) / denom;
}

namespace {

constexpr int kMaxZeroOrder = 20;
constexpr int kMaxZeroIndex = 50;

std::vector<double> compute_zeros(int k, int count) {
  std::vector<double> zeros;
  zeros.reserve(count);
  auto f = [k](double x) { return bessel_j_real(k, x); };
  double x = std::max(0.1, static_cast<double>(k));
  const double step = 0.25;
  double fx = f(x);
  while (static_cast<int>(zeros.size()) < count) {
    const double x1 = x + step;
    const double f1 = f(x1);
    if (f1 == 0.0) {
      zeros.push_back(x1);
    } else if ((fx > 0) != (f1 > 0) && fx != 0.0) {
      zeros.push_back(brent_root(f, {x, x1, fx, f1}, 1e-16));
    }
    x = x1;
    fx = f1;
  }
  return zeros;
}

const std::vector<std::vector<double>>& zero_table() {
  static const std::vector<std::vector<double>> table = [] {
    std::vector<std::vector<double>> t;
    for (int k = 0; k <= kMaxZeroOrder; ++k) t.push_back(compute_zeros(k, kMaxZeroIndex));
    return t;
  }();
  return table;
}

}  // namespace

double bessel_j_zero(int k, int j) {
  if (k < 0 || k > kMaxZeroOrder || j < 1 || j > kMaxZeroIndex)
    throw RangeError("bessel_j_zero: (k, j) outside supported range k <= 20, 1 <= j <= 50");
  return zero_table()[k][j - 1];
}

BesselZeroTable BesselZeroTable::build(int order, int count) {
  BesselZeroTable t;
  t.order = order;
  for (int j = 1; j <= count; ++j) t.zeros.push_back(bessel_j_zero(order, j));
  return t;
}

double cross_product_fn(int m, double lambda) {
  if (lambda <= 0.0) throw DomainError("cross_product_fn: lambda must be positive");
  const double x = std::sqrt(lambda);
  const CylPair jp = bessel_j_pair(m, x);
  const CylPair ip = bessel_i_pair(m, x);
  return ip.value * jp.deriv - jp.value * ip.deriv;
}

double cross_product_scale(int m, double lambda) {
  const double x = std::sqrt(lambda);
  const CylPair jp = bessel_j_pair(m, x);
  const CylPair ip = bessel_i_pair(m, x);
  return std::abs(ip.value * jp.deriv) + std::abs(jp.value * ip.deriv);
}

}  // namespace sgpipe
