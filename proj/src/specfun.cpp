#include "sixvertex/specfun.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sixvertex/error.hpp"

namespace sixv::specfun {

namespace {

constexpr unsigned kGuard = 32;

void require_modulus(const Real& k) {
  if (!(k >= 0) || !(k < 1))
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1, got " + k.to_string(12));
}

// AGM of (1, b); records the c_n sequence when asked (c_0 supplied by caller).
Real agm(const Real& b0, const Real& eps, std::vector<Real>* cs) {
  Real a(1, b0.precision());
  Real b = b0;
  for (int it = 0; it < 200; ++it) {
    Real c = (a - b) / 2;
    if (cs != nullptr) cs->push_back(c);
    if (abs(c) <= eps * a) return a;
    Real an = (a + b) / 2;
    b = sqrt(a * b);
    a = std::move(an);
  }
  throw ConvergenceError("AGM did not converge");
}

Real kprime_of(const Real& k) { return sqrt((1 - k) * (1 + k)); }

Real epsilon(Precision w) { return ldexp(Real(1, w), -static_cast<long>(w.bits)); }

}  // namespace

Real elliptic_K(const Real& k, Precision p) {
  require_modulus(k);
  const Precision w = p.widened(kGuard);
  const Real kk = k.at(w);
  const Real m = agm(kprime_of(kk), epsilon(w), nullptr);
  return (Real::pi(w) / (2 * m)).at(p);
}

Real elliptic_E(const Real& k, Precision p) {
  require_modulus(k);
  const Precision w = p.widened(kGuard);
  const Real kk = k.at(w);
  std::vector<Real> cs;
  const Real m = agm(kprime_of(kk), epsilon(w), &cs);
  // E = K (1 - sum_{n>=0} 2^(n-1) c_n^2) with c_0 = k; cs[i] holds c_{i+1}.
  Real s = square(kk) / 2;
  for (std::size_t i = 0; i < cs.size(); ++i) s += ldexp(square(cs[i]), static_cast<long>(i));
  const Real bigK = Real::pi(w) / (2 * m);
  return (bigK * (1 - s)).at(p);
}

EllipticData elliptic_data_from_modulus(const Real& k, Precision p) {
  require_modulus(k);
  const Precision w = p.widened(kGuard);
  const Real kk = k.at(w);
  const Real kp = kprime_of(kk);
  const Real bigK = Real::pi(w) / (2 * agm(kp, epsilon(w), nullptr));
  if (kk.is_zero()) return {kk.at(p), kp.at(p), bigK.at(p), Real::infinity(p), Real(0, p)};
  const Real bigKp = Real::pi(w) / (2 * agm(kk, epsilon(w), nullptr));
  const Real q = exp(-Real::pi(w) * bigKp / bigK);
  return {kk.at(p), kp.at(p), bigK.at(p), bigKp.at(p), q.at(p)};
}

EllipticData elliptic_data_from_gamma(const Real& gamma, Precision p) {
  if (!(gamma > 0)) throw DomainError("gamma must be positive, got " + gamma.to_string(12));
  const Precision w = p.widened(kGuard);
  const Real pi = Real::pi(w);
  const Real q = exp(-square(pi) / (2 * gamma.at(w)));
  const Real zero(0, w);
  const Real t2 = theta(2, zero, q, w);
  const Real t3 = theta(3, zero, q, w);
  const Real t4 = theta(4, zero, q, w);
  const Real k = square(t2 / t3);
  const Real kp = square(t4 / t3);
  const Real eps = epsilon(w);
  const Real bigK = pi / (2 * agm(kp, eps, nullptr));
  const Real bigKp = k.is_zero() ? Real::infinity(w) : pi / (2 * agm(k, eps, nullptr));
  return {k.at(p), kp.at(p), bigK.at(p), bigKp.at(p), q.at(p)};
}

JacobiTriple jacobi_sn_cn_dn(const Real& u, const Real& k, Precision p) {
  require_modulus(k);
  const Precision w = p.widened(kGuard + static_cast<unsigned>(std::max(0L, u.exponent())));
  const Real kk = k.at(w);
  const Real kp = kprime_of(kk);
  const Real eps = epsilon(w);

  // Descending Landen sequence.
  std::vector<Real> as{Real(1, w)};
  std::vector<Real> cs{kk};
  Real b = kp;
  while (abs(cs.back()) > eps && as.size() < 200) {
    const Real& a = as.back();
    Real an = (a + b) / 2;
    Real cn = (a - b) / 2;
    b = sqrt(a * b);
    as.push_back(std::move(an));
    cs.push_back(std::move(cn));
  }
  const std::size_t n = as.size() - 1;
  Real phi = ldexp(as[n] * u.at(w), static_cast<long>(n));
  for (std::size_t i = n; i >= 1; --i) phi = (phi + asin(cs[i] / as[i] * sin(phi))) / 2;

  Real sn = sin(phi);
  Real cn = cos(phi);
  Real dn = sqrt(square(kp) + square(kk * cn));
  return {sn.at(p), cn.at(p), dn.at(p)};
}

Real theta(int j, const Real& z, const Real& q, Precision p, int derivative) {
  if (j < 1 || j > 4) throw DomainError("theta index must be 1..4, got " + std::to_string(j));
  if (!(q >= 0) || !(q < 1)) throw DomainError("theta nome must satisfy 0 <= q < 1, got " + q.to_string(12));
  if (derivative < 0) throw DomainError("negative derivative order");

  const Precision w = p.widened(kGuard + 4 * static_cast<unsigned>(derivative));
  const Real zz = z.at(w);
  const Real qq = q.at(w);
  const Real tol = ldexp(Real(1, w), -static_cast<long>(p.bits) - 8);
  const Real half_pi = Real::pi(w) / 2;

  // d^m/dz^m of cos(a z) = a^m cos(a z + m pi/2); sin(a z) = cos(a z - pi/2).
  auto trig = [&](long a, bool is_sin) {
    Real arg = Real(a, w) * zz + Real(derivative - (is_sin ? 1 : 0), w) * half_pi;
    return pow(Real(a, w), derivative) * cos(arg);
  };

  const bool half_integer = (j == 1 || j == 2);
  Real sum(0, w);
  if (!half_integer && derivative == 0) sum = Real(1, w);
  if (qq.is_zero()) return sum.at(p);

  // Exponent weights: j=1,2 use q^{(n+1/2)^2} = q^{1/4} q^{n(n+1)}, n >= 0;
  // j=3,4 use q^{n^2}, n >= 1.
  Real weight = half_integer ? sqrt(sqrt(qq)) : qq;
  Real step = half_integer ? square(qq) : pow(qq, 3);  // ratio to the next weight
  const Real q2 = square(qq);
  for (long n = half_integer ? 0 : 1; n < 100000; ++n) {
    const long a = half_integer ? 2 * n + 1 : 2 * n;
    const int sgn = (j == 1 || j == 4) && (n % 2 == 1) ? -1 : 1;
    Real term = trig(a, j == 1) * weight * 2;
    if (sgn < 0) term = -term;
    sum += term;

    const Real bound = 2 * weight * pow(Real(a, w), derivative);
    const Real next_bound = 2 * weight * step * pow(Real(a + 2, w), derivative);
    if (next_bound < tol && next_bound * 2 < bound) return sum.at(p);
    weight *= step;
    step *= q2;
  }
  throw ConvergenceError("theta series did not converge (q too close to 1)");
}

Real theta1_prime0(const Real& q, Precision p) { return theta(1, Real(0, p), q, p, 1); }

Real jacobi_zeta(const Real& u, const EllipticData& ell, Precision p) {
  const Precision w = p.widened(kGuard);
  if (ell.q.is_zero()) return Real(0, p);
  const Real bigK = ell.bigK.at(w);
  const Real v = Real::pi(w) * u.at(w) / (2 * bigK);
  const Real num = theta(4, v, ell.q.at(w), w, 1);
  const Real den = theta(4, v, ell.q.at(w), w, 0);
  return (Real::pi(w) / (2 * bigK) * num / den).at(p);
}

Real jacobi_zeta(const Real& u, const Real& k, Precision p) {
  require_modulus(k);
  const Precision w = p.widened(kGuard);
  return jacobi_zeta(u, elliptic_data_from_modulus(k, w), p);
}

std::vector<IdentityResult> identity_suite(Precision p) {
  std::vector<IdentityResult> out;
  const Real tight = ldexp(Real(1, p), -static_cast<long>(p.bits) + 8);
  const Real pi = Real::pi(p);
  auto add = [&](std::string name, Real r, const Real& tol) { out.push_back({std::move(name), abs(r), tol}); };

  add("K(0) = pi/2", elliptic_K(Real(0, p), p) - pi / 2, tight);
  for (const char* ks : {"0.1", "0.5", "0.7071067811865475244", "0.9"}) {
    const Real k = Real::parse(ks, p), kp = sqrt(1 - square(k));
    const Real K = elliptic_K(k, p), Kp = elliptic_K(kp, p);
    const Real E = elliptic_E(k, p), Ep = elliptic_E(kp, p);
    add(std::string("Legendre relation k=") + ks, E * Kp + Ep * K - K * Kp - pi / 2, tight);
  }

  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    const Real k(0.05 + 0.9 * unif(rng), p);
    const Real K = elliptic_K(k, p);
    const Real u = K * Real(unif(rng), p);
    const auto j = jacobi_sn_cn_dn(u, k, p);
    const std::string at = " sample " + std::to_string(i);
    add("sn^2 + cn^2 = 1" + at, square(j.sn) + square(j.cn) - 1, tight);
    add("dn^2 + k^2 sn^2 = 1" + at, square(j.dn) + square(k) * square(j.sn) - 1, tight);
    const Real z = jacobi_zeta(u, k, p);
    add("Z(-u) = -Z(u)" + at, jacobi_zeta(-u, k, p) + z, tight);
    add("Z(u + 2K) = Z(u)" + at, jacobi_zeta(u + 2 * K, k, p) - z, tight);
  }
  for (const char* ks : {"0.3", "0.8"}) {
    const Real k = Real::parse(ks, p);
    const Real K = elliptic_K(k, p);
    const auto j = jacobi_sn_cn_dn(K, k, p);
    const std::string at = std::string(" k=") + ks;
    add("sn(K) = 1" + at, j.sn - 1, tight);
    add("cn(K) = 0" + at, j.cn, tight);
    add("dn(K) = k'" + at, j.dn - sqrt(1 - square(k)), tight);
    add("Z(0) = 0" + at, jacobi_zeta(Real(0, p), k, p), tight);
    add("Z(K) = 0" + at, jacobi_zeta(K, k, p), tight);
  }

  const Real zero(0, p);
  for (const char* qs : {"0.001", "0.01", "0.1", "0.3"}) {
    const Real q = Real::parse(qs, p);
    const Real t2 = theta(2, zero, q, p), t3 = theta(3, zero, q, p), t4 = theta(4, zero, q, p);
    const Real t1p = theta1_prime0(q, p);
    add(std::string("theta1'(0) = theta2 theta3 theta4, q=") + qs, (t1p - t2 * t3 * t4) / t1p, tight);
    add(std::string("theta3^4 = theta2^4 + theta4^4, q=") + qs,
        (pow(t3, 4) - pow(t2, 4) - pow(t4, 4)) / pow(t3, 4), tight);
  }

  const Real loose = ldexp(Real(1, p), -static_cast<long>(p.bits) / 2);
  for (const char* gs : {"0.2", "1", "5"}) {
    const Real g = Real::parse(gs, p);
    const auto ell = elliptic_data_from_gamma(g, p);
    add(std::string("K'/K = pi/(2 gamma), gamma=") + gs, ell.bigKprime / ell.bigK - pi / (2 * g), loose);
    add(std::string("k^2 + k'^2 = 1, gamma=") + gs, square(ell.k) + square(ell.kprime) - 1, tight);
  }
  return out;
}

}  // namespace sixv::specfun
