#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sixvertex/error.hpp"
#include "sixvertex/specfun.hpp"

using namespace sixv;
using namespace sixv::specfun;

namespace {

const Precision P256{256};

Real tol_bits(long e) { return ldexp(Real(1, P256), e); }

Real dec(const char* s) { return Real::parse(s, P256); }

// Independent oracle: trapezoid rule on the periodic integrand
// 1/sqrt(1 - k^2 sin^2 x) over one period [0, pi); converges geometrically.
Real K_by_trapezoid(const Real& k, int m) {
  const Precision w = P256.widened(32);
  const Real pi = Real::pi(w);
  Real s(0, w);
  for (int i = 0; i < m; ++i) {
    const Real x = pi * i / m;
    s += 1 / sqrt(1 - square(k.at(w) * sin(x)));
  }
  return (s * pi / m / 2).at(P256);
}

}  // namespace

TEST_CASE("elliptic_K degenerate and self-dual points") {
  CHECK(abs(elliptic_K(Real(0, P256), P256) - Real::pi(P256) / 2) < tol_bits(-250));

  const Real k = 1 / sqrt(Real(2, P256));
  const Real kp = sqrt(1 - square(k));
  CHECK(abs(elliptic_K(k, P256) - elliptic_K(kp, P256)) < tol_bits(-248));
}

TEST_CASE("elliptic_K agrees with quadrature at k = 0.8") {
  const Real k = dec("0.8");
  const Real oracle = K_by_trapezoid(k, 400);
  CHECK(abs(elliptic_K(k, P256) - oracle) < tol_bits(-245));
}

TEST_CASE("elliptic_K rejects modulus >= 1") {
  CHECK_THROWS_AS(elliptic_K(Real(1, P256), P256), DomainError);
  CHECK_THROWS_AS(elliptic_K(dec("1.5"), P256), DomainError);
  CHECK_THROWS_AS(elliptic_K(dec("-0.1"), P256), DomainError);
}

TEST_CASE("elliptic_K strictly increasing") {
  Real prev = elliptic_K(Real(0, P256), P256);
  for (int i = 1; i < 40; ++i) {
    const Real k = Real(i, P256) / 40;
    const Real cur = elliptic_K(k, P256);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("Legendre relation") {
  for (const char* ks : {"0.05", "0.3", "0.7071", "0.9", "0.95"}) {
    const Real k = dec(ks);
    const Real kp = sqrt(1 - square(k));
    const Real K = elliptic_K(k, P256), Kp = elliptic_K(kp, P256);
    const Real E = elliptic_E(k, P256), Ep = elliptic_E(kp, P256);
    const Real residual = E * Kp + Ep * K - K * Kp - Real::pi(P256) / 2;
    INFO("k = " << ks);
    CHECK(abs(residual) < tol_bits(-248));
  }
}

TEST_CASE("elliptic data from gamma") {
  SECTION("gamma = pi/2 gives q = e^-pi") {
    const Real g = Real::pi(P256) / 2;
    const auto ell = elliptic_data_from_gamma(g, P256);
    CHECK(abs(ell.q - exp(-Real::pi(P256))) < tol_bits(-250));
  }
  SECTION("gamma = 1 gives q = exp(-pi^2/2)") {
    const auto ell = elliptic_data_from_gamma(Real(1, P256), P256);
    CHECK(abs(ell.q - dec("0.0071918833558263")) < dec("1e-16"));
  }
  SECTION("round trip K'/K = pi/(2 gamma)") {
    for (const char* gs : {"0.2", "1", "5"}) {
      const Real g = dec(gs);
      const auto ell = elliptic_data_from_gamma(g, P256);
      INFO("gamma = " << gs);
      CHECK(abs(ell.bigKprime / ell.bigK - Real::pi(P256) / (2 * g)) < tol_bits(-128));
      CHECK(abs(square(ell.k) + square(ell.kprime) - 1) < tol_bits(-248));
      // The modulus from theta quotients reproduces K via the AGM route.
      CHECK(abs(elliptic_K(ell.k, P256) - ell.bigK) < tol_bits(-240));
    }
  }
  CHECK_THROWS_AS(elliptic_data_from_gamma(Real(0, P256), P256), DomainError);
}

TEST_CASE("Jacobi functions: trigonometric limit and quarter period") {
  const Real u = dec("0.7");
  const auto t0 = jacobi_sn_cn_dn(u, Real(0, P256), P256);
  CHECK(abs(t0.sn - sin(u)) < tol_bits(-250));
  CHECK(abs(t0.cn - cos(u)) < tol_bits(-250));
  CHECK(abs(t0.dn - 1) < tol_bits(-250));

  for (const char* ks : {"0.3", "0.8", "0.99"}) {
    const Real k = dec(ks);
    const Real K = elliptic_K(k, P256);
    const auto t = jacobi_sn_cn_dn(K, k, P256);
    INFO("k = " << ks);
    CHECK(abs(t.sn - 1) < tol_bits(-245));
    CHECK(abs(t.cn) < tol_bits(-245));
    CHECK(abs(t.dn - sqrt(1 - square(k))) < tol_bits(-245));
  }
}

TEST_CASE("Jacobi identities at random points") {
  std::mt19937_64 rng(20001);
  std::uniform_real_distribution<double> kdist(0.05, 0.95), frac(0.0, 1.0);
  for (int i = 0; i < 60; ++i) {
    const Real k(kdist(rng), P256);
    const Real u = elliptic_K(k, P256) * frac(rng);
    const auto t = jacobi_sn_cn_dn(u, k, P256);
    INFO("k = " << k.to_double() << " u = " << u.to_double());
    CHECK(abs(square(t.sn) + square(t.cn) - 1) < tol_bits(-248));
    CHECK(abs(square(t.dn) + square(k * t.sn) - 1) < tol_bits(-248));
  }
}

TEST_CASE("Jacobi sn matches theta quotient") {
  // sn(u) = (theta_3(0)/theta_2(0)) theta_1(v)/theta_4(v), v = pi u / 2K.
  const Real k = dec("0.6");
  const auto ell = elliptic_data_from_modulus(k, P256);
  const Real u = dec("0.9");
  const Real v = Real::pi(P256) * u / (2 * ell.bigK);
  const Real z0(0, P256);
  const Real expect = theta(3, z0, ell.q, P256) / theta(2, z0, ell.q, P256) * theta(1, v, ell.q, P256) /
                      theta(4, v, ell.q, P256);
  CHECK(abs(jacobi_sn_cn_dn(u, k, P256).sn - expect) < tol_bits(-244));
}

TEST_CASE("Jacobi Zeta: zeros, parity, periodicity") {
  for (const char* ks : {"0.2", "0.7", "0.95"}) {
    const Real k = dec(ks);
    const Real K = elliptic_K(k, P256);
    INFO("k = " << ks);
    CHECK(abs(jacobi_zeta(Real(0, P256), k, P256)) < tol_bits(-250));
    CHECK(abs(jacobi_zeta(K, k, P256)) < tol_bits(-245));
    for (const char* us : {"0.1", "0.45", "1.3", "2.9"}) {
      const Real u = dec(us);
      const Real z = jacobi_zeta(u, k, P256);
      CHECK(abs(z + jacobi_zeta(-u, k, P256)) < tol_bits(-248));
      CHECK(abs(z - jacobi_zeta(u + 2 * K, k, P256)) < tol_bits(-244));
    }
  }
  CHECK(jacobi_zeta(dec("0.4"), Real(0, P256), P256).is_zero());
}

TEST_CASE("Jacobi Zeta equals E(u) - (E/K) u via its derivative dn^2 - E/K") {
  // dZ/du = dn^2(u) - E/K; check by central difference at elevated precision.
  const Precision hi{400};
  const Real k = Real::parse("0.75", hi);
  const Real E = elliptic_E(k, hi), K = elliptic_K(k, hi);
  const Real u = Real::parse("0.6", hi);
  const Real h = ldexp(Real(1, hi), -60);
  const Real dz = (jacobi_zeta(u + h, k, hi) - jacobi_zeta(u - h, k, hi)) / (2 * h);
  const Real expect = square(jacobi_sn_cn_dn(u, k, hi).dn) - E / K;
  CHECK(abs(dz - expect) < ldexp(Real(1, hi), -110));
}

TEST_CASE("theta functions") {
  const Real z = dec("0.37");
  SECTION("q -> 0 limit") {
    CHECK(theta(3, z, Real(0, P256), P256) == 1);
    CHECK(theta(4, z, Real(0, P256), P256) == 1);
    CHECK(theta(1, z, Real(0, P256), P256).is_zero());
  }
  SECTION("theta_1'(0) = theta_2 theta_3 theta_4") {
    for (const char* qs : {"0.001", "0.01", "0.1", "0.3"}) {
      const Real q = dec(qs);
      const Real z0(0, P256);
      const Real prod = theta(2, z0, q, P256) * theta(3, z0, q, P256) * theta(4, z0, q, P256);
      INFO("q = " << qs);
      CHECK(abs(theta1_prime0(q, P256) / prod - 1) < tol_bits(-248));
    }
  }
  SECTION("theta_2(0, 0.01) by direct series") {
    // 2 q^{1/4} (1 + q^2 + q^6 + q^12 + ...), summed well past 2^-256.
    const Real q = dec("0.01");
    Real s(0, P256);
    for (int n = 0; n < 12; ++n) s += pow(q, static_cast<long>(n) * (n + 1));
    const Real expect = 2 * sqrt(sqrt(q)) * s;
    CHECK(abs(theta(2, Real(0, P256), q, P256) - expect) < tol_bits(-250));
  }
  SECTION("derivatives agree with finite differences") {
    const Precision hi{400};
    const Real q = Real::parse("0.2", hi);
    const Real zz = Real::parse("0.37", hi);
    const Real h = ldexp(Real(1, hi), -64);
    for (int j = 1; j <= 4; ++j) {
      const Real fd = (theta(j, zz + h, q, hi) - theta(j, zz - h, q, hi)) / (2 * h);
      INFO("j = " << j);
      CHECK(abs(fd - theta(j, zz, q, hi, 1)) < ldexp(Real(1, hi), -115));
      const Real fd2 = (theta(j, zz + h, q, hi, 1) - theta(j, zz - h, q, hi, 1)) / (2 * h);
      CHECK(abs(fd2 - theta(j, zz, q, hi, 2)) < ldexp(Real(1, hi), -115));
    }
  }
  SECTION("Jacobi imaginary-free identity theta_3^4 = theta_2^4 + theta_4^4") {
    const Real q = dec("0.45");
    const Real z0(0, P256);
    const Real lhs = pow(theta(3, z0, q, P256), 4);
    const Real rhs = pow(theta(2, z0, q, P256), 4) + pow(theta(4, z0, q, P256), 4);
    CHECK(abs(lhs / rhs - 1) < tol_bits(-248));
  }
  SECTION("domain errors") {
    CHECK_THROWS_AS(theta(2, z, Real(1, P256), P256), DomainError);
    CHECK_THROWS_AS(theta(5, z, dec("0.1"), P256), DomainError);
  }
}

TEST_CASE("identity suite passes at several precisions") {
  for (unsigned bits : {64u, 128u, 256u, 512u}) {
    const auto results = specfun::identity_suite(Precision{bits});
    REQUIRE(results.size() > 40);
    for (const auto& r : results) {
      INFO(bits << " bits: " << r.name << " residual " << r.residual.to_string(6));
      CHECK(r.pass());
    }
  }
  for (const auto& r : specfun::identity_suite(Precision{256}))
    if (r.name.find("K'/K") == std::string::npos) CHECK(r.residual < ldexp(Real(1, Precision{256}), -248));
}
