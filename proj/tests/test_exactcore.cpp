#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sixvertex/exactcore.hpp"

using namespace sixv;

namespace {

const Precision P256{256};

Real dec(const char* s, Precision p = P256) { return Real::parse(s, p); }
Real tol_bits(long e, Precision p = P256) { return ldexp(Real(1, p), e); }
Real rel(const Real& x, const Real& y) { return abs(x / y - 1); }

PhaseParams af(const char* t, const char* g, Precision p = P256) {
  return {Phase::antiferroelectric, dec(t, p), dec(g, p)};
}
PhaseParams fe(const char* t, const char* g, Precision p = P256) {
  return {Phase::ferroelectric, dec(t, p), dec(g, p)};
}
PhaseParams dis(const char* t, const char* g, Precision p = P256) {
  return {Phase::disordered, dec(t, p), dec(g, p)};
}
PhaseParams ice_point(Precision p = P256) { return {Phase::disordered, Real(0, p), Real::pi(p) / 3}; }

// c / (a b) straight from the weights.
Real phi_direct(const PhaseParams& pp, Precision p) {
  const Weights w = weights_from(pp, p);
  return w.c / (w.a * w.b);
}

// Independent oracle for phi^(n): the Laplace series
//   AF: 2 sum_l (2l)^n e^{2tl - 2g|l|},  FE: 4 sum_{l>=0} (-2l)^n e^{-2tl} sinh(2gl).
Real phi_series(const PhaseParams& pp, int n, int terms, Precision p) {
  const Real t = pp.t().at(p), g = pp.gamma().at(p);
  Real s(0, p);
  if (pp.phase() == Phase::antiferroelectric) {
    for (long l = -terms; l <= terms; ++l) s += pow(Real(2 * l, p), n) * exp(2 * t * l - 2 * g * std::labs(l));
    return 2 * s;
  }
  for (long l = 1; l <= terms; ++l) s += pow(Real(-2 * l, p), n) * exp(-2 * t * l) * sinh(2 * g * l);
  return 4 * s;
}

std::vector<PhaseParams> interior_points(Precision p = P256) {
  return {fe("1.5", "0.4", p), fe("2.2", "1.1", p), dis("0.3", "1", p),
          dis("-0.2", "0.6", p), af("0.2", "1", p), af("-0.5", "1.7", p)};
}

}  // namespace

TEST_CASE("phase parameters") {
  const auto pp = af("0.3", "1");
  CHECK(abs(pp.zeta() - dec("0.3")) < tol_bits(-250));
  CHECK(abs(pp.delta() + cosh(Real(2, P256))) < tol_bits(-240));
  CHECK(abs(dis("0.1", "1").delta() + cos(Real(2, P256))) < tol_bits(-250));
  CHECK(abs(fe("2", "0.5").delta() - cosh(Real(1, P256))) < tol_bits(-250));
  CHECK(parse_phase("AF") == Phase::antiferroelectric);
  CHECK(parse_phase("disordered") == Phase::disordered);
  CHECK_THROWS_AS(parse_phase("xy"), InvalidInput);

  CHECK_THROWS_AS(fe("0.3", "0.5"), PhaseDomainError);
  CHECK_THROWS_AS(fe("1", "-0.5"), PhaseDomainError);
  CHECK_THROWS_AS(dis("0.1", "1.6"), PhaseDomainError);
  CHECK_THROWS_AS(dis("0.7", "0.5"), PhaseDomainError);
  CHECK_THROWS_AS(af("1", "1"), PhaseDomainError);
  CHECK_THROWS_AS(af("0", "0"), PhaseDomainError);
  try {
    dis("0.7", "0.5");
  } catch (const PhaseDomainError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("|t| < gamma"));
  }
}

TEST_CASE("weights_from examples") {
  const auto w1 = weights_from(af("0", "1"), P256);
  CHECK(abs(w1.a - sinh(Real(1, P256))) < tol_bits(-250));
  CHECK(w1.a == w1.b);
  CHECK(abs(w1.c - sinh(Real(2, P256))) < tol_bits(-248));

  const auto w2 = weights_from(ice_point(), P256);
  const Real r = sqrt(Real(3, P256)) / 2;
  CHECK(abs(w2.a - r) < tol_bits(-250));
  CHECK(abs(w2.b - r) < tol_bits(-250));
  CHECK(abs(w2.c - r) < tol_bits(-250));

  const auto w3 = weights_from(fe("2", "0.5"), P256);
  CHECK(abs(w3.a - sinh(dec("1.5"))) < tol_bits(-250));
  CHECK(abs(w3.b - sinh(dec("2.5"))) < tol_bits(-248));
  CHECK(abs(w3.c - sinh(Real(1, P256))) < tol_bits(-250));

  for (const auto& pp : interior_points()) {
    const auto w = weights_from(pp, P256);
    CHECK(w.a > 0);
    CHECK(w.b > 0);
    CHECK(w.c > 0);
  }
}

TEST_CASE("derivative polynomials") {
  const auto h = derivative_polynomials(3, CotKind::hyperbolic);
  REQUIRE(h.size() == 4);
  CHECK(h[0] == IntPolynomial{0, 1});
  CHECK(h[1] == IntPolynomial{1, 0, -1});
  CHECK(h[2] == IntPolynomial{0, -2, 0, 2});
  CHECK(h[3] == IntPolynomial{-2, 0, 8, 0, -6});
  const auto c = derivative_polynomials(2, CotKind::trigonometric);
  CHECK(c[1] == IntPolynomial{-1, 0, -1});
  CHECK(c[2] == IntPolynomial{0, 2, 0, 2});
  CHECK_THROWS_AS(derivative_polynomials(-1, CotKind::hyperbolic), InvalidInput);
}

TEST_CASE("phi at t = 0") {
  const auto ta = phi_derivatives(af("0", "1.3"), 3, P256);
  CHECK(abs(ta[0] - 2 * coth(dec("1.3"))) < tol_bits(-248));
  CHECK(ta[1].is_zero());
  CHECK(ta[3].is_zero());
  const auto td = phi_derivatives(dis("0", "0.7"), 1, P256);
  CHECK(abs(td[0] - 2 * cot(dec("0.7"))) < tol_bits(-248));
  CHECK(td[1].is_zero());
}

TEST_CASE("phi equals c/(ab) and phi' matches a finite difference") {
  const Precision hi{400};
  for (const auto& base : interior_points()) {
    const PhaseParams pp(base.phase(), base.t().at(hi), base.gamma().at(hi));
    INFO(pp.describe());
    const auto tab = phi_derivatives(pp, 2, P256);
    CHECK(rel(tab[0], phi_direct(pp, P256)) < tol_bits(-248));
    const Real h = ldexp(Real(1, hi), -80);
    const Real fd = (phi_direct(pp.with_t(pp.t() + h), hi) - phi_direct(pp.with_t(pp.t() - h), hi)) / (2 * h);
    CHECK(rel(tab[1], fd) < tol_bits(-150));
    const Real fd2 = (phi_direct(pp.with_t(pp.t() + h), hi) - 2 * phi_direct(pp, hi) +
                      phi_direct(pp.with_t(pp.t() - h), hi)) / square(h);
    CHECK(rel(tab[2], fd2) < tol_bits(-70));
  }
}

TEST_CASE("high derivatives match the Laplace series") {
  const Precision w{320};
  for (const auto& pp : {af("0.3", "1"), af("-0.6", "0.9"), fe("1.5", "0.4"), fe("3", "0.2")}) {
    const auto tab = phi_derivatives(pp, 20, P256);
    for (int n : {0, 1, 5, 12, 20}) {
      INFO(pp.describe() << " n = " << n);
      CHECK(rel(tab[n], phi_series(pp, n, 900, w)) < tol_bits(-240));
    }
  }
}

TEST_CASE("barnes_square") {
  CHECK(barnes_square(0) == 1);
  CHECK(barnes_square(1) == 1);
  CHECK(barnes_square(2) == 1);
  CHECK(barnes_square(4) == 144);
  CHECK(barnes_square(5) == 82944);
}

TEST_CASE("small determinants") {
  for (const auto& pp : interior_points()) {
    INFO(pp.describe());
    const auto tab = phi_derivatives(pp, 4, P256);
    CHECK(rel(tau_scaled(pp, 1, P256).scaled_tau, tab[0]) < tol_bits(-248));
    const Real two = tab[0] * tab[2] - square(tab[1]);
    CHECK(rel(tau_scaled(pp, 2, P256).scaled_tau, two) < tol_bits(-240));
    const auto tv = tau_scaled(pp, 3, P256);
    CHECK(abs(tv.log_scaled - log(tv.scaled_tau)) < tol_bits(-240));
  }
  CHECK_THROWS_AS(tau_scaled(af("0", "1"), 0, P256), InvalidInput);
}

TEST_CASE("partition function: small N closed forms and ASM counts") {
  for (const auto& pp : interior_points()) {
    INFO(pp.describe());
    const Weights w = weights_from(pp, P256);
    CHECK(rel(partition_Z(pp, 1, P256), w.c) < tol_bits(-240));
    CHECK(rel(partition_Z(pp, 2, P256), square(w.c) * (square(w.a) + square(w.b))) < tol_bits(-230));
  }
  const Real r = sqrt(Real(3, P256)) / 2;
  CHECK(rel(partition_Z(ice_point(), 4, P256), pow(r, 16) * 42) < dec("1e-60"));
  CHECK(rel(partition_Z(ice_point(), 5, P256), pow(r, 25) * 429) < dec("1e-60"));
}

TEST_CASE("tau_sequence shares one table") {
  const auto pp = af("0.2", "1");
  const auto seq = tau_sequence(pp, 2, 6, P256);
  REQUIRE(seq.size() == 5);
  for (const auto& tv : seq) CHECK(rel(tv.scaled_tau, tau_scaled(pp, tv.n, P256).scaled_tau) < tol_bits(-240));
  CHECK_THROWS_AS(tau_sequence(pp, 3, 2, P256), InvalidInput);
}

TEST_CASE("precision exhaustion is reported") {
  CHECK_THROWS_AS(tau_scaled(af("0.4", "1", Precision{128}), 14, Precision{128}), PrecisionExhausted);
  CHECK_NOTHROW(tau_scaled(af("0.4", "1", Precision{512}), 16, Precision{512}));
}

TEST_CASE("discrete sums") {
  SECTION("N = 1 reproduces phi") {
    for (const auto& pp : {fe("1.5", "0.4"), af("0.3", "1")}) {
      const auto d = tau_discrete_sum(pp, 1, suggest_cutoff(pp, 1, P256), P256);
      CHECK(rel(d.tau, phi_direct(pp, P256)) < tol_bits(-120));
    }
  }
  SECTION("AF N = 3 matches the determinant to 1e-20") {
    const auto pp = af("0.3", "1");
    const auto d = tau_discrete_sum(pp, 3, suggest_cutoff(pp, 3, P256), P256);
    const Real det = tau_scaled(pp, 3, P256).scaled_tau * Real(barnes_square(3), P256);
    CHECK(rel(d.tau, det) < dec("1e-20"));
  }
  SECTION("agreement within the tail bound for N <= 4") {
    for (const auto& pp : {fe("1.5", "0.4"), fe("2", "1"), af("0.3", "1"), af("-0.4", "1.2")}) {
      for (int n = 1; n <= 4; ++n) {
        INFO(pp.describe() << " N = " << n);
        const auto d = tau_discrete_sum(pp, n, suggest_cutoff(pp, n, P256), P256);
        const Real det = tau_scaled(pp, n, P256).scaled_tau * Real(barnes_square(n), P256);
        CHECK(abs(d.tau - det) <= 2 * d.tail_bound + ldexp(det, -200));
      }
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(tau_discrete_sum(af("0.3", "1"), 2, 10, P256), CutoffTooSmall);
    CHECK_THROWS_AS(tau_discrete_sum(dis("0.3", "1"), 2, 50, P256), InvalidInput);
    CHECK_THROWS_AS(tau_discrete_sum(fe("1.5", "0.4"), 3, 2, P256), CutoffTooSmall);
  }
}

TEST_CASE("Toda residual") {
  const Real bound = tol_bits(-256 / 2 + 16);
  for (const auto& pp : {af("0.2", "1"), fe("1.5", "0.4"), dis("0.3", "1")}) {
    for (int n = 1; n <= 8; ++n) {
      INFO(pp.describe() << " N = " << n);
      const auto r = toda_residual(pp, n, P256);
      CHECK(r.relative < bound);
      CHECK(r.rhs > 0);
    }
  }
  SECTION("step shrinks near the phase boundary") {
    const Real eps = tol_bits(-60);
    const PhaseParams pp(Phase::antiferroelectric, Real(1, P256) - eps, Real(1, P256));
    const auto r = toda_residual(pp, 1, P256);
    CHECK(r.step < eps);
  }
}

TEST_CASE("property: symmetry Z(t) = Z(-t) in D and AF") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> frac(-0.9, 0.9);
  std::uniform_real_distribution<double> gd(0.2, 1.5), ga(0.2, 2.5);
  for (int trial = 0; trial < 6; ++trial) {
    for (Phase ph : {Phase::disordered, Phase::antiferroelectric}) {
      const Real g(ph == Phase::disordered ? gd(rng) : ga(rng), P256);
      const Real t = g * frac(rng);
      const PhaseParams plus(ph, t, g), minus(ph, -t, g);
      for (int n = 1; n <= 6; ++n) {
        INFO(plus.describe() << " N = " << n);
        CHECK(rel(partition_Z(plus, n, P256), partition_Z(minus, n, P256)) < dec("1e-20"));
      }
    }
  }
}

TEST_CASE("property: positivity and precision scaling") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 8; ++trial) {
    const double g = 0.2 + 2 * u(rng);
    const std::vector<std::tuple<Phase, double, double>> pts = {
        {Phase::ferroelectric, g * (1 + 2 * u(rng)), g},
        {Phase::disordered, (2 * u(rng) - 1) * 0.9 * std::min(g, 1.5), std::min(g, 1.5)},
        {Phase::antiferroelectric, (2 * u(rng) - 1) * g, g}};
    for (const auto& [ph, t, gg] : pts) {
      const PhaseParams lo(ph, Real(t, P256), Real(gg, P256));
      const PhaseParams hi(ph, Real(t, Precision{512}), Real(gg, Precision{512}));
      const auto a = tau_sequence(lo, 1, 8, P256);
      const auto b = tau_sequence(hi, 1, 8, Precision{512});
      for (int i = 0; i < 8; ++i) {
        INFO(lo.describe() << " N = " << i + 1);
        CHECK(a[i].scaled_tau > 0);
        CHECK(abs(a[i].log_scaled - b[i].log_scaled.at(P256)) < tol_bits(-128));
      }
    }
  }
}

TEST_CASE("Laplace moments in the disordered phase") {
  const auto ice = laplace_moment_check(ice_point(), 1, P256);
  CHECK(std::fabs(ice.moments[0] - 2 / std::sqrt(3.0)) < 1e-12);
  CHECK(std::fabs(ice.moments[1]) < 1e-12);
  const auto m = laplace_moment_check(dis("0.3", "1"), 6, P256, 1e-12);
  CHECK(m.max_abs_error < 1e-10);
  CHECK(m.moments.size() == 7);
  CHECK_THROWS_AS(laplace_moment_check(af("0.3", "1"), 2, P256), InvalidInput);
  CHECK_THROWS_AS(laplace_moment_check(dis("0.3", "1"), 6, P256, 1e-30), ConvergenceError);
}
