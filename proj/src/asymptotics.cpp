#include "sixvertex/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sixv {

using cplx = std::complex<double>;

namespace {

constexpr unsigned kGuard = 32;
constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-14;

Real nome(const Real& gamma) { return exp(-square(Real::pi(gamma.precision())) / (2 * gamma)); }

Real f_of(const PhaseParams& params, const Real& t, Precision w) {
  const Real g = params.gamma().at(w);
  const Real pi = Real::pi(w);
  switch (params.phase()) {
    case Phase::ferroelectric: return -log(sinh(t - g));
    case Phase::disordered: return log(pi / (2 * g) / cos(pi * t / (2 * g)));
    case Phase::antiferroelectric: {
      const Real q = nome(g);
      return log(pi / (2 * g) * specfun::theta1_prime0(q, w) / specfun::theta(2, pi * t / (2 * g), q, w));
    }
  }
  throw DomainError("unknown phase");
}

// Five evaluations of g at t + j h, j = -2..2, halving h while the stencil
// leaves the phase region.
template <class G>
std::vector<Real> stencil(const PhaseParams& params, Real h, G&& g, Real* used_h) {
  const Precision w = h.precision();
  const Real t0 = params.t().at(w);
  for (int attempt = 0;; ++attempt) {
    try {
      std::vector<Real> v;
      for (int j = -2; j <= 2; ++j) {
        const PhaseParams shifted(params.phase(), t0 + j * h, params.gamma().at(w));
        v.push_back(g(shifted));
      }
      *used_h = h;
      return v;
    } catch (const PhaseDomainError&) {
      if (attempt >= 20) throw;
      h = h / 2;
    }
  }
}

Real d1(const std::vector<Real>& v, const Real& h) { return (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h); }
Real d2(const std::vector<Real>& v, const Real& h) {
  return (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * square(h));
}

// ---- AF quadratures in double -------------------------------------------

struct Quartic {
  double a, ap, bp, b;
};

Quartic quartic_of(const SaddleGeometry& g) {
  return {g.alpha.to_double(), g.alpha_prime.to_double(), g.beta_prime.to_double(), g.beta.to_double()};
}

template <class F>
double tanh_sinh_integral(F f, double lo, double hi) {
  if (!(hi > lo)) return 0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, lo, hi, kQuadTol);
}

// Half-line integrals; the integrands decay algebraically, which the
// tanh-sinh map to a finite interval handles better than exp-sinh.
template <class F>
double half_line_integral(F f, double lo) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, lo, std::numeric_limits<double>::infinity(), kQuadTol);
}

// int_0^{s_hi} g(s, d) ds with d = s_hi - s accurate near the upper end,
// where the integrands below carry their 1/sqrt singularity.  With
// x = e - s^2 (or e + s^2), the distance to the far endpoint e' at
// s_hi^2 = |e - e'| is d (2 s_hi - d), free of cancellation.
template <class G>
double edge_integral(G g, double s_hi) {
  if (!(s_hi > 0)) return 0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([&](double s, double sc) { return g(s, sc > 0 ? sc : s_hi - s); }, 0.0, s_hi, kQuadTol);
}

// int_mu^beta dx/sqrt|Q|, mu in [beta', beta]; x = beta - s^2.
double top_integral(const Quartic& q, double mu) {
  const double s_hi = std::sqrt(std::max(q.b - mu, 0.0));
  const double full = std::sqrt(q.b - q.bp);
  return edge_integral(
      [&](double s, double d) {
        const double x = q.b - s * s;
        const double gap = mu <= q.bp ? d * (2 * full - d) : x - q.bp;
        return 2 / std::sqrt((x - q.a) * (x - q.ap) * gap);
      },
      s_hi);
}

// int_mu^alpha' dx/sqrt|Q|, mu in [alpha, alpha']; x = alpha' - s^2.
double left_integral(const Quartic& q, double mu) {
  const double s_hi = std::sqrt(std::max(q.ap - mu, 0.0));
  const double full = std::sqrt(q.ap - q.a);
  return edge_integral(
      [&](double s, double d) {
        const double x = q.ap - s * s;
        const double gap = mu <= q.a ? d * (2 * full - d) : x - q.a;
        return 2 / std::sqrt(gap * (q.bp - x) * (q.b - x));
      },
      s_hi);
}

// int_mu^beta' dx/sqrt|Q|, mu in [alpha', beta']; x = beta' - s^2.
double middle_integral(const Quartic& q, double mu) {
  const double s_hi = std::sqrt(std::max(q.bp - mu, 0.0));
  const double full = std::sqrt(q.bp - q.ap);
  return edge_integral(
      [&](double s, double d) {
        const double x = q.bp - s * s;
        const double gap = mu <= q.ap ? d * (2 * full - d) : x - q.ap;
        return 2 / std::sqrt((x - q.a) * gap * (q.b - x));
      },
      s_hi);
}

// int_z^inf dx/sqrt Q, z >= beta; x = beta + s^2.
double right_tail(const Quartic& q, double z) {
  return half_line_integral(
      [&](double s) {
        const double x = q.b + s * s;
        return 2 / std::sqrt((x - q.a) * (x - q.ap) * (x - q.bp));
      },
      std::sqrt(std::max(z - q.b, 0.0)));
}

// int_-inf^z dx/sqrt Q, z <= alpha; x = alpha - s^2.
double left_tail(const Quartic& q, double z) {
  return half_line_integral(
      [&](double s) {
        const double x = q.a - s * s;
        return 2 / std::sqrt((q.ap - x) * (q.bp - x) * (q.b - x));
      },
      std::sqrt(std::max(q.a - z, 0.0)));
}

cplx sqrt_quartic(const Quartic& q, cplx z) {
  return std::sqrt(z - q.a) * std::sqrt(z - q.ap) * std::sqrt(z - q.bp) * std::sqrt(z - q.b);
}

cplx af_resolvent_upper(const Quartic& q, double mu) {
  if (mu >= q.b) return right_tail(q, mu);
  if (mu <= q.a) return -left_tail(q, mu);
  const double outer = right_tail(q, q.b);
  const double sat = top_integral(q, q.bp);
  if (mu > q.bp) return {outer, -top_integral(q, mu)};
  if (mu >= q.ap) return {outer - middle_integral(q, mu), -sat};
  return {outer - middle_integral(q, q.ap), left_integral(q, mu) - sat};
}

// ---- FE / D closed forms ------------------------------------------------

cplx fe_resolvent(const SaddleGeometry& g, cplx z) {
  const double a = g.alpha.to_double(), b = g.beta.to_double();
  const cplx num = std::sqrt(b * (z - a)) + std::sqrt(a * (z - b));
  return g.s - 2.0 * std::log(num / std::sqrt((b - a) * z));
}

cplx d_resolvent(const SaddleGeometry& g, cplx z) {
  const double a = g.alpha.to_double(), b = g.beta.to_double();
  const cplx i(0, 1);
  const cplx num = std::sqrt(b * (z - a)) - i * std::sqrt(-a * (z - b));
  return (1 - g.zeta) / 2 + 2.0 / (i * kPi) * std::log(num / std::sqrt((b - a) * z));
}

std::pair<double, double> support_of(const SaddleGeometry& g) {
  if (g.phase == Phase::ferroelectric) return {0.0, g.beta.to_double()};
  return {g.alpha.to_double(), g.beta.to_double()};
}

}  // namespace

FreeEnergy bulk_f(const PhaseParams& params, Precision p) {
  const Precision w = p.widened(kGuard);
  const Real f = f_of(params, params.t().at(w), w);
  const Weights wt = weights_from(params, w);
  const Real ab = wt.a * wt.b;
  return {f.at(p), (-log(ab) - f).at(p), (ab * exp(f)).at(p)};
}

SaddleGeometry endpoints(const PhaseParams& params, Precision p) {
  const Precision w = p.widened(kGuard);
  const Real t = params.t().at(w), g = params.gamma().at(w);
  const Real pi = Real::pi(w);
  SaddleGeometry geo;
  geo.phase = params.phase();
  geo.gamma = g.to_double();
  geo.zeta = params.zeta().to_double();
  switch (params.phase()) {
    case Phase::ferroelectric: {
      const Real s = t - g;
      geo.s = s.to_double();
      geo.alpha = tanh(s / 2).at(p);
      geo.beta = coth(s / 2).at(p);
      geo.alpha_prime = geo.alpha;
      geo.beta_prime = geo.alpha;
      return geo;
    }
    case Phase::disordered: {
      const Real zeta = t / g;
      geo.alpha = (-pi * tan(pi * (1 - zeta) / 4)).at(p);
      geo.beta = (pi * tan(pi * (1 + zeta) / 4)).at(p);
      geo.alpha_prime = Real(0, p);
      geo.beta_prime = Real(0, p);
      return geo;
    }
    case Phase::antiferroelectric: break;
  }
  const Real zeta = t / g;
  if (!(abs(zeta) < 1)) throw DomainError("degenerate AF geometry at |zeta| = 1");
  const auto ell = specfun::elliptic_data_from_gamma(g, w);
  const Real& K = ell.bigK;
  const Real u = K * (1 - zeta) / 2;
  const auto j = specfun::jacobi_sn_cn_dn(u, ell.k, w);
  if (j.sn.is_zero() || j.cn.is_zero() || j.dn.is_zero()) throw DomainError("degenerate AF geometry");
  const Real z = specfun::jacobi_zeta(u, ell, w);
  const Real bp = 2 * K * z;
  const Real b = bp + 2 * K * j.cn * j.dn / j.sn;
  const Real ap = b - 2 * K * j.cn / (j.sn * j.dn);
  const Real a = b - 2 * K * j.dn / (j.sn * j.cn);
  geo.alpha = a.at(p);
  geo.alpha_prime = ap.at(p);
  geo.beta_prime = bp.at(p);
  geo.beta = b.at(p);
  geo.elliptic = specfun::EllipticData{ell.k.at(p), ell.kprime.at(p), ell.bigK.at(p), ell.bigKprime.at(p),
                                       ell.q.at(p)};
  geo.u_inf = u.at(p);
  geo.sn = j.sn.at(p);
  geo.cn = j.cn.at(p);
  geo.dn = j.dn.at(p);
  geo.zeta_u = z.at(p);
  return geo;
}

Real chem_residual(const SaddleGeometry& g) {
  if (g.phase != Phase::antiferroelectric) throw InvalidInput("chemical-potential relation is AF only");
  return g.beta_prime - (g.beta - g.beta_prime) * g.sn / (g.cn * g.dn) * g.zeta_u;
}

std::complex<double> resolvent_boundary(const PhaseParams& params, const SaddleGeometry& geom, double mu,
                                        bool upper) {
  cplx v;
  switch (params.phase()) {
    case Phase::ferroelectric: v = fe_resolvent(geom, cplx(mu, 0.0)); break;
    case Phase::disordered: v = d_resolvent(geom, cplx(mu, 0.0)); break;
    case Phase::antiferroelectric: v = af_resolvent_upper(quartic_of(geom), mu); break;
  }
  return upper ? v : std::conj(v);
}

std::complex<double> resolvent(const PhaseParams& params, const SaddleGeometry& geom, std::complex<double> z,
                               Precision) {
  const auto [lo, hi] = support_of(geom);
  if (z.imag() == 0 && z.real() >= lo && z.real() <= hi)
    throw DomainError("resolvent evaluated on the support at mu = " + std::to_string(z.real()));
  switch (params.phase()) {
    case Phase::ferroelectric: return fe_resolvent(geom, z);
    case Phase::disordered: return d_resolvent(geom, z);
    case Phase::antiferroelectric: break;
  }
  const Quartic q = quartic_of(geom);
  if (z.imag() == 0) return af_resolvent_upper(q, z.real());
  // Vertical ray z + i sigma s, s in [0, inf), which stays in one half plane.
  const double sigma = z.imag() > 0 ? 1.0 : -1.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  auto part = [&](bool real_part) {
    return ts.integrate(
        [&](double s) {
          const cplx v = cplx(0, sigma) / sqrt_quartic(q, z + cplx(0, sigma * s));
          return real_part ? v.real() : v.imag();
        },
        0.0, std::numeric_limits<double>::infinity(), kQuadTol);
  };
  return {part(true), part(false)};
}

double density_at(const PhaseParams& params, const SaddleGeometry& geom, double mu) {
  const auto [lo, hi] = support_of(geom);
  if (mu < lo || mu > hi) return 0;
  if (params.phase() == Phase::ferroelectric && mu <= geom.alpha.to_double()) return 1;
  if (params.phase() == Phase::antiferroelectric && mu >= geom.alpha_prime.to_double() &&
      mu <= geom.beta_prime.to_double())
    return -af_resolvent_upper(quartic_of(geom), mu).imag() / kPi;
  return std::max(0.0, -resolvent_boundary(params, geom, mu).imag() / kPi);
}

DensityProfile density(const PhaseParams& params, const SaddleGeometry& geom, int grid_size, Precision) {
  if (grid_size < 2) throw InvalidInput("density grid needs at least 2 points");
  DensityProfile out;
  const auto [lo, hi] = support_of(geom);
  for (int i = 0; i < grid_size; ++i) {
    const double mu = lo + (hi - lo) * i / (grid_size - 1);
    out.grid.emplace_back(mu, density_at(params, geom, mu));
  }
  auto rho = [&](double mu) { return density_at(params, geom, mu); };
  switch (params.phase()) {
    case Phase::ferroelectric: {
      const double a = geom.alpha.to_double();
      out.bound = 1;
      out.saturated_intervals.emplace_back(0.0, a);
      out.mass = a + tanh_sinh_integral(rho, a, hi);
      break;
    }
    case Phase::disordered:
      out.bound = std::numeric_limits<double>::infinity();
      out.mass = tanh_sinh_integral(rho, lo, 0.0) + tanh_sinh_integral(rho, 0.0, hi);
      break;
    case Phase::antiferroelectric: {
      const Quartic q = quartic_of(geom);
      out.bound = 1 / (2 * geom.gamma);
      out.saturated_intervals.emplace_back(q.ap, q.bp);
      const double sat = top_integral(q, q.bp);
      // Fubini: int_{beta'}^{beta} rho = (1/pi) int (x - beta')/sqrt|Q|, and
      // int_alpha^{alpha'} rho = (1/pi) [sat (alpha' - alpha) - int (x - alpha)/sqrt|Q|].
      const double right = edge_integral(
          [&](double s, double d) {
            const double x = q.b - s * s;
            const double full = std::sqrt(q.b - q.bp);
            return 2 * std::sqrt(d * (2 * full - d)) / std::sqrt((x - q.a) * (x - q.ap));
          },
          std::sqrt(q.b - q.bp));
      const double left_moment = edge_integral(
          [&](double s, double d) {
            const double x = q.a + s * s;
            const double full = std::sqrt(q.ap - q.a);
            return 2 * s * s / std::sqrt(d * (2 * full - d) * (q.bp - x) * (q.b - x));
          },
          std::sqrt(q.ap - q.a));
      out.mass = (q.bp - q.ap) * out.bound + right / kPi + (sat * (q.ap - q.a) - left_moment) / kPi;
      break;
    }
  }
  out.mass_error = std::fabs(out.mass - 1);
  return out;
}

DerivativeForms dfdzeta(const PhaseParams& params, Precision p) {
  const Precision w = p.widened(kGuard);
  const SaddleGeometry g = endpoints(params, w);
  const Real pi = Real::pi(w);
  const Real zeta = params.zeta().at(w);
  switch (params.phase()) {
    case Phase::ferroelectric:
      return {(-(g.alpha + g.beta) / 2).at(p), (-coth(params.t().at(w) - params.gamma().at(w))).at(p)};
    case Phase::disordered: return {((g.alpha + g.beta) / 4).at(p), (pi / 2 * tan(pi * zeta / 2)).at(p)};
    case Phase::antiferroelectric: {
      const Real q = nome(params.gamma().at(w));
      const Real x = pi * zeta / 2;
      const Real th = -pi / 2 * specfun::theta(2, x, q, w, 1) / specfun::theta(2, x, q, w);
      return {((g.alpha + g.alpha_prime + g.beta_prime + g.beta) / 4).at(p), th.at(p)};
    }
  }
  throw DomainError("unknown phase");
}

namespace {

void require_af(const PhaseParams& params, const char* what) {
  if (params.phase() != Phase::antiferroelectric) throw InvalidInput(std::string(what) + " applies to the af phase only");
}

}  // namespace

SmallGammaSeries f_small_gamma(const PhaseParams& params, int m_max, Precision p) {
  require_af(params, "f_small_gamma");
  const Precision w = p.widened(kGuard);
  const Real t = params.t().at(w), g = params.gamma().at(w);
  const Real pi = Real::pi(w);
  const Real q = nome(g);
  const Real q2 = square(q);
  const Real fd = log(pi / (2 * g) / cos(pi * t / (2 * g)));
  const Real tol = ldexp(max(Real(1, w), abs(fd)), -static_cast<long>(p.bits) + 8);

  Real sum(0, w);
  Real q2m(1, w);
  Real tail = Real::infinity(w);
  int m = 1;
  for (; m <= m_max; ++m) {
    q2m *= q2;
    const Real c = cos(pi * t * m / g);
    sum += q2m / (1 - q2m) * (m % 2 == 0 ? 1 - c : 1 + c) / m;
    // remaining terms: <= 4 q^{2j} / (j (1 - q^2)) for j > m
    tail = 4 * q2m * q2 / ((m + 1) * square(1 - q2));
    if (tail < tol) break;
  }
  if (!(tail < tol))
    throw ConvergenceError("f_small_gamma: tail bound " + tail.to_string(4) + " after " + std::to_string(m_max) +
                           " terms exceeds " + tol.to_string(4));
  SmallGammaSeries out;
  out.f_series = (fd - 2 * sum).at(p);
  out.f_sing_leading = (4 * exp(-square(pi) / g) * square(cos(pi * t / (2 * g)))).at(p);
  out.f_disordered = fd.at(p);
  out.tail_bound = (2 * tail).at(p);
  out.terms = std::min(m, m_max);
  return out;
}

ModularSeries F_modular(const PhaseParams& params, int m_max, Precision p) {
  require_af(params, "F_modular");
  const Precision w = p.widened(kGuard);
  const Real t = params.t().at(w), g = params.gamma().at(w);
  const Real lead = -g / 2 - square(t) / (2 * g) - log(sinh(g + t)) + t;
  const Real tol = ldexp(max(Real(1, w), abs(lead)), -static_cast<long>(p.bits) + 8);
  const Real r = exp(-2 * (g + t));
  const Real e4 = exp(-4 * g);

  Real sum(0, w);
  Real tail = Real::infinity(w);
  int m = 1;
  for (; m <= m_max; ++m) {
    const Real e = exp(-4 * g * m);
    sum += 2 * e / (1 - e) * square(sinh((g - t) * m)) / m;
    // term_j <= r^j / (j (1 - e^{-4g}))
    tail = pow(r, m + 1) / ((m + 1) * (1 - e4) * (1 - r));
    if (tail < tol) break;
  }
  if (!(tail < tol))
    throw ConvergenceError("F_modular: tail bound " + tail.to_string(4) + " after " + std::to_string(m_max) +
                           " terms exceeds " + tol.to_string(4));
  return {(lead - 2 * sum).at(p), (2 * tail).at(p), std::min(m, m_max)};
}

namespace {

SubleadingFit fit_ratios(const TauSequence& taus, const PhaseParams& params, Precision p, bool with_theta) {
  require_af(params, "subleading_AF_fit");
  if (taus.size() < 4) throw InvalidInput("subleading fit needs at least 4 values of N");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (taus[i].n != taus[i - 1].n + 1) throw InvalidInput("subleading fit needs consecutive N");
  const Precision w = p.widened(kGuard);
  const Real f = bulk_f(params, w).f;
  const Real q = nome(params.gamma().at(w));
  const Real half_pi = Real::pi(w) / 2;
  const Real zeta = params.zeta().at(w);

  SubleadingFit out;
  for (const auto& tv : taus) {
    Real r = tv.log_scaled.at(w) - f * (static_cast<long>(tv.n) * tv.n);
    if (with_theta) r -= log(specfun::theta(4, half_pi * (1 + zeta) * tv.n, q, w));
    out.n.push_back(tv.n);
    out.ratios.push_back(r.at(p));
  }
  const int mid = (taus.front().n + taus.back().n + 1) / 2;
  auto spread = [&](bool high) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < out.n.size(); ++i) {
      if (high ? out.n[i] < mid : out.n[i] > mid) continue;
      const double v = out.ratios[i].to_double();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo;
  };
  out.spread_high = spread(true);
  out.spread_low = spread(false);
  return out;
}

}  // namespace

SubleadingFit subleading_AF_fit(const TauSequence& taus, const PhaseParams& params, Precision p) {
  return fit_ratios(taus, params, p, true);
}

SubleadingFit subleading_AF_control(const TauSequence& taus, const PhaseParams& params, Precision p) {
  return fit_ratios(taus, params, p, false);
}

std::vector<PowerFit> smooth_power_fit(const TauSequence& taus, const PhaseParams& params, int window,
                                       Precision p) {
  if (window < 3) throw InvalidInput("power fit window must be >= 3");
  if (static_cast<int>(taus.size()) < window) throw InvalidInput("not enough values of N for the fit window");
  const Precision w = p.widened(kGuard);
  const Real f = bulk_f(params, w).f;
  std::vector<double> x, y;
  for (const auto& tv : taus) {
    x.push_back(std::log(static_cast<double>(tv.n)));
    y.push_back((tv.log_scaled.at(w) - f * (static_cast<long>(tv.n) * tv.n)).to_double());
  }
  std::vector<PowerFit> fits;
  for (std::size_t s = 0; s + window <= taus.size(); ++s) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < window; ++i) {
      sx += x[s + i];
      sy += y[s + i];
      sxx += x[s + i] * x[s + i];
      sxy += x[s + i] * y[s + i];
    }
    const double n = window;
    PowerFit fit;
    fit.n_first = taus[s].n;
    fit.n_last = taus[s + window - 1].n;
    fit.kappa = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.constant = (sy - fit.kappa * sx) / n;
    double ss = 0;
    for (int i = 0; i < window; ++i) ss += std::pow(y[s + i] - fit.kappa * x[s + i] - fit.constant, 2);
    fit.rms = std::sqrt(ss / n);
    fits.push_back(fit);
  }
  return fits;
}

Real bulk_ode_residual(const PhaseParams& params, Precision p) {
  const Precision w = p.widened(kGuard);
  Real h = ldexp(Real(1, w), -static_cast<long>(p.bits / 5));
  const auto v = stencil(params, h, [&](const PhaseParams& pp) { return f_of(pp, pp.t().at(w), w); }, &h);
  const Real rhs = exp(2 * v[2]);
  return (abs(d2(v, h) - rhs) / rhs).at(p);
}

Real ansatz_toda_residual(const PhaseParams& params, int n, Precision p) {
  require_af(params, "ansatz_toda_residual");
  if (n < 2) throw InvalidInput("ansatz Toda check needs N >= 2");
  const Precision w = p.widened(kGuard);
  const Real g = params.gamma().at(w);
  const Real q = nome(g);
  const Real half_pi = Real::pi(w) / 2;
  auto ansatz = [&](const PhaseParams& pp, int m) {
    const Real t = pp.t().at(w);
    return exp(f_of(pp, t, w) * (static_cast<long>(m) * m)) * specfun::theta(4, half_pi * (1 + t / g) * m, q, w);
  };
  Real h = ldexp(Real(1, w), -static_cast<long>(p.bits / 5));
  const auto v = stencil(params, h, [&](const PhaseParams& pp) { return ansatz(pp, n); }, &h);
  const Real lhs = v[2] * d2(v, h) - square(d1(v, h));
  const Real rhs = static_cast<long>(n) * n * ansatz(params, n + 1) * ansatz(params, n - 1);
  return (abs(lhs - rhs) / abs(rhs)).at(p);
}

Real ode_check(const PhaseParams& params, Precision p) {
  if (params.phase() == Phase::antiferroelectric) return ansatz_toda_residual(params, 6, p);
  return bulk_ode_residual(params, p);
}

}  // namespace sixv
