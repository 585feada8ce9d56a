#pragma once

// Large-N layer: bulk free energies, saddle-point endpoints, resolvents and
// eigenvalue densities, and the checks relating them to exact data.
//
// Eigenvalue variables: FE uses the shifted parameter s = t - gamma
// throughout (the determinant depends on t - gamma only); D and AF use
// mu = gamma * lambda / N resp. 2 gamma l / N, so D/AF geometry depends on
// zeta = t / gamma (and on gamma through the nome in AF).

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "sixvertex/exactcore.hpp"
#include "sixvertex/specfun.hpp"

namespace sixv {

struct SaddleGeometry {
  Phase phase = Phase::antiferroelectric;
  /// FE: alpha = tanh(s/2) is the saturation edge, beta = coth(s/2) the
  /// support edge (support [0, beta]).  D: support [alpha, beta].  AF:
  /// support [alpha, alpha'] u [alpha', beta'] u [beta', beta] with
  /// [alpha', beta'] saturated.
  Real alpha, alpha_prime, beta_prime, beta;
  // AF only.
  std::optional<specfun::EllipticData> elliptic;
  Real u_inf;
  Real sn, cn, dn;   ///< Jacobi functions at u_inf
  Real zeta_u;       ///< Jacobi Zeta at u_inf
  double gamma = 0;  ///< for the AF saturation bound 1/(2 gamma)
  double zeta = 0;
  double s = 0;      ///< FE: t - gamma
};

struct DensityProfile {
  std::vector<std::pair<double, double>> grid;  ///< (mu, rho)
  std::vector<std::pair<double, double>> saturated_intervals;
  double bound = 0;  ///< 1 (FE), 1/(2 gamma) (AF), +infinity (D)
  double mass = 0;   ///< int rho d mu by quadrature
  double mass_error = 0;
};

struct FreeEnergy {
  Real f;        ///< lim log(tau_N / c_N) / N^2
  Real F;        ///< -log(a b) - f
  Real z_limit;  ///< lim Z_N^{1/N^2} = a b e^f
};

/// FE: f = -log sinh(t - gamma); D: e^f = (pi/2g) / cos(pi t / 2g);
/// AF: e^f = (pi/2g) theta_1'(0) / theta_2(pi t / 2g), q = e^{-pi^2/2g}.
FreeEnergy bulk_f(const PhaseParams& params, Precision p);

/// Endpoints of the saddle-point support.  AF: u_inf = K (1 - zeta)/2,
/// beta' = 2K Z(u_inf), beta = beta' + 2K cn dn/sn, alpha' = beta - 2K cn/(sn dn),
/// alpha = beta - 2K dn/(sn cn).  Throws DomainError at zeta = +-1.
SaddleGeometry endpoints(const PhaseParams& params, Precision p);

/// beta' - (beta - beta') sn/(cn dn) Z(u_inf), which vanishes when the
/// chemical potentials of the two unsaturated intervals agree (AF only).
Real chem_residual(const SaddleGeometry& geom);

/// Resolvent omega(z) = int rho(mu) d mu / (z - mu) for z off the support.
/// FE and D use the closed forms; AF integrates
///   int_z^inf dz' / sqrt((z'-alpha)(z'-alpha')(z'-beta')(z'-beta))
/// along a vertical ray (complex z) or the real axis (real z outside the
/// support).  Throws DomainError for real z in the support.
std::complex<double> resolvent(const PhaseParams& params, const SaddleGeometry& geom, std::complex<double> z,
                               Precision p = Precision{});

/// Boundary value omega(mu + i0) (upper = true) or omega(mu - i0) for real mu.
std::complex<double> resolvent_boundary(const PhaseParams& params, const SaddleGeometry& geom, double mu,
                                        bool upper = true);

/// rho(mu) = -Im omega(mu + i0) / pi.
double density_at(const PhaseParams& params, const SaddleGeometry& geom, double mu);

/// grid_size samples of rho across the support (endpoints included), the
/// saturated intervals, the bound, and the quadrature mass.
DensityProfile density(const PhaseParams& params, const SaddleGeometry& geom, int grid_size,
                       Precision p = Precision{});

struct DerivativeForms {
  Real endpoint_form;
  Real theta_form;
};

/// d f / d zeta two ways.  D: (alpha + beta)/4 vs (pi/2) tan(pi zeta/2);
/// AF: (alpha + alpha' + beta' + beta)/4 vs -(pi/2) theta_2'(pi zeta/2)/theta_2(pi zeta/2).
/// FE has no zeta dependence; it returns d f / d t: -(alpha + beta)/2 vs -coth(t - gamma).
DerivativeForms dfdzeta(const PhaseParams& params, Precision p);

struct SmallGammaSeries {
  Real f_series;        ///< f_D(zeta) - 2 sum_m (1/m) q^{2m}/(1-q^{2m}) (1 - (-1)^m cos(m pi t/g))
  Real f_sing_leading;  ///< 4 e^{-pi^2/g} cos^2(pi t / 2g)
  Real f_disordered;    ///< log[(pi/2g)/cos(pi t/2g)]
  Real tail_bound;
  int terms = 0;
};

/// AF only.  Sums until the tail bound drops below 2^-(bits-8) (relative to
/// max(1,|f|)); throws ConvergenceError if m_max terms do not suffice.
SmallGammaSeries f_small_gamma(const PhaseParams& params, int m_max, Precision p);

struct ModularSeries {
  Real F;
  Real tail_bound;
  int terms = 0;
};

/// AF only.  F = -g/2 - t^2/2g - log sinh(g+t) + t
///              - 2 sum_m (1/m) e^{-2mg} sinh^2(m(g-t)) / sinh(2mg).
ModularSeries F_modular(const PhaseParams& params, int m_max, Precision p);

struct SubleadingFit {
  std::vector<int> n;
  std::vector<Real> ratios;  ///< r_N
  double spread_high = 0;    ///< max - min over N >= (N_min + N_max + 1)/2
  double spread_low = 0;     ///< max - min over N <= (N_min + N_max + 1)/2
};

/// r_N = log(tau_N/c_N) - N^2 f - log theta_4((pi/2)(1+zeta) N, q).  AF
/// only; needs at least 4 consecutive N.
SubleadingFit subleading_AF_fit(const TauSequence& taus, const PhaseParams& params, Precision p);

/// Same ratios without the theta_4 factor (control).
SubleadingFit subleading_AF_control(const TauSequence& taus, const PhaseParams& params, Precision p);

struct PowerFit {
  int n_first = 0, n_last = 0;
  double kappa = 0;
  double constant = 0;
  double rms = 0;
};

/// Smooth-phase analogue: r_N = log(tau_N/c_N) - N^2 f fitted to
/// kappa log N + const by least squares over sliding windows.
std::vector<PowerFit> smooth_power_fit(const TauSequence& taus, const PhaseParams& params, int window,
                                       Precision p);

/// Relative residual of f'' = e^{2f} in t at fixed gamma, 5-point stencil.
Real bulk_ode_residual(const PhaseParams& params, Precision p);

/// Relative residual of the scaled Toda identity for
///   T_N(t) = e^{N^2 f(t)} theta_4((pi/2)(1 + t/g) N),  N >= 2.
Real ansatz_toda_residual(const PhaseParams& params, int n, Precision p);

/// FE, D: bulk_ode_residual.  AF: ansatz_toda_residual at N = 6.
Real ode_check(const PhaseParams& params, Precision p);

}  // namespace sixv
