#pragma once

// Exact finite-N machinery: derivatives of the Hankel symbol
//   phi(t) = c / (a b)
// (sinh(2g)/(sinh(t+g) sinh(t-g)) and its phase variants), the scaled
// Hankel determinants tau_N / c_N with c_N = (prod_{n<N} n!)^2, the DWBC
// partition function Z_N = (a b)^{N^2} tau_N / c_N, and the cross-checks
// that tie them together (discrete Laplace sums, the Toda bilinear
// identity, the moment integrals of the disordered phase).

#include <vector>

#include <gmpxx.h>

#include "sixvertex/error.hpp"
#include "sixvertex/phase.hpp"
#include "sixvertex/real.hpp"

namespace sixv {

/// Raised when a discrete Laplace sum is truncated too early.
class CutoffTooSmall : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// Integer polynomial sum_i coeffs[i] w^i.
using IntPolynomial = std::vector<mpz_class>;

/// Which elementary function the derivative polynomials are built for.
enum class CotKind {
  hyperbolic,    ///< w = coth x,  dw/dx = 1 - w^2
  trigonometric  ///< w = cot x,   dw/dx = -1 - w^2
};

/// P_0(w) = w, P_{n+1} = P_n'(w) dw/dx; then d^n/dx^n coth x = P_n(coth x)
/// (resp. cot).  Exact over the integers.
std::vector<IntPolynomial> derivative_polynomials(int order_max, CotKind kind);

/// phi and its t-derivatives at one phase point.
///
/// phi is split exactly into two cotangent-type terms,
///   FE: coth(t-g) - coth(t+g),  D: cot(g-t) + cot(g+t),  AF: coth(g-t) + coth(g+t),
/// and phi^(n) = s_- P_n(w_-) + s_+ P_n(w_+) with the integer polynomials
/// above.  Evaluation precision is raised until the cancellation between the
/// polynomial terms leaves at least the requested bits.
class DerivativeTable {
 public:
  DerivativeTable(const PhaseParams& params, int order_max, Precision p);

  int order_max() const { return static_cast<int>(values_.size()) - 1; }
  const std::vector<IntPolynomial>& polynomials() const { return polys_; }
  const std::vector<Real>& values() const { return values_; }
  const Real& operator[](int n) const { return values_.at(static_cast<std::size_t>(n)); }
  const PhaseParams& params() const { return params_; }
  Precision precision() const { return precision_; }

 private:
  PhaseParams params_;
  Precision precision_;
  std::vector<IntPolynomial> polys_;
  std::vector<Real> values_;
};

DerivativeTable phi_derivatives(const PhaseParams& params, int order_max, Precision p);

/// c_N = (prod_{n=0}^{N-1} n!)^2, exactly.
mpz_class barnes_square(int n);

struct TauValue {
  int n = 0;
  Real scaled_tau;        ///< tau_N / c_N
  Real log_scaled;        ///< log(tau_N / c_N)
  double cancellation_bits = 0;  ///< bits lost to cancellation in the elimination
};

using TauSequence = std::vector<TauValue>;

/// tau_N / c_N = det_{0<=i,k<N} [ phi^(i+k) / (i! k!) ], by Gaussian
/// elimination with partial pivoting.
///
/// The elimination records, per column, the largest magnitude any entry of
/// that column reached; the sum over columns of log2(largest / pivot) is
/// the cancellation estimate.  PrecisionExhausted is thrown when it exceeds
/// bits - 32.
TauValue tau_scaled(const PhaseParams& params, int n, Precision p);
TauValue tau_scaled(const DerivativeTable& table, int n, Precision p);

/// tau_N / c_N for N = n_min..n_max, sharing one derivative table.
TauSequence tau_sequence(const PhaseParams& params, int n_min, int n_max, Precision p);

/// Z_N = (a b)^{N^2} tau_N / c_N.
Real partition_Z(const PhaseParams& params, int n, Precision p);

struct DiscreteSum {
  Real tau;        ///< the unscaled tau_N (compare with c_N * tau_scaled)
  Real tail_bound; ///< estimated magnitude of the truncated tail
  int cutoff = 0;
};

/// tau_N as the discrete sum over distinct integer "eigenvalues" l_i:
///   FE: tau_N = 2^{N^2+N} sum_{0<=l_1<...<l_N} Delta(l)^2 prod e^{-2 t l_i} sinh(2 g l_i)
///   AF: tau_N = 2^{N^2}   sum_{l_1<...<l_N in Z} Delta(l)^2 prod e^{2 t l_i - 2 g |l_i|}
/// with |l_i| <= cutoff.  The tail beyond the cutoff is bounded by
/// extrapolating the last two shells geometrically; CutoffTooSmall is thrown
/// if it exceeds 2^(-bits/2) of the partial sum.  Only FE and AF have a
/// discrete measure.
DiscreteSum tau_discrete_sum(const PhaseParams& params, int n, int cutoff, Precision p);

/// Smallest cutoff that the tail test above is expected to accept.
int suggest_cutoff(const PhaseParams& params, int n, Precision p);

struct TodaResidual {
  Real relative;   ///< |lhs - rhs| / |rhs|
  Real lhs;        ///< T T'' - T'^2, T = tau_N / c_N
  Real rhs;        ///< N^2 T_{N+1} T_{N-1}
  Real step;       ///< finite-difference step actually used
};

/// Toda bilinear identity in scaled form,
///   T_N T_N'' - T_N'^2 = N^2 T_{N+1} T_{N-1},   T_N = tau_N / c_N, T_0 = 1,
/// with t-derivatives by 5-point central differences at h = 2^(-bits/5).
/// The step is halved (up to 20 times) if the stencil leaves the phase
/// region.
TodaResidual toda_residual(const PhaseParams& params, int n, Precision p);

struct MomentCheck {
  double max_abs_error = 0;
  std::vector<double> moments;   ///< quadrature values, i = 0..i_max
  std::vector<double> expected;  ///< phi^(i)(t)
  std::vector<double> quadrature_error;
};

/// Disordered phase only: integrates
///   int lambda^i e^{t lambda} sinh(lambda (pi - 2g)/2) / sinh(lambda pi/2) d lambda
/// over the real line (adaptive Gauss-Kronrod on a truncated interval with
/// an analytic tail estimate) and compares with phi^(i)(t).
MomentCheck laplace_moment_check(const PhaseParams& params, int i_max, Precision p,
                                 double target = 1e-12);

}  // namespace sixv
