#pragma once

// Complete elliptic integrals, Jacobi elliptic functions, Jacobi Zeta and
// theta functions on the real axis, at arbitrary binary precision.
//
// Conventions (DLMF 19, 20, 22): modulus k, complementary k' = sqrt(1-k^2),
// nome q = exp(-pi K'/K), and theta functions in the "z" normalization
//   theta_2(z,q) = 2 sum_{n>=0} q^{(n+1/2)^2} cos((2n+1) z),
// so theta_j has period pi or 2pi in z.
//
// Every routine takes its precision explicitly and is a pure function of its
// arguments.  Results are accurate to 2^(-bits+g), g = Precision::guard.

#include <string>
#include <vector>

#include "sixvertex/real.hpp"

namespace sixv::specfun {

/// Elliptic data for a single modulus.
struct EllipticData {
  Real k;          ///< modulus, 0 <= k < 1
  Real kprime;     ///< complementary modulus
  Real bigK;       ///< K(k)
  Real bigKprime;  ///< K'(k) = K(k')
  Real q;          ///< nome exp(-pi K'/K)
};

/// K(k) by the arithmetic-geometric mean.  Throws DomainError unless 0 <= k < 1.
Real elliptic_K(const Real& k, Precision p);

/// E(k), from the same AGM sequence as K.
Real elliptic_E(const Real& k, Precision p);

/// Elliptic data whose nome is q = exp(-pi^2/(2 gamma)), i.e. K'/K = pi/(2 gamma).
/// The modulus is recovered from q through theta quotients, never by
/// root-finding:  k = theta_2^2(0)/theta_3^2(0),  k' = theta_4^2(0)/theta_3^2(0).
///
/// The dual nome exp(-2 gamma) obtained by the modular transformation is not
/// needed by any routine here.
EllipticData elliptic_data_from_gamma(const Real& gamma, Precision p);

/// Elliptic data for a given modulus 0 <= k < 1.
EllipticData elliptic_data_from_modulus(const Real& k, Precision p);

struct JacobiTriple {
  Real sn;
  Real cn;
  Real dn;
};

/// sn, cn, dn for real u by descending Landen transformation (AGM backward
/// recursion).  dn is formed as sqrt(k'^2 + k^2 cn^2), which stays accurate
/// near u = K.
JacobiTriple jacobi_sn_cn_dn(const Real& u, const Real& k, Precision p);

/// Jacobi Zeta function Z(u,k) = (pi/2K) theta_4'(v)/theta_4(v), v = pi u/(2K),
/// with theta_4' differentiated term by term.
Real jacobi_zeta(const Real& u, const Real& k, Precision p);

/// Same, reusing precomputed K and q.
Real jacobi_zeta(const Real& u, const EllipticData& ell, Precision p);

/// theta_j(z, q) for j = 1..4, or its `derivative`-th z-derivative.
/// Throws DomainError unless 0 <= q < 1 and 1 <= j <= 4.  The series is
/// summed until the next term drops below 2^(-bits-8) with a geometric
/// ratio below 1/2.
Real theta(int j, const Real& z, const Real& q, Precision p, int derivative = 0);

/// theta_1'(0, q).
Real theta1_prime0(const Real& q, Precision p);

struct IdentityResult {
  std::string name;
  Real residual;   ///< absolute, or relative where the quantity is not O(1)
  Real tolerance;
  bool pass() const { return residual < tolerance; }
};

/// Classical identities at fixed sample points: Legendre relation, Jacobi
/// identities at seeded random (u, k), quarter-period values, Zeta zeros,
/// parity and periodicity, theta_1'(0) = theta_2 theta_3 theta_4,
/// theta_3^4 = theta_2^4 + theta_4^4, and the nome round trip.  Tolerance
/// 2^(-bits+8), except 2^(-bits/2) for the round trip.
std::vector<IdentityResult> identity_suite(Precision p);

}  // namespace sixv::specfun
