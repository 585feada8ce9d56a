#pragma once

#include <string>
#include <string_view>

#include "sixvertex/real.hpp"

namespace sixv {

/// The three regimes of the homogeneous six-vertex model, each with its own
/// parameterization of the Boltzmann weights:
///   ferroelectric      a = sinh(t-g), b = sinh(t+g), c = sinh(2g),  0 < g < t
///   disordered         a = sin(g-t),  b = sin(g+t),  c = sin(2g),   |t| < g < pi/2
///   antiferroelectric  a = sinh(g-t), b = sinh(g+t), c = sinh(2g),  |t| < g
enum class Phase { ferroelectric, disordered, antiferroelectric };

/// Short tag used on the command line and in output: "fe", "d", "af".
std::string_view phase_tag(Phase phase);
/// Inverse of phase_tag (case-insensitive).  Throws InvalidInput.
Phase parse_phase(std::string_view tag);

/// A validated phase point.  Construction checks the region inequalities and
/// throws PhaseDomainError naming the first one violated.
class PhaseParams {
 public:
  PhaseParams(Phase phase, Real t, Real gamma);

  /// Builds the point from zeta = t/gamma.
  static PhaseParams from_zeta(Phase phase, const Real& zeta, const Real& gamma);

  Phase phase() const { return phase_; }
  const Real& t() const { return t_; }
  const Real& gamma() const { return gamma_; }
  /// t / gamma.
  const Real& zeta() const { return zeta_; }
  /// Anisotropy: cosh(2g) (FE), -cos(2g) (D), -cosh(2g) (AF).
  const Real& delta() const { return delta_; }

  /// Same phase and gamma, different t (validated again).
  PhaseParams with_t(const Real& t) const { return PhaseParams(phase_, t, gamma_); }

  std::string describe() const;

 private:
  Phase phase_;
  Real t_;
  Real gamma_;
  Real zeta_;
  Real delta_;
};

struct Weights {
  Real a;
  Real b;
  Real c;
};

/// Boltzmann weights of the phase point, evaluated at precision p.
Weights weights_from(const PhaseParams& params, Precision p);

}  // namespace sixv
