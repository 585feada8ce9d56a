#include "sixvertex/phase.hpp"

#include <algorithm>
#include <cctype>

#include "sixvertex/error.hpp"

namespace sixv {

std::string_view phase_tag(Phase phase) {
  switch (phase) {
    case Phase::ferroelectric: return "fe";
    case Phase::disordered: return "d";
    case Phase::antiferroelectric: return "af";
  }
  return "?";
}

Phase parse_phase(std::string_view tag) {
  std::string s(tag);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "fe" || s == "ferroelectric") return Phase::ferroelectric;
  if (s == "d" || s == "disordered") return Phase::disordered;
  if (s == "af" || s == "antiferroelectric") return Phase::antiferroelectric;
  throw InvalidInput("unknown phase '" + std::string(tag) + "' (expected fe, d or af)");
}

PhaseParams::PhaseParams(Phase phase, Real t, Real gamma)
    : phase_(phase), t_(std::move(t)), gamma_(std::move(gamma)), zeta_(t_.precision()), delta_(t_.precision()) {
  const std::string where = " (" + std::string(phase_tag(phase_)) + ", t = " + t_.to_string(10) +
                            ", gamma = " + gamma_.to_string(10) + ")";
  if (!t_.is_finite() || !gamma_.is_finite()) throw PhaseDomainError("non-finite parameter" + where);
  switch (phase_) {
    case Phase::ferroelectric:
      if (!(gamma_ > 0)) throw PhaseDomainError("ferroelectric phase requires gamma > 0" + where);
      if (!(gamma_ < t_)) throw PhaseDomainError("ferroelectric phase requires |gamma| < t" + where);
      delta_ = cosh(2 * gamma_);
      break;
    case Phase::disordered:
      if (!(gamma_ > 0)) throw PhaseDomainError("disordered phase requires gamma > 0" + where);
      if (!(gamma_ < Real::pi(gamma_.precision()) / 2))
        throw PhaseDomainError("disordered phase requires gamma < pi/2" + where);
      if (!(abs(t_) < gamma_)) throw PhaseDomainError("disordered phase requires |t| < gamma" + where);
      delta_ = -cos(2 * gamma_);
      break;
    case Phase::antiferroelectric:
      if (!(gamma_ > 0)) throw PhaseDomainError("antiferroelectric phase requires gamma > 0" + where);
      if (!(abs(t_) < gamma_)) throw PhaseDomainError("antiferroelectric phase requires |t| < gamma" + where);
      delta_ = -cosh(2 * gamma_);
      break;
  }
  zeta_ = t_ / gamma_;
}

PhaseParams PhaseParams::from_zeta(Phase phase, const Real& zeta, const Real& gamma) {
  return PhaseParams(phase, zeta * gamma, gamma);
}

std::string PhaseParams::describe() const {
  return std::string(phase_tag(phase_)) + " t=" + t_.to_string(12) + " gamma=" + gamma_.to_string(12);
}

Weights weights_from(const PhaseParams& params, Precision p) {
  const Real t = params.t().at(p);
  const Real g = params.gamma().at(p);
  switch (params.phase()) {
    case Phase::ferroelectric: return {sinh(t - g), sinh(t + g), sinh(2 * g)};
    case Phase::disordered: return {sin(g - t), sin(g + t), sin(2 * g)};
    case Phase::antiferroelectric: return {sinh(g - t), sinh(g + t), sinh(2 * g)};
  }
  throw DomainError("unknown phase");
}

}  // namespace sixv
