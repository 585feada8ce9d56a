#include "sixvertex/exactcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace sixv {

namespace {

constexpr unsigned kGuard = 32;

// Horner evaluation of an integer polynomial; also returns log2 of
// sum |c_j| |w|^j, the scale that bounds the rounding error.
struct PolyValue {
  Real value;
  double log2_scale;
};

PolyValue eval_poly(const IntPolynomial& c, const Real& w) {
  Real acc(0, w.precision());
  Real scale(0, Precision{64});
  const Real aw = abs(w).at(Precision{64});
  for (std::size_t j = c.size(); j-- > 0;) {
    acc = acc * w + Real(c[j], w.precision());
    scale = scale * aw + abs(Real(c[j], Precision{64}));
  }
  return {std::move(acc), log2_abs(scale)};
}

struct Split {
  CotKind kind;
  Real w_minus, w_plus;   // argument functions of the two terms
  int sign_minus;         // sign of the first term in phi
  bool alternate_minus;   // first term differentiates with (-1)^n
};

Split split_phi(const PhaseParams& params, Precision w) {
  const Real t = params.t().at(w);
  const Real g = params.gamma().at(w);
  switch (params.phase()) {
    case Phase::ferroelectric: return {CotKind::hyperbolic, coth(t - g), coth(t + g), -1, false};
    case Phase::disordered: return {CotKind::trigonometric, cot(g - t), cot(g + t), 1, true};
    case Phase::antiferroelectric: return {CotKind::hyperbolic, coth(g - t), coth(g + t), 1, true};
  }
  throw DomainError("unknown phase");
}

// phi^(n) = s_n A_n + B_n with A_n = P_n(w_-), B_n = P_n(w_+).  The sign
// convention for FE puts the minus on B.
Real combine(const Split& s, int n, const Real& a, const Real& b) {
  if (s.sign_minus < 0) return a - b;
  return (s.alternate_minus && (n % 2 == 1)) ? b - a : a + b;
}

}  // namespace

std::vector<IntPolynomial> derivative_polynomials(int order_max, CotKind kind) {
  if (order_max < 0) throw InvalidInput("order_max must be >= 0");
  const long s = kind == CotKind::hyperbolic ? 1 : -1;
  std::vector<IntPolynomial> polys;
  polys.push_back({mpz_class(0), mpz_class(1)});
  for (int n = 0; n < order_max; ++n) {
    const IntPolynomial& p = polys.back();
    IntPolynomial d(p.size() > 1 ? p.size() - 1 : 1, mpz_class(0));
    for (std::size_t j = 1; j < p.size(); ++j) d[j - 1] = p[j] * static_cast<long>(j);
    IntPolynomial r(d.size() + 2, mpz_class(0));
    for (std::size_t j = 0; j < d.size(); ++j) {
      r[j] += s * d[j];
      r[j + 2] -= d[j];
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    polys.push_back(std::move(r));
  }
  return polys;
}

DerivativeTable::DerivativeTable(const PhaseParams& params, int order_max, Precision p)
    : params_(params), precision_(p) {
  if (order_max < 0) throw InvalidInput("order_max must be >= 0");
  const Precision store = p.widened(kGuard);
  const CotKind kind = params.phase() == Phase::disordered ? CotKind::trigonometric : CotKind::hyperbolic;
  polys_ = derivative_polynomials(order_max, kind);

  // First pass at 64 extra bits; if the measured cancellation exceeds that,
  // evaluate again with enough headroom (capped at 4x the target).
  unsigned extra = 64;
  for (int pass = 0; pass < 2; ++pass) {
    const Precision w = store.widened(extra);
    const Split s = split_phi(params, w);
    values_.clear();
    double worst = 0;
    for (int n = 0; n <= order_max; ++n) {
      const PolyValue a = eval_poly(polys_[n], s.w_minus);
      const PolyValue b = eval_poly(polys_[n], s.w_plus);
      Real v = combine(s, n, a.value, b.value);
      const double scale = std::max(a.log2_scale, b.log2_scale);
      if (!v.is_zero()) worst = std::max(worst, scale - log2_abs(v));
      values_.push_back(v.at(store));
    }
    const double needed = std::min(worst + 16.0, 4.0 * store.bits);
    if (needed <= extra) return;
    extra = static_cast<unsigned>(std::ceil(needed)) + 16;
  }
}

DerivativeTable phi_derivatives(const PhaseParams& params, int order_max, Precision p) {
  return DerivativeTable(params, order_max, p);
}

mpz_class barnes_square(int n) {
  if (n < 0) throw InvalidInput("barnes_square needs n >= 0");
  mpz_class prod = 1, fact = 1;
  for (int k = 1; k < n; ++k) {
    fact *= k;
    prod *= fact;
  }
  return prod * prod;
}

TauValue tau_scaled(const DerivativeTable& table, int n, Precision p) {
  if (n < 1) throw InvalidInput("N must be >= 1, got " + std::to_string(n));
  if (table.order_max() < 2 * n - 2)
    throw InvalidInput("derivative table too short for N = " + std::to_string(n));
  const Precision w = p.widened(kGuard);

  std::vector<Real> inv_fact;
  {
    Real f(1, w);
    for (int i = 0; i < n; ++i) {
      if (i > 0) f *= i;
      inv_fact.push_back(1 / f);
    }
  }
  std::vector<std::vector<Real>> m(n, std::vector<Real>(n, Real(w)));
  std::vector<double> colmax(n, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      m[i][k] = table[i + k].at(w) * inv_fact[i] * inv_fact[k];
      colmax[k] = std::max(colmax[k], log2_abs(m[i][k]));
    }

  Real det(1, w);
  double loss = 0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
    if (m[piv][c].is_zero()) throw PrecisionExhausted("singular Hankel matrix at N = " + std::to_string(n));
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    loss += colmax[c] - log2_abs(m[c][c]);
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      const Real f = m[r][c] / m[c][c];
      for (int k = c + 1; k < n; ++k) {
        m[r][k] -= f * m[c][k];
        colmax[k] = std::max(colmax[k], log2_abs(m[r][k]));
      }
    }
  }
  if (loss > static_cast<double>(p.bits) - 32)
    throw PrecisionExhausted("Hankel determinant at N = " + std::to_string(n) + " lost " +
                             std::to_string(static_cast<long>(loss)) + " bits to cancellation; increase --bits above " +
                             std::to_string(p.bits));
  if (!(det > 0)) throw PrecisionExhausted("non-positive Hankel determinant at N = " + std::to_string(n));
  TauValue out;
  out.n = n;
  out.scaled_tau = det.at(p);
  out.log_scaled = log(det).at(p);
  out.cancellation_bits = loss;
  return out;
}

TauValue tau_scaled(const PhaseParams& params, int n, Precision p) {
  if (n < 1) throw InvalidInput("N must be >= 1, got " + std::to_string(n));
  return tau_scaled(DerivativeTable(params, 2 * n - 2, p), n, p);
}

TauSequence tau_sequence(const PhaseParams& params, int n_min, int n_max, Precision p) {
  if (n_min < 1 || n_max < n_min) throw InvalidInput("need 1 <= n_min <= n_max");
  const DerivativeTable table(params, 2 * n_max - 2, p);
  TauSequence seq;
  for (int n = n_min; n <= n_max; ++n) seq.push_back(tau_scaled(table, n, p));
  return seq;
}

Real partition_Z(const PhaseParams& params, int n, Precision p) {
  const Precision w = p.widened(16);
  const Weights wt = weights_from(params, w);
  const TauValue tv = tau_scaled(params, n, w);
  return (pow(wt.a * wt.b, static_cast<long>(n) * n) * tv.scaled_tau).at(p);
}

namespace {

struct SumSetup {
  long lo, hi;
  bool fe;
  Real t, g;
};

// Depth-first enumeration of strictly increasing tuples l_1 < ... < l_N in
// [lo, hi].  Each tuple's weight is added to shell[max |l_i|].  Branches whose
// largest possible contribution is below 2^-(bits+24) of a lower bound for
// the total are skipped; the bound uses log2 magnitudes in double.
class TupleSum {
 public:
  TupleSum(const SumSetup& s, int n, Precision w) : s_(s), n_(n), w_(w) {
    for (long l = s.lo; l <= s.hi; ++l) {
      Real x = s.fe ? exp(-2 * s.t * l) * sinh(2 * s.g * l) : exp(2 * s.t * l - 2 * s.g * std::labs(l));
      log_weight_.push_back(log2_abs(x));
      weight_.push_back(std::move(x));
    }
    const std::size_t m = weight_.size();
    suffix_max_.assign(m + 1, -std::numeric_limits<double>::infinity());
    for (std::size_t i = m; i-- > 0;) suffix_max_[i] = std::max(suffix_max_[i + 1], log_weight_[i]);
    log_span_ = std::log2(static_cast<double>(s.hi - s.lo + 1));
    // Lower bound for the total: the best window of n consecutive sites.
    double best = -std::numeric_limits<double>::infinity();
    double vdm = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) vdm += 2 * std::log2(static_cast<double>(i - j));
    for (std::size_t start = 0; start + n <= m; ++start) {
      double lw = vdm;
      for (int i = 0; i < n; ++i) lw += log_weight_[start + i];
      best = std::max(best, lw);
    }
    floor_ = best - static_cast<double>(w.bits) - 24;
    shell_.assign(static_cast<std::size_t>(std::max(std::labs(s.lo), std::labs(s.hi)) + 1), Real(0, w));
    chosen_.reserve(n);
  }

  void run() { descend(s_.lo, Real(1, w_), 0.0); }
  const std::vector<Real>& shells() const { return shell_; }

 private:
  void descend(long from, const Real& acc, double log_acc) {
    const int depth = static_cast<int>(chosen_.size());
    if (depth == n_) {
      const long m = std::max(std::labs(chosen_.front()), std::labs(chosen_.back()));
      shell_[static_cast<std::size_t>(m)] += acc;
      return;
    }
    const int rest = n_ - depth - 1;
    for (long l = from; l <= s_.hi - rest; ++l) {
      const std::size_t idx = static_cast<std::size_t>(l - s_.lo);
      const Real& wl = weight_[idx];
      if (wl.is_zero()) continue;
      double log_next = log_acc + log_weight_[idx];
      for (long prev : chosen_) log_next += 2 * std::log2(static_cast<double>(l - prev));
      const double bound = log_next + rest * (suffix_max_[idx + 1] + 2 * (n_ - 1) * log_span_);
      if (bound < floor_) continue;
      Real next = acc * wl;
      for (long prev : chosen_) next *= static_cast<long>((l - prev) * (l - prev));
      chosen_.push_back(l);
      descend(l + 1, next, log_next);
      chosen_.pop_back();
    }
  }

  SumSetup s_;
  int n_;
  Precision w_;
  std::vector<Real> weight_;
  std::vector<double> log_weight_;
  std::vector<double> suffix_max_;
  double log_span_ = 0;
  double floor_ = 0;
  std::vector<Real> shell_;
  std::vector<long> chosen_;
};

double decay_rate(const PhaseParams& params) {
  const double t = params.t().to_double(), g = params.gamma().to_double();
  return params.phase() == Phase::ferroelectric ? 2 * (t - g) : 2 * (g - std::fabs(t));
}

void require_discrete(const PhaseParams& params) {
  if (params.phase() == Phase::disordered)
    throw InvalidInput("discrete sums exist only in the fe and af phases");
}

}  // namespace

DiscreteSum tau_discrete_sum(const PhaseParams& params, int n, int cutoff, Precision p) {
  require_discrete(params);
  if (n < 1) throw InvalidInput("N must be >= 1, got " + std::to_string(n));
  const bool fe = params.phase() == Phase::ferroelectric;
  const long lo = fe ? 0 : -cutoff;
  if (cutoff < 2 || cutoff - lo + 1 < n + 1)
    throw CutoffTooSmall("cutoff " + std::to_string(cutoff) + " leaves too few sites for N = " + std::to_string(n));
  const Precision w = p.widened(kGuard);

  TupleSum sum(SumSetup{lo, cutoff, fe, params.t().at(w), params.gamma().at(w)}, n, w);
  sum.run();
  const auto& shells = sum.shells();
  Real total(0, w);
  for (const Real& s : shells) total += s;

  const Real& last = shells[static_cast<std::size_t>(cutoff)];
  const Real& prev = shells[static_cast<std::size_t>(cutoff - 1)];
  Real tail(0, w);
  if (!last.is_zero()) {
    if (prev.is_zero() || !(last < prev))
      throw CutoffTooSmall("discrete sum shells not yet decreasing at cutoff " + std::to_string(cutoff));
    const Real r = last / prev;
    tail = last * r / (1 - r);
  }
  if (tail > ldexp(total, -static_cast<long>(p.bits / 2)))
    throw CutoffTooSmall("tail estimate " + tail.to_string(6) + " exceeds 2^-" + std::to_string(p.bits / 2) +
                         " of the partial sum at cutoff " + std::to_string(cutoff) + "; try cutoff " +
                         std::to_string(suggest_cutoff(params, n, p)));

  const long pow2 = fe ? static_cast<long>(n) * n + n : static_cast<long>(n) * n;
  return {ldexp(total, pow2).at(p), ldexp(tail, pow2).at(p), cutoff};
}

int suggest_cutoff(const PhaseParams& params, int n, Precision p) {
  require_discrete(params);
  const double kappa = decay_rate(params);
  // Shell L behaves like L^(2N-2) e^{-kappa L}; ask for a relative tail of
  // 2^-(bits/2 + 24), with the geometric 1/(1 - e^-kappa) factor included.
  const double target = (p.bits / 2.0 + 24) * std::log(2.0) - std::log(-std::expm1(-kappa));
  long l = n + 2;
  while (kappa * l - (2.0 * n - 2) * std::log(static_cast<double>(l)) < target + kappa * n) ++l;
  return static_cast<int>(l);
}

TodaResidual toda_residual(const PhaseParams& params, int n, Precision p) {
  if (n < 1) throw InvalidInput("N must be >= 1, got " + std::to_string(n));
  const Precision w = p.widened(64);
  Real h = ldexp(Real(1, w), -static_cast<long>(p.bits / 5));
  const Real t0 = params.t().at(w);

  std::vector<Real> vals;
  for (int attempt = 0;; ++attempt) {
    try {
      vals.clear();
      for (int j = -2; j <= 2; ++j) {
        const PhaseParams shifted(params.phase(), t0 + j * h, params.gamma().at(w));
        vals.push_back(tau_scaled(shifted, n, w).scaled_tau);
      }
      break;
    } catch (const PhaseDomainError&) {
      if (attempt >= 20) throw;
      h = h / 2;
    }
  }
  const Real d1 = (vals[0] - 8 * vals[1] + 8 * vals[3] - vals[4]) / (12 * h);
  const Real d2 = (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3] - vals[4]) / (12 * square(h));
  const Real lhs = vals[2] * d2 - square(d1);

  const DerivativeTable table(params, 2 * n, w);
  const Real up = tau_scaled(table, n + 1, w).scaled_tau;
  const Real down = n == 1 ? Real(1, w) : tau_scaled(table, n - 1, w).scaled_tau;
  const Real rhs = static_cast<long>(n) * n * up * down;
  return {(abs(lhs - rhs) / abs(rhs)).at(p), lhs.at(p), rhs.at(p), h.at(p)};
}

MomentCheck laplace_moment_check(const PhaseParams& params, int i_max, Precision p, double target) {
  if (params.phase() != Phase::disordered) throw InvalidInput("laplace moment check applies to the d phase only");
  if (i_max < 0) throw InvalidInput("i_max must be >= 0");
  using boost::math::quadrature::gauss_kronrod;
  const long double t = params.t().to_double();
  const long double g = params.gamma().to_double();
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double a = (pi - 2 * g) / 2, b = pi / 2;

  // sinh(a x)/sinh(b x), even in x, evaluated without overflow.
  auto ratio = [a, b](long double x) {
    const long double ax = std::fabs(x);
    if (ax < 1e-12L) return a / b;
    return std::exp((a - b) * ax) * std::expm1(-2 * a * ax) / std::expm1(-2 * b * ax);
  };

  // The integrand decays like x^i e^{-(g -/+ t)|x|} on the two sides.
  const long double kappa = g - std::fabs(t);
  const DerivativeTable table(params, i_max, p);
  MomentCheck out;
  for (int i = 0; i <= i_max; ++i) {
    auto f = [&](long double x) { return std::pow(x, i) * std::exp(t * x) * ratio(x); };
    // Truncate where the tail integral int_L^inf x^i e^{-kappa x} dx drops below target/100.
    long double len = 1;
    auto tail_at = [&](long double l) {
      return boost::math::tgamma(static_cast<long double>(i + 1), kappa * l) / std::pow(kappa, i + 1);
    };
    while (tail_at(len) > target * 1e-2L && len < 1e5L) len *= 1.25L;
    const long double tail = tail_at(len);
    long double err_neg = 0, err_pos = 0;
    const long double neg = gauss_kronrod<long double, 61>::integrate(f, -len, 0.0L, 25, 1e-16L, &err_neg);
    const long double pos = gauss_kronrod<long double, 61>::integrate(f, 0.0L, len, 25, 1e-16L, &err_pos);
    const long double err = err_neg + err_pos + 2 * tail;
    const long double scale = std::max<long double>(1, std::fabs(neg) + std::fabs(pos));
    if (err > target * scale)
      throw ConvergenceError("moment " + std::to_string(i) + " quadrature reached only " +
                             std::to_string(static_cast<double>(err)) + " (target " + std::to_string(target) + ")");
    const double moment = static_cast<double>(neg + pos);
    const double expected = table[i].to_double();
    out.moments.push_back(moment);
    out.expected.push_back(expected);
    out.quadrature_error.push_back(static_cast<double>(err));
    out.max_abs_error = std::max(out.max_abs_error, std::fabs(moment - expected));
  }
  return out;
}

}  // namespace sixv
