#include "sixvertex/real.hpp"

#include <cmath>
#include <vector>

#include "sixvertex/error.hpp"

namespace sixv {

namespace {

template <int (*Fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
Real unary(const Real& x) {
  Real r(x.precision());
  Fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Real Real::parse(std::string_view text, Precision p) {
  const std::string s(text);
  Real r(p);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == nullptr || end == s.c_str() || *end != '\0' || !r.is_finite())
    throw InvalidInput("not a decimal number: '" + s + "'");
  return r;
}

std::string Real::to_string(int digits) const {
  if (digits < 1) digits = 1;
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  const int n = mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

int Real::natural_digits() const {
  return static_cast<int>(std::floor(static_cast<double>(bits()) * 0.30102999566398120));
}

Real abs(const Real& x) { return unary<mpfr_abs>(x); }
Real sqrt(const Real& x) { return unary<mpfr_sqrt>(x); }
Real exp(const Real& x) { return unary<mpfr_exp>(x); }
Real expm1(const Real& x) { return unary<mpfr_expm1>(x); }
Real log(const Real& x) { return unary<mpfr_log>(x); }
Real log1p(const Real& x) { return unary<mpfr_log1p>(x); }
Real sin(const Real& x) { return unary<mpfr_sin>(x); }
Real cos(const Real& x) { return unary<mpfr_cos>(x); }
Real tan(const Real& x) { return unary<mpfr_tan>(x); }
Real cot(const Real& x) { return unary<mpfr_cot>(x); }
Real asin(const Real& x) { return unary<mpfr_asin>(x); }
Real atan(const Real& x) { return unary<mpfr_atan>(x); }
Real sinh(const Real& x) { return unary<mpfr_sinh>(x); }
Real cosh(const Real& x) { return unary<mpfr_cosh>(x); }
Real tanh(const Real& x) { return unary<mpfr_tanh>(x); }
Real coth(const Real& x) { return unary<mpfr_coth>(x); }
Real square(const Real& x) { return unary<mpfr_sqr>(x); }

Real pow(const Real& x, long n) {
  Real r(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r(Precision{std::max(x.bits(), y.bits())});
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

double log2_abs(const Real& x) {
  if (x.is_zero()) return -INFINITY;
  long e = 0;
  const double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

}  // namespace sixv
