#pragma once

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <concepts>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

namespace sixv {

/// Binary precision of real arithmetic.  Every library routine takes one
/// explicitly; there is no process-wide default.
struct Precision {
  unsigned bits = 256;

  /// Guard digits g: routines documented as accurate to 2^(-bits+g) use this.
  static constexpr unsigned guard = 8;

  constexpr Precision widened(unsigned extra) const { return Precision{bits + extra}; }
  friend constexpr bool operator==(Precision, Precision) = default;
};

/// Arbitrary-precision real backed by an mpfr_t.
///
/// A value carries its own precision.  Binary operations produce a result
/// at the larger precision of the two operands; operations with a builtin
/// scalar keep the precision of the Real operand.
class Real {
 public:
  explicit Real(Precision p = Precision{}) { mpfr_init2(v_, p.bits); mpfr_set_zero(v_, 1); }
  template <std::integral I>
  Real(I x, Precision p) {
    mpfr_init2(v_, p.bits);
    if constexpr (std::is_signed_v<I>) mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN);
    else mpfr_set_ui(v_, static_cast<unsigned long>(x), MPFR_RNDN);
  }
  template <std::floating_point F>
  Real(F x, Precision p) { mpfr_init2(v_, p.bits); mpfr_set_d(v_, static_cast<double>(x), MPFR_RNDN); }
  Real(const mpz_class& z, Precision p) { mpfr_init2(v_, p.bits); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }

  /// Parses a decimal literal ("1.0471975512", "-3e-2") directly at precision p.
  /// Throws InvalidInput on malformed text.
  static Real parse(std::string_view text, Precision p);
  static Real pi(Precision p) { Real r(p); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }
  static Real infinity(Precision p, int sign = 1) { Real r(p); mpfr_set_inf(r.v_, sign); return r; }

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  Precision precision() const { return Precision{bits()}; }
  /// Copy rounded (or zero-extended) to precision p.
  Real at(Precision p) const { Real r(p); mpfr_set(r.v_, v_, MPFR_RNDN); return r; }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits) const;
  /// Decimal digits that faithfully represent this value's precision.
  int natural_digits() const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  /// Binary exponent e with value = m * 2^e, 0.5 <= |m| < 1 (0 for zero).
  long exponent() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  Real operator-() const { Real r(precision()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  Real& operator+=(const Real& o) { widen_to(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { widen_to(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { widen_to(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { widen_to(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  template <std::integral I> Real& operator+=(I x) { mpfr_add_si(v_, v_, static_cast<long>(x), MPFR_RNDN); return *this; }
  template <std::integral I> Real& operator-=(I x) { mpfr_sub_si(v_, v_, static_cast<long>(x), MPFR_RNDN); return *this; }
  template <std::integral I> Real& operator*=(I x) { mpfr_mul_si(v_, v_, static_cast<long>(x), MPFR_RNDN); return *this; }
  template <std::integral I> Real& operator/=(I x) { mpfr_div_si(v_, v_, static_cast<long>(x), MPFR_RNDN); return *this; }
  template <std::floating_point F> Real& operator+=(F x) { mpfr_add_d(v_, v_, x, MPFR_RNDN); return *this; }
  template <std::floating_point F> Real& operator-=(F x) { mpfr_sub_d(v_, v_, x, MPFR_RNDN); return *this; }
  template <std::floating_point F> Real& operator*=(F x) { mpfr_mul_d(v_, v_, x, MPFR_RNDN); return *this; }
  template <std::floating_point F> Real& operator/=(F x) { mpfr_div_d(v_, v_, x, MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { a += b; return a; }
  friend Real operator-(Real a, const Real& b) { a -= b; return a; }
  friend Real operator*(Real a, const Real& b) { a *= b; return a; }
  friend Real operator/(Real a, const Real& b) { a /= b; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator+(Real a, S x) { a += x; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator-(Real a, S x) { a -= x; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator*(Real a, S x) { a *= x; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator/(Real a, S x) { a /= x; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator+(S x, Real a) { a += x; return a; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend Real operator*(S x, Real a) { a *= x; return a; }
  template <std::integral I>
  friend Real operator-(I x, const Real& a) {
    Real r(a.precision()); mpfr_si_sub(r.v_, static_cast<long>(x), a.v_, MPFR_RNDN); return r;
  }
  template <std::integral I>
  friend Real operator/(I x, const Real& a) {
    Real r(a.precision()); mpfr_si_div(r.v_, static_cast<long>(x), a.v_, MPFR_RNDN); return r;
  }
  template <std::floating_point F>
  friend Real operator-(F x, const Real& a) {
    Real r(a.precision()); mpfr_d_sub(r.v_, x, a.v_, MPFR_RNDN); return r;
  }
  template <std::floating_point F>
  friend Real operator/(F x, const Real& a) {
    Real r(a.precision()); mpfr_d_div(r.v_, x, a.v_, MPFR_RNDN); return r;
  }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    const int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  template <typename S> requires std::is_arithmetic_v<S>
  friend bool operator==(const Real& a, S x) { return (a <=> x) == 0; }
  template <typename S> requires std::is_arithmetic_v<S>
  friend std::partial_ordering operator<=>(const Real& a, S x) {
    if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
    int c;
    if constexpr (std::is_floating_point_v<S>) c = mpfr_cmp_d(a.v_, static_cast<double>(x));
    else c = mpfr_cmp_si(a.v_, static_cast<long>(x));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  void widen_to(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  mpfr_t v_;
};

// Elementary functions.  Results keep the argument's precision.
Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real cot(const Real& x);
Real asin(const Real& x);
Real atan(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real tanh(const Real& x);
Real coth(const Real& x);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real ldexp(const Real& x, long e);
Real square(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

/// log2|x| as a double (useful for magnitude bookkeeping; -inf for zero).
double log2_abs(const Real& x);

}  // namespace sixv
