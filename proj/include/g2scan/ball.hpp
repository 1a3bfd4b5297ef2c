// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Midpoint-radius enclosures of real numbers on top of MPFR.
//
// A Ball holds a midpoint at a chosen precision and a 32-bit radius that is
// always rounded up.  Operations go through the endpoint interval with
// directed rounding (MPFR results are correctly rounded), so the exact result
// of the operation on any pair of enclosed reals is enclosed by the output.

#ifndef G2SCAN_BALL_HPP
#define G2SCAN_BALL_HPP

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace g2scan {

// RAII wrapper for one mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 53);
  Mpfr(const Mpfr& o);
  Mpfr(Mpfr&& o) noexcept;
  Mpfr& operator=(const Mpfr& o);
  Mpfr& operator=(Mpfr&& o) noexcept;
  ~Mpfr();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

class Ball {
 public:
  static constexpr mpfr_prec_t kRadiusBits = 32;

  explicit Ball(mpfr_prec_t prec = 53);  // exact zero

  static Ball exact(long v, mpfr_prec_t prec);
  static Ball exact(const mpz_class& v, mpfr_prec_t prec);
  static Ball enclose(const mpq_class& v, mpfr_prec_t prec);
  static Ball enclose(double v, mpfr_prec_t prec);  // v is exact in binary
  // Smallest ball containing [lo, hi]; lo <= hi required.
  static Ball from_interval(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec);
  static Ball pi(mpfr_prec_t prec);
  static Ball euler_gamma(mpfr_prec_t prec);
  // The interval [0, 1].
  static Ball unit_interval(mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mid_.prec(); }
  mpfr_srcptr mid() const { return mid_.get(); }
  mpfr_srcptr rad() const { return rad_.get(); }
  double mid_d() const { return mid_.to_double(); }
  // Radius rounded up to a double.
  double rad_d() const { return mpfr_get_d(rad_.get(), MPFR_RNDU); }

  // Endpoints with outward rounding at precision prec.
  Mpfr lower(mpfr_prec_t prec) const;
  Mpfr upper(mpfr_prec_t prec) const;
  Mpfr lower() const { return lower(prec()); }
  Mpfr upper() const { return upper(prec()); }

  bool contains_zero() const;
  bool contains(mpfr_srcptr x) const;
  bool contains(const Ball& inner) const;
  bool is_positive() const;  // entirely > 0
  bool is_negative() const;
  bool is_exact() const { return mpfr_zero_p(rad_.get()); }

  // Widens the radius by e >= 0 (rounded up).
  void add_error(mpfr_srcptr e);
  void add_error(double e);

  // Same enclosure at another midpoint precision.
  Ball with_prec(mpfr_prec_t prec) const;
  // Convex hull of two balls.
  Ball hull(const Ball& o) const;

  Ball operator-() const;
  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  // Throws std::domain_error if b contains 0.
  friend Ball operator/(const Ball& a, const Ball& b);
  Ball& operator+=(const Ball& b) { return *this = *this + b; }
  Ball& operator-=(const Ball& b) { return *this = *this - b; }
  Ball& operator*=(const Ball& b) { return *this = *this * b; }

  Ball mul_2si(long e) const;
  Ball abs() const;
  // Monotone functions, evaluated at the endpoints.  sqrt and log need a
  // nonnegative / positive ball respectively.
  Ball sqrt() const;
  Ball exp() const;
  Ball log() const;
  Ball pow_ui(unsigned long n) const;
  // Real power x^y for a positive ball x and exact rational y >= 0 given as
  // a ball (evaluated as exp(y log x)).
  Ball pow(const Ball& y) const;

  // "mid +/- rad" with the midpoint to the given number of digits.
  std::string to_string(int digits = 17) const;

 private:
  Mpfr mid_;
  Mpfr rad_;
};

}  // namespace g2scan

#endif  // G2SCAN_BALL_HPP
