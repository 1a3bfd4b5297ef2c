// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/bessel.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace g2scan {

namespace {

// log2 of an upper bound, or a large negative number for zero.
long exp2_of(const Mpfr& v) {
  if (mpfr_zero_p(v.get())) return -(1L << 40);
  return mpfr_get_exp(v.get());
}

// -(log(x/2) + gamma) I_0(x) + sum_k (x^2/4)^k / (k!)^2 H_k.
Ball k0_series(mpfr_srcptr x, mpfr_prec_t prec) {
  const double xd = mpfr_get_d(x, MPFR_RNDU);
  const mpfr_prec_t wp = prec + mpfr_prec_t(std::ceil(2.886 * xd)) + 32;
  // Result is about e^-x; the tail must fall below it by prec bits.
  const long target = -long(prec) - long(std::ceil(1.443 * xd)) - 24;

  const Ball X = Ball::from_interval(x, x, wp);
  const Ball q = (X * X).mul_2si(-2);
  const Ball L = (X.mul_2si(-1)).log() + Ball::euler_gamma(wp);
  const Ball absL = L.abs();
  const Ball one = Ball::exact(1, wp);

  Ball u = one, H(wp), I0 = one, S(wp);
  const double qd = mpfr_get_d(q.upper().get(), MPFR_RNDU);
  for (long k = 1;; ++k) {
    const Ball kb = Ball::exact(k, wp);
    u = u * q / (kb * kb);
    H += one / kb;
    I0 += u;
    S += u * H;
    // Tail after term k: 2 u_{k+1} (k + 1 + |L|) once the ratio is <= 1/4.
    if (qd <= 0.25 * double(k + 2) * double(k + 2)) {
      const Ball k1 = Ball::exact(k + 1, wp);
      const Ball tail = (u * q / (k1 * k1) * (k1 + absL)).mul_2si(1);
      const Mpfr t = tail.upper();
      if (exp2_of(t) <= target) {
        Ball r = S - L * I0;
        r.add_error(t.get());
        return r.with_prec(prec);
      }
    }
  }
}

// sqrt(pi/2x) e^-x sum_k a_k x^-k, a_k = (-1)^k ((2k-1)!!)^2 / (k! 8^k).
std::optional<Ball> k0_asymptotic(mpfr_srcptr x, mpfr_prec_t prec) {
  const mpfr_prec_t wp = prec + 24;
  const long target = -long(prec) - 16;
  const Ball X = Ball::from_interval(x, x, wp);
  Ball s = Ball::exact(1, wp), t = Ball::exact(1, wp);
  long prev = 1;
  for (long k = 1;; ++k) {
    const Ball num = Ball::exact(-(2 * k - 1) * (2 * k - 1), wp);
    t = t * num / (Ball::exact(8 * k, wp) * X);
    const Mpfr mag = t.abs().upper();
    const long e = exp2_of(mag);
    if (e <= target) {
      s.add_error(mag.get());
      break;
    }
    // Terms started growing before becoming small enough.
    if (e > prev) return std::nullopt;
    prev = e;
    s += t;
  }
  const Ball pre = (Ball::pi(wp) / X.mul_2si(1)).sqrt() * (-X).exp();
  return (pre * s).with_prec(prec);
}

}  // namespace

Ball bessel_k0(mpfr_srcptr x, mpfr_prec_t prec) {
  if (mpfr_nan_p(x) || mpfr_sgn(x) <= 0) throw std::domain_error("bessel_k0: argument must be positive");
  if (mpfr_inf_p(x)) return Ball(prec);
  const double xd = mpfr_get_d(x, MPFR_RNDD);
  if (xd >= double(prec + 16) / 2.885 + 2) {
    if (auto r = k0_asymptotic(x, prec)) return *r;
  }
  return k0_series(x, prec);
}

Ball bessel_k0(const Ball& x) {
  const mpfr_prec_t p = x.prec();
  const Mpfr lo = x.lower(p + 8);
  if (mpfr_sgn(lo.get()) <= 0) throw std::domain_error("bessel_k0: argument must be positive");
  if (x.is_exact()) return bessel_k0(x.mid(), p);
  const Mpfr hi = x.upper(p + 8);
  return bessel_k0(lo.get(), p).hull(bessel_k0(hi.get(), p));
}

}  // namespace g2scan
