// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/ball.hpp"

#include <algorithm>
#include <stdexcept>

namespace g2scan {

Mpfr::Mpfr(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Mpfr::Mpfr(const Mpfr& o) {
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& o) noexcept {
  mpfr_init2(v_, o.prec());
  mpfr_swap(v_, o.v_);
}

Mpfr& Mpfr::operator=(const Mpfr& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Mpfr::~Mpfr() { mpfr_clear(v_); }

namespace {

using Rnd = mpfr_rnd_t;

struct Interval2 {
  Mpfr lo, hi;
};

Interval2 endpoints(const Ball& b, mpfr_prec_t p) { return {b.lower(p), b.upper(p)}; }

void set_max(mpfr_ptr dst, mpfr_srcptr x) {
  if (mpfr_cmp(x, dst) > 0) mpfr_set(dst, x, MPFR_RNDU);
}

void set_min(mpfr_ptr dst, mpfr_srcptr x) {
  if (mpfr_cmp(x, dst) < 0) mpfr_set(dst, x, MPFR_RNDD);
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) : mid_(prec), rad_(kRadiusBits) {}

Ball Ball::exact(long v, mpfr_prec_t prec) {
  Ball b(prec);
  if (mpfr_set_si(b.mid_.get(), v, MPFR_RNDN) != 0) {
    // Not representable at this precision; enclose instead.
    return enclose(mpq_class(v), prec);
  }
  return b;
}

Ball Ball::exact(const mpz_class& v, mpfr_prec_t prec) {
  Ball b(prec);
  if (mpfr_set_z(b.mid_.get(), v.get_mpz_t(), MPFR_RNDN) != 0) return enclose(mpq_class(v), prec);
  return b;
}

Ball Ball::enclose(const mpq_class& v, mpfr_prec_t prec) {
  Mpfr lo(prec), hi(prec);
  mpfr_set_q(lo.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi.get(), v.get_mpq_t(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec);
}

Ball Ball::enclose(double v, mpfr_prec_t prec) {
  Mpfr lo(std::max<mpfr_prec_t>(prec, 53)), hi(std::max<mpfr_prec_t>(prec, 53));
  mpfr_set_d(lo.get(), v, MPFR_RNDD);
  mpfr_set_d(hi.get(), v, MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec);
}

Ball Ball::from_interval(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
  if (mpfr_nan_p(lo) || mpfr_nan_p(hi) || mpfr_cmp(lo, hi) > 0)
    throw std::domain_error("Ball::from_interval: invalid interval");
  Ball b(prec);
  mpfr_add(b.mid_.get(), lo, hi, MPFR_RNDN);
  mpfr_div_2ui(b.mid_.get(), b.mid_.get(), 1, MPFR_RNDN);
  Mpfr t(kRadiusBits);
  mpfr_sub(b.rad_.get(), hi, b.mid_.get(), MPFR_RNDU);
  mpfr_sub(t.get(), b.mid_.get(), lo, MPFR_RNDU);
  set_max(b.rad_.get(), t.get());
  if (mpfr_sgn(b.rad_.get()) < 0) mpfr_set_zero(b.rad_.get(), 1);
  return b;
}

Ball Ball::pi(mpfr_prec_t prec) {
  Mpfr lo(prec), hi(prec);
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec);
}

Ball Ball::euler_gamma(mpfr_prec_t prec) {
  Mpfr lo(prec), hi(prec);
  mpfr_const_euler(lo.get(), MPFR_RNDD);
  mpfr_const_euler(hi.get(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec);
}

Ball Ball::unit_interval(mpfr_prec_t prec) {
  Ball b(prec);
  mpfr_set_d(b.mid_.get(), 0.5, MPFR_RNDN);
  mpfr_set_d(b.rad_.get(), 0.5, MPFR_RNDU);
  return b;
}

Mpfr Ball::lower(mpfr_prec_t prec) const {
  Mpfr r(prec);
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

Mpfr Ball::upper(mpfr_prec_t prec) const {
  Mpfr r(prec);
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

bool Ball::contains_zero() const {
  const Mpfr lo = lower(prec() + 8), hi = upper(prec() + 8);
  return mpfr_sgn(lo.get()) <= 0 && mpfr_sgn(hi.get()) >= 0;
}

bool Ball::contains(mpfr_srcptr x) const {
  const mpfr_prec_t p = std::max(prec(), mpfr_get_prec(x)) + 8;
  const Mpfr lo = lower(p), hi = upper(p);
  return mpfr_cmp(lo.get(), x) <= 0 && mpfr_cmp(x, hi.get()) <= 0;
}

bool Ball::contains(const Ball& inner) const {
  const mpfr_prec_t p = std::max(prec(), inner.prec()) + 8;
  const Mpfr lo = lower(p), hi = upper(p);
  // Inner endpoints rounded outward, so a positive answer is rigorous.
  const Mpfr ilo = inner.lower(p), ihi = inner.upper(p);
  return mpfr_cmp(lo.get(), ilo.get()) <= 0 && mpfr_cmp(ihi.get(), hi.get()) <= 0;
}

bool Ball::is_positive() const { return mpfr_sgn(lower(prec() + 8).get()) > 0; }
bool Ball::is_negative() const { return mpfr_sgn(upper(prec() + 8).get()) < 0; }

void Ball::add_error(mpfr_srcptr e) {
  if (mpfr_sgn(e) < 0) throw std::domain_error("Ball::add_error: negative error");
  mpfr_add(rad_.get(), rad_.get(), e, MPFR_RNDU);
}

void Ball::add_error(double e) {
  Mpfr t(53);
  mpfr_set_d(t.get(), e, MPFR_RNDU);
  add_error(t.get());
}

Ball Ball::with_prec(mpfr_prec_t p) const {
  auto [lo, hi] = endpoints(*this, std::max(p, prec()) + 8);
  return from_interval(lo.get(), hi.get(), p);
}

Ball Ball::hull(const Ball& o) const {
  const mpfr_prec_t p = std::max(prec(), o.prec());
  auto [lo, hi] = endpoints(*this, p + 8);
  auto [olo, ohi] = endpoints(o, p + 8);
  set_min(lo.get(), olo.get());
  set_max(hi.get(), ohi.get());
  return from_interval(lo.get(), hi.get(), p);
}

Ball Ball::operator-() const {
  Ball b = *this;
  mpfr_neg(b.mid_.get(), b.mid_.get(), MPFR_RNDN);
  return b;
}

Ball operator+(const Ball& a, const Ball& b) {
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  auto [alo, ahi] = endpoints(a, p);
  auto [blo, bhi] = endpoints(b, p);
  Mpfr lo(p), hi(p);
  mpfr_add(lo.get(), alo.get(), blo.get(), MPFR_RNDD);
  mpfr_add(hi.get(), ahi.get(), bhi.get(), MPFR_RNDU);
  return Ball::from_interval(lo.get(), hi.get(), p);
}

Ball operator-(const Ball& a, const Ball& b) { return a + (-b); }

Ball operator*(const Ball& a, const Ball& b) {
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  auto [alo, ahi] = endpoints(a, p);
  auto [blo, bhi] = endpoints(b, p);
  Mpfr lo(p), hi(p), t(p);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (mpfr_srcptr x : {alo.get(), ahi.get()})
    for (mpfr_srcptr y : {blo.get(), bhi.get()}) {
      mpfr_mul(t.get(), x, y, MPFR_RNDD);
      set_min(lo.get(), t.get());
      mpfr_mul(t.get(), x, y, MPFR_RNDU);
      set_max(hi.get(), t.get());
    }
  return Ball::from_interval(lo.get(), hi.get(), p);
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) throw std::domain_error("Ball division by a ball containing zero");
  const mpfr_prec_t p = std::max(a.prec(), b.prec());
  auto [blo, bhi] = endpoints(b, p);
  Mpfr ilo(p), ihi(p);
  mpfr_ui_div(ilo.get(), 1, bhi.get(), MPFR_RNDD);
  mpfr_ui_div(ihi.get(), 1, blo.get(), MPFR_RNDU);
  return a * Ball::from_interval(ilo.get(), ihi.get(), p);
}

Ball Ball::mul_2si(long e) const {
  Ball b = *this;
  mpfr_mul_2si(b.mid_.get(), b.mid_.get(), e, MPFR_RNDN);
  mpfr_mul_2si(b.rad_.get(), b.rad_.get(), e, MPFR_RNDU);
  return b;
}

Ball Ball::abs() const {
  auto [lo, hi] = endpoints(*this, prec());
  if (mpfr_sgn(lo.get()) >= 0) return *this;
  if (mpfr_sgn(hi.get()) <= 0) return -*this;
  mpfr_neg(lo.get(), lo.get(), MPFR_RNDU);
  set_max(hi.get(), lo.get());
  mpfr_set_zero(lo.get(), 1);
  return from_interval(lo.get(), hi.get(), prec());
}

Ball Ball::sqrt() const {
  auto [lo, hi] = endpoints(*this, prec());
  if (mpfr_sgn(hi.get()) < 0) throw std::domain_error("Ball::sqrt of a negative ball");
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec());
}

Ball Ball::exp() const {
  auto [lo, hi] = endpoints(*this, prec());
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec());
}

Ball Ball::log() const {
  auto [lo, hi] = endpoints(*this, prec());
  if (mpfr_sgn(lo.get()) <= 0) throw std::domain_error("Ball::log of a nonpositive ball");
  mpfr_log(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi.get(), MPFR_RNDU);
  return from_interval(lo.get(), hi.get(), prec());
}

Ball Ball::pow_ui(unsigned long n) const {
  if (n == 0) return exact(1, prec());
  auto [lo, hi] = endpoints(*this, prec());
  const bool even = n % 2 == 0;
  Mpfr rlo(prec()), rhi(prec());
  if (mpfr_sgn(lo.get()) >= 0 || !even) {
    mpfr_pow_ui(rlo.get(), lo.get(), n, MPFR_RNDD);
    mpfr_pow_ui(rhi.get(), hi.get(), n, MPFR_RNDU);
  } else if (mpfr_sgn(hi.get()) <= 0) {
    mpfr_pow_ui(rlo.get(), hi.get(), n, MPFR_RNDD);
    mpfr_pow_ui(rhi.get(), lo.get(), n, MPFR_RNDU);
  } else {
    mpfr_neg(lo.get(), lo.get(), MPFR_RNDU);
    set_max(hi.get(), lo.get());
    mpfr_set_zero(rlo.get(), 1);
    mpfr_pow_ui(rhi.get(), hi.get(), n, MPFR_RNDU);
  }
  return from_interval(rlo.get(), rhi.get(), prec());
}

Ball Ball::pow(const Ball& y) const {
  if (!is_positive()) throw std::domain_error("Ball::pow needs a positive base");
  return (y * log()).exp();
}

std::string Ball::to_string(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg +/- %.3Rg", digits, mid_.get(), rad_.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace g2scan
