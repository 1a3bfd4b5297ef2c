// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the test programs: seeded random models and transforms,
// an independent discriminant (Sylvester determinant by Bareiss elimination,
// no use of the universal polynomial) and a quadrature value of K_0.

#ifndef G2SCAN_TESTS_SUPPORT_HPP
#define G2SCAN_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "g2scan/ball.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/model.hpp"

namespace g2scan::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline WeierstrassModel random_model(Rng& rng, long fbound, long hbound = 1) {
  WeierstrassModel m;
  for (auto& c : m.f) c = uniform(rng, -fbound, fbound);
  for (auto& c : m.h) c = uniform(rng, -hbound, hbound);
  return m;
}

inline WeierstrassModel random_genus2_model(Rng& rng, long fbound, long hbound = 1) {
  for (;;) {
    WeierstrassModel m = random_model(rng, fbound, hbound);
    if (is_genus2(m)) return m;
  }
}

inline mpq_class random_rational(Rng& rng, long num, long den) {
  mpq_class q(uniform(rng, -num, num), uniform(rng, 1, den));
  q.canonicalize();
  return q;
}

inline ModelTransform random_transform(Rng& rng, long bound = 3) {
  ModelTransform t;
  do {
    t.a = uniform(rng, -bound, bound);
    t.b = uniform(rng, -bound, bound);
    t.c = uniform(rng, -bound, bound);
    t.d = uniform(rng, -bound, bound);
  } while (t.det() == 0);
  do t.e = random_rational(rng, 3, 2);
  while (t.e == 0);
  for (auto& c : t.j) c = random_rational(rng, 3, 2);
  return t;
}

// Determinant of a square integer matrix by fraction-free elimination.
inline mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
  const std::size_t n = a.size();
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Res(p, q) for p of degree dp and q of degree dq (coefficients low to high,
// leading coefficients may vanish: formal Sylvester matrix).
inline mpz_class sylvester_det(const std::vector<mpz_class>& p, const std::vector<mpz_class>& q) {
  const std::size_t dp = p.size() - 1, dq = q.size() - 1, n = dp + dq;
  std::vector<std::vector<mpz_class>> s(n, std::vector<mpz_class>(n, 0));
  for (std::size_t r = 0; r < dq; ++r)
    for (std::size_t i = 0; i <= dp; ++i) s[r][r + i] = p[dp - i];
  for (std::size_t r = 0; r < dp; ++r)
    for (std::size_t i = 0; i <= dq; ++i) s[dq + r][r + i] = q[dq - i];
  return bareiss_det(std::move(s));
}

// disc_6 of a binary sextic a0..a6, computed as -(1/a6) Res(F, F') after a
// substitution z -> z + t x that makes the leading coefficient nonzero
// (the discriminant of a binary form is SL2-invariant).
inline mpz_class oracle_disc6(std::array<mpz_class, 7> a) {
  if (a[6] == 0) {
    for (long t = 1;; ++t) {
      // F(x, z) = sum a_i x^i z^(6-i); new coefficients of F(x, z + t x).
      std::array<mpz_class, 7> b{};
      for (int i = 0; i <= 6; ++i) {
        // z^(6-i) -> sum_k C(6-i, k) z^(6-i-k) t^k x^k
        mpz_class binom = 1, tp = 1;
        for (int k = 0; k <= 6 - i; ++k) {
          b[i + k] += a[i] * binom * tp;
          binom = binom * (6 - i - k) / (k + 1);
          tp *= t;
        }
      }
      bool all_zero = true;
      for (const auto& c : b) all_zero = all_zero && c == 0;
      if (all_zero) return 0;
      if (b[6] != 0) {
        a = b;
        break;
      }
      if (t > 8) return 0;
    }
  }
  std::vector<mpz_class> p(a.begin(), a.end()), dp(6);
  for (int i = 1; i <= 6; ++i) dp[i - 1] = a[i] * i;
  const mpz_class r = sylvester_det(p, dp);
  return -r / a[6];
}

inline mpz_class oracle_discriminant(const WeierstrassModel& m) { return oracle_disc6(simplify(m)) / 4096; }

// Reduces a signed integer to its residue mod 2^64.
inline std::uint64_t mod64(const mpz_class& v) {
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), 64);
  return (std::uint64_t(mpz_getlimbn(r.get_mpz_t(), 0)));
}

// Integral sextic proportional to the simplified form of a rational model.
inline std::array<mpz_class, 7> integral_sextic(const RationalModel& m) {
  const auto F = simplify(m);
  mpz_class l = 1;
  for (const auto& c : F) l = lcm(l, c.get_den());
  std::array<mpz_class, 7> out;
  for (int i = 0; i < 7; ++i) {
    const mpq_class v = F[i] * l;
    out[i] = v.get_num();
  }
  return out;
}

// K_0(y) = int_0^oo exp(-y cosh t) dt by the trapezoid rule at 200 bits.  The
// integrand is analytic in |Im t| < pi/2, so step 1/32 leaves an error far
// below 2^-200; the range stops once the integrand is below 2^-260 e^-y.
inline Mpfr k0_trapezoid(mpfr_srcptr y) {
  Mpfr sum(200), t(200), v(200), h(200);
  mpfr_set_ui(h.get(), 1, MPFR_RNDN);
  mpfr_div_2ui(h.get(), h.get(), 5, MPFR_RNDN);
  for (long k = 0;; ++k) {
    mpfr_mul_si(t.get(), h.get(), k, MPFR_RNDN);
    mpfr_cosh(v.get(), t.get(), MPFR_RNDN);
    mpfr_mul(v.get(), v.get(), y, MPFR_RNDN);
    if (mpfr_get_d(v.get(), MPFR_RNDN) - mpfr_get_d(y, MPFR_RNDN) > 260 * M_LN2) break;
    mpfr_neg(v.get(), v.get(), MPFR_RNDN);
    mpfr_exp(v.get(), v.get(), MPFR_RNDN);
    if (k == 0) mpfr_div_2ui(v.get(), v.get(), 1, MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), v.get(), MPFR_RNDN);
  }
  mpfr_mul(sum.get(), sum.get(), h.get(), MPFR_RNDN);
  return sum;
}

// (1/x) sum_{odd n <= Cx} a_n K_0(4 pi sqrt(n/x)) with the quadrature oracle.
inline Mpfr s_odd_reference(double x, const DirichletSeries& s, double C) {
  Mpfr sum(200), y(200), k(200), pi(200);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  for (std::uint64_t n = 1; double(n) <= C * x; n += 2) {
    if (s.a[n] == 0) continue;
    mpfr_set_ui(y.get(), n, MPFR_RNDN);
    mpfr_div_d(y.get(), y.get(), x, MPFR_RNDN);
    mpfr_sqrt(y.get(), y.get(), MPFR_RNDN);
    mpfr_mul(y.get(), y.get(), pi.get(), MPFR_RNDN);
    mpfr_mul_2ui(y.get(), y.get(), 2, MPFR_RNDN);
    k = k0_trapezoid(y.get());
    mpfr_mul_si(k.get(), k.get(), long(s.a[n]), MPFR_RNDN);
    mpfr_add(sum.get(), sum.get(), k.get(), MPFR_RNDN);
  }
  mpfr_div_d(sum.get(), sum.get(), x, MPFR_RNDN);
  return sum;
}

}  // namespace g2scan::testing

#endif  // G2SCAN_TESTS_SUPPORT_HPP
