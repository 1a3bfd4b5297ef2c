// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small prime fields and their quadratic extensions, sized for point
// counting at primes below 2^31.

#ifndef G2SCAN_FINITE_FIELD_HPP
#define G2SCAN_FINITE_FIELD_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace g2scan {

bool is_prime(std::uint64_t n);
// Primes in [lo, hi].
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);
std::uint64_t mod_p(const mpz_class& v, std::uint64_t p);

// Odd prime field with a quadratic-character table.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);

  std::uint64_t p() const { return p_; }
  // Quadratic character: 0, 1 or -1.
  int chi(std::uint64_t x) const { return chi_[x % p_]; }
  // Least quadratic nonresidue.
  std::uint64_t nonresidue() const { return nonresidue_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p_ - b) % p_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mulmod(a, b, p_); }

 private:
  std::uint64_t p_;
  std::uint64_t nonresidue_ = 0;
  std::vector<std::int8_t> chi_;
};

// F_{p^2} = F_p[s] / (s^2 - n), n the least nonresidue.
struct Fp2 {
  std::uint64_t a = 0, b = 0;  // a + b s
};

class ExtensionField {
 public:
  explicit ExtensionField(const PrimeField& base) : F_(base), n_(base.nonresidue()) {}

  Fp2 add(Fp2 x, Fp2 y) const { return {F_.add(x.a, y.a), F_.add(x.b, y.b)}; }
  Fp2 mul(Fp2 x, Fp2 y) const {
    return {F_.add(F_.mul(x.a, y.a), F_.mul(n_, F_.mul(x.b, y.b))), F_.add(F_.mul(x.a, y.b), F_.mul(x.b, y.a))};
  }
  std::uint64_t norm(Fp2 x) const { return F_.sub(F_.mul(x.a, x.a), F_.mul(n_, F_.mul(x.b, x.b))); }
  // A nonzero element is a square iff its norm is a square in F_p.
  int chi(Fp2 x) const { return F_.chi(norm(x)); }

 private:
  const PrimeField& F_;
  std::uint64_t n_;
};

// Horner evaluation of a polynomial with coefficients in F_p (low to high).
std::uint64_t eval_poly(std::span<const std::uint64_t> c, std::uint64_t x, const PrimeField& F);
Fp2 eval_poly(std::span<const std::uint64_t> c, Fp2 x, const ExtensionField& E);

}  // namespace g2scan

#endif  // G2SCAN_FINITE_FIELD_HPP
