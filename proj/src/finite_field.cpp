// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/finite_field.hpp"

#include <stdexcept>

namespace g2scan {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi < 2 || lo > hi) return out;
  std::vector<bool> comp(hi + 1, false);
  for (std::uint64_t i = 2; i <= hi; ++i) {
    if (comp[i]) continue;
    if (i >= lo) out.push_back(i);
    for (std::uint64_t j = i * i; j <= hi; j += i) comp[j] = true;
  }
  return out;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return std::uint64_t((unsigned __int128)a * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw std::domain_error("invmod: zero has no inverse");
  return powmod(a, p - 2, p);
}

std::uint64_t mod_p(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p);
  return r.get_ui();
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 3 || p % 2 == 0 || p > (std::uint64_t(1) << 31) || !is_prime(p))
    throw std::invalid_argument("PrimeField: need an odd prime below 2^31");
  chi_.assign(p, -1);
  chi_[0] = 0;
  for (std::uint64_t x = 1; x <= p / 2; ++x) chi_[mulmod(x, x, p)] = 1;
  for (std::uint64_t x = 2; x < p; ++x)
    if (chi_[x] == -1) {
      nonresidue_ = x;
      break;
    }
}

std::uint64_t eval_poly(std::span<const std::uint64_t> c, std::uint64_t x, const PrimeField& F) {
  std::uint64_t acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = F.add(F.mul(acc, x), c[k]);
  return acc;
}

Fp2 eval_poly(std::span<const std::uint64_t> c, Fp2 x, const ExtensionField& E) {
  Fp2 acc{0, 0};
  for (std::size_t k = c.size(); k-- > 0;) acc = E.add(E.mul(acc, x), Fp2{c[k], 0});
  return acc;
}

}  // namespace g2scan
