// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include <mpfr.h>

#include "g2scan/finite_field.hpp"
#include "g2scan/lfunction.hpp"

namespace g2scan {

namespace {

struct HashTable {
  std::vector<std::uint64_t> primes;
  std::vector<std::uint64_t> weights;
  std::string checksum;
};

const HashTable& table() {
  static const HashTable t = [] {
    HashTable h;
    h.primes = primes_between(4097, 8191);
    const std::size_t n = h.primes.size();
    // floor(pi 2^K) with 192 guard bits beyond the 61 n bits consumed.
    const mpfr_prec_t K = mpfr_prec_t(61 * n + 192);
    mpfr_t pi;
    mpfr_init2(pi, K + 64);
    mpfr_const_pi(pi, MPFR_RNDD);
    mpfr_mul_2ui(pi, pi, K, MPFR_RNDD);
    mpz_class scaled;
    mpfr_get_z(scaled.get_mpz_t(), pi, MPFR_RNDD);
    mpfr_clear(pi);

    const mpz_class P = mpz_class(1) << 61;
    const mpz_class modulus = P - 1;
    mpz_class power = 1, v;
    std::uint64_t fnv = 0xcbf29ce484222325ull;
    for (std::size_t e = 1; e <= n; ++e) {
      power *= modulus;
      v = scaled * power;
      mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), K);
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
      const std::uint64_t c = v.get_ui();
      h.weights.push_back(c);
      for (int b = 0; b < 8; ++b) {
        fnv ^= (c >> (8 * b)) & 0xff;
        fnv *= 0x100000001b3ull;
      }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv));
    h.checksum = buf;
    return h;
  }();
  return t;
}

}  // namespace

const std::vector<std::uint64_t>& hash_primes() { return table().primes; }
const std::vector<std::uint64_t>& hash_weights() { return table().weights; }
std::string hash_pi_checksum() { return table().checksum; }

HashValue isogeny_hash(const WeierstrassModel& m) {
  const auto& t = table();
  const mpz_class disc = discriminant(m);
  if (disc == 0) throw std::invalid_argument("isogeny_hash: singular model");
  HashValue hv;
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < t.primes.size(); ++i) {
    const std::uint64_t p = t.primes[i];
    if (mod_p(disc, p) == 0) {
      hv.skipped.push_back(p);
      continue;
    }
    const std::int64_t ap = std::int64_t(p) + 1 - std::int64_t(point_count(m, p, 1));
    const std::uint64_t a = ap >= 0 ? std::uint64_t(ap) : kHashModulus - std::uint64_t(-ap);
    acc = (acc + (unsigned __int128)t.weights[i] * a) % kHashModulus;
  }
  hv.value = std::uint64_t(acc);
  hv.partial = !hv.skipped.empty();
  return hv;
}

}  // namespace g2scan
