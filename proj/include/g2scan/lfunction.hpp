// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Local L-factors by point counting, Dirichlet series expansion, the
// isogeny-class hash and Sato-Tate moment statistics.

#ifndef G2SCAN_LFUNCTION_HPP
#define G2SCAN_LFUNCTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "g2scan/model.hpp"

namespace g2scan {

struct EulerFactor {
  std::uint64_t p = 0;
  // coeffs[0] = 1; L_p(T) = sum coeffs[k] T^k.
  std::vector<std::int64_t> coeffs{1};
  bool good = false;
  // Only c1 is known (c2 was not computed); enough for a_p but not a_{p^2}.
  bool linear_only = false;

  int degree() const { return int(coeffs.size()) - 1; }
  std::int64_t c(int k) const { return k < int(coeffs.size()) ? coeffs[k] : 0; }
  // L_p(t) at an integer argument.
  mpz_class value_at(long t) const;
  friend bool operator==(const EulerFactor&, const EulerFactor&) = default;
};

// "p:[1,c1,c2,c3,c4]"
std::string format_factor(const EulerFactor& f);
EulerFactor parse_factor(const std::string& text);

// Number of points of the smooth model over F_{p^r}, r in {1, 2}.  Odd p
// counts y^2 = 4f + h^2; p = 2 counts y^2 + h y = f directly.  Points at
// infinity are those of the degree-6 weighted model.  Throws for bad p.
std::uint64_t point_count(const WeierstrassModel& m, std::uint64_t p, int r);

// Good Euler factor from N1 (and N2 unless linear_only is requested).
EulerFactor good_lfactor(const WeierstrassModel& m, std::uint64_t p, bool linear_only = false);

struct BadFactor {
  EulerFactor factor;
  int conductor_exponent = 1;
};

// Nodal reduction at an odd prime with ord_p(Delta) = 1:
// (1 - chi(g(r)) T)(1 - a T + p T^2) where 4f + h^2 = (x - r)^2 g(x) mod p
// and a is the trace of y^2 = g(x).
BadFactor bad_lfactor_ord1(const WeierstrassModel& m, std::uint64_t p);

// Trace p + 1 - #E(F_p) of the genus-one curve y^2 = g(x), deg g in {3, 4}
// (coefficients mod p, low to high).
std::int64_t genus_one_trace(const std::vector<std::uint64_t>& g, std::uint64_t p);

enum class Parity { All, Odd };

struct DirichletSeries {
  std::uint64_t bound = 0;
  Parity parity = Parity::All;
  std::vector<std::int64_t> a;  // a[1..bound]; a[0] unused
};

// Local series 1 / L_p(T) up to T^k_max.
std::vector<std::int64_t> inverse_series(const EulerFactor& f, int k_max);

// Throws std::invalid_argument naming the first missing prime.
DirichletSeries expand_dirichlet(const std::map<std::uint64_t, EulerFactor>& factors, std::uint64_t bound,
                                 Parity parity = Parity::All);

// Good factors for every prime p <= bound (odd only if requested) not
// dividing disc, with c2 only for p^2 <= bound.  Bad primes come from extra.
std::map<std::uint64_t, EulerFactor> local_factors(const WeierstrassModel& m, std::uint64_t bound, Parity parity,
                                                   const std::map<std::uint64_t, EulerFactor>& extra = {});

// ---------------------------------------------------------------------------
// Isogeny hash

inline constexpr std::uint64_t kHashModulus = (std::uint64_t(1) << 61) - 1;

// Primes 2^12 < p < 2^13 (464 of them) and c_p = floor(pi P^{e_p}) mod P
// with e_p = #{q prime : 2^12 < q <= p}.
const std::vector<std::uint64_t>& hash_primes();
const std::vector<std::uint64_t>& hash_weights();
// Hex digest of the pi approximation the weights were taken from.
std::string hash_pi_checksum();

struct HashValue {
  std::uint64_t value = 0;
  bool partial = false;
  std::vector<std::uint64_t> skipped;  // bad primes left out
};

HashValue isogeny_hash(const WeierstrassModel& m);

// ---------------------------------------------------------------------------
// Sato-Tate moments

struct SatoTateMoments {
  std::uint64_t bound = 0, bound2 = 0;
  std::uint64_t samples = 0, samples2 = 0;
  std::vector<double> a1;  // E[(a_p/sqrt p)^k], k = 1..8
  std::vector<double> a2;  // E[(c2/p)^k], k = 1..4
};

// a1 moments over good p <= bound; a2 moments over good p <= bound2, which
// defaults to min(bound, 1024) because c2 needs a count over F_{p^2}.
SatoTateMoments st_moments(const WeierstrassModel& m, std::uint64_t bound,
                           std::optional<std::uint64_t> bound2 = std::nullopt);

}  // namespace g2scan

#endif  // G2SCAN_LFUNCTION_HPP
