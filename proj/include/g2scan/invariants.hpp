// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Igusa-Clebsch, Igusa and G2 invariants.
//
// For a model y^2 + h y = f the invariants are those of the sextic
// F = 4f + h^2 = a6 prod (x - r_i):
//
//   I2  = a6^2  sum (12)^2 (34)^2 (56)^2                       (15 terms)
//   I4  = a6^4  sum (12)^2 (23)^2 (31)^2 (45)^2 (56)^2 (64)^2   (10 terms)
//   I6  = a6^6  sum of the I4 terms times (14)^2 (25)^2 (36)^2  (60 terms)
//   I10 = a6^10 prod_{i<j} (ij)^2 = disc6(F) = 2^12 Delta
//
// with (ij) = r_i - r_j.  The sums are expanded once into integer
// polynomials in a0..a6 via elementary symmetric functions.

#ifndef G2SCAN_INVARIANTS_HPP
#define G2SCAN_INVARIANTS_HPP

#include <array>
#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "g2scan/model.hpp"
#include "g2scan/mpoly.hpp"

namespace g2scan {

struct IgusaClebsch {
  mpz_class I2, I4, I6, I10;
  friend bool operator==(const IgusaClebsch&, const IgusaClebsch&) = default;
};

struct IgusaInvariants {
  mpq_class J2, J4, J6, J8, J10;
  friend bool operator==(const IgusaInvariants&, const IgusaInvariants&) = default;
};

enum class G2Branch { J2Nonzero, J4Nonzero, Other };

struct G2Invariants {
  mpq_class g1, g2, g3;
  G2Branch branch = G2Branch::J2Nonzero;
  friend bool operator==(const G2Invariants&, const G2Invariants&) = default;
};

// I2, I4, I6 as homogeneous integer polynomials in a0..a6 (degrees 2, 4, 6).
const std::array<MPoly, 3>& igusa_clebsch_formulas();

// Invariants of a sextic given positionally (a0..a6); I10 may be zero.
IgusaClebsch igusa_clebsch_sextic(const std::array<mpz_class, 7>& a);

// Throws std::domain_error for singular models.
IgusaClebsch igusa_clebsch(const WeierstrassModel& m);

// Throws std::domain_error if I10 = 0.
IgusaInvariants igusa(const IgusaClebsch& ic);
G2Invariants g2_invariants(const IgusaInvariants& j);

// Equality in weighted projective (2,4,6,10)-space over Qbar.  Zero patterns
// must agree and every pair of nonzero coordinates (k, l) must satisfy
// I_k'^{w_l} I_l^{w_k} = I_l'^{w_k} I_k^{w_l} with w = (1, 2, 3, 5); since the
// weights of the nonzero coordinates always include 5 and I10 is nonzero,
// these identities determine a common scaling factor.
bool same_geometric_class(const IgusaClebsch& a, const IgusaClebsch& b);

// Igusa invariants of a sextic over F_p (p >= 5 prime), each reduced to
// [0, p); J10 may be zero.
std::array<std::uint64_t, 5> igusa_mod_p(const std::array<std::uint64_t, 7>& a, std::uint64_t p);

// Reduction of a rational number mod p (p must not divide the denominator).
std::uint64_t reduce_mod_p(const mpq_class& q, std::uint64_t p);

std::string to_string(const IgusaClebsch& ic);
std::string to_string(const IgusaInvariants& j);
std::string to_string(const G2Invariants& g);

}  // namespace g2scan

#endif  // G2SCAN_INVARIANTS_HPP
