// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse multivariate polynomials with big-integer coefficients.  Only the
// operations needed for the one-time symbolic constructions (universal
// discriminant, invariant formulas, specialisations) are provided.

#ifndef G2SCAN_MPOLY_HPP
#define G2SCAN_MPOLY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace g2scan {

inline constexpr std::size_t kMaxVars = 12;

// Exponent vectors compare lexicographically with variable 0 most significant.
using Exponent = std::array<std::uint8_t, kMaxVars>;

class MPoly {
 public:
  using TermMap = std::map<Exponent, mpz_class>;

  explicit MPoly(std::size_t nvars = 0);

  static MPoly constant(std::size_t nvars, const mpz_class& c);
  static MPoly variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  void add_term(const Exponent& e, const mpz_class& c);

  MPoly& operator+=(const MPoly& other);
  MPoly& operator-=(const MPoly& other);
  MPoly& operator*=(const mpz_class& c);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const mpz_class& c) { return a *= c; }
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MPoly pow(unsigned k) const;

  // -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(std::size_t var) const;
  bool is_homogeneous(int degree) const;

  // Nonnegative gcd of all coefficients (0 for the zero polynomial).
  mpz_class content() const;

  // Divides every coefficient by d; throws if some coefficient is not divisible.
  MPoly divide_exact(const mpz_class& d) const;

  mpz_class evaluate(std::span<const mpz_class> point) const;

  // Replaces variable i by values[i]; all values live in a common ring.
  MPoly substitute(std::span<const MPoly> values) const;

  std::string to_string() const;

 private:
  std::size_t nvars_;
  TermMap terms_;
};

}  // namespace g2scan

#endif  // G2SCAN_MPOLY_HPP
