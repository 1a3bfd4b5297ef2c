// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Weierstrass models y^2 + h(x) y = f(x) of genus 2 curves over Q, their
// discriminants, and changes of variables.
//
// Coefficient arrays are positional: f has 7 slots (f0..f6) and h has 4
// (h0..h3).  Degrees are never trimmed; the discriminant is computed by
// specialising the universal degree-6 discriminant, which handles vanishing
// leading coefficients.

#ifndef G2SCAN_MODEL_HPP
#define G2SCAN_MODEL_HPP

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "g2scan/mpoly.hpp"

namespace g2scan {

struct WeierstrassModel {
  std::array<mpz_class, 7> f;
  std::array<mpz_class, 4> h;

  friend bool operator==(const WeierstrassModel&, const WeierstrassModel&) = default;
};

// Lexicographic order on (f0..f6, h0..h3); used to pick class representatives.
bool model_less(const WeierstrassModel& a, const WeierstrassModel& b);

// Output of a change of variables over Q.
struct RationalModel {
  std::array<mpq_class, 7> f;
  std::array<mpq_class, 4> h;

  friend bool operator==(const RationalModel&, const RationalModel&) = default;
};

RationalModel to_rational(const WeierstrassModel& m);
bool is_integral(const RationalModel& m);
std::optional<WeierstrassModel> to_integral(const RationalModel& m);

// x' = (a x + b)/(c x + d),  y' = (e y + j(x))/(c x + d)^3.
struct ModelTransform {
  mpz_class a = 1, b = 0, c = 0, d = 1;
  mpq_class e = 1;
  std::array<mpq_class, 4> j{};

  mpz_class det() const { return a * d - b * c; }
  bool valid() const { return det() != 0 && e != 0; }
};

// disc_6 as an exact polynomial in a0..a6 (variable i is a_i).
class UniversalDiscriminant {
 public:
  explicit UniversalDiscriminant(MPoly poly);

  const MPoly& poly() const { return poly_; }
  std::size_t term_count() const { return poly_.size(); }

  mpz_class evaluate(std::span<const mpz_class, 7> a) const;
  mpq_class evaluate(std::span<const mpq_class, 7> a) const;

 private:
  MPoly poly_;
  int max_degree_ = 0;
};

// Built once from Res(g, g') of the generic sextic; thread-safe.
const UniversalDiscriminant& build_disc6();

// Resultant of two univariate polynomials with symbolic coefficients, via
// Laplace expansion of the Sylvester matrix.  Coefficients are given low to
// high degree; both must have nonzero length.
MPoly sylvester_resultant(std::span<const MPoly> p, std::span<const MPoly> q);

// disc_6(4 f + h^2) over Z[f0..f6, h0..h3] (variables 0..6 are f, 7..10 are h).
MPoly universal_model_disc6();

// Delta(f, h) for fixed integral h as a polynomial in f0..f6.
MPoly delta_polynomial(const std::array<mpz_class, 4>& h);

// 4 f + h^2 as a positional sextic (7 slots).
std::array<mpz_class, 7> simplify(const WeierstrassModel& m);
std::array<mpq_class, 7> simplify(const RationalModel& m);

// Delta(f, h) = 2^-12 disc_6(4 f + h^2).  Zero for singular models.
mpz_class discriminant(const WeierstrassModel& m);
mpq_class discriminant(const RationalModel& m);

inline bool is_genus2(const WeierstrassModel& m) { return discriminant(m) != 0; }

RationalModel transform(const RationalModel& m, const ModelTransform& t);
RationalModel transform(const WeierstrassModel& m, const ModelTransform& t);

// Integral model with h_i in {0,1} and the same discriminant.
WeierstrassModel normalize_h(const WeierstrassModel& m);

// Canonical text form "[[f0,...,f6],[h0,...,h3]]".
std::string format_model(const WeierstrassModel& m);
WeierstrassModel parse_model(std::string_view text);

}  // namespace g2scan

#endif  // G2SCAN_MODEL_HPP
