// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/invariants.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace g2scan {

namespace {

using Edge = std::pair<int, int>;
using EdgeSet = std::vector<Edge>;

// All distinct images of a set of root differences under S6.
std::vector<EdgeSet> orbit(const EdgeSet& base) {
  std::set<EdgeSet> seen;
  std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
  do {
    EdgeSet e;
    for (auto [i, j] : base) {
      int a = perm[i], b = perm[j];
      e.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(e.begin(), e.end());
    seen.insert(std::move(e));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {seen.begin(), seen.end()};
}

MPoly orbit_sum(const EdgeSet& base) {
  std::vector<std::vector<MPoly>> sq(6, std::vector<MPoly>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      MPoly d = MPoly::variable(6, i) - MPoly::variable(6, j);
      sq[i][j] = d * d;
    }
  MPoly sum(6);
  for (const auto& es : orbit(base)) {
    MPoly term = MPoly::constant(6, 1);
    for (auto [i, j] : es) term = term * sq[i][j];
    sum += term;
  }
  return sum;
}

// Rewrites a symmetric polynomial in x0..x5 as a polynomial in e1..e6
// (variables 0..5) by repeatedly removing the lex-leading monomial.
MPoly to_elementary(MPoly p) {
  std::vector<MPoly> e(7, MPoly(6));
  for (int k = 1; k <= 6; ++k) {
    for (unsigned mask = 0; mask < 64; ++mask) {
      if (std::popcount(mask) != k) continue;
      Exponent ex{};
      for (int i = 0; i < 6; ++i) ex[i] = (mask >> i) & 1u;
      e[k].add_term(ex, 1);
    }
  }
  std::vector<std::vector<MPoly>> powers(7);
  auto epow = [&](int k, int n) -> const MPoly& {
    auto& v = powers[k];
    if (v.empty()) v.push_back(MPoly::constant(6, 1));
    while (int(v.size()) <= n) v.push_back(v.back() * e[k]);
    return v[n];
  };
  MPoly out(6);
  while (!p.is_zero()) {
    const auto& [lead, c] = *p.terms().rbegin();
    for (int i = 0; i + 1 < 6; ++i)
      if (lead[i] < lead[i + 1]) throw std::logic_error("to_elementary: input is not symmetric");
    Exponent q{};
    MPoly prod = MPoly::constant(6, c);
    for (int k = 1; k <= 6; ++k) {
      const int m = lead[k - 1] - (k < 6 ? lead[k] : 0);
      q[k - 1] = static_cast<std::uint8_t>(m);
      if (m) prod = prod * epow(k, m);
    }
    out.add_term(q, c);
    p -= prod;
  }
  return out;
}

// e_j = (-1)^j a_{6-j} / a6; the result is multiplied by a6^k.
MPoly to_coefficients(const MPoly& q, int k) {
  MPoly out(7);
  for (const auto& [ex, c] : q.terms()) {
    int m = 0;
    Exponent a{};
    mpz_class coeff = c;
    for (int j = 1; j <= 6; ++j) {
      m += ex[j - 1];
      a[6 - j] += ex[j - 1];
      if ((j & 1) && (ex[j - 1] & 1)) coeff = -coeff;
    }
    if (m > k) throw std::logic_error("to_coefficients: weight exceeds degree");
    a[6] += static_cast<std::uint8_t>(k - m);
    out.add_term(a, coeff);
  }
  return out;
}

// Term list with reusable power tables; avoids per-call allocation in MPoly::evaluate.
struct CompiledPoly {
  std::vector<std::pair<std::array<std::uint8_t, 7>, mpz_class>> terms;
  int max_exp = 0;

  explicit CompiledPoly(const MPoly& p) {
    for (const auto& [e, c] : p.terms()) {
      std::array<std::uint8_t, 7> x{};
      for (int i = 0; i < 7; ++i) {
        x[i] = e[i];
        max_exp = std::max(max_exp, int(e[i]));
      }
      terms.emplace_back(x, c);
    }
  }

  mpz_class eval(const std::array<mpz_class, 7>& a) const {
    std::vector<std::array<mpz_class, 11>> pw(7);
    for (int i = 0; i < 7; ++i) {
      pw[i][0] = 1;
      for (int k = 1; k <= max_exp; ++k) pw[i][k] = pw[i][k - 1] * a[i];
    }
    mpz_class sum = 0, t;
    for (const auto& [x, c] : terms) {
      t = c;
      for (int i = 0; i < 7; ++i)
        if (x[i]) t *= pw[i][x[i]];
      sum += t;
    }
    return sum;
  }

  std::uint64_t eval_mod(const std::array<std::uint64_t, 7>& a, std::uint64_t p) const {
    std::vector<std::array<std::uint64_t, 11>> pw(7);
    for (int i = 0; i < 7; ++i) {
      pw[i][0] = 1 % p;
      for (int k = 1; k <= max_exp; ++k) pw[i][k] = std::uint64_t((unsigned __int128)pw[i][k - 1] * (a[i] % p) % p);
    }
    std::uint64_t sum = 0;
    for (const auto& [x, c] : terms) {
      mpz_class cr;
      mpz_fdiv_r_ui(cr.get_mpz_t(), c.get_mpz_t(), p);
      std::uint64_t t = cr.get_ui();
      for (int i = 0; i < 7; ++i)
        if (x[i]) t = std::uint64_t((unsigned __int128)t * pw[i][x[i]] % p);
      sum = (sum + t) % p;
    }
    return sum;
  }
};

struct Formulas {
  std::array<MPoly, 3> polys;
  std::array<CompiledPoly, 4> compiled;  // I2, I4, I6, I10
};

const Formulas& formulas() {
  static const Formulas f = [] {
    const EdgeSet i2{{0, 1}, {2, 3}, {4, 5}};
    const EdgeSet i4{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    EdgeSet i6 = i4;
    i6.insert(i6.end(), {{0, 3}, {1, 4}, {2, 5}});
    std::array<MPoly, 3> p{to_coefficients(to_elementary(orbit_sum(i2)), 2),
                           to_coefficients(to_elementary(orbit_sum(i4)), 4),
                           to_coefficients(to_elementary(orbit_sum(i6)), 6)};
    return Formulas{p, {CompiledPoly(p[0]), CompiledPoly(p[1]), CompiledPoly(p[2]), CompiledPoly(build_disc6().poly())}};
  }();
  return f;
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = std::uint64_t((unsigned __int128)r * b % p);
    b = std::uint64_t((unsigned __int128)b * b % p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) { return pow_mod(a, p - 2, p); }

std::string frac(const mpq_class& q) { return q.get_str(); }

}  // namespace

const std::array<MPoly, 3>& igusa_clebsch_formulas() { return formulas().polys; }

IgusaClebsch igusa_clebsch_sextic(const std::array<mpz_class, 7>& a) {
  const auto& c = formulas().compiled;
  return {c[0].eval(a), c[1].eval(a), c[2].eval(a), c[3].eval(a)};
}

IgusaClebsch igusa_clebsch(const WeierstrassModel& m) {
  IgusaClebsch ic = igusa_clebsch_sextic(simplify(m));
  if (ic.I10 == 0) throw std::domain_error("igusa_clebsch: singular model");
  return ic;
}

IgusaInvariants igusa(const IgusaClebsch& ic) {
  if (ic.I10 == 0) throw std::domain_error("igusa: I10 = 0");
  IgusaInvariants j;
  j.J2 = mpq_class(ic.I2) / 8;
  j.J4 = (4 * j.J2 * j.J2 - ic.I4) / 96;
  j.J6 = (8 * j.J2 * j.J2 * j.J2 - 160 * j.J2 * j.J4 - ic.I6) / 576;
  j.J8 = (j.J2 * j.J6 - j.J4 * j.J4) / 4;
  j.J10 = mpq_class(ic.I10) / 4096;
  for (mpq_class* q : {&j.J2, &j.J4, &j.J6, &j.J8, &j.J10}) q->canonicalize();
  return j;
}

G2Invariants g2_invariants(const IgusaInvariants& j) {
  if (j.J10 == 0) throw std::domain_error("g2_invariants: J10 = 0");
  G2Invariants g;
  if (j.J2 != 0) {
    const mpq_class j22 = j.J2 * j.J2;
    g.g1 = j22 * j22 * j.J2 / j.J10;
    g.g2 = j22 * j.J2 * j.J4 / j.J10;
    g.g3 = j22 * j.J6 / j.J10;
    g.branch = G2Branch::J2Nonzero;
  } else if (j.J4 != 0) {
    const mpq_class j42 = j.J4 * j.J4;
    g.g1 = 0;
    g.g2 = j42 * j42 * j.J4 / (j.J10 * j.J10);
    g.g3 = j.J4 * j.J6 / j.J10;
    g.branch = G2Branch::J4Nonzero;
  } else {
    const mpq_class j62 = j.J6 * j.J6;
    g.g1 = 0;
    g.g2 = 0;
    g.g3 = j62 * j62 * j.J6 / (j.J10 * j.J10 * j.J10);
    g.branch = G2Branch::Other;
  }
  g.g1.canonicalize();
  g.g2.canonicalize();
  g.g3.canonicalize();
  return g;
}

bool same_geometric_class(const IgusaClebsch& a, const IgusaClebsch& b) {
  const std::array<const mpz_class*, 4> x{&a.I2, &a.I4, &a.I6, &a.I10};
  const std::array<const mpz_class*, 4> y{&b.I2, &b.I4, &b.I6, &b.I10};
  constexpr std::array<unsigned, 4> w{1, 2, 3, 5};
  for (int k = 0; k < 4; ++k)
    if ((*x[k] == 0) != (*y[k] == 0)) return false;
  mpz_class lhs, rhs, t;
  for (int k = 0; k < 4; ++k) {
    if (*x[k] == 0) continue;
    for (int l = k + 1; l < 4; ++l) {
      if (*x[l] == 0) continue;
      mpz_pow_ui(lhs.get_mpz_t(), y[k]->get_mpz_t(), w[l]);
      mpz_pow_ui(t.get_mpz_t(), x[l]->get_mpz_t(), w[k]);
      lhs *= t;
      mpz_pow_ui(rhs.get_mpz_t(), y[l]->get_mpz_t(), w[k]);
      mpz_pow_ui(t.get_mpz_t(), x[k]->get_mpz_t(), w[l]);
      rhs *= t;
      if (lhs != rhs) return false;
    }
  }
  return true;
}

std::array<std::uint64_t, 5> igusa_mod_p(const std::array<std::uint64_t, 7>& a, std::uint64_t p) {
  if (p < 5) throw std::invalid_argument("igusa_mod_p: p must be at least 5");
  const auto& c = formulas().compiled;
  const std::uint64_t I2 = c[0].eval_mod(a, p), I4 = c[1].eval_mod(a, p), I6 = c[2].eval_mod(a, p),
                      I10 = c[3].eval_mod(a, p);
  auto mul = [p](std::uint64_t x, std::uint64_t y) { return std::uint64_t((unsigned __int128)x * y % p); };
  auto sub = [p](std::uint64_t x, std::uint64_t y) { return (x + p - y % p) % p; };
  const std::uint64_t J2 = mul(I2, inv_mod(8, p));
  const std::uint64_t J4 = mul(sub(mul(4, mul(J2, J2)), I4), inv_mod(96, p));
  const std::uint64_t J6 = mul(sub(sub(mul(8, mul(J2, mul(J2, J2))), mul(160, mul(J2, J4))), I6), inv_mod(576, p));
  const std::uint64_t J8 = mul(sub(mul(J2, J6), mul(J4, J4)), inv_mod(4, p));
  const std::uint64_t J10 = mul(I10, inv_mod(4096, p));
  return {J2, J4, J6, J8, J10};
}

std::uint64_t reduce_mod_p(const mpq_class& q, std::uint64_t p) {
  mpz_class n, d;
  mpz_fdiv_r_ui(n.get_mpz_t(), q.get_num_mpz_t(), p);
  mpz_fdiv_r_ui(d.get_mpz_t(), q.get_den_mpz_t(), p);
  if (d == 0) throw std::domain_error("reduce_mod_p: denominator divisible by p");
  return std::uint64_t((unsigned __int128)n.get_ui() * inv_mod(d.get_ui(), p) % p);
}

std::string to_string(const IgusaClebsch& ic) {
  return "[" + ic.I2.get_str() + "," + ic.I4.get_str() + "," + ic.I6.get_str() + "," + ic.I10.get_str() + "]";
}

std::string to_string(const IgusaInvariants& j) {
  return "[" + frac(j.J2) + "," + frac(j.J4) + "," + frac(j.J6) + "," + frac(j.J8) + "," + frac(j.J10) + "]";
}

std::string to_string(const G2Invariants& g) { return "[" + frac(g.g1) + "," + frac(g.g2) + "," + frac(g.g3) + "]"; }

}  // namespace g2scan
