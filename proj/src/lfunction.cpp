// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/lfunction.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "g2scan/finite_field.hpp"

namespace g2scan {

namespace {

std::vector<std::uint64_t> reduce(std::span<const mpz_class> c, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  out.reserve(c.size());
  for (const auto& v : c) out.push_back(mod_p(v, p));
  return out;
}

void require_good(const WeierstrassModel& m, std::uint64_t p) {
  if (mod_p(discriminant(m), p) == 0)
    throw std::invalid_argument("prime " + std::to_string(p) + " divides the discriminant");
}

// sum_{x in F_p} chi(F(x)); values of F advance by finite differences.
std::int64_t character_sum(const std::vector<std::uint64_t>& F, const PrimeField& K) {
  const std::uint64_t p = K.p();
  const std::size_t d = F.size() - 1;
  std::vector<std::uint64_t> v(d + 1);
  for (std::size_t i = 0; i <= d; ++i) v[i] = eval_poly(F, i % p, K);
  for (std::size_t k = 1; k <= d; ++k)
    for (std::size_t i = d; i >= k; --i) v[i] = K.sub(v[i], v[i - 1]);
  std::int64_t s = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    s += K.chi(v[0]);
    for (std::size_t k = 0; k < d; ++k) {
      v[k] += v[k + 1];
      if (v[k] >= p) v[k] -= p;
    }
  }
  return s;
}

// GF(4) = F_2[w]/(w^2 + w + 1) as 2-bit integers.
std::uint8_t gf4_mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t r = 0;
  if (b & 1) r ^= a;
  if (b & 2) {
    // a * w
    std::uint8_t aw = std::uint8_t((a << 1) & 3);
    if (a & 2) aw ^= 3;  // w^2 = w + 1
    r ^= aw;
  }
  return r;
}

std::uint8_t gf4_eval(const std::vector<std::uint64_t>& c, std::uint8_t x) {
  std::uint8_t acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = std::uint8_t(gf4_mul(acc, x) ^ std::uint8_t(c[k] & 1));
  return acc;
}

std::uint8_t gf4_inv(std::uint8_t a) {
  for (std::uint8_t b = 1; b < 4; ++b)
    if (gf4_mul(a, b) == 1) return b;
  throw std::domain_error("gf4_inv: zero");
}

// Points on y^2 + H y = G over a field of characteristic 2 at one x-value:
// 1 if H = 0, else 2 or 0 according to the trace of G / H^2.
int char2_points(std::uint8_t H, std::uint8_t G, int r) {
  if (H == 0) return 1;
  std::uint8_t hinv = gf4_inv(H);
  std::uint8_t t = gf4_mul(G, gf4_mul(hinv, hinv));
  std::uint8_t tr = r == 1 ? t : std::uint8_t(t ^ gf4_mul(t, t));
  return tr == 0 ? 2 : 0;
}

std::uint64_t point_count_two(const WeierstrassModel& m, int r) {
  const auto f = reduce(m.f, 2), h = reduce(m.h, 2);
  const std::uint8_t q = r == 1 ? 2 : 4;
  std::uint64_t n = 0;
  for (std::uint8_t x = 0; x < q; ++x) n += char2_points(gf4_eval(h, x), gf4_eval(f, x), r);
  n += char2_points(std::uint8_t(h[3]), std::uint8_t(f[6]), r);
  return n;
}

using PolyP = std::vector<std::uint64_t>;

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_mod(PolyP a, const PolyP& b, std::uint64_t p) {
  trim(a);
  const std::uint64_t inv = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t q = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + p - mulmod(q, b[i], p)) % p;
    trim(a);
  }
  return a;
}

PolyP poly_gcd(PolyP a, PolyP b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

PolyP derivative(const PolyP& a, std::uint64_t p) {
  PolyP d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], i % p, p));
  trim(d);
  return d;
}

// a / (x - r)^2, exact.
PolyP divide_double_root(PolyP a, std::uint64_t r, std::uint64_t p) {
  for (int pass = 0; pass < 2; ++pass) {
    PolyP q(a.size() - 1);
    std::uint64_t carry = 0;
    for (std::size_t k = a.size(); k-- > 1;) {
      carry = (a[k] + mulmod(carry, r, p)) % p;
      q[k - 1] = carry;
    }
    if ((a[0] + mulmod(carry, r, p)) % p != 0) throw std::logic_error("divide_double_root: not a root");
    a = std::move(q);
  }
  return a;
}

}  // namespace

mpz_class EulerFactor::value_at(long t) const {
  mpz_class acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
  return acc;
}

std::string format_factor(const EulerFactor& f) {
  std::ostringstream os;
  os << f.p << ":[";
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) os << (i ? "," : "") << f.coeffs[i];
  os << "]";
  return os.str();
}

EulerFactor parse_factor(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)\s*:\s*\[([-\d,\s]*)\]\s*$)");
  std::smatch mt;
  if (!std::regex_match(text, mt, re)) throw std::invalid_argument("bad Euler factor '" + text + "'");
  EulerFactor f;
  f.p = std::stoull(mt[1]);
  f.coeffs.clear();
  std::stringstream ss(mt[2]);
  std::string tok;
  while (std::getline(ss, tok, ',')) f.coeffs.push_back(std::stoll(tok));
  if (f.coeffs.empty() || f.coeffs[0] != 1) throw std::invalid_argument("Euler factor must start with 1");
  return f;
}

std::uint64_t point_count(const WeierstrassModel& m, std::uint64_t p, int r) {
  if (r != 1 && r != 2) throw std::invalid_argument("point_count: r must be 1 or 2");
  if (!is_prime(p)) throw std::invalid_argument("point_count: p must be prime");
  require_good(m, p);
  if (p == 2) return point_count_two(m, r);
  const PrimeField K(p);
  const auto F = reduce(simplify(m), p);
  const std::uint64_t a6 = F[6];
  if (r == 1) {
    const std::int64_t s = character_sum(F, K);
    const std::int64_t inf = a6 == 0 ? 1 : 1 + K.chi(a6);
    return std::uint64_t(std::int64_t(p) + s + inf);
  }
  const ExtensionField E(K);
  std::int64_t s = 0;
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b) s += E.chi(eval_poly(F, Fp2{a, b}, E));
  const std::int64_t inf = a6 == 0 ? 1 : 2;
  return std::uint64_t(std::int64_t(p * p) + s + inf);
}

EulerFactor good_lfactor(const WeierstrassModel& m, std::uint64_t p, bool linear_only) {
  const std::int64_t P = std::int64_t(p);
  const std::int64_t t1 = P + 1 - std::int64_t(point_count(m, p, 1));
  EulerFactor f;
  f.p = p;
  f.good = true;
  f.linear_only = linear_only;
  std::int64_t c2 = 0;
  if (!linear_only) {
    const std::int64_t t2 = P * P + 1 - std::int64_t(point_count(m, p, 2));
    const std::int64_t num = t1 * t1 - t2;
    if (num % 2 != 0) throw std::logic_error("good_lfactor: non-integral c2");
    c2 = num / 2;
  }
  f.coeffs = {1, -t1, c2, -P * t1, P * P};
  return f;
}

std::int64_t genus_one_trace(const std::vector<std::uint64_t>& g, std::uint64_t p) {
  PolyP a = g;
  trim(a);
  if (a.size() != 4 && a.size() != 5) throw std::invalid_argument("genus_one_trace: degree must be 3 or 4");
  const PrimeField K(p);
  const std::int64_t s = character_sum(a, K);
  const std::int64_t inf = a.size() == 5 ? 1 + K.chi(a.back()) : 1;
  const std::int64_t n = std::int64_t(p) + s + inf;
  return std::int64_t(p) + 1 - n;
}

BadFactor bad_lfactor_ord1(const WeierstrassModel& m, std::uint64_t p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("bad_lfactor_ord1: p must be an odd prime");
  const mpz_class disc = discriminant(m);
  if (disc == 0 || mod_p(disc, p) != 0 || mod_p(mpz_class(disc / p), p) == 0)
    throw std::invalid_argument("bad_lfactor_ord1: ord_p(Delta) != 1 at p = " + std::to_string(p));
  PolyP F = reduce(simplify(m), p);
  if (F[6] == 0 && F[5] == 0) std::reverse(F.begin(), F.end());  // node at infinity
  trim(F);
  if (F.size() < 5) throw std::invalid_argument("bad_lfactor_ord1: reduction is not nodal");
  const PolyP g0 = poly_gcd(F, derivative(F, p), p);
  if (g0.size() != 2) throw std::invalid_argument("bad_lfactor_ord1: reduction is not nodal");
  const std::uint64_t r = mulmod(p - g0[0], invmod(g0[1], p), p);
  PolyP g = divide_double_root(F, r, p);
  trim(g);
  const PrimeField K(p);
  const std::uint64_t gr = eval_poly(g, r, K);
  if (gr == 0 || poly_gcd(g, derivative(g, p), p).size() != 1)
    throw std::invalid_argument("bad_lfactor_ord1: reduction is not nodal");
  const std::int64_t w = K.chi(gr);
  const std::int64_t a = genus_one_trace(g, p);
  const std::int64_t P = std::int64_t(p);
  BadFactor bf;
  bf.factor.p = p;
  bf.factor.good = false;
  // (1 - w T)(1 - a T + p T^2)
  bf.factor.coeffs = {1, -a - w, P + w * a, -w * P};
  bf.conductor_exponent = 1;
  return bf;
}

std::vector<std::int64_t> inverse_series(const EulerFactor& f, int k_max) {
  std::vector<std::int64_t> b(k_max + 1, 0);
  b[0] = 1;
  for (int k = 1; k <= k_max; ++k) {
    std::int64_t s = 0;
    for (int i = 1; i <= std::min(k, f.degree()); ++i) s += f.coeffs[i] * b[k - i];
    b[k] = -s;
  }
  return b;
}

DirichletSeries expand_dirichlet(const std::map<std::uint64_t, EulerFactor>& factors, std::uint64_t bound,
                                 Parity parity) {
  DirichletSeries ds;
  ds.bound = bound;
  ds.parity = parity;
  ds.a.assign(bound + 1, 0);
  if (bound == 0) return ds;
  std::vector<std::uint32_t> spf(bound + 1, 0);
  for (std::uint64_t i = 2; i <= bound; ++i)
    if (!spf[i])
      for (std::uint64_t j = i; j <= bound; j += i)
        if (!spf[j]) spf[j] = std::uint32_t(i);
  std::map<std::uint64_t, std::vector<std::int64_t>> local;
  for (std::uint64_t p = 2; p <= bound; ++p) {
    if (spf[p] != p || (parity == Parity::Odd && p == 2)) continue;
    auto it = factors.find(p);
    if (it == factors.end()) throw std::invalid_argument("expand_dirichlet: missing local factor at p = " + std::to_string(p));
    int k = 0;
    for (std::uint64_t q = p; q <= bound; q *= p) ++k;
    if (k >= 2 && it->second.linear_only)
      throw std::invalid_argument("expand_dirichlet: factor at p = " + std::to_string(p) + " lacks c2");
    local[p] = inverse_series(it->second, k);
  }
  ds.a[1] = 1;
  for (std::uint64_t n = 2; n <= bound; ++n) {
    const std::uint64_t p = spf[n];
    if (parity == Parity::Odd && p == 2) continue;
    std::uint64_t m = n;
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    ds.a[n] = local[p][k] * ds.a[m];
  }
  return ds;
}

std::map<std::uint64_t, EulerFactor> local_factors(const WeierstrassModel& m, std::uint64_t bound, Parity parity,
                                                   const std::map<std::uint64_t, EulerFactor>& extra) {
  const mpz_class disc = discriminant(m);
  if (disc == 0) throw std::invalid_argument("local_factors: singular model");
  std::map<std::uint64_t, EulerFactor> out;
  for (std::uint64_t p : primes_between(2, bound)) {
    if (parity == Parity::Odd && p == 2) continue;
    if (auto it = extra.find(p); it != extra.end()) {
      out[p] = it->second;
      continue;
    }
    if (mod_p(disc, p) == 0) continue;
    out[p] = good_lfactor(m, p, p * p > bound);
  }
  return out;
}

SatoTateMoments st_moments(const WeierstrassModel& m, std::uint64_t bound, std::optional<std::uint64_t> bound2) {
  if (bound < 100) throw std::invalid_argument("st_moments: bound must be at least 100");
  const mpz_class disc = discriminant(m);
  if (disc == 0) throw std::invalid_argument("st_moments: singular model");
  SatoTateMoments st;
  st.bound = bound;
  st.bound2 = bound2.value_or(std::min<std::uint64_t>(bound, 1024));
  st.a1.assign(8, 0.0);
  st.a2.assign(4, 0.0);
  for (std::uint64_t p : primes_between(2, bound)) {
    if (mod_p(disc, p) == 0) continue;
    const bool with_c2 = p <= st.bound2;
    const EulerFactor f = good_lfactor(m, p, !with_c2);
    const double x = -double(f.coeffs[1]) / std::sqrt(double(p));
    double xp = 1;
    for (int k = 0; k < 8; ++k) st.a1[k] += (xp *= x);
    ++st.samples;
    if (with_c2) {
      const double y = double(f.coeffs[2]) / double(p);
      double yp = 1;
      for (int k = 0; k < 4; ++k) st.a2[k] += (yp *= y);
      ++st.samples2;
    }
  }
  for (auto& v : st.a1) v /= double(std::max<std::uint64_t>(st.samples, 1));
  for (auto& v : st.a2) v /= double(std::max<std::uint64_t>(st.samples2, 1));
  return st;
}

}  // namespace g2scan
