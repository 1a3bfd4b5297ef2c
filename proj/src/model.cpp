// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace g2scan {

namespace {

using QPoly = std::vector<mpq_class>;  // low to high degree

QPoly qmul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

void qadd_into(QPoly& acc, const QPoly& b, const mpq_class& scale) {
  if (acc.size() < b.size()) acc.resize(b.size(), mpq_class(0));
  for (std::size_t i = 0; i < b.size(); ++i) acc[i] += scale * b[i];
}

// sum_i p_i s^i t^(deg - i) for linear s, t.
QPoly homogenize(std::span<const mpq_class> p, int deg, const QPoly& s, const QPoly& t) {
  std::vector<QPoly> spow{QPoly{1}}, tpow{QPoly{1}};
  for (int k = 1; k <= deg; ++k) {
    spow.push_back(qmul(spow.back(), s));
    tpow.push_back(qmul(tpow.back(), t));
  }
  QPoly out;
  for (int i = 0; i <= deg && i < int(p.size()); ++i) {
    if (p[i] == 0) continue;
    qadd_into(out, qmul(spow[i], tpow[deg - i]), p[i]);
  }
  out.resize(deg + 1, mpq_class(0));
  return out;
}

bool parse_int_list(std::string_view& s, std::vector<mpz_class>& out) {
  if (s.empty() || s.front() != '[') return false;
  s.remove_prefix(1);
  while (true) {
    std::size_t k = 0;
    if (k < s.size() && (s[k] == '-' || s[k] == '+')) ++k;
    std::size_t digits = k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k == digits) return false;
    std::string tok(s.substr(0, k));
    if (tok.front() == '+') tok.erase(0, 1);
    out.emplace_back(tok, 10);
    s.remove_prefix(k);
    if (s.empty()) return false;
    if (s.front() == ']') {
      s.remove_prefix(1);
      return true;
    }
    if (s.front() != ',') return false;
    s.remove_prefix(1);
  }
}

}  // namespace

bool model_less(const WeierstrassModel& a, const WeierstrassModel& b) {
  for (int i = 0; i < 7; ++i)
    if (a.f[i] != b.f[i]) return a.f[i] < b.f[i];
  for (int i = 0; i < 4; ++i)
    if (a.h[i] != b.h[i]) return a.h[i] < b.h[i];
  return false;
}

RationalModel to_rational(const WeierstrassModel& m) {
  RationalModel r;
  for (int i = 0; i < 7; ++i) r.f[i] = m.f[i];
  for (int i = 0; i < 4; ++i) r.h[i] = m.h[i];
  return r;
}

bool is_integral(const RationalModel& m) {
  auto integral = [](const mpq_class& q) { return q.get_den() == 1; };
  return std::all_of(m.f.begin(), m.f.end(), integral) &&
         std::all_of(m.h.begin(), m.h.end(), integral);
}

std::optional<WeierstrassModel> to_integral(const RationalModel& m) {
  if (!is_integral(m)) return std::nullopt;
  WeierstrassModel w;
  for (int i = 0; i < 7; ++i) w.f[i] = m.f[i].get_num();
  for (int i = 0; i < 4; ++i) w.h[i] = m.h[i].get_num();
  return w;
}

MPoly sylvester_resultant(std::span<const MPoly> p, std::span<const MPoly> q) {
  if (p.empty() || q.empty()) throw std::invalid_argument("sylvester_resultant: empty input");
  const int m = int(p.size()) - 1;
  const int n = int(q.size()) - 1;
  const int size = m + n;
  const std::size_t nv = p[0].nvars();
  if (size == 0) return MPoly::constant(nv, 1);
  if (size > 24) throw std::invalid_argument("sylvester_resultant: degree too large");

  // entry(r, c) of the Sylvester matrix, or nullptr for a structural zero.
  auto entry = [&](int r, int c) -> const MPoly* {
    if (r < n) {
      int k = c - r;  // position in p, high degree first
      if (k < 0 || k > m) return nullptr;
      return &p[m - k];
    }
    int rr = r - n;
    int k = c - rr;
    if (k < 0 || k > n) return nullptr;
    return &q[n - k];
  };

  std::unordered_map<std::uint32_t, MPoly> memo;
  const std::uint32_t full = (size == 32) ? ~0u : ((1u << size) - 1u);
  // Minor on rows popcount(mask).. and the columns not in mask.
  auto minor = [&](auto&& self, std::uint32_t mask) -> const MPoly& {
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    MPoly acc(nv);
    const int row = std::popcount(mask);
    if (mask == full) {
      acc = MPoly::constant(nv, 1);
    } else {
      int pos = 0;
      for (int c = 0; c < size; ++c) {
        if (mask & (1u << c)) continue;
        const MPoly* e = entry(row, c);
        if (e && !e->is_zero()) {
          MPoly term = *e * self(self, mask | (1u << c));
          if (pos & 1) acc -= term;
          else acc += term;
        }
        ++pos;
      }
    }
    return memo.emplace(mask, std::move(acc)).first->second;
  };
  return minor(minor, 0u);
}

UniversalDiscriminant::UniversalDiscriminant(MPoly poly) : poly_(std::move(poly)) {
  if (poly_.nvars() != 7) throw std::invalid_argument("UniversalDiscriminant: expected 7 variables");
  for (std::size_t i = 0; i < 7; ++i) max_degree_ = std::max(max_degree_, poly_.degree_in(i));
}

mpz_class UniversalDiscriminant::evaluate(std::span<const mpz_class, 7> a) const {
  std::array<std::vector<mpz_class>, 7> pw;
  for (int i = 0; i < 7; ++i) {
    pw[i].resize(max_degree_ + 1);
    pw[i][0] = 1;
    for (int k = 1; k <= max_degree_; ++k) pw[i][k] = pw[i][k - 1] * a[i];
  }
  mpz_class sum = 0, t;
  for (const auto& [e, c] : poly_.terms()) {
    t = c;
    for (int i = 0; i < 7; ++i)
      if (e[i]) t *= pw[i][e[i]];
    sum += t;
  }
  return sum;
}

mpq_class UniversalDiscriminant::evaluate(std::span<const mpq_class, 7> a) const {
  std::array<std::vector<mpq_class>, 7> pw;
  for (int i = 0; i < 7; ++i) {
    pw[i].resize(max_degree_ + 1);
    pw[i][0] = 1;
    for (int k = 1; k <= max_degree_; ++k) pw[i][k] = pw[i][k - 1] * a[i];
  }
  mpq_class sum = 0, t;
  for (const auto& [e, c] : poly_.terms()) {
    t = c;
    for (int i = 0; i < 7; ++i)
      if (e[i]) t *= pw[i][e[i]];
    sum += t;
  }
  return sum;
}

const UniversalDiscriminant& build_disc6() {
  static const UniversalDiscriminant disc = [] {
    constexpr std::size_t nv = 7;
    std::vector<MPoly> g, dg;
    for (std::size_t i = 0; i <= 6; ++i) g.push_back(MPoly::variable(nv, i));
    for (std::size_t i = 1; i <= 6; ++i) dg.push_back(MPoly::variable(nv, i) * mpz_class(int(i)));
    MPoly res = sylvester_resultant(g, dg);
    // disc_6 = (1/a6) (-1)^(6*5/2) Res(g, g').
    MPoly out(nv);
    for (const auto& [e, c] : res.terms()) {
      if (e[6] == 0) throw std::logic_error("disc6: resultant term not divisible by a6");
      Exponent lowered = e;
      --lowered[6];
      out.add_term(lowered, -c);
    }
    return UniversalDiscriminant(std::move(out));
  }();
  return disc;
}

MPoly universal_model_disc6() {
  constexpr std::size_t nv = 11;
  std::vector<MPoly> a;
  for (std::size_t k = 0; k < 7; ++k) a.push_back(MPoly::variable(nv, k) * mpz_class(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a[i + j] += MPoly::variable(nv, 7 + i) * MPoly::variable(nv, 7 + j);
  return build_disc6().poly().substitute(a);
}

MPoly delta_polynomial(const std::array<mpz_class, 4>& h) {
  constexpr std::size_t nv = 7;
  std::vector<MPoly> a;
  for (std::size_t k = 0; k < 7; ++k) a.push_back(MPoly::variable(nv, k) * mpz_class(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) a[i + j] += MPoly::constant(nv, h[i] * h[j]);
  return build_disc6().poly().substitute(a).divide_exact(4096);
}

std::array<mpz_class, 7> simplify(const WeierstrassModel& m) {
  std::array<mpz_class, 7> F;
  for (int k = 0; k < 7; ++k) F[k] = 4 * m.f[k];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) F[i + j] += m.h[i] * m.h[j];
  return F;
}

std::array<mpq_class, 7> simplify(const RationalModel& m) {
  std::array<mpq_class, 7> F;
  for (int k = 0; k < 7; ++k) F[k] = 4 * m.f[k];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) F[i + j] += m.h[i] * m.h[j];
  return F;
}

mpz_class discriminant(const WeierstrassModel& m) {
  const auto F = simplify(m);
  mpz_class d = build_disc6().evaluate(F);
  if (!mpz_divisible_2exp_p(d.get_mpz_t(), 12))
    throw std::logic_error("discriminant: disc6(4f+h^2) not divisible by 2^12");
  mpz_class out;
  mpz_divexact(out.get_mpz_t(), d.get_mpz_t(), mpz_class(4096).get_mpz_t());
  return out;
}

mpq_class discriminant(const RationalModel& m) {
  const auto F = simplify(m);
  mpq_class d = build_disc6().evaluate(F);
  return d / 4096;
}

RationalModel transform(const RationalModel& m, const ModelTransform& t) {
  if (!t.valid()) throw std::invalid_argument("transform: ad - bc and e must be nonzero");
  // Inverse substitution x = (d X - b)/(a - c X); clearing (a - c X)^k
  // homogenises each coefficient polynomial.
  const mpq_class delta = mpq_class(t.det());
  const QPoly s{mpq_class(-t.b), mpq_class(t.d)};
  const QPoly u{mpq_class(t.a), mpq_class(-t.c)};
  const QPoly hq(m.h.begin(), m.h.end());
  const QPoly fq(m.f.begin(), m.f.end());
  const QPoly jq(t.j.begin(), t.j.end());

  QPoly hnew = hq;
  for (auto& v : hnew) v *= t.e;
  qadd_into(hnew, jq, mpq_class(-2));

  QPoly fnew = fq;
  for (auto& v : fnew) v *= t.e * t.e;
  qadd_into(fnew, qmul(hq, jq), t.e);
  qadd_into(fnew, qmul(jq, jq), mpq_class(-1));
  fnew.resize(7, mpq_class(0));
  hnew.resize(4, mpq_class(0));

  const QPoly h2 = homogenize(hnew, 3, s, u);
  const QPoly f2 = homogenize(fnew, 6, s, u);
  mpq_class d3 = delta * delta * delta;
  mpq_class d6 = d3 * d3;
  RationalModel out;
  for (int i = 0; i < 4; ++i) out.h[i] = h2[i] / d3;
  for (int i = 0; i < 7; ++i) out.f[i] = f2[i] / d6;
  return out;
}

RationalModel transform(const WeierstrassModel& m, const ModelTransform& t) {
  return transform(to_rational(m), t);
}

WeierstrassModel normalize_h(const WeierstrassModel& m) {
  std::array<mpz_class, 4> j;
  WeierstrassModel out;
  for (int i = 0; i < 4; ++i) {
    mpz_class r;
    mpz_fdiv_r_2exp(r.get_mpz_t(), m.h[i].get_mpz_t(), 1);
    out.h[i] = r;
    j[i] = (r - m.h[i]) / 2;
  }
  // f' = f - j h - j^2
  out.f = m.f;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out.f[a + b] -= j[a] * m.h[b] + j[a] * j[b];
  return out;
}

std::string format_model(const WeierstrassModel& m) {
  std::ostringstream os;
  os << "[[";
  for (int i = 0; i < 7; ++i) os << (i ? "," : "") << m.f[i].get_str();
  os << "],[";
  for (int i = 0; i < 4; ++i) os << (i ? "," : "") << m.h[i].get_str();
  os << "]]";
  return os.str();
}

WeierstrassModel parse_model(std::string_view text) {
  std::string compact;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  std::string_view s = compact;
  std::vector<mpz_class> f, h;
  auto fail = [&]() -> WeierstrassModel {
    throw std::invalid_argument("parse_model: expected [[f0,...,f6],[h0,...,h3]], got '" +
                                std::string(text) + "'");
  };
  if (s.empty() || s.front() != '[') return fail();
  s.remove_prefix(1);
  if (!parse_int_list(s, f)) return fail();
  if (s.empty() || s.front() != ',') return fail();
  s.remove_prefix(1);
  if (!parse_int_list(s, h)) return fail();
  if (s != "]") return fail();
  if (f.size() != 7 || h.size() != 4) return fail();
  WeierstrassModel m;
  std::copy(f.begin(), f.end(), m.f.begin());
  std::copy(h.begin(), h.end(), m.h.begin());
  return m;
}

}  // namespace g2scan
