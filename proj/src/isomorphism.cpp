// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/isomorphism.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace g2scan {

namespace {

using i128 = __int128;
using Pt = std::array<long, 2>;

// Test points of P^1; a sextic vanishes at no more than six of them.
constexpr std::array<Pt, 8> kPoints{{{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2}}};

// sum c_i x^i z^(6-i) by Horner; T is i128 or mpz_class.
template <class T>
T form(const std::array<T, 7>& c, const T& x, const T& z) {
  T acc = c[6];
  T zp = z;
  for (int i = 5; i >= 0; --i) {
    acc = acc * x + c[i] * zp;
    zp *= z;
  }
  return acc;
}

bool is_square(const mpz_class& v) { return v > 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0; }

bool is_square(i128 v) {
  if (v <= 0) return false;
  i128 r = i128(std::sqrt(static_cast<long double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v;
}

// Coefficients of G(a x + b, c x + d) as a polynomial in x.
std::array<mpz_class, 7> compose(const std::array<mpz_class, 7>& G, long a, long b, long c, long d) {
  std::array<mpz_class, 7> out{};
  for (int i = 0; i <= 6; ++i) {
    // (a x + b)^i (c x + d)^(6 - i)
    std::vector<mpz_class> p{1};
    auto mul = [&](long s, long t) {  // times (s x + t)
      std::vector<mpz_class> q(p.size() + 1, 0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        q[k] += p[k] * t;
        q[k + 1] += p[k] * s;
      }
      p.swap(q);
    };
    for (int k = 0; k < i; ++k) mul(a, b);
    for (int k = 0; k < 6 - i; ++k) mul(c, d);
    for (int k = 0; k <= 6; ++k) out[k] += G[i] * p[k];
  }
  return out;
}

// h(a x + b, c x + d) for a cubic h.
std::array<mpq_class, 4> compose_cubic(const std::array<mpz_class, 4>& h, long a, long b, long c, long d) {
  std::array<mpq_class, 4> out{};
  for (int i = 0; i <= 3; ++i) {
    std::vector<mpz_class> p{1};
    auto mul = [&](long s, long t) {
      std::vector<mpz_class> q(p.size() + 1, 0);
      for (std::size_t k = 0; k < p.size(); ++k) {
        q[k] += p[k] * t;
        q[k + 1] += p[k] * s;
      }
      p.swap(q);
    };
    for (int k = 0; k < i; ++k) mul(a, b);
    for (int k = 0; k < 3 - i; ++k) mul(c, d);
    for (int k = 0; k <= 3; ++k) out[k] += mpq_class(h[i] * p[k]);
  }
  return out;
}

std::optional<ModelTransform> build_transform(const WeierstrassModel& from, const WeierstrassModel& to, long a, long b,
                                              long c, long d, const mpq_class& mu) {
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), mu.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), mu.get_den_mpz_t());
  const RationalModel target = to_rational(to);
  const auto ht = compose_cubic(to.h, a, b, c, d);
  for (int sign : {1, -1}) {
    ModelTransform t;
    t.a = a;
    t.b = b;
    t.c = c;
    t.d = d;
    t.e = mpq_class(num * sign, den);
    t.e.canonicalize();
    for (int i = 0; i < 4; ++i) t.j[i] = (t.e * mpq_class(from.h[i]) - ht[i]) / 2;
    if (transform(from, t) == target) return t;
  }
  return std::nullopt;
}

template <class T>
std::optional<ModelTransform> search(const WeierstrassModel& from, const WeierstrassModel& to,
                                     const std::array<mpz_class, 7>& Fz, const std::array<mpz_class, 7>& Gz,
                                     const std::array<T, 7>& F, const std::array<T, 7>& G, int bound) {
  // Two independent test points where F does not vanish.
  int ip = -1, iq = -1;
  T fp = 0, fq = 0;
  for (int i = 0; i < int(kPoints.size()) && iq < 0; ++i) {
    const T v = form(F, T(kPoints[i][0]), T(kPoints[i][1]));
    if (v == 0) continue;
    if (ip < 0) {
      ip = i;
      fp = v;
    } else {
      iq = i;
      fq = v;
    }
  }
  if (iq < 0) return std::nullopt;
  const Pt P = kPoints[ip], Q = kPoints[iq];
  const long dpq = P[0] * Q[1] - Q[0] * P[1];

  // u = M P with G(u) F(P) a positive square, keyed by G(u) F(Q).
  std::map<T, std::vector<Pt>> by_key;
  const long rp = bound * (std::labs(P[0]) + std::labs(P[1]));
  for (long u0 = 0; u0 <= rp; ++u0)
    for (long u1 = (u0 == 0 ? 1 : -rp); u1 <= rp; ++u1) {
      const T g = form(G, T(u0), T(u1));
      if (!is_square(T(g * fp))) continue;
      by_key[T(g * fq)].push_back({u0, u1});
    }
  if (by_key.empty()) return std::nullopt;
  const long rq = bound * (std::labs(Q[0]) + std::labs(Q[1]));
  for (long v0 = -rq; v0 <= rq; ++v0)
    for (long v1 = -rq; v1 <= rq; ++v1) {
      if (v0 == 0 && v1 == 0) continue;
      const T g = form(G, T(v0), T(v1));
      if (!is_square(T(g * fq))) continue;
      auto it = by_key.find(T(g * fp));
      if (it == by_key.end()) continue;
      for (const Pt& u : it->second) {
        // M = [u v] adj([P Q]) / det
        const long an = u[0] * Q[1] - v0 * P[1], bn = -u[0] * Q[0] + v0 * P[0];
        const long cn = u[1] * Q[1] - v1 * P[1], dn = -u[1] * Q[0] + v1 * P[0];
        if (an % dpq || bn % dpq || cn % dpq || dn % dpq) continue;
        const long a = an / dpq, b = bn / dpq, c = cn / dpq, d = dn / dpq;
        if (std::max({std::labs(a), std::labs(b), std::labs(c), std::labs(d)}) > bound) continue;
        if (a * d - b * c == 0) continue;
        const auto comp = compose(Gz, a, b, c, d);
        // mu = G(u) / F(P); compare comp F(P) with G(u) F.
        const mpz_class gu = form(Gz, mpz_class(u[0]), mpz_class(u[1]));
        const mpz_class fpz = form(Fz, mpz_class(P[0]), mpz_class(P[1]));
        bool ok = true;
        for (int i = 0; i < 7 && ok; ++i) ok = comp[i] * fpz == gu * Fz[i];
        if (!ok) continue;
        mpq_class mu(gu, fpz);
        mu.canonicalize();
        if (auto t = build_transform(from, to, a, b, c, d, mu)) return t;
      }
    }
  return std::nullopt;
}

}  // namespace

std::optional<ModelTransform> find_isomorphism(const WeierstrassModel& from, const WeierstrassModel& to, int bound) {
  if (bound < 1) throw std::invalid_argument("find_isomorphism: bound must be positive");
  const auto Fz = simplify(from), Gz = simplify(to);
  if (discriminant(from) == 0 || discriminant(to) == 0) throw std::invalid_argument("find_isomorphism: singular model");
  // 128-bit products are safe for small coefficients and bounds.
  const mpz_class lim = mpz_class(1) << 24;
  bool small = bound <= 16;
  for (int i = 0; i < 7 && small; ++i) small = abs(Fz[i]) < lim && abs(Gz[i]) < lim;
  if (small) {
    std::array<i128, 7> F{}, G{};
    for (int i = 0; i < 7; ++i) {
      F[i] = Fz[i].get_si();
      G[i] = Gz[i].get_si();
    }
    return search<i128>(from, to, Fz, Gz, F, G, bound);
  }
  return search<mpz_class>(from, to, Fz, Gz, Fz, Gz, bound);
}

ClassKey class_key(const WeierstrassModel& m, const mpz_class& disc) {
  return {to_string(g2_invariants(igusa(igusa_clebsch(m)))), abs(disc)};
}

std::vector<CurveClass> dedup(const std::vector<Candidate>& cs, const DedupOptions& opt) {
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  auto parallel = [nt](std::size_t n, auto&& fn) {
    const unsigned k = unsigned(std::min<std::size_t>(nt, n));
    if (k <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < k; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += k) fn(i);
      });
    for (auto& th : pool) th.join();
  };

  std::vector<ClassKey> keys(cs.size());
  parallel(cs.size(), [&](std::size_t i) { keys[i] = class_key(cs[i].model, cs[i].disc); });

  std::map<ClassKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cs.size(); ++i) groups[keys[i]].push_back(i);
  std::vector<std::pair<const ClassKey*, std::vector<std::size_t>*>> order;
  for (auto& [k, v] : groups) order.emplace_back(&k, &v);

  std::vector<std::vector<CurveClass>> found(order.size());
  parallel(order.size(), [&](std::size_t g) {
    auto& idx = *order[g].second;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (cs[a].model == cs[b].model) return a < b;
      return model_less(cs[a].model, cs[b].model);
    });
    std::vector<CurveClass> classes;
    for (std::size_t i : idx) {
      CurveClass* home = nullptr;
      for (auto& cl : classes) {
        // Isomorphic models have equal discriminants, not just |disc|.
        if (cs[cl.representative].disc != cs[i].disc) continue;
        for (std::size_t j : cl.members)
          if (cs[j].model == cs[i].model || find_isomorphism(cs[i].model, cs[j].model, opt.bound)) {
            home = &cl;
            break;
          }
        if (home) break;
      }
      if (home) {
        home->members.push_back(i);
      } else {
        CurveClass cl;
        cl.key = *order[g].first;
        cl.representative = i;
        cl.members = {i};
        classes.push_back(std::move(cl));
      }
    }
    for (auto& cl : classes) {
      std::sort(cl.members.begin(), cl.members.end());
      for (const auto& other : classes)
        if (&other != &cl && cs[other.representative].disc == cs[cl.representative].disc)
          cl.unverified_merge_candidate = true;
    }
    found[g] = std::move(classes);
  });

  std::vector<CurveClass> out;
  for (auto& v : found)
    for (auto& cl : v) out.push_back(std::move(cl));
  return out;
}

}  // namespace g2scan
