// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/conductor.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "g2scan/bessel.hpp"
#include "g2scan/finite_field.hpp"

namespace g2scan {

namespace {

void require_c(double C) {
  if (!(C >= 5)) throw std::invalid_argument("conductor: C must be at least 5");
}

std::uint64_t floor_ui(const Mpfr& v) {
  if (mpfr_sgn(v.get()) <= 0) return 0;
  return mpfr_get_ui(v.get(), MPFR_RNDD);
}

// floor(log2(v)) for v > 0 given as an upper bound; -1 if v < 1.
int floor_log2(const Mpfr& v) {
  if (mpfr_cmp_ui(v.get(), 1) < 0) return -1;
  return int(mpfr_get_exp(v.get())) - 1;
}

int ord2(const mpz_class& v) { return v == 0 ? 0 : int(mpz_scan1(v.get_mpz_t(), 0)); }

// Inverse roots of 1 + c1 T + ... + c_d T^d, i.e. roots of the reversal.
bool roots_within(const std::vector<std::int64_t>& c, double bound) {
  const int d = int(c.size()) - 1;
  if (d <= 0) return true;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  // x^d + c1 x^{d-1} + ... + c_d
  for (int i = 0; i < d; ++i) comp(0, i) = -double(c[i + 1]);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < d; ++i)
    if (std::abs(es.eigenvalues()[i]) > bound) return false;
  return true;
}

// a + b sqrt 8 >= 0, exactly.
bool nonneg_sqrt8(std::int64_t a, std::int64_t b) {
  if (a >= 0 && b >= 0) return true;
  if (a <= 0 && b <= 0) return a == 0 && b == 0;
  if (a >= 0) return a * a >= 8 * b * b;
  return 8 * b * b >= a * a;
}

// 1 + c1 T + c2 T^2 + 2 c1 T^3 + 4 T^4 = (1 - s T + 2 T^2)(1 - t T + 2 T^2)
// with s + t = -c1, s t = c2 - 4; all inverse roots have modulus sqrt 2 iff
// s and t are real and lie in [-sqrt 8, sqrt 8].
bool self_dual_weil(std::int64_t c1, std::int64_t c2) {
  const std::int64_t q = c2 - 4;  // z^2 + c1 z + q has roots s, t
  if (c1 * c1 - 4 * q < 0) return false;
  // g(+-sqrt 8) = 8 + q +- c1 sqrt 8 >= 0 and the vertex -c1/2 inside.
  if (!nonneg_sqrt8(8 + q, c1) || !nonneg_sqrt8(8 + q, -c1)) return false;
  return c1 * c1 <= 32;
}

}  // namespace

double truncation_bound(double x, double C) {
  require_c(C);
  if (!(x >= 0)) throw std::invalid_argument("truncation_bound: x must be nonnegative");
  const mpfr_prec_t p = 64;
  const Ball X = Ball::enclose(x, p), Cb = Ball::enclose(C, p);
  const Ball sc = Cb.sqrt();
  const Ball quarter = X.sqrt().sqrt();
  const Ball one = Ball::exact(1, p);
  const Ball e = (-(Ball::pi(p).mul_2si(2) * sc)).exp();
  const Ball v = (Cb.mul_2si(2) * quarter * (one + (X * sc).mul_2si(1)) * e);
  return mpfr_get_d(v.upper().get(), MPFR_RNDU);
}

double truncation_bound(const Ball& x, double C) {
  const Mpfr hi = x.upper();
  return truncation_bound(mpfr_get_d(hi.get(), MPFR_RNDU), C);
}

Ball s_c_odd(const Ball& x, const DirichletSeries& odd, double C) {
  require_c(C);
  if (!x.is_positive()) throw std::domain_error("s_c_odd: x must be positive");
  const mpfr_prec_t wp = x.prec();
  const Ball cx = x * Ball::enclose(C, wp);
  const std::uint64_t nlo = floor_ui(cx.lower()), nhi = floor_ui(cx.upper());
  if (nhi > odd.bound)
    throw std::invalid_argument("s_c_odd: coefficients needed up to n = " + std::to_string(nhi) + " (have " +
                                std::to_string(odd.bound) + ")");
  const Ball fourpi = Ball::pi(wp).mul_2si(2);
  const Ball inv = Ball::exact(1, wp) / x;
  const Ball unit = Ball::unit_interval(wp);
  Ball sum(wp);
  for (std::uint64_t n = 1; n <= nhi; n += 2) {
    const std::int64_t a = odd.a[n];
    if (a == 0) continue;
    const Ball y = fourpi * (Ball::exact(long(n), wp) * inv).sqrt();
    Ball term = Ball::exact(long(a), wp) * bessel_k0(y);
    if (n > nlo) term = term * unit;
    sum += term;
  }
  return sum * inv;
}

Ball s_c(const Ball& x, const DirichletSeries& odd, const std::vector<std::int64_t>& two_part, double C) {
  require_c(C);
  const mpfr_prec_t wp = x.prec();
  const int J = floor_log2((x * Ball::enclose(C, wp)).upper());
  if (J >= int(two_part.size()))
    throw std::invalid_argument("s_c: a_{2^j} needed up to j = " + std::to_string(J));
  Ball sum(wp);
  for (int j = 0; j <= J; ++j) {
    if (two_part[j] == 0) continue;
    sum += Ball::exact(long(two_part[j]), wp).mul_2si(-j) * s_c_odd(x.mul_2si(-j), odd, C);
  }
  return sum;
}

Ball conductor_argument(const mpz_class& n_odd, int k, mpfr_prec_t prec) {
  const Ball sqrt2 = Ball::exact(2, prec).sqrt();
  return (Ball::exact(n_odd, prec).mul_2si(k - 1) * sqrt2).sqrt();
}

std::vector<std::vector<std::int64_t>> candidate_l2_set(int m) {
  if (m < 0 || m > 20) throw std::invalid_argument("candidate_l2_set: m must be in [0, 20]");
  std::vector<std::vector<std::int64_t>> out;
  if (m == 0) {
    for (std::int64_t c1 = -5; c1 <= 5; ++c1)
      for (std::int64_t c2 = -12; c2 <= 12; ++c2)
        if (self_dual_weil(c1, c2)) out.push_back({1, c1, c2, 2 * c1, 4});
    return out;
  }
  const double bound = std::sqrt(2.0) + 1e-9;
  out.push_back({1});
  for (int deg = 1; deg <= 3; ++deg)
    for (std::int64_t c1 = -4; c1 <= 4; ++c1)
      for (std::int64_t c2 = -6; c2 <= 6; ++c2)
        for (std::int64_t c3 = -2; c3 <= 2; ++c3) {
          std::vector<std::int64_t> c{1, c1, c2, c3};
          c.resize(deg + 1);
          if (c.back() == 0) continue;
          // Lower slots beyond deg must be zero for a unique listing.
          if ((deg < 2 && c2 != 0) || (deg < 3 && c3 != 0)) continue;
          if (roots_within(c, bound)) out.push_back(c);
        }
  return out;
}

std::string format_l2(const std::vector<std::int64_t>& c) {
  std::string s = c.empty() ? "0" : std::to_string(c[0]);
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    s += c[k] < 0 ? "-" : "+";
    const std::int64_t a = c[k] < 0 ? -c[k] : c[k];
    if (a != 1) s += std::to_string(a);
    s += "T";
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}

std::map<std::uint64_t, BadFactor> odd_bad_data(const WeierstrassModel& m, const mpz_class& disc) {
  if (disc == 0) throw std::invalid_argument("odd_bad_data: singular model");
  mpz_class r = abs(disc);
  while (mpz_even_p(r.get_mpz_t())) r /= 2;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 3; p < (1u << 20) && r > 1; p += 2) {
    if (mpz_divisible_ui_p(r.get_mpz_t(), p) == 0) continue;
    primes.push_back(p);
    while (mpz_divisible_ui_p(r.get_mpz_t(), p) != 0) r /= p;
  }
  if (r > 1) {
    if (!r.fits_ulong_p() || mpz_probab_prime_p(r.get_mpz_t(), 30) == 0)
      throw std::invalid_argument("odd_bad_data: could not factor the discriminant");
    primes.push_back(r.get_ui());
  }
  std::map<std::uint64_t, BadFactor> out;
  for (std::uint64_t p : primes) out[p] = bad_lfactor_ord1(m, p);
  return out;
}

ConductorResult resolve_two_part(const WeierstrassModel& model, const std::map<std::uint64_t, BadFactor>& odd_bad,
                                 const mpz_class& disc, const ConductorOptions& opt) {
  require_c(opt.C);
  if (disc == 0) throw std::invalid_argument("resolve_two_part: singular model");
  ConductorResult res;
  const mpfr_prec_t wp = opt.prec;

  // Odd conductor, and a check that odd_bad covers every odd bad prime.
  mpz_class rest = abs(disc);
  rest >>= ord2(rest);
  res.n_odd = 1;
  std::map<std::uint64_t, EulerFactor> extra;
  for (const auto& [p, bf] : odd_bad) {
    if (p % 2 == 0) throw std::invalid_argument("resolve_two_part: odd data at p = 2");
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0)
      throw std::invalid_argument("resolve_two_part: p = " + std::to_string(p) + " does not divide the discriminant");
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) rest /= p;
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, bf.conductor_exponent);
    res.n_odd *= pe;
    extra[p] = bf.factor;
  }
  if (rest != 1) throw std::invalid_argument("resolve_two_part: odd bad data incomplete");
  res.max_m = std::min(20, ord2(disc));

  // Arguments sqrt(2^{k-1/2} N_odd) requested by the even-part decomposition.
  std::set<int> ks;
  auto top_j = [&](int k) { return floor_log2((conductor_argument(res.n_odd, k, wp) * Ball::enclose(opt.C, wp)).upper()); };
  for (int m = 0; m <= res.max_m; ++m)
    for (int base : {m + 1, m})
      for (int j = 0; j <= top_j(base); ++j) ks.insert(base - 2 * j);

  const Ball xmax = conductor_argument(res.n_odd, res.max_m + 1, wp);
  res.coefficient_bound = floor_ui((xmax * Ball::enclose(opt.C, wp)).upper()) + 1;
  const DirichletSeries odd =
      expand_dirichlet(local_factors(model, res.coefficient_bound, Parity::Odd, extra), res.coefficient_bound,
                       Parity::Odd);
  for (int k : ks) res.cache.emplace(k, s_c_odd(conductor_argument(res.n_odd, k, wp), odd, opt.C));

  for (int m = 0; m <= res.max_m; ++m) {
    mpz_class N = res.n_odd;
    N <<= m;
    for (const auto& l2 : candidate_l2_set(m))
      for (int w : {1, -1}) res.verdicts.push_back({ConductorCandidate{m, w, l2, N}, Ball(wp), false});
  }

  auto evaluate = [&](Verdict& v) {
    const int m = v.candidate.m;
    EulerFactor f;
    f.p = 2;
    f.coeffs = v.candidate.l2;
    const int J1 = top_j(m + 1), J2 = top_j(m);
    const auto a2 = inverse_series(f, std::max(J1, J2) + 1);
    auto sc = [&](int base, int J) {
      Ball s(wp);
      for (int j = 0; j <= J; ++j)
        if (a2[j] != 0) s += Ball::exact(long(a2[j]), wp).mul_2si(-j) * res.cache.at(base - 2 * j);
      return s;
    };
    Ball t = sc(m + 1, J1) - Ball::exact(v.candidate.w, wp) * sc(m, J2);
    t.add_error(truncation_bound(conductor_argument(res.n_odd, m + 1, wp), opt.C));
    t.add_error(truncation_bound(conductor_argument(res.n_odd, m, wp), opt.C));
    v.enclosure = t;
    v.consistent = t.contains_zero();
  };
  unsigned nt = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, unsigned(res.verdicts.size()));
  if (nt <= 1) {
    for (auto& v : res.verdicts) evaluate(v);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < res.verdicts.size(); i += nt) evaluate(res.verdicts[i]);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<const Verdict*> ok;
  for (const auto& v : res.verdicts)
    if (v.consistent) ok.push_back(&v);
  if (ok.size() == 1) {
    res.status = ConductorStatus::Resolved;
    res.resolved = ok[0]->candidate;
    res.message = "unique consistent candidate";
  } else if (ok.empty()) {
    res.status = ConductorStatus::Inconsistent;
    res.message = "inconsistent with Hasse-Weil at this precision";
  } else {
    res.status = ConductorStatus::Ambiguous;
    res.message = "ambiguous: " + std::to_string(ok.size()) + " consistent candidates";
    for (const auto* v : ok)
      res.message += "; N=" + v->candidate.N.get_str() + " w=" + std::to_string(v->candidate.w) +
                     " L2=" + format_l2(v->candidate.l2);
  }
  return res;
}

std::string to_string(ConductorStatus s) {
  switch (s) {
    case ConductorStatus::Resolved: return "resolved";
    case ConductorStatus::Inconsistent: return "inconsistent";
    case ConductorStatus::Ambiguous: return "ambiguous";
  }
  return "?";
}

}  // namespace g2scan
