// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Analytic determination of the 2-part of the conductor, the root number and
// the Euler factor at 2, by testing S(x) = w S(N/x) with truncated Bessel sums
//
//   S_C(x) = (1/x) sum_{n <= Cx} a_n K_0(4 pi sqrt(n/x))
//
// in ball arithmetic.  Even-index coefficients are never needed explicitly:
// S_C(x) = sum_j a_{2^j} 2^-j S_C^odd(x / 2^j).

#ifndef G2SCAN_CONDUCTOR_HPP
#define G2SCAN_CONDUCTOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "g2scan/ball.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/model.hpp"

namespace g2scan {

// Upper bound 4 C x^{1/4} (1 + 2 x sqrt C) e^{-4 pi sqrt C} for |S(x) - S_C(x)|,
// rounded up.  Throws std::invalid_argument for C < 5 or x < 0.
double truncation_bound(double x, double C);
// Same, at the upper endpoint of a ball.
double truncation_bound(const Ball& x, double C);

// (1/x) sum over odd n <= Cx.  A term whose inclusion is undecided because
// Cx straddles n is weighted by [0, 1].  Needs odd.bound >= Cx; otherwise
// throws std::invalid_argument naming the required bound.
Ball s_c_odd(const Ball& x, const DirichletSeries& odd, double C);

// Full truncated sum from the odd series and a_{2^j} (two_part[j]); two_part
// must reach floor(log2(Cx)).
Ball s_c(const Ball& x, const DirichletSeries& odd, const std::vector<std::int64_t>& two_part, double C);

// sqrt(2^{k - 1/2} n_odd): the cache grid for S_C^odd.
Ball conductor_argument(const mpz_class& n_odd, int k, mpfr_prec_t prec);

// Candidate Euler factors at 2 (coefficients low to high, constant term 1)
// for ord_2(N) = m.  m >= 1: degree <= 3, inverse roots of modulus <= sqrt 2.
// m = 0: 1 + c1 T + c2 T^2 + 2 c1 T^3 + 4 T^4 with all inverse roots on
// |alpha| = sqrt 2.
std::vector<std::vector<std::int64_t>> candidate_l2_set(int m);

// "1-T+T^2"
std::string format_l2(const std::vector<std::int64_t>& c);

struct ConductorCandidate {
  int m = 0;  // ord_2(N)
  int w = 1;
  std::vector<std::int64_t> l2{1};
  mpz_class N;
};

struct Verdict {
  ConductorCandidate candidate;
  Ball enclosure;  // S_C(2^{1/4} sqrt N) - w S_C(2^{-1/4} sqrt N) + truncation
  bool consistent = false;
};

enum class ConductorStatus { Resolved, Inconsistent, Ambiguous };

struct ConductorOptions {
  double C = 10;
  mpfr_prec_t prec = 53;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ConductorResult {
  ConductorStatus status = ConductorStatus::Inconsistent;
  std::vector<Verdict> verdicts;
  std::optional<ConductorCandidate> resolved;
  mpz_class n_odd;
  int max_m = 0;
  std::uint64_t coefficient_bound = 0;
  std::map<int, Ball> cache;  // S_C^odd keyed by k
  std::string message;
};

// Local data at the odd bad primes from nodal reductions (ord_p(Delta) = 1).
// Throws std::invalid_argument if some odd p has ord_p(Delta) >= 2.
std::map<std::uint64_t, BadFactor> odd_bad_data(const WeierstrassModel& m, const mpz_class& disc);

// Tests every (m, w, L_2) with m <= min(20, ord_2(disc)).  odd_bad must cover
// every odd prime dividing disc.
ConductorResult resolve_two_part(const WeierstrassModel& model, const std::map<std::uint64_t, BadFactor>& odd_bad,
                                 const mpz_class& disc, const ConductorOptions& opt = {});

std::string to_string(ConductorStatus s);

}  // namespace g2scan

#endif  // G2SCAN_CONDUCTOR_HPP
