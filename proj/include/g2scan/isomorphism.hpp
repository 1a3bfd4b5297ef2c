// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Explicit Q-isomorphisms between Weierstrass models and deduplication of
// search candidates into curve classes.

#ifndef G2SCAN_ISOMORPHISM_HPP
#define G2SCAN_ISOMORPHISM_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "g2scan/invariants.hpp"
#include "g2scan/model.hpp"
#include "g2scan/search.hpp"

namespace g2scan {

// Searches integer matrices (a b; c d) with entries bounded by `bound` such
// that G(a x + b, c x + d) = mu F(x) for the simplified sextics F of `from`
// and G of `to`, with mu the square of a rational e.  The returned transform
// satisfies transform(from, t) == to exactly.
std::optional<ModelTransform> find_isomorphism(const WeierstrassModel& from, const WeierstrassModel& to,
                                               int bound = 8);

struct ClassKey {
  std::string g2;  // to_string of the G2 triple
  mpz_class abs_disc;
  friend bool operator<(const ClassKey& a, const ClassKey& b) {
    if (const int c = cmp(a.abs_disc, b.abs_disc); c != 0) return c < 0;
    return a.g2 < b.g2;
  }
  friend bool operator==(const ClassKey&, const ClassKey&) = default;
};

ClassKey class_key(const WeierstrassModel& m, const mpz_class& disc);

struct CurveClass {
  ClassKey key;
  std::size_t representative = 0;   // index of the least model (model_less)
  std::vector<std::size_t> members;  // ascending indices into the input
  // Another class shares this key but no bounded transform links them.
  bool unverified_merge_candidate = false;
};

struct DedupOptions {
  int bound = 8;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Groups by ClassKey, then merges within a group along found isomorphisms.
// Classes are ordered by key, then representative model.
std::vector<CurveClass> dedup(const std::vector<Candidate>& cs, const DedupOptions& opt = {});

}  // namespace g2scan

#endif  // G2SCAN_ISOMORPHISM_HPP
