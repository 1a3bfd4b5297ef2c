// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Box search for integral models with small discriminant.
//
// A shape is a set of (f, h) pairs: h ranges over the 16 polynomials with
// coefficients in {0,1} and f over a union of coefficient boxes.  Each
// (h, f-box) pair is split into work units; a unit is enumerated with the
// monomial tree of Delta(f, h) and every point whose residue mod 2^64 lies in
// [-D, D] is rechecked with the exact discriminant.

#ifndef G2SCAN_SEARCH_HPP
#define G2SCAN_SEARCH_HPP

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "g2scan/model.hpp"
#include "g2scan/poly_enum.hpp"

namespace g2scan {

inline constexpr std::uint64_t kMaxDiscBound = std::uint64_t(1) << 62;

enum class ShapeKind { S1, S2, S3, S4 };

struct ShapeSpec {
  ShapeKind kind = ShapeKind::S1;
  std::int64_t flat_bound = 0;  // S1: B
  std::int64_t scale = 1;       // S2: a
  mpq_class growth = 2;         // S2, S3: b, exact decimal
  std::int64_t log_base = 10;   // S4: b
  std::int64_t log_budget = 1;  // S4: d
  std::uint64_t disc_bound = 0; // D

  void validate() const;
  // Grammar of the --shape flag: S1:<B>, S2:<a>,<b>, S3:<b>, S4:<b>,<d>.
  std::string to_string() const;
};

ShapeSpec parse_shape(std::string_view text, std::uint64_t disc_bound);

// h for index 0..15: bit i of the index is h_i.
std::array<mpz_class, 4> h_from_index(unsigned index);

// Per-coordinate bounds |f_i| <= bound[i] for S1-S3.
std::array<std::int64_t, 7> coefficient_bounds(const ShapeSpec& s);

// Disjoint f-boxes whose union is the f-part of the shape (independent of h).
std::vector<BoxSpec> f_boxes(const ShapeSpec& s);

struct ShapeBox {
  unsigned h_index = 0;
  BoxSpec box;
};
std::vector<ShapeBox> shape_boxes(const ShapeSpec& s);

// Exact number of (f, h) pairs in the shape.
mpz_class cardinality(const ShapeSpec& s);

struct WorkUnit {
  std::uint64_t id = 0;
  unsigned h_index = 0;
  BoxSpec box;
};

// Splits every (h, f-box) pair into sub-boxes along the two outermost
// coefficients (f6, then f5) so that about n units result overall; at least
// one unit per pair.  n = 0 selects the default of at most kDefaultUnitPoints
// points per unit.
inline constexpr std::uint64_t kDefaultUnitPoints = 10'000'000;
std::vector<WorkUnit> partition(const ShapeSpec& s, std::uint64_t n = 0);

struct Candidate {
  WeierstrassModel model;
  mpz_class disc;
};

// Residue filter: r is congruent to some integer in [-D, D].
inline bool residue_in_window(std::uint64_t r, std::uint64_t D) { return r + D <= 2 * D; }

// Enumerates one unit, appending exact hits (0 < |Delta| <= D) in enumeration
// order.  A zero residue is skipped without recheck: it means Delta = 0 or
// |Delta| >= 2^64 > D.  Returns the number of nonzero residue-filter hits.
std::uint64_t scan_unit(MonomialTree& tree, const std::array<mpz_class, 4>& h, const BoxSpec& box,
                        std::uint64_t D, std::vector<Candidate>& out);

// Delta trees for all 16 h, f0 innermost and f6 outermost.
const std::vector<MonomialTree>& discriminant_trees();

// ---------------------------------------------------------------------------
// Checkpoints

struct Checkpoint {
  static constexpr int kFormatVersion = 1;
  std::string fingerprint;
  std::vector<bool> done;
  // Exact hits of each completed unit, indexed by unit id.
  std::vector<std::vector<Candidate>> results;
};

// Stable fingerprint of the shape, D and the unit list.
std::string search_fingerprint(const ShapeSpec& s, const std::vector<WorkUnit>& units);

// Atomic write (temporary file then rename).
void checkpoint_save(const std::filesystem::path& path, const Checkpoint& cp);
// Throws std::runtime_error on a missing header, unknown version or corrupt body.
Checkpoint checkpoint_load(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

struct SearchOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  std::uint64_t target_units = 0;
  std::optional<std::filesystem::path> checkpoint;
  double checkpoint_interval_seconds = 120.0;
  // Stop scheduling after this many units complete in this run (simulated
  // interruption); the checkpoint is saved before returning.
  std::optional<std::uint64_t> stop_after_units;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
  // When set, candidates are delivered here in output order instead of being
  // collected in SearchResult::candidates.
  std::function<void(const Candidate&)> sink;
};

struct SearchStats {
  std::uint64_t units_total = 0;
  std::uint64_t units_run = 0;  // in this invocation
  std::uint64_t points = 0;     // enumerated in this invocation
  std::uint64_t filter_hits = 0;
  std::uint64_t exact_hits = 0;
};

struct SearchResult {
  bool complete = false;
  std::vector<Candidate> candidates;  // unit order, then enumeration order
  SearchStats stats;
};

SearchResult run_search(const ShapeSpec& s, const SearchOptions& opts = {});

// JSON line {"model":"[[...],[...]]","disc":N}.
std::string candidate_to_json(const Candidate& c);
Candidate candidate_from_json(std::string_view line);
void write_candidates(const std::filesystem::path& path, const std::vector<Candidate>& cs);
std::vector<Candidate> read_candidates(const std::filesystem::path& path);

}  // namespace g2scan

#endif  // G2SCAN_SEARCH_HPP
