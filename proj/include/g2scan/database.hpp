// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Curve records and their file formats.
//
// JSON lines: a header {"g2scan_format":1}, then one record per line with
// keys in a fixed order, so equal records always serialize to equal bytes.
//
// CSV: one header row, then one row per record with the columns
//   id, model, disc, I2, I4, I6, I10, J2, J4, J6, J8, J10, g1, g2, g3,
//   g2_branch, good_lfactors, hash, partial_hash, N, w, L2, radius,
//   minimality_checked_above_p, g2_class_id, unverified_merge_candidate,
//   class_size
// Rationals are written as "p/q", Euler factors as "p:[1,c1,...]" joined by
// ';', absent values as empty fields.

#ifndef G2SCAN_DATABASE_HPP
#define G2SCAN_DATABASE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "g2scan/invariants.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/model.hpp"

namespace g2scan {

struct ConductorRecord {
  mpz_class N;
  int w = 1;
  std::vector<std::int64_t> l2{1};
  double radius = 0;  // enclosure radius of the surviving candidate
  friend bool operator==(const ConductorRecord&, const ConductorRecord&) = default;
};

struct CurveRecord {
  std::string id;  // content hash of model and disc
  WeierstrassModel model;
  mpz_class disc;
  std::optional<IgusaClebsch> igusa_clebsch;
  std::optional<IgusaInvariants> igusa;
  std::optional<G2Invariants> g2;
  std::vector<EulerFactor> good_lfactors;
  std::optional<std::uint64_t> hash;
  bool partial_hash = false;
  std::optional<ConductorRecord> conductor;
  // Minimality at every prime p >= this value holds because p^10 > |disc|.
  int minimality_checked_above_p = 5;
  std::string g2_class_id;
  bool unverified_merge_candidate = false;
  std::uint64_t class_size = 1;  // search models merged into this record

  friend bool operator==(const CurveRecord&, const CurveRecord&) = default;
};

// Hex FNV-1a of the canonical model text and discriminant.
std::string record_id(const WeierstrassModel& m, const mpz_class& disc);
// Stable identifier of a G2 triple.
std::string g2_class_id(const G2Invariants& g);
// Smallest prime p >= 5 with p^10 > |disc|; every larger prime then has the
// same property.
int minimality_bound(const mpz_class& disc);

std::string record_to_json(const CurveRecord& r);
// Throws std::invalid_argument on malformed input.
CurveRecord record_from_json(std::string_view line);

enum class DbFormat { Jsonl, Csv };
DbFormat parse_db_format(std::string_view name);

void write_records(std::ostream& os, const std::vector<CurveRecord>& rs, DbFormat fmt = DbFormat::Jsonl);
void export_records(const std::filesystem::path& path, const std::vector<CurveRecord>& rs,
                    DbFormat fmt = DbFormat::Jsonl);
// Errors carry the 1-based line (or row) number.  JSON lines need the
// versioned header.
std::vector<CurveRecord> read_records(std::istream& is, DbFormat fmt = DbFormat::Jsonl);
std::vector<CurveRecord> import_records(const std::filesystem::path& path, DbFormat fmt = DbFormat::Jsonl);

}  // namespace g2scan

#endif  // G2SCAN_DATABASE_HPP
