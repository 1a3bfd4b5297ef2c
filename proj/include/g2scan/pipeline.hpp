// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// search -> dedup -> invariants -> local factors -> hash -> conductor.

#ifndef G2SCAN_PIPELINE_HPP
#define G2SCAN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "g2scan/conductor.hpp"
#include "g2scan/database.hpp"
#include "g2scan/isomorphism.hpp"
#include "g2scan/search.hpp"

namespace g2scan {

struct Analyses {
  bool invariants = false;
  bool lfactors = false;
  bool hash = false;
  bool conductor = false;
};

// Comma-separated subset of invariants,lfactors,hash,conductor ("" or
// "none" selects nothing).
Analyses parse_analyses(std::string_view list);

struct PipelineOptions {
  Analyses analyses;
  std::uint64_t lfactor_bound = 100;  // good factors for p < bound
  ConductorOptions conductor;
  DedupOptions dedup;
  SearchOptions search;
  std::function<void(const std::string&)> log;
};

// One record per class: model and flags from the class, analyses as requested.
// The conductor is stored only when resolved; curves with an odd prime of
// ord_p(Delta) >= 2 are skipped by that stage.
CurveRecord analyze_class(const std::vector<Candidate>& cs, const CurveClass& cl, const PipelineOptions& opt);

std::vector<CurveRecord> build_records(const std::vector<Candidate>& cs, const PipelineOptions& opt);

struct PipelineResult {
  bool complete = false;  // false if the search stopped early
  SearchStats stats;
  std::size_t candidates = 0;
  std::vector<CurveRecord> records;
};

PipelineResult run_pipeline(const ShapeSpec& shape, const PipelineOptions& opt);

}  // namespace g2scan

#endif  // G2SCAN_PIPELINE_HPP
