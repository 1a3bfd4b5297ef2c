// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "g2scan/finite_field.hpp"

namespace g2scan {

Analyses parse_analyses(std::string_view list) {
  Analyses a;
  if (list.empty() || list == "none") return a;
  std::stringstream ss{std::string(list)};
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "invariants")
      a.invariants = true;
    else if (tok == "lfactors")
      a.lfactors = true;
    else if (tok == "hash")
      a.hash = true;
    else if (tok == "conductor")
      a.conductor = true;
    else
      throw std::invalid_argument("unknown analysis '" + tok + "' (expected invariants, lfactors, hash, conductor)");
  }
  return a;
}

CurveRecord analyze_class(const std::vector<Candidate>& cs, const CurveClass& cl, const PipelineOptions& opt) {
  const Candidate& rep = cs.at(cl.representative);
  CurveRecord r;
  r.model = rep.model;
  r.disc = rep.disc;
  r.id = record_id(rep.model, rep.disc);
  r.minimality_checked_above_p = minimality_bound(rep.disc);
  r.unverified_merge_candidate = cl.unverified_merge_candidate;
  r.class_size = cl.members.size();

  const IgusaClebsch ic = igusa_clebsch(rep.model);
  const IgusaInvariants j = igusa(ic);
  const G2Invariants g = g2_invariants(j);
  r.g2_class_id = g2_class_id(g);
  if (opt.analyses.invariants) {
    r.igusa_clebsch = ic;
    r.igusa = j;
    r.g2 = g;
  }
  if (opt.analyses.lfactors)
    for (std::uint64_t p : primes_between(2, opt.lfactor_bound > 0 ? opt.lfactor_bound - 1 : 0))
      if (mod_p(rep.disc, p) != 0) r.good_lfactors.push_back(good_lfactor(rep.model, p));
  if (opt.analyses.hash) {
    const HashValue h = isogeny_hash(rep.model);
    r.hash = h.value;
    r.partial_hash = h.partial;
  }
  if (opt.analyses.conductor) {
    try {
      ConductorOptions co = opt.conductor;
      co.threads = 1;
      const auto res = resolve_two_part(rep.model, odd_bad_data(rep.model, rep.disc), rep.disc, co);
      if (res.resolved) {
        double radius = 0;
        for (const auto& v : res.verdicts)
          if (v.consistent) radius = v.enclosure.rad_d();
        r.conductor = ConductorRecord{res.resolved->N, res.resolved->w, res.resolved->l2, radius};
      } else if (opt.log) {
        opt.log("conductor " + format_model(rep.model) + ": " + res.message);
      }
    } catch (const std::invalid_argument& e) {
      if (opt.log) opt.log("conductor " + format_model(rep.model) + " skipped: " + e.what());
    }
  }
  return r;
}

std::vector<CurveRecord> build_records(const std::vector<Candidate>& cs, const PipelineOptions& opt) {
  const auto classes = dedup(cs, opt.dedup);
  if (opt.log) opt.log("dedup: " + std::to_string(cs.size()) + " models -> " + std::to_string(classes.size()) + " classes");
  std::vector<CurveRecord> out(classes.size());
  unsigned nt = opt.dedup.threads ? opt.dedup.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = unsigned(std::min<std::size_t>(nt, classes.size()));
  if (nt <= 1) {
    for (std::size_t i = 0; i < classes.size(); ++i) out[i] = analyze_class(cs, classes[i], opt);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < classes.size(); i += nt) out[i] = analyze_class(cs, classes[i], opt);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

PipelineResult run_pipeline(const ShapeSpec& shape, const PipelineOptions& opt) {
  PipelineResult res;
  SearchOptions so = opt.search;
  so.sink = nullptr;
  const SearchResult sr = run_search(shape, so);
  res.complete = sr.complete;
  res.stats = sr.stats;
  res.candidates = sr.candidates.size();
  if (opt.log)
    opt.log("search: " + std::to_string(sr.stats.points) + " points, " + std::to_string(sr.candidates.size()) +
            " models");
  if (!sr.complete) return res;
  res.records = build_records(sr.candidates, opt);
  return res;
}

}  // namespace g2scan
