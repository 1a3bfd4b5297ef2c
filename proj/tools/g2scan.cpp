// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// g2scan: search for genus 2 curves of small discriminant and analyze them.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "g2scan/bessel.hpp"
#include "g2scan/conductor.hpp"
#include "g2scan/database.hpp"
#include "g2scan/finite_field.hpp"
#include "g2scan/invariants.hpp"
#include "g2scan/isomorphism.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/pipeline.hpp"
#include "g2scan/search.hpp"

using namespace g2scan;

namespace {

// Accepts 1000000, 1e6 or 10^6.
std::uint64_t parse_bound(const std::string& text) {
  auto digits = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--disc-bound", "expected an integer, 1e6 or 10^6, got '" + text + "'");
    return mpz_class(s);
  };
  mpz_class v;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, digits(text.substr(e + 1)).get_ui());
    v = digits(text.substr(0, e)) * p;
  } else if (auto c = text.find('^'); c != std::string::npos) {
    mpz_pow_ui(v.get_mpz_t(), digits(text.substr(0, c)).get_mpz_t(), digits(text.substr(c + 1)).get_ui());
  } else {
    v = digits(text);
  }
  if (v < 1 || v > mpz_class(std::to_string(kMaxDiscBound)))
    throw CLI::ValidationError("--disc-bound", "must be in [1, 2^62]");
  return v.get_ui();
}

void progress_line(std::uint64_t done, std::uint64_t total) {
  std::fprintf(stderr, "\runits %llu/%llu", static_cast<unsigned long long>(done),
               static_cast<unsigned long long>(total));
  if (done == total) std::fputc('\n', stderr);
}

struct SearchArgs {
  std::string shape = "S1:2";
  std::string disc_bound = "1000000";
  unsigned workers = 0;
  std::uint64_t units = 0;
  std::string checkpoint;
  double interval = 120;
  std::uint64_t stop_after = 0;
  bool quiet = false;

  void add(CLI::App* app) {
    app->add_option("--shape", shape, "S1:<B>, S2:<a>,<b>, S3:<b> or S4:<b>,<d>")->required();
    app->add_option("--disc-bound", disc_bound, "D: keep models with 0 < |disc| <= D")->required();
    app->add_option("--workers", workers, "worker threads (0: all cores)");
    app->add_option("--units", units, "number of work units (0: automatic)");
    app->add_option("--checkpoint", checkpoint, "checkpoint file; resumes if it exists");
    app->add_option("--checkpoint-interval", interval, "seconds between checkpoint writes");
    app->add_option("--stop-after", stop_after, "stop after this many units (checkpoint kept)");
    app->add_flag("--quiet", quiet, "no progress output");
  }

  std::pair<ShapeSpec, SearchOptions> build() const {
    ShapeSpec s = parse_shape(shape, parse_bound(disc_bound));
    SearchOptions o;
    o.workers = workers;
    o.target_units = units;
    if (!checkpoint.empty()) o.checkpoint = checkpoint;
    o.checkpoint_interval_seconds = interval;
    if (stop_after) o.stop_after_units = stop_after;
    if (!quiet) o.progress = progress_line;
    return {s, o};
  }
};

void print_table(const ConductorResult& r) {
  std::printf("N_odd = %s, ord2(N) <= %d, coefficients to n = %llu, cache entries = %zu\n", r.n_odd.get_str().c_str(),
              r.max_m, static_cast<unsigned long long>(r.coefficient_bound), r.cache.size());
  for (const auto& v : r.verdicts)
    std::printf("N=%s w=%+d L2=%s T=%s %s\n", v.candidate.N.get_str().c_str(), v.candidate.w,
                format_l2(v.candidate.l2).c_str(), v.enclosure.to_string(6).c_str(),
                v.consistent ? "consistent" : "refuted");
  std::printf("status: %s (%s)\n", to_string(r.status).c_str(), r.message.c_str());
  if (r.resolved)
    std::printf("resolved: N=%s w=%+d L2=%s\n", r.resolved->N.get_str().c_str(), r.resolved->w,
                format_l2(r.resolved->l2).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2scan: genus 2 curves of small discriminant"};
  app.require_subcommand(1);

  // search
  auto* search = app.add_subcommand("search", "enumerate a shape and write candidate models (JSON lines)");
  SearchArgs sargs;
  sargs.add(search);
  std::string search_out;
  search->add_option("--out", search_out, "output file")->required();
  search->callback([&] {
    auto [s, o] = sargs.build();
    const SearchResult r = run_search(s, o);
    if (!r.complete) {
      std::fprintf(stderr, "stopped after %llu units; resume with the same --checkpoint\n",
                   static_cast<unsigned long long>(r.stats.units_run));
      throw CLI::RuntimeError(3);
    }
    write_candidates(search_out, r.candidates);
    std::fprintf(stderr, "%llu points, %llu filter hits, %zu models\n", static_cast<unsigned long long>(r.stats.points),
                 static_cast<unsigned long long>(r.stats.filter_hits), r.candidates.size());
  });

  // invariants
  std::string model_text;
  auto* inv = app.add_subcommand("invariants", "discriminant and Igusa-Clebsch, Igusa and G2 invariants");
  inv->add_option("--model", model_text, "[[f0,...,f6],[h0,...,h3]]")->required();
  inv->callback([&] {
    const auto m = parse_model(model_text);
    const IgusaClebsch ic = igusa_clebsch(m);
    const IgusaInvariants j = igusa(ic);
    std::printf("disc %s\nigusa_clebsch %s\nigusa %s\ng2 %s\n", discriminant(m).get_str().c_str(),
                to_string(ic).c_str(), to_string(j).c_str(), to_string(g2_invariants(j)).c_str());
  });

  // lfactors
  std::uint64_t lf_bound = 100;
  auto* lf = app.add_subcommand("lfactors", "Euler factors at good primes (and nodal odd bad primes)");
  lf->add_option("--model", model_text)->required();
  lf->add_option("--bound", lf_bound, "primes below this bound");
  lf->callback([&] {
    const auto m = parse_model(model_text);
    const mpz_class d = discriminant(m);
    if (d == 0) throw CLI::ValidationError("--model", "singular model");
    for (std::uint64_t p : primes_between(2, lf_bound ? lf_bound - 1 : 0)) {
      if (mod_p(d, p) != 0) {
        std::printf("%s\n", format_factor(good_lfactor(m, p)).c_str());
        continue;
      }
      try {
        std::printf("%s bad\n", format_factor(bad_lfactor_ord1(m, p).factor).c_str());
      } catch (const std::invalid_argument&) {
        std::printf("%llu:? bad\n", static_cast<unsigned long long>(p));
      }
    }
  });

  // hash
  auto* hs = app.add_subcommand("hash", "isogeny-class hash");
  hs->add_option("--model", model_text)->required();
  hs->callback([&] {
    const HashValue h = isogeny_hash(parse_model(model_text));
    std::printf("%llu%s\n", static_cast<unsigned long long>(h.value), h.partial ? " partial" : "");
    for (auto p : h.skipped) std::printf("skipped %llu\n", static_cast<unsigned long long>(p));
  });

  // conductor
  ConductorOptions copt;
  long precision = 53;
  auto* cd = app.add_subcommand("conductor", "resolve ord2(N), w and L2 analytically");
  cd->add_option("--model", model_text)->required();
  cd->add_option("--C", copt.C, "truncation constant (>= 5)");
  cd->add_option("--precision", precision, "working precision in bits");
  cd->callback([&] {
    const auto m = parse_model(model_text);
    const mpz_class d = discriminant(m);
    copt.prec = precision;
    const auto r = resolve_two_part(m, odd_bad_data(m, d), d, copt);
    print_table(r);
    if (r.status != ConductorStatus::Resolved) throw CLI::RuntimeError(2);
  });

  // run
  SearchArgs rargs;
  std::string analyze = "invariants,lfactors,hash", run_out, run_format = "jsonl";
  std::uint64_t run_lbound = 100;
  int iso_bound = 8;
  auto* run = app.add_subcommand("run", "search, dedup and analyze; write a curve database");
  rargs.add(run);
  run->add_option("--analyze", analyze, "subset of invariants,lfactors,hash,conductor");
  run->add_option("--out", run_out, "database file")->required();
  run->add_option("--format", run_format, "jsonl or csv");
  run->add_option("--lfactor-bound", run_lbound, "store good factors for p below this");
  run->add_option("--iso-bound", iso_bound, "entry bound of the isomorphism search");
  run->callback([&] {
    auto [s, o] = rargs.build();
    PipelineOptions po;
    po.analyses = parse_analyses(analyze);
    po.lfactor_bound = run_lbound;
    po.search = o;
    po.dedup.bound = iso_bound;
    po.dedup.threads = rargs.workers;
    if (!rargs.quiet) po.log = [](const std::string& s) { std::fprintf(stderr, "%s\n", s.c_str()); };
    const DbFormat fmt = parse_db_format(run_format);
    const PipelineResult r = run_pipeline(s, po);
    if (!r.complete) {
      std::fprintf(stderr, "search stopped early; resume with the same --checkpoint\n");
      throw CLI::RuntimeError(3);
    }
    export_records(run_out, r.records, fmt);
    std::fprintf(stderr, "%zu records written to %s\n", r.records.size(), run_out.c_str());
  });

  // export
  std::string ex_in, ex_out, ex_from = "jsonl", ex_to = "csv";
  auto* ex = app.add_subcommand("export", "convert a database between jsonl and csv");
  ex->add_option("--in", ex_in)->required();
  ex->add_option("--out", ex_out)->required();
  ex->add_option("--from", ex_from, "input format");
  ex->add_option("--to", ex_to, "output format");
  ex->callback([&] { export_records(ex_out, import_records(ex_in, parse_db_format(ex_from)), parse_db_format(ex_to)); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "g2scan: %s\n", e.what());
    return 1;
  }
  return 0;
}
