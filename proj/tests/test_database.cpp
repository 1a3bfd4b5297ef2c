// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "g2scan/database.hpp"
#include "g2scan/finite_field.hpp"
#include "g2scan/invariants.hpp"
#include "g2scan/isomorphism.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/pipeline.hpp"
#include "g2scan/search.hpp"
#include "test_support.hpp"

using namespace g2scan;
using namespace g2scan::testing;
namespace fs = std::filesystem;

namespace {

WeierstrassModel curve_a() { return parse_model("[[0,-1,-1,0,0,0,0],[1,1,1,1]]"); }
WeierstrassModel curve_b() { return parse_model("[[-6,11,-19,14,-9,1,0],[1,0,0,0]]"); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "g2scan_test_database";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

CurveRecord random_record(Rng& rng) {
  CurveRecord r;
  r.model = random_genus2_model(rng, 40, 1);
  r.disc = discriminant(r.model);
  r.id = record_id(r.model, r.disc);
  if (rng() % 4) {
    r.igusa_clebsch = igusa_clebsch(r.model);
    r.igusa = igusa(*r.igusa_clebsch);
    r.g2 = g2_invariants(*r.igusa);
    r.g2_class_id = g2_class_id(*r.g2);
  }
  const int nf = int(rng() % 6);
  for (int i = 0; i < nf; ++i) {
    EulerFactor f;
    f.p = primes_between(2, 200)[rng() % 46];
    f.good = true;
    f.coeffs = {1, uniform(rng, -20, 20), uniform(rng, -90, 90)};
    f.coeffs.push_back(std::int64_t(f.p) * f.coeffs[1]);
    f.coeffs.push_back(std::int64_t(f.p * f.p));
    r.good_lfactors.push_back(f);
  }
  if (rng() % 3) r.hash = rng() % kHashModulus;
  r.partial_hash = rng() % 5 == 0;
  if (rng() % 2) {
    ConductorRecord c;
    c.N = mpz_class(static_cast<long>(uniform(rng, 1, 1'000'000)));
    c.w = rng() % 2 ? 1 : -1;
    c.l2 = {1, uniform(rng, -2, 2), uniform(rng, -2, 2)};
    c.radius = std::ldexp(double(rng() % 1000000 + 1), -int(rng() % 60) - 20);
    r.conductor = c;
  }
  r.minimality_checked_above_p = minimality_bound(r.disc);
  r.unverified_merge_candidate = rng() % 7 == 0;
  r.class_size = 1 + rng() % 9;
  return r;
}

// Partition of candidate indices as a sorted set of sorted member lists.
using Partition = std::set<std::vector<std::size_t>>;

Partition oracle_partition(const std::vector<Candidate>& cs) {
  std::vector<std::size_t> parent(cs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      if (abs(cs[i].disc) != abs(cs[j].disc) || find(i) == find(j)) continue;
      if (find_isomorphism(cs[i].model, cs[j].model, 8)) parent[find(j)] = find(i);
    }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < cs.size(); ++i) groups[find(i)].push_back(i);
  Partition out;
  for (auto& [_, g] : groups) out.insert(g);
  return out;
}

}  // namespace

TEST_CASE("record round trip, JSON lines and CSV") {
  Rng rng(51);
  std::vector<CurveRecord> rs;
  for (int i = 0; i < 1000; ++i) rs.push_back(random_record(rng));
  for (DbFormat fmt : {DbFormat::Jsonl, DbFormat::Csv}) {
    std::ostringstream a;
    write_records(a, rs, fmt);
    std::istringstream in(a.str());
    const auto back = read_records(in, fmt);
    REQUIRE(back.size() == rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      INFO("record " << i);
      REQUIRE(back[i] == rs[i]);
    }
    std::ostringstream b;
    write_records(b, back, fmt);
    CHECK(a.str() == b.str());
  }
  for (const auto& r : rs) CHECK(record_from_json(record_to_json(r)) == r);

  const fs::path p = scratch("round_trip.jsonl");
  export_records(p, rs);
  CHECK(import_records(p) == rs);
  CHECK(parse_db_format("csv") == DbFormat::Csv);
  CHECK(parse_db_format("jsonl") == DbFormat::Jsonl);
  CHECK_THROWS_AS(parse_db_format("xml"), std::invalid_argument);
}

TEST_CASE("empty files and malformed input") {
  std::ostringstream os;
  write_records(os, {});
  CHECK(os.str() == "{\"g2scan_format\":1}\n");
  std::istringstream in(os.str());
  CHECK(read_records(in).empty());

  std::ostringstream csv;
  write_records(csv, {}, DbFormat::Csv);
  const std::string header = csv.str();
  CHECK(std::count(header.begin(), header.end(), '\n') == 1);
  CHECK(header.rfind("id,model,disc,", 0) == 0);
  std::istringstream cin(header);
  CHECK(read_records(cin, DbFormat::Csv).empty());

  Rng rng(52);
  const std::string good = record_to_json(random_record(rng));
  auto expect_error = [](const std::string& text, const std::string& needle, DbFormat fmt = DbFormat::Jsonl) {
    std::istringstream s(text);
    try {
      read_records(s, fmt);
      FAIL("no error for: " << text);
    } catch (const std::invalid_argument& e) {
      INFO(e.what());
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error("{\"g2scan_format\":1}\n" + good + "\n{not json\n", "line 3");
  expect_error("{\"g2scan_format\":1}\n{\"model\":\"[[1]]\"}\n", "line 2");
  expect_error(good + "\n", "line 1");
  expect_error("{\"g2scan_format\":2}\n", "line 1");
  expect_error("", "header");
  expect_error("id,model\n", "line 1", DbFormat::Csv);
  CHECK_THROWS_AS(import_records(scratch("does_not_exist.jsonl")), std::runtime_error);
}

TEST_CASE("record identifiers and minimality bound") {
  const auto m = curve_a();
  const mpz_class d = discriminant(m);
  CHECK(record_id(m, d) == record_id(m, d));
  CHECK(record_id(m, d) != record_id(curve_b(), discriminant(curve_b())));
  CHECK(minimality_bound(277) == 5);
  CHECK(minimality_bound(mpz_class(1) << 40) == 17);  // 16^10 = 2^40, 17^10 > 2^40
  for (long v : {1L, 1000000L, 1L << 30}) {
    const int b = minimality_bound(v);
    CHECK(b >= 5);
    CHECK(is_prime(std::uint64_t(b)));
    CHECK(std::pow(double(b), 10) > double(v));
    const auto below = primes_between(5, std::uint64_t(b) - 1);
    if (!below.empty()) CHECK(std::pow(double(below.back()), 10) <= double(v));
  }
}

TEST_CASE("dedup merges transformed models and keeps the 277 pair apart") {
  Rng rng(53);
  for (int i = 0; i < 30; ++i) {
    const auto m = random_genus2_model(rng, 6);
    ModelTransform t;
    t.a = uniform(rng, -2, 2);
    t.b = uniform(rng, -2, 2);
    t.c = uniform(rng, -2, 2);
    t.d = uniform(rng, -2, 2);
    if (abs(t.det()) != 1) continue;
    t.e = rng() % 2 ? 1 : -1;
    for (auto& c : t.j) c = uniform(rng, -1, 1);
    const auto other = to_integral(transform(m, t));
    REQUIRE(other.has_value());
    const std::vector<Candidate> cs{{m, discriminant(m)}, {*other, discriminant(*other)}};
    const auto classes = dedup(cs);
    REQUIRE(classes.size() == 1);
    CHECK(classes[0].members == std::vector<std::size_t>{0, 1});
    CHECK(classes[0].representative == (model_less(*other, m) ? 1u : 0u));
    const auto iso = find_isomorphism(m, *other);
    REQUIRE(iso.has_value());
    CHECK(transform(m, *iso) == to_rational(*other));
  }

  const std::vector<Candidate> pair{{curve_a(), discriminant(curve_a())}, {curve_b(), discriminant(curve_b())}};
  const auto classes = dedup(pair);
  CHECK(classes.size() == 2);
  CHECK_FALSE(find_isomorphism(curve_a(), curve_b()).has_value());
  CHECK(isogeny_hash(curve_a()).value == isogeny_hash(curve_b()).value);
  CHECK_FALSE(class_key(curve_a(), pair[0].disc) == class_key(curve_b(), pair[1].disc));
}

TEST_CASE("dedup on S1(2) matches an all-pairs isomorphism oracle") {
  const auto res = run_search(parse_shape("S1:2", 1'000'000));
  const auto& cs = res.candidates;
  REQUIRE(cs.size() > 100);
  const auto classes = dedup(cs);
  Partition got;
  for (const auto& cl : classes) {
    got.insert(cl.members);
    // Never merges across G2 class or |disc|.
    for (std::size_t i : cl.members) CHECK(class_key(cs[i].model, cs[i].disc) == cl.key);
    std::size_t least = cl.members[0];
    for (std::size_t i : cl.members)
      if (model_less(cs[i].model, cs[least].model)) least = i;
    CHECK(cl.representative == least);
  }
  const Partition oracle = oracle_partition(cs);
  UNSCOPED_INFO(cs.size() << " candidates, " << classes.size() << " classes, oracle " << oracle.size());
  CHECK(got == oracle);
  CHECK(std::is_sorted(classes.begin(), classes.end(),
                       [](const CurveClass& a, const CurveClass& b) { return a.key < b.key; }));
  DedupOptions one;
  one.threads = 1;
  const auto again = dedup(cs, one);
  REQUIRE(again.size() == classes.size());
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i].members == classes[i].members);
}

TEST_CASE("pipeline determinism on S1(3)") {
  PipelineOptions opt;
  opt.analyses = parse_analyses("invariants,lfactors,hash,conductor");
  const auto shape = parse_shape("S1:3", 1000);
  const auto r1 = run_pipeline(shape, opt);
  opt.search.workers = 1;
  opt.dedup.threads = 1;
  opt.conductor.threads = 1;
  const auto r2 = run_pipeline(shape, opt);
  REQUIRE(r1.complete);
  const fs::path p1 = scratch("p1.jsonl"), p2 = scratch("p2.jsonl");
  export_records(p1, r1.records);
  export_records(p2, r2.records);
  CHECK(slurp(p1) == slurp(p2));

  bool found = false;
  for (const auto& r : r1.records) {
    CHECK(r.disc != 0);
    CHECK(r.igusa_clebsch.has_value());
    CHECK((r.hash.has_value() || r.partial_hash));
    if (abs(r.disc) == 277) {
      found = true;
      CHECK(r.conductor.has_value());
      if (r.conductor) CHECK(r.conductor->N == 277);
    }
  }
  CHECK(found);
  CHECK(parse_analyses("none").conductor == false);
  CHECK_THROWS_AS(parse_analyses("invariants,bogus"), std::invalid_argument);
}

TEST_CASE("pipeline on S1(12) with D = 10^3 finds one class at 277") {
  PipelineOptions opt;
  opt.analyses = parse_analyses("invariants,lfactors,hash");
  const auto r = run_pipeline(parse_shape("S1:12", 1000), opt);
  REQUIRE(r.complete);
  UNSCOPED_INFO(r.candidates << " candidates, " << r.records.size() << " records");
  CHECK(r.records.size() == 47);
  std::set<std::string> g2_277;
  for (const auto& rec : r.records)
    if (abs(rec.disc) == 277) g2_277.insert(rec.g2_class_id);
  // Curve b has |f2| = 19, and no model of it fits in S1(12).
  const auto g2_id = [](const WeierstrassModel& m) { return g2_class_id(g2_invariants(igusa(igusa_clebsch(m)))); };
  CHECK(g2_277 == std::set<std::string>{g2_id(curve_a())});
  CHECK(g2_id(curve_a()) != g2_id(curve_b()));
}
