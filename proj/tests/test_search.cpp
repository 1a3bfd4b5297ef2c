// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "g2scan/search.hpp"
#include "test_support.hpp"

using namespace g2scan;
using namespace g2scan::testing;

namespace fs = std::filesystem;

namespace {

using ModelSet = std::set<std::string>;

ModelSet as_set(const std::vector<Candidate>& cs) {
  ModelSet s;
  for (const auto& c : cs) s.insert(format_model(c.model) + " " + c.disc.get_str());
  return s;
}

// Every model of S1(B) with 0 < |Delta| <= D, by exact evaluation.
ModelSet brute_force_s1(long B, std::uint64_t D) {
  ModelSet out;
  const mpz_class bound(std::to_string(D));
  for (unsigned hi = 0; hi < 16; ++hi) {
    WeierstrassModel m;
    m.h = h_from_index(hi);
    std::array<long, 7> f;
    f.fill(-B);
    for (;;) {
      for (int i = 0; i < 7; ++i) m.f[i] = f[i];
      const mpz_class d = discriminant(m);
      if (d != 0 && abs(d) <= bound) out.insert(format_model(m) + " " + d.get_str());
      int k = 0;
      while (k < 7 && f[k] == B) f[k++] = -B;
      if (k == 7) break;
      ++f[k];
    }
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "g2scan_test_search";
  fs::create_directories(dir);
  return dir / name;
}

double log10_mpz(const mpz_class& v) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log10(m) + double(e) * std::log10(2.0);
}

}  // namespace

TEST_CASE("shape parsing") {
  const auto s1 = parse_shape("S1:12", 1000);
  CHECK(s1.kind == ShapeKind::S1);
  CHECK(s1.flat_bound == 12);
  CHECK(s1.to_string() == "S1:12");
  CHECK(parse_shape("S2:2,3.51", 1).growth == mpq_class(351, 100));
  CHECK(parse_shape("S4:10,10", 1).log_budget == 10);
  CHECK_THROWS_AS(parse_shape("S5:1", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S2:0,3", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S2:1,1", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S3:0.5", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S4:1,3", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S1:-1", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_shape("S1:2", kMaxDiscBound + 1), std::invalid_argument);
}

TEST_CASE("S1 boxes and cardinalities") {
  CHECK(cardinality(parse_shape("S1:0", 1)) == 16);
  const auto s12 = parse_shape("S1:12", 1000000);
  mpz_class expect;
  mpz_ui_pow_ui(expect.get_mpz_t(), 25, 7);
  CHECK(cardinality(s12) == 16 * expect);
  CHECK(cardinality(s12).get_str() == "97656250000");
  const auto boxes = shape_boxes(s12);
  REQUIRE(boxes.size() == 16);
  for (const auto& b : boxes)
    for (const auto& r : b.box.ranges) CHECK(r == Interval{-12, 12});

  mpz_ui_pow_ui(expect.get_mpz_t(), 181, 7);
  const mpz_class c90 = cardinality(parse_shape("S1:90", 1));
  CHECK(c90 == 16 * expect);
  CHECK(std::abs(c90.get_d() / 1.02e17 - 1) < 0.01);
}

TEST_CASE("S2 and S3 bounds") {
  const auto s2 = parse_shape("S2:2,3.51", 1);
  const auto b2 = coefficient_bounds(s2);
  CHECK(b2[6] == 2);
  CHECK(b2[5] == 7);     // floor(2 * 3.51)
  CHECK(b2[0] == 3740);  // floor(2 * 3.51^6) = floor(3740.03...)
  CHECK(std::abs(cardinality(s2).get_d() / 9.84e16 - 1) < 0.01);

  const auto s3 = parse_shape("S3:10", 1);
  const auto b3 = coefficient_bounds(s3);
  CHECK(b3 == std::array<std::int64_t, 7>{10, 100, 1000, 10000, 1000, 100, 10});
}

TEST_CASE("S4 decomposition is disjoint and exact") {
  // Small case against direct membership counting.
  const auto s = parse_shape("S4:3,4", 1);
  auto budget = [](std::int64_t v, std::int64_t b) {
    int k = 0;
    std::int64_t p = 1;
    while (p < std::abs(v) + 1) p *= b, ++k;
    return k;
  };
  std::uint64_t members = 0;
  const std::int64_t R = 80;  // 3^4 - 1 bounds every coordinate
  std::array<std::int64_t, 7> f;
  f.fill(-R);
  std::set<std::array<std::int64_t, 7>> covered;
  for (const auto& box : f_boxes(s)) {
    std::uint64_t n = 0;
    std::vector<std::int64_t> x(7);
    for (int i = 0; i < 7; ++i) x[i] = box.ranges[i].lo;
    for (;;) {
      std::array<std::int64_t, 7> a;
      std::copy(x.begin(), x.end(), a.begin());
      REQUIRE(covered.insert(a).second);
      ++n;
      int k = 0;
      while (k < 7 && x[k] == box.ranges[k].hi) x[k] = box.ranges[k].lo, ++k;
      if (k == 7) break;
      ++x[k];
    }
    CHECK(n == box.point_count());
  }
  for (const auto& a : covered) {
    int total = 0;
    for (auto v : a) total += budget(v, 3);
    CHECK(total <= 4);
  }
  // Count members by summing over budget vectors (stars and bars check).
  std::function<void(int, int, std::uint64_t)> rec = [&](int i, int left, std::uint64_t prod) {
    if (i == 7) {
      members += prod;
      return;
    }
    for (int k = 0; k <= left; ++k) {
      const std::uint64_t width = k == 0 ? 1 : 2 * (std::uint64_t(std::pow(3, k)) - std::uint64_t(std::pow(3, k - 1)));
      rec(i + 1, left - k, prod * width);
    }
  };
  rec(0, 4, 1);
  CHECK(covered.size() == members);
  CHECK(cardinality(s) == 16 * members);

  const double lg = log10_mpz(cardinality(parse_shape("S4:10,10", 1)));
  CHECK(std::abs(lg - 16.3) < 0.05);
  (void)f;
}

TEST_CASE("partition covers each shape exactly once") {
  for (const char* text : {"S1:2", "S3:2.5", "S4:3,3"}) {
    const auto s = parse_shape(text, 1000);
    for (std::uint64_t n : {1ULL, 7ULL, 100ULL, 0ULL}) {
      const auto units = partition(s, n);
      mpz_class total = 0;
      for (std::size_t i = 0; i < units.size(); ++i) {
        CHECK(units[i].id == i);
        total += mpz_class(std::to_string(units[i].box.point_count()));
      }
      CHECK(total == cardinality(s));
      if (n == 1) CHECK(units.size() == shape_boxes(s).size());
    }
  }
  // Disjointness on a small shape by explicit point sets.
  const auto s = parse_shape("S1:1", 1);
  std::set<std::pair<unsigned, std::vector<std::int64_t>>> seen;
  for (const auto& u : partition(s, 50)) {
    std::vector<std::int64_t> x(7);
    for (int i = 0; i < 7; ++i) x[i] = u.box.ranges[i].lo;
    for (;;) {
      REQUIRE(seen.insert({u.h_index, x}).second);
      int k = 0;
      while (k < 7 && x[k] == u.box.ranges[k].hi) x[k] = u.box.ranges[k].lo, ++k;
      if (k == 7) break;
      ++x[k];
    }
  }
  CHECK(seen.size() == 16 * 2187);
}

TEST_CASE("run_search on S1(2) equals the brute-force scan") {
  const auto s = parse_shape("S1:2", 1000000);
  SearchOptions o;
  o.workers = 2;
  const auto r = run_search(s, o);
  REQUIRE(r.complete);
  CHECK(r.stats.points == 1250000);
  const ModelSet got = as_set(r.candidates);
  CHECK(got.size() == r.candidates.size());
  const ModelSet want = brute_force_s1(2, 1000000);
  CHECK(got == want);
  CHECK(got.count("[[0,-1,-1,0,0,0,0],[1,1,1,1]] -277") + got.count("[[0,-1,-1,0,0,0,0],[1,1,1,1]] 277") == 1);
  // Residue filter false positives.
  const double extra = double(r.stats.filter_hits - r.stats.exact_hits) / double(r.stats.points);
  UNSCOPED_INFO("filter hits " << r.stats.filter_hits << ", exact " << r.stats.exact_hits);
  CHECK(extra < 1e-10);

  // Partition-independence.
  for (std::uint64_t n : {1ULL, 16ULL, 333ULL}) {
    SearchOptions p;
    p.workers = 3;
    p.target_units = n;
    CHECK(as_set(run_search(s, p).candidates) == got);
  }

  // Reversal x -> 1/x maps the candidate set of S1(B) into itself.
  for (const auto& c : r.candidates) {
    WeierstrassModel rev;
    for (int i = 0; i < 7; ++i) rev.f[i] = c.model.f[6 - i];
    for (int i = 0; i < 4; ++i) rev.h[i] = c.model.h[3 - i];
    REQUIRE(got.count(format_model(rev) + " " + c.disc.get_str()) == 1);
  }
}

TEST_CASE("empty results") {
  const auto s = parse_shape("S1:3", 0);
  const auto r = run_search(s);
  CHECK(r.complete);
  CHECK(r.candidates.empty());
}

TEST_CASE("candidate IO round trip") {
  const auto r = run_search(parse_shape("S1:1", 100000));
  REQUIRE_FALSE(r.candidates.empty());
  const auto p = scratch("cands.jsonl");
  write_candidates(p, r.candidates);
  const auto back = read_candidates(p);
  REQUIRE(back.size() == r.candidates.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].model == r.candidates[i].model);
    CHECK(back[i].disc == r.candidates[i].disc);
  }
  CHECK(candidate_to_json(r.candidates[0]).find("\"model\":\"[[") != std::string::npos);
  CHECK_THROWS(candidate_from_json("{\"model\":3}"));
}

TEST_CASE("kill and resume on S1(3) is byte-identical") {
  const auto s = parse_shape("S1:3", 1000000);
  const auto full_path = scratch("full.jsonl"), resumed_path = scratch("resumed.jsonl"), cp = scratch("s13.ckpt");
  fs::remove(cp);
  SearchOptions o;
  o.workers = 2;
  o.target_units = 64;
  write_candidates(full_path, run_search(s, o).candidates);

  SearchOptions a = o;
  a.checkpoint = cp;
  a.stop_after_units = 20;
  const auto first = run_search(s, a);
  CHECK_FALSE(first.complete);
  CHECK(fs::exists(cp));
  const auto loaded = checkpoint_load(cp);
  CHECK(std::count(loaded.done.begin(), loaded.done.end(), true) >= 20);

  a.stop_after_units = 15;
  const auto second = run_search(s, a);
  CHECK_FALSE(second.complete);

  a.stop_after_units.reset();
  const auto last = run_search(s, a);
  REQUIRE(last.complete);
  CHECK(last.stats.units_run < last.stats.units_total);
  write_candidates(resumed_path, last.candidates);
  CHECK(slurp(full_path) == slurp(resumed_path));

  // A completed checkpoint replays without enumerating.
  const auto again = run_search(s, a);
  CHECK(again.stats.units_run == 0);
  CHECK(as_set(again.candidates) == as_set(last.candidates));
}

TEST_CASE("checkpoint errors") {
  const auto cp = scratch("bad.ckpt");
  {
    std::ofstream os(cp);
    os << "not a checkpoint";
  }
  CHECK_THROWS_AS(checkpoint_load(cp), std::runtime_error);
  {
    std::ofstream os(cp);
    os << "{\"g2scan_checkpoint\":99}";
  }
  CHECK_THROWS_AS(checkpoint_load(cp), std::runtime_error);
  CHECK_THROWS_AS(checkpoint_load(scratch("missing.ckpt")), std::runtime_error);

  // A checkpoint of another search is refused.
  const auto other = scratch("other.ckpt");
  fs::remove(other);
  SearchOptions o;
  o.checkpoint = other;
  o.target_units = 16;
  run_search(parse_shape("S1:1", 1000), o);
  CHECK_THROWS_AS(run_search(parse_shape("S1:1", 2000), o), std::runtime_error);

  Checkpoint c;
  c.fingerprint = "x";
  c.done = {true, false};
  c.results.resize(2);
  c.results[0].push_back(Candidate{parse_model("[[1,0,0,0,0,0,1],[0,0,0,0]]"), 5});
  checkpoint_save(cp, c);
  const auto back = checkpoint_load(cp);
  CHECK(back.fingerprint == "x");
  CHECK(back.done == c.done);
  REQUIRE(back.results.size() == 2);
  REQUIRE(back.results[0].size() == 1);
  CHECK(back.results[0][0].disc == 5);
}
