// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// selected criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "g2scan/bessel.hpp"
#include "g2scan/conductor.hpp"
#include "g2scan/finite_field.hpp"
#include "g2scan/invariants.hpp"
#include "g2scan/isomorphism.hpp"
#include "g2scan/lfunction.hpp"
#include "g2scan/poly_enum.hpp"
#include "g2scan/search.hpp"
#include "test_support.hpp"

using namespace g2scan;
using namespace g2scan::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  unsigned workers = 0;
  std::string candidates;  // reuse an S1(12) / 10^6 candidate file for criterion 5
};

WeierstrassModel curve_a() { return parse_model("[[0,-1,-1,0,0,0,0],[1,1,1,1]]"); }
WeierstrassModel curve_b() { return parse_model("[[-6,11,-19,14,-9,1,0],[1,0,0,0]]"); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "g2scan_acceptance";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string key(const Candidate& c) { return format_model(c.model) + " " + c.disc.get_str(); }

Outcome universal_discriminant(const Options&) {
  const auto& d = build_disc6();
  const auto content = universal_model_disc6().content();
  std::ostringstream os;
  os << d.term_count() << " terms, homogeneous of degree 10: " << d.poly().is_homogeneous(10)
     << ", content of disc6(4f+h^2) = " << content;
  return {d.term_count() == 246 && d.poly().is_homogeneous(10) && content == 4096, os.str()};
}

// disc6 evaluated term by term in 128-bit integers.  Exact while every
// coefficient of the sextic is at most 16 in absolute value: the sum of the
// absolute term coefficients times 16^10 stays below 2^127.
struct Disc6Terms {
  std::vector<std::pair<std::int64_t, Exponent>> terms;
  Disc6Terms() {
    __int128 total = 0;
    for (const auto& [e, c] : build_disc6().poly().terms()) {
      terms.emplace_back(c.get_si(), e);
      total += c.get_si() < 0 ? -c.get_si() : c.get_si();
    }
    if (total >= (__int128(1) << 86)) throw std::logic_error("disc6 coefficients too large for 128-bit evaluation");
  }
  __int128 operator()(const std::array<std::int64_t, 7>& a) const {
    for (auto v : a)
      if (v > 16 || v < -16) throw std::logic_error("sextic coefficient out of range");
    __int128 pw[7][11];
    for (int i = 0; i < 7; ++i) {
      pw[i][0] = 1;
      for (int k = 1; k < 11; ++k) pw[i][k] = pw[i][k - 1] * a[i];
    }
    __int128 sum = 0;
    for (const auto& [c, e] : terms) {
      __int128 t = c;
      for (int i = 0; i < 7; ++i) t *= pw[i][e[i]];
      sum += t;
    }
    return sum;
  }
};

Outcome oracle_equivalence(const Options& opt) {
  const std::uint64_t D = 1'000'000;
  std::uint64_t points = 0, mismatches = 0;
  std::set<std::string> brute;
  const ShapeSpec shape = parse_shape("S1:2", D);
  const Disc6Terms disc6;
  for (unsigned hi = 0; hi < 16; ++hi) {
    MonomialTree tree = discriminant_trees()[hi];
    WeierstrassModel m;
    m.h = h_from_index(hi);
    std::array<std::int64_t, 4> h;
    for (int k = 0; k < 4; ++k) h[k] = m.h[k].get_si();
    enumerate(tree, BoxSpec(std::vector<Interval>(7, Interval{-2, 2})),
              [&](std::span<const std::int64_t> x, std::uint64_t r) {
                std::array<std::int64_t, 7> a{};
                for (int i = 0; i < 7; ++i) a[i] = 4 * x[i];
                for (int i = 0; i < 4; ++i)
                  for (int j = 0; j < 4; ++j) a[i + j] += h[i] * h[j];
                const __int128 v = disc6(a);
                if (v % 4096 != 0) ++mismatches;
                const __int128 d = v / 4096;
                mismatches += r != std::uint64_t(d);
                ++points;
                if (d != 0 && d <= __int128(D) && d >= -__int128(D)) {
                  for (int k = 0; k < 7; ++k) m.f[k] = static_cast<long>(x[k]);
                  brute.insert(format_model(m) + " " + std::to_string(std::int64_t(d)));
                }
              });
  }
  SearchOptions so;
  so.workers = opt.workers;
  const auto res = run_search(shape, so);
  std::set<std::string> got;
  for (const auto& c : res.candidates) got.insert(key(c));
  std::ostringstream os;
  os << points << " points, " << mismatches << " residue mismatches; search " << got.size() << " candidates, scan "
     << brute.size();
  return {points == 1'250'000 && mismatches == 0 && res.complete && got == brute &&
              got.size() == res.candidates.size(),
          os.str()};
}

Outcome known_curves(const Options&) {
  const mpz_class a = discriminant(curve_a()), b = discriminant(curve_b());
  const mpz_class c = discriminant(parse_model("[[1,2,2,1,1,0,0],[1,0,1,1]]"));
  const mpz_class q = discriminant(parse_model("[[-1,5,-8,4,-1,1,0],[0,0,0,0]]"));
  std::ostringstream os;
  os << "|disc| = " << abs(a) << ", " << abs(b) << ", " << abs(c) << ", " << abs(q);
  return {abs(a) == 277 && abs(b) == 277 && abs(c) == 1665 && abs(q) == 524288, os.str()};
}

Outcome tree_size(const Options&) {
  std::ostringstream os;
  bool found = false;
  const auto& trees = discriminant_trees();
  for (unsigned h = 0; h < trees.size(); ++h) {
    const auto n = trees[h].internal_node_count();
    found = found || n == 703;
    os << (h ? " " : "nodes by h: ") << h << ":" << n;
  }
  return {found, os.str()};
}

Outcome table_one(const Options& opt) {
  std::vector<Candidate> cs;
  std::string source;
  if (!opt.candidates.empty()) {
    cs = read_candidates(opt.candidates);
    source = "candidates from " + opt.candidates;
  } else {
    SearchOptions so;
    so.workers = opt.workers;
    so.checkpoint = scratch("s1_12.ckpt");
    const auto t0 = std::chrono::steady_clock::now();
    auto res = run_search(parse_shape("S1:12", 1'000'000), so);
    if (!res.complete) return {false, "search did not complete"};
    cs = std::move(res.candidates);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    source = "search " + std::to_string(long(s)) + " s";
    fs::remove(*so.checkpoint);
  }
  DedupOptions dopt;
  dopt.threads = opt.workers;
  const auto classes = dedup(cs, dopt);
  const long bounds[4] = {1000, 10000, 100000, 1000000};
  const long expect[4] = {47, 921, 8301, 56724};
  long counts[4] = {0, 0, 0, 0}, unverified = 0;
  for (const auto& cl : classes) {
    unverified += cl.unverified_merge_candidate;
    for (int i = 0; i < 4; ++i) counts[i] += cl.key.abs_disc <= bounds[i];
  }
  bool ok = counts[0] == expect[0];
  std::ostringstream os;
  os << source << ", " << cs.size() << " candidates; classes";
  for (int i = 0; i < 4; ++i) {
    const double rel = double(counts[i] - expect[i]) / double(expect[i]);
    ok = ok && std::abs(rel) <= 0.01;
    os << " " << counts[i] << "/" << expect[i];
  }
  os << "; " << unverified << " flagged unverified";
  return {ok, os.str()};
}

Outcome conductor_example(const Options& opt) {
  const auto m = parse_model("[[3,-14,-33,10,6,0,-1],[1,1,0,1]]");
  const mpz_class d = discriminant(m);
  ConductorOptions co;
  co.threads = opt.workers;
  const auto r = resolve_two_part(m, odd_bad_data(m, d), d, co);
  int survivors = 0;
  double radius = 1, min_refuted = 1e300;
  for (const auto& v : r.verdicts) {
    if (v.consistent) {
      ++survivors;
      radius = v.enclosure.rad_d();
    } else {
      min_refuted = std::min(min_refuted, std::abs(v.enclosure.mid_d()) - v.enclosure.rad_d());
    }
  }
  const bool right = r.resolved && r.resolved->N == 3732 && r.resolved->w == 1 &&
                     r.resolved->l2 == std::vector<std::int64_t>{1, -1, 1};
  std::ostringstream os;
  os << r.verdicts.size() << " candidates, " << survivors << " consistent";
  if (r.resolved)
    os << ": N=" << r.resolved->N << " w=" << r.resolved->w << " L2=" << format_l2(r.resolved->l2);
  os << ", radius " << radius << ", min refuted |T| >= " << min_refuted;
  return {survivors == 1 && right && radius <= 5e-11 && min_refuted > 1e-7, os.str()};
}

Outcome hash_agreement(const Options&) {
  const auto ha = isogeny_hash(curve_a()), hb = isogeny_hash(curve_b());
  Rng rng(7);
  int pairs = 0, collisions = 0;
  while (pairs < 10) {
    const auto x = random_genus2_model(rng, 10), y = random_genus2_model(rng, 10);
    if (g2_invariants(igusa(igusa_clebsch(x))) == g2_invariants(igusa(igusa_clebsch(y)))) continue;
    const auto hx = isogeny_hash(x), hy = isogeny_hash(y);
    if (hx.value == hy.value) {
      ++collisions;
      std::cerr << "hash collision: " << format_model(x) << " " << format_model(y) << "\n";
    }
    ++pairs;
  }
  std::ostringstream os;
  os << "277 pair " << ha.value << " / " << hb.value << "; " << collisions << " collisions in " << pairs
     << " distinct-class pairs";
  return {ha.value == hb.value && !ha.partial && !hb.partial, os.str()};
}

mpq_class qpow(const mpq_class& b, int e) {
  mpq_class r = 1;
  const mpq_class base = e < 0 ? 1 / b : b;
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return r;
}

Outcome property_suites(const Options&) {
  std::ostringstream os;
  bool ok = true;
  auto note = [&](const char* name, int bad, int total) {
    os << (os.tellp() > 0 ? "; " : "") << name << " " << total - bad << "/" << total;
    ok = ok && bad == 0;
  };

  Rng rng(2026);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_model(rng, 6);
    const auto t = random_transform(rng);
    const mpq_class expect = qpow(t.e, 20) * qpow(mpq_class(t.det()), -30) * discriminant(m);
    bad += discriminant(transform(m, t)) != expect;
  }
  note("disc covariance", bad, 1000);

  bad = 0;
  int pairs = 0;
  while (pairs < 500) {
    const auto m = random_genus2_model(rng, 30);
    const mpz_class d = discriminant(m);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 31ULL, 97ULL, 211ULL, 499ULL}) {
      if (pairs == 500 || mod_p(d, p) == 0) continue;
      const auto f = good_lfactor(m, p);
      const std::int64_t P = std::int64_t(p);
      bad += !(f.c(3) == P * f.c(1) && f.c(4) == P * P && f.value_at(1) > 0 && f.value_at(-1) > 0);
      ++pairs;
    }
  }
  note("functional equation", bad, 500);

  bad = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = random_genus2_model(rng, 6);
    const auto F = simplify(m);
    const long u = uniform(rng, 1, 4) * (rng() & 1 ? 1 : -1);
    std::array<mpz_class, 7> G;
    mpz_class up = 1;
    for (int k = 0; k < 7; ++k, up *= u) G[k] = F[k] * up;
    const auto ic = igusa_clebsch_sextic(F), ig = igusa_clebsch_sextic(G);
    const mpz_class l = mpz_class(u) * u * u;
    const bool cov = ig.I2 == l * l * ic.I2 && ig.I4 == l * l * l * l * ic.I4 &&
                     ig.I6 == l * l * l * l * l * l * ic.I6 && ig.I10 == qpow(l, 10) * ic.I10;
    const auto t = random_transform(rng);
    const auto it = igusa_clebsch_sextic(integral_sextic(transform(m, t)));
    const bool inv = same_geometric_class(ic, it) && g2_invariants(igusa(ic)) == g2_invariants(igusa(it));
    bad += !(cov && inv);
  }
  note("invariant covariance and G2 invariance", bad, 500);

  const auto a = curve_a();
  const std::uint64_t M = 10000;
  const auto ds = expand_dirichlet(local_factors(a, M, Parity::All, {{277, bad_lfactor_ord1(a, 277).factor}}), M);
  bad = 0;
  int checked = 0;
  for (std::uint64_t x = 2; x <= M; ++x)
    for (std::uint64_t y = x + 1; x * y <= M; ++y)
      if (std::gcd(x, y) == 1) {
        bad += ds.a[x * y] != ds.a[x] * ds.a[y];
        ++checked;
      }
  note("multiplicativity", bad, checked);

  bad = 0;
  for (int i = 0; i < 100; ++i) {
    DirichletSeries s{400, Parity::Odd, std::vector<std::int64_t>(401, 0)};
    for (std::uint64_t n = 1; n <= 400; n += 2) s.a[n] = uniform(rng, -30, 30);
    const double x = double(uniform(rng, 8, 300)) / 8 + 1.0 / 64;
    const double C = i % 2 ? 10 : 5.5;
    const Ball got = s_c_odd(Ball::enclose(x, 53), s, C);
    bad += !got.contains(s_odd_reference(x, s, C).get());
  }
  note("ball soundness", bad, 100);
  return {ok, os.str()};
}

Outcome checkpoint_determinism(const Options& opt) {
  const auto s = parse_shape("S1:3", 1'000'000);
  const auto full = scratch("full.jsonl"), resumed = scratch("resumed.jsonl"), cp = scratch("s13.ckpt");
  fs::remove(cp);
  SearchOptions o;
  o.workers = opt.workers;
  o.target_units = 64;
  write_candidates(full, run_search(s, o).candidates);
  SearchOptions a = o;
  a.checkpoint = cp;
  a.stop_after_units = 25;
  const bool stopped = !run_search(s, a).complete;
  a.stop_after_units.reset();
  const auto last = run_search(s, a);
  write_candidates(resumed, last.candidates);
  const bool same = slurp(full) == slurp(resumed);
  std::ostringstream os;
  os << "interrupted after 25/" << last.stats.units_total << " units, resumed " << last.stats.units_run
     << "; files " << (same ? "identical" : "differ");
  fs::remove(cp);
  return {stopped && last.complete && same, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g2scan acceptance run"};
  Options opt;
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default: all)")->delimiter(',')->check(CLI::Range(1, 9));
  app.add_option("--workers", opt.workers, "threads for search, dedup and conductor (0: all cores)");
  app.add_option("--candidates", opt.candidates, "reuse an S1:12 / 10^6 candidate file for criterion 5")
      ->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome(const Options&)>>> criteria{
      {"universal discriminant", universal_discriminant},
      {"oracle equivalence on S1(2)", oracle_equivalence},
      {"known discriminants", known_curves},
      {"monomial tree size", tree_size},
      {"Table 1 class counts on S1(12)", table_one},
      {"conductor worked example", conductor_example},
      {"isogeny hash agreement", hash_agreement},
      {"property suites", property_suites},
      {"checkpoint determinism", checkpoint_determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = int(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second(opt);
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s (%.1f s): %s\n", r.pass ? "PASS" : "FAIL", n, criteria[i].first, s, r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
