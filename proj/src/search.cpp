// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/search.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace g2scan {

namespace {

constexpr std::size_t kVarOrder[7] = {0, 1, 2, 3, 4, 5, 6};

// Splits [lo, hi] into k nearly equal consecutive pieces.
std::vector<Interval> split_interval(const Interval& iv, std::uint64_t k) {
  const std::uint64_t n = iv.size();
  k = std::max<std::uint64_t>(1, std::min(k, n));
  std::vector<Interval> out;
  std::int64_t lo = iv.lo;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t len = n / k + (i < n % k ? 1 : 0);
    out.push_back({lo, lo + std::int64_t(len) - 1});
    lo += std::int64_t(len);
  }
  return out;
}

struct Scanner {
  MonomialTree& tree;
  const BoxSpec& box;
  std::uint64_t D;
  const std::array<mpz_class, 4>& h;
  std::vector<Candidate>& out;
  std::uint64_t hits = 0;
  std::int64_t point[7] = {};
  std::vector<std::uint64_t> coeffs;
  std::uint64_t flagged_at_[64];

  void recheck(std::int64_t f0) {
    ++hits;
    point[0] = f0;
    WeierstrassModel m;
    for (int i = 0; i < 7; ++i) m.f[i] = static_cast<long>(point[i]);
    m.h = h;
    mpz_class disc = discriminant(m);
    if (disc != 0 && abs(disc) <= mpz_class(static_cast<unsigned long>(D))) out.push_back({std::move(m), std::move(disc)});
  }

  // Finite-difference registers of the current f0-line at its first point.
  template <int Deg>
  void line_start(const Interval& r, std::uint64_t* v) {
    for (int i = 0; i <= Deg; ++i) v[i] = eval_univariate(coeffs, r.lo + i);
    for (int k = 1; k <= Deg; ++k)
      for (int i = Deg; i >= k; --i) v[i] -= v[i - 1];
  }

  // Degree-5 line kernel; flagged offsets are rechecked in batches so the
  // hot loop stays in registers.
  void line5(const Interval& r, const std::uint64_t* init) {
    std::uint64_t v0 = init[0], v1 = init[1], v2 = init[2], v3 = init[3], v4 = init[4];
    const std::uint64_t v5 = init[5];
    const std::uint64_t twoD = 2 * D;
    const std::uint64_t n = r.size();
    std::uint64_t flagged = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      if ((v0 + D <= twoD) & (v0 != 0)) [[unlikely]] flagged_at_[flagged++ & 63] = i;
      v0 += v1;
      v1 += v2;
      v2 += v3;
      v3 += v4;
      v4 += v5;
      if (flagged == 64) [[unlikely]] {
        for (std::uint64_t j = 0; j < 64; ++j) recheck(r.lo + std::int64_t(flagged_at_[j]));
        flagged = 0;
      }
    }
    for (std::uint64_t j = 0; j < flagged; ++j) recheck(r.lo + std::int64_t(flagged_at_[j]));
  }

  void generic_line(const Interval& r) {
    DiffRegisters regs = diff_init(coeffs, r.lo);
    for (std::int64_t t = r.lo;; ++t) {
      const std::uint64_t v = regs.step();
      if (residue_in_window(v, D) && v != 0) recheck(t);
      if (t == r.hi) break;
    }
  }

  // f1 and f0 free.  The start registers of the f0-line are polynomial in f1
  // of degree E, so they are themselves advanced by finite differences: E
  // vector additions per line instead of re-instantiating level 2.
  void plane() {
    constexpr int Deg = 5;
    const Interval r1 = box.ranges[1], r0 = box.ranges[0];
    const int E = tree.degree_at_level(2);
    std::vector<std::array<std::uint64_t, Deg + 1>> W(E + 1);
    for (int i = 0; i <= E; ++i) {
      tree.instantiate_level(2, residue_of(r1.lo + i));
      tree.univariate_coefficients(coeffs);
      line_start<Deg>(r0, W[i].data());
    }
    for (int k = 1; k <= E; ++k)
      for (int i = E; i >= k; --i)
        for (int c = 0; c <= Deg; ++c) W[i][c] -= W[i - 1][c];
    for (std::int64_t a = r1.lo;; ++a) {
      point[1] = a;
      line5(r0, W[0].data());
      for (int k = 0; k < E; ++k)
        for (int c = 0; c <= Deg; ++c) W[k][c] += W[k + 1][c];
      if (a == r1.hi) break;
    }
  }

  void level(std::size_t m) {
    if (m == 2 && tree.degree_at_level(1) == 5 &&
        box.ranges[1].size() > std::uint64_t(tree.degree_at_level(2)) + 1) {
      plane();
      return;
    }
    if (m == 1) {
      tree.univariate_coefficients(coeffs);
      const Interval& r = box.ranges[0];
      if (coeffs.size() == 6) {
        std::uint64_t v[6];
        line_start<5>(r, v);
        line5(r, v);
      } else {
        generic_line(r);
      }
      return;
    }
    const std::size_t var = tree.variable_at_level(m);
    const Interval r = box.ranges[var];
    for (std::int64_t a = r.lo;; ++a) {
      tree.instantiate_level(m, residue_of(a));
      point[var] = a;
      level(m - 1);
      if (a == r.hi) break;
    }
  }
};

}  // namespace

const std::vector<MonomialTree>& discriminant_trees() {
  static const std::vector<MonomialTree> trees = [] {
    std::vector<MonomialTree> t;
    t.reserve(16);
    for (unsigned i = 0; i < 16; ++i) t.push_back(build_tree(delta_polynomial(h_from_index(i)), kVarOrder));
    return t;
  }();
  return trees;
}

std::uint64_t scan_unit(MonomialTree& tree, const std::array<mpz_class, 4>& h, const BoxSpec& box,
                        std::uint64_t D, std::vector<Candidate>& out) {
  if (box.dims() != 7 || tree.nvars() != 7) throw std::invalid_argument("scan_unit: expected 7 coefficients");
  if (D > kMaxDiscBound) throw std::invalid_argument("scan_unit: disc bound exceeds 2^62");
  for (std::size_t m = 1; m <= 7; ++m)
    if (tree.variable_at_level(m) != m - 1) throw std::invalid_argument("scan_unit: tree must have f0 innermost");
  Scanner sc{tree, box, D, h, out, 0, {}, {}, {}};
  sc.level(7);
  return sc.hits;
}

std::vector<WorkUnit> partition(const ShapeSpec& s, std::uint64_t n) {
  auto boxes = shape_boxes(s);
  std::uint64_t target = kDefaultUnitPoints;
  if (n > 0) {
    unsigned __int128 total = 0;
    for (const auto& b : boxes) total += b.box.point_count();
    target = std::uint64_t(std::max<unsigned __int128>(1, (total + n - 1) / n));
  }
  std::vector<WorkUnit> units;
  for (const auto& sb : boxes) {
    const std::uint64_t pts = sb.box.point_count();
    const std::uint64_t k = std::max<std::uint64_t>(1, (pts + target - 1) / target);
    const Interval r6 = sb.box.ranges[6], r5 = sb.box.ranges[5];
    const auto p6 = split_interval(r6, k);
    const std::uint64_t k5 = (k + p6.size() - 1) / p6.size();
    const auto p5 = split_interval(r5, k5);
    for (const auto& a : p6)
      for (const auto& b : p5) {
        WorkUnit u;
        u.id = units.size();
        u.h_index = sb.h_index;
        u.box = sb.box;
        u.box.ranges[6] = a;
        u.box.ranges[5] = b;
        units.push_back(std::move(u));
      }
  }
  return units;
}

SearchResult run_search(const ShapeSpec& s, const SearchOptions& opts) {
  s.validate();
  const auto units = partition(s, opts.target_units);
  const std::string fp = search_fingerprint(s, units);
  const std::size_t n = units.size();

  Checkpoint cp;
  cp.fingerprint = fp;
  cp.done.assign(n, false);
  cp.results.assign(n, {});
  if (opts.checkpoint && std::filesystem::exists(*opts.checkpoint)) {
    Checkpoint loaded = checkpoint_load(*opts.checkpoint);
    if (loaded.fingerprint != fp || loaded.done.size() != n)
      throw std::runtime_error("checkpoint " + opts.checkpoint->string() + " belongs to a different search");
    cp = std::move(loaded);
  }

  SearchResult res;
  res.stats.units_total = n;
  const auto& trees = discriminant_trees();

  std::mutex mu;
  std::uint64_t next = 0;       // next unit index to hand out
  std::uint64_t emitted = 0;    // units delivered to the output, in order
  std::uint64_t run_done = 0;
  std::uint64_t handed = 0;
  std::uint64_t done_total = std::count(cp.done.begin(), cp.done.end(), true);
  bool stop = false;
  auto last_save = std::chrono::steady_clock::now();
  const bool keep_results = opts.checkpoint.has_value() || !opts.sink;

  auto emit_ready = [&] {
    while (emitted < n && cp.done[emitted]) {
      for (const auto& c : cp.results[emitted]) {
        if (opts.sink) opts.sink(c);
        else res.candidates.push_back(c);
      }
      if (!keep_results) std::vector<Candidate>().swap(cp.results[emitted]);
      ++emitted;
    }
  };
  auto save = [&] {
    if (opts.checkpoint) checkpoint_save(*opts.checkpoint, cp);
    last_save = std::chrono::steady_clock::now();
  };

  {
    std::lock_guard lk(mu);
    emit_ready();
  }

  auto worker = [&] {
    std::vector<MonomialTree> local;
    local.reserve(16);
    std::vector<int> slot(16, -1);
    std::vector<Candidate> found;
    while (true) {
      std::uint64_t idx;
      {
        std::lock_guard lk(mu);
        while (next < n && cp.done[next]) ++next;
        if (stop || next >= n) return;
        if (opts.stop_after_units && handed >= *opts.stop_after_units) return;
        ++handed;
        idx = next++;
      }
      const WorkUnit& u = units[idx];
      if (slot[u.h_index] < 0) {
        slot[u.h_index] = int(local.size());
        local.push_back(trees[u.h_index]);
      }
      found.clear();
      const std::uint64_t hits = scan_unit(local[slot[u.h_index]], h_from_index(u.h_index), u.box, s.disc_bound, found);
      std::lock_guard lk(mu);
      if (stop) return;
      cp.results[idx] = std::move(found);
      found = {};
      cp.done[idx] = true;
      ++run_done;
      ++done_total;
      res.stats.units_run++;
      res.stats.points += u.box.point_count();
      res.stats.filter_hits += hits;
      res.stats.exact_hits += cp.results[idx].size();
      emit_ready();
      if (opts.progress) opts.progress(done_total, n);
      if (opts.stop_after_units && run_done >= *opts.stop_after_units) {
        stop = true;
        return;
      }
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - last_save).count();
      if (opts.checkpoint && elapsed >= opts.checkpoint_interval_seconds) save();
    }
  };

  unsigned w = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
  w = unsigned(std::min<std::uint64_t>(w, std::max<std::uint64_t>(1, n)));
  if (opts.stop_after_units && *opts.stop_after_units == 0) stop = true;
  if (!stop) {
    if (w == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < w; ++i) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }
  res.complete = done_total == n;
  if (opts.checkpoint) save();
  if (!res.complete) {
    // Output is only meaningful for a finished search.
    res.candidates.clear();
  }
  return res;
}

// ---------------------------------------------------------------------------

std::string candidate_to_json(const Candidate& c) {
  return "{\"model\":\"" + format_model(c.model) + "\",\"disc\":" + c.disc.get_str() + "}";
}

Candidate candidate_from_json(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("model") || !j.contains("disc") || !j["model"].is_string())
    throw std::invalid_argument("candidate: malformed record");
  Candidate c;
  c.model = parse_model(j["model"].get<std::string>());
  // Discriminants may exceed 64 bits in hand-written files; re-read the raw token.
  const auto& d = j["disc"];
  if (d.is_number_integer()) c.disc = mpz_class(d.dump());
  else if (d.is_string()) c.disc = mpz_class(d.get<std::string>());
  else throw std::invalid_argument("candidate: malformed disc");
  return c;
}

void write_candidates(const std::filesystem::path& path, const std::vector<Candidate>& cs) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  for (const auto& c : cs) os << candidate_to_json(c) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Candidate> read_candidates(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<Candidate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(candidate_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace g2scan
