// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <charconv>
#include <stdexcept>

#include "g2scan/search.hpp"

namespace g2scan {

namespace {

mpq_class parse_decimal(std::string_view t) {
  if (t.empty()) throw std::invalid_argument("shape: empty number");
  std::string digits;
  int frac = -1;
  for (char ch : t) {
    if (ch == '.') {
      if (frac >= 0) throw std::invalid_argument("shape: bad decimal '" + std::string(t) + "'");
      frac = 0;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (frac >= 0) ++frac;
    } else {
      throw std::invalid_argument("shape: bad decimal '" + std::string(t) + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("shape: bad decimal '" + std::string(t) + "'");
  mpz_class num(digits, 10), den = 1;
  for (int i = 0; i < std::max(frac, 0); ++i) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::int64_t parse_int(std::string_view t) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw std::invalid_argument("shape: bad integer '" + std::string(t) + "'");
  return v;
}

std::int64_t floor_of(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  if (!f.fits_slong_p()) throw std::invalid_argument("shape: bound too large");
  return f.get_si();
}

std::string decimal_string(const mpq_class& q) {
  // Exact decimals only (denominators 2^a 5^b).
  mpz_class den = q.get_den();
  int places = 0;
  mpz_class scale = 1;
  while (mpz_class(scale % den) != 0) {
    scale *= 10;
    ++places;
    if (places > 40) return q.get_str();
  }
  mpz_class v = q.get_num() * (scale / den);
  std::string s = v.get_str();
  if (places == 0) return s;
  while (int(s.size()) <= places) s.insert(s.begin(), '0');
  s.insert(s.end() - places, '.');
  return s;
}

std::int64_t ipow(std::int64_t b, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, b, &r)) throw std::invalid_argument("shape: S4 bound overflows");
  }
  return r;
}

}  // namespace

void ShapeSpec::validate() const {
  if (disc_bound > kMaxDiscBound) throw std::invalid_argument("shape: disc bound exceeds 2^62");
  switch (kind) {
    case ShapeKind::S1:
      if (flat_bound < 0) throw std::invalid_argument("shape: S1 needs B >= 0");
      if (flat_bound > (std::int64_t(1) << 40)) throw std::invalid_argument("shape: S1 bound too large");
      break;
    case ShapeKind::S2:
      if (scale < 1 || growth <= 1) throw std::invalid_argument("shape: S2 needs a >= 1 and b > 1");
      break;
    case ShapeKind::S3:
      if (growth <= 1) throw std::invalid_argument("shape: S3 needs b > 1");
      break;
    case ShapeKind::S4:
      if (log_base < 2 || log_budget < 1) throw std::invalid_argument("shape: S4 needs b >= 2 and d >= 1");
      if (ipow(log_base, log_budget) > (std::int64_t(1) << 40))
        throw std::invalid_argument("shape: S4 bound too large");
      break;
  }
}

std::string ShapeSpec::to_string() const {
  switch (kind) {
    case ShapeKind::S1: return "S1:" + std::to_string(flat_bound);
    case ShapeKind::S2: return "S2:" + std::to_string(scale) + "," + decimal_string(growth);
    case ShapeKind::S3: return "S3:" + decimal_string(growth);
    case ShapeKind::S4: return "S4:" + std::to_string(log_base) + "," + std::to_string(log_budget);
  }
  return {};
}

ShapeSpec parse_shape(std::string_view text, std::uint64_t disc_bound) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos || colon != 2 || text[0] != 'S')
    throw std::invalid_argument("shape: expected S1:<B>, S2:<a>,<b>, S3:<b> or S4:<b>,<d>");
  std::string_view body = text.substr(3);
  std::vector<std::string_view> parts;
  while (true) {
    auto comma = body.find(',');
    parts.push_back(body.substr(0, comma));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  ShapeSpec s;
  s.disc_bound = disc_bound;
  auto want = [&](std::size_t n) {
    if (parts.size() != n) throw std::invalid_argument("shape: wrong number of parameters in '" + std::string(text) + "'");
  };
  switch (text[1]) {
    case '1': want(1); s.kind = ShapeKind::S1; s.flat_bound = parse_int(parts[0]); break;
    case '2': want(2); s.kind = ShapeKind::S2; s.scale = parse_int(parts[0]); s.growth = parse_decimal(parts[1]); break;
    case '3': want(1); s.kind = ShapeKind::S3; s.growth = parse_decimal(parts[0]); break;
    case '4': want(2); s.kind = ShapeKind::S4; s.log_base = parse_int(parts[0]); s.log_budget = parse_int(parts[1]); break;
    default: throw std::invalid_argument("shape: unknown variant in '" + std::string(text) + "'");
  }
  s.validate();
  return s;
}

std::array<mpz_class, 4> h_from_index(unsigned index) {
  std::array<mpz_class, 4> h;
  for (unsigned i = 0; i < 4; ++i) h[i] = (index >> i) & 1u;
  return h;
}

std::array<std::int64_t, 7> coefficient_bounds(const ShapeSpec& s) {
  s.validate();
  std::array<std::int64_t, 7> b{};
  for (int i = 0; i < 7; ++i) {
    switch (s.kind) {
      case ShapeKind::S1: b[i] = s.flat_bound; break;
      case ShapeKind::S2: {
        mpq_class v = s.scale;
        for (int k = 0; k < 6 - i; ++k) v *= s.growth;
        b[i] = floor_of(v);
        break;
      }
      case ShapeKind::S3: {
        mpq_class v = 1;
        for (int k = 0; k < 4 - std::abs(i - 3); ++k) v *= s.growth;
        b[i] = floor_of(v);
        break;
      }
      case ShapeKind::S4:
        throw std::invalid_argument("coefficient_bounds: S4 is a union of boxes");
    }
  }
  return b;
}

std::vector<BoxSpec> f_boxes(const ShapeSpec& s) {
  s.validate();
  if (s.kind != ShapeKind::S4) {
    auto b = coefficient_bounds(s);
    std::vector<Interval> r;
    for (int i = 0; i < 7; ++i) r.push_back({-b[i], b[i]});
    return {BoxSpec(std::move(r))};
  }
  // Budget k >= 1 on a coordinate covers b^(k-1) <= |f_i| <= b^k - 1 (two
  // intervals); budget 0 covers f_i = 0.  f1..f6 carry explicit budgets and
  // f0 takes the whole remaining range |f0| <= b^(d - sum) - 1.
  const std::int64_t b = s.log_base, d = s.log_budget;
  std::vector<std::int64_t> pw(d + 1);
  for (std::int64_t k = 0; k <= d; ++k) pw[k] = ipow(b, k);
  std::vector<BoxSpec> out;
  std::vector<Interval> cur(7);
  auto rec = [&](auto&& self, int coord, std::int64_t used) -> void {
    if (coord == 0) {
      cur[0] = {-(pw[d - used] - 1), pw[d - used] - 1};
      out.emplace_back(cur);
      return;
    }
    for (std::int64_t k = 0; used + k <= d; ++k) {
      if (k == 0) {
        cur[coord] = {0, 0};
        self(self, coord - 1, used);
        continue;
      }
      cur[coord] = {-(pw[k] - 1), -pw[k - 1]};
      self(self, coord - 1, used + k);
      cur[coord] = {pw[k - 1], pw[k] - 1};
      self(self, coord - 1, used + k);
    }
  };
  rec(rec, 6, 0);
  return out;
}

std::vector<ShapeBox> shape_boxes(const ShapeSpec& s) {
  auto fb = f_boxes(s);
  std::vector<ShapeBox> out;
  out.reserve(16 * fb.size());
  for (unsigned h = 0; h < 16; ++h)
    for (const auto& b : fb) out.push_back({h, b});
  return out;
}

mpz_class cardinality(const ShapeSpec& s) {
  s.validate();
  if (s.kind != ShapeKind::S4) {
    auto b = coefficient_bounds(s);
    mpz_class n = 16;
    for (int i = 0; i < 7; ++i) n *= mpz_class(2 * b[i] + 1);
    return n;
  }
  // Count of values with budget exactly k, then a knapsack over 7 coordinates.
  const std::int64_t b = s.log_base, d = s.log_budget;
  std::vector<mpz_class> per(d + 1);
  per[0] = 1;
  for (std::int64_t k = 1; k <= d; ++k) per[k] = 2 * (mpz_class(ipow(b, k)) - ipow(b, k - 1));
  std::vector<mpz_class> ways(d + 1, 0);
  ways[0] = 1;
  for (int coord = 0; coord < 7; ++coord) {
    std::vector<mpz_class> next(d + 1, 0);
    for (std::int64_t u = 0; u <= d; ++u)
      for (std::int64_t k = 0; u + k <= d; ++k) next[u + k] += ways[u] * per[k];
    ways = std::move(next);
  }
  mpz_class n = 0;
  for (const auto& w : ways) n += w;
  return 16 * n;
}

}  // namespace g2scan
