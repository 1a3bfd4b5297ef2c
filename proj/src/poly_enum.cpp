// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/poly_enum.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace g2scan {

namespace {

std::uint64_t mpz_residue64(const mpz_class& v) {
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), 64);
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, r.get_mpz_t());
  return out;
}

}  // namespace

BoxSpec::BoxSpec(std::vector<Interval> r) : ranges(std::move(r)) {
  for (const auto& iv : ranges)
    if (iv.lo > iv.hi) throw std::invalid_argument("BoxSpec: empty interval");
}

std::uint64_t BoxSpec::point_count() const {
  unsigned __int128 n = 1;
  for (const auto& iv : ranges) {
    n *= iv.size();
    if (n > UINT64_MAX) return UINT64_MAX;
  }
  return std::uint64_t(n);
}

std::uint64_t residue_of(std::int64_t v) { return static_cast<std::uint64_t>(v); }

std::uint64_t eval_univariate(std::span<const std::uint64_t> coeffs, std::int64_t t) {
  const std::uint64_t x = residue_of(t);
  std::uint64_t acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

DiffRegisters diff_init(std::span<const std::uint64_t> coeffs, std::int64_t start) {
  const std::size_t d = coeffs.empty() ? 0 : coeffs.size() - 1;
  std::vector<std::uint64_t> v(d + 1);
  for (std::size_t i = 0; i <= d; ++i) v[i] = eval_univariate(coeffs, start + std::int64_t(i));
  // Forward differences in place: v[k] becomes Delta^k g(start).
  for (std::size_t k = 1; k <= d; ++k)
    for (std::size_t i = d; i >= k; --i) v[i] -= v[i - 1];
  return DiffRegisters(std::move(v));
}

MonomialTree::MonomialTree(const MPoly& poly, std::span<const std::size_t> var_order)
    : nvars_(poly.nvars()), order_(var_order.begin(), var_order.end()) {
  if (poly.is_zero()) throw std::invalid_argument("MonomialTree: zero polynomial");
  if (order_.size() != nvars_) throw std::invalid_argument("MonomialTree: bad variable order");
  {
    std::vector<std::size_t> sorted = order_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < nvars_; ++i)
      if (sorted[i] != i) throw std::invalid_argument("MonomialTree: order is not a permutation");
  }

  using Prefix = std::vector<std::uint8_t>;
  std::vector<std::map<Prefix, std::uint64_t>> prefixes(nvars_ + 1);
  for (const auto& [e, c] : poly.terms()) {
    Prefix full(nvars_);
    for (std::size_t m = 0; m < nvars_; ++m) full[m] = e[order_[m]];
    for (std::size_t m = 0; m < nvars_; ++m) prefixes[m].try_emplace(Prefix(full.begin(), full.begin() + m), 0);
    prefixes[nvars_][full] = mpz_residue64(c);
  }

  levels_.resize(nvars_ + 1);
  std::vector<std::map<Prefix, std::uint32_t>> index(nvars_ + 1);
  for (std::size_t m = 0; m <= nvars_; ++m) {
    Level& L = levels_[m];
    for (const auto& [pre, coeff] : prefixes[m]) {
      index[m].emplace(pre, std::uint32_t(L.exps.size()));
      L.exps.push_back(m == 0 ? 0 : pre[m - 1]);
      L.regs.push_back(m == nvars_ ? coeff : 0);
      L.max_exp = std::max(L.max_exp, int(L.exps.back()));
      if (m > 0) L.parents.push_back(index[m - 1].at(Prefix(pre.begin(), pre.end() - 1)));
    }
  }
  int dmax = 0;
  for (const auto& L : levels_) dmax = std::max(dmax, L.max_exp);
  powers_.resize(dmax + 1);
}

std::size_t MonomialTree::node_count() const {
  std::size_t n = 0;
  for (std::size_t m = 1; m <= nvars_; ++m) n += levels_[m].exps.size();
  return n;
}

std::size_t MonomialTree::internal_node_count() const {
  std::size_t n = 0;
  for (std::size_t m = 0; m < nvars_; ++m) n += levels_[m].exps.size();
  return n;
}

std::size_t MonomialTree::storage_bytes() const {
  std::size_t bytes = 0;
  for (const auto& L : levels_)
    bytes += L.exps.size() * sizeof(std::uint8_t) + L.parents.size() * sizeof(std::uint32_t) +
             L.regs.size() * sizeof(std::uint64_t);
  return bytes;
}

void MonomialTree::instantiate_level(std::size_t m, std::uint64_t value) {
  if (m == 0 || m > nvars_) throw std::out_of_range("instantiate_level");
  const Level& src = levels_[m];
  Level& dst = levels_[m - 1];
  powers_[0] = 1;
  for (int k = 1; k <= src.max_exp; ++k) powers_[k] = powers_[k - 1] * value;
  std::fill(dst.regs.begin(), dst.regs.end(), 0);
  const std::size_t n = src.regs.size();
  for (std::size_t i = 0; i < n; ++i) dst.regs[src.parents[i]] += src.regs[i] * powers_[src.exps[i]];
}

void MonomialTree::univariate_coefficients(std::vector<std::uint64_t>& out) const {
  const Level& L = levels_[1];
  out.assign(L.max_exp + 1, 0);
  for (std::size_t i = 0; i < L.regs.size(); ++i) out[L.exps[i]] = L.regs[i];
}

MonomialTree build_tree(const MPoly& poly, std::span<const std::size_t> var_order) {
  return MonomialTree(poly, var_order);
}

}  // namespace g2scan
