// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0
//
// Enumeration of a multivariate integer polynomial over all lattice points of
// a box, modulo 2^64.
//
// The polynomial is stored as a monomial tree: level n holds its terms,
// level m < n holds the distinct monomials in the m innermost variables.  Each
// node has one register and a link to its parent (the node obtained by
// dropping its level variable).  Fixing the outermost remaining variable costs
// one multiply-add per node; once only the innermost variable is free the
// values along the line are produced by finite differences, deg additions per
// point.  All arithmetic wraps modulo 2^64.

#ifndef G2SCAN_POLY_ENUM_HPP
#define G2SCAN_POLY_ENUM_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "g2scan/mpoly.hpp"

namespace g2scan {

struct Interval {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::uint64_t size() const { return std::uint64_t(hi - lo) + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Closed integer box, one interval per polynomial variable.
struct BoxSpec {
  std::vector<Interval> ranges;

  BoxSpec() = default;
  explicit BoxSpec(std::vector<Interval> r);
  std::size_t dims() const { return ranges.size(); }
  // Number of lattice points; saturates at UINT64_MAX.
  std::uint64_t point_count() const;
  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;
};

// Successive finite differences of a univariate polynomial along t0, t0+1, ...
class DiffRegisters {
 public:
  DiffRegisters() = default;
  explicit DiffRegisters(std::vector<std::uint64_t> regs) : regs_(std::move(regs)) {}

  std::size_t degree() const { return regs_.empty() ? 0 : regs_.size() - 1; }
  std::uint64_t current() const { return regs_[0]; }
  std::uint64_t additions() const { return additions_; }
  std::span<const std::uint64_t> registers() const { return regs_; }

  // Returns g(t) and advances to t+1 using exactly degree() additions.
  std::uint64_t step() {
    const std::uint64_t out = regs_[0];
    const std::size_t d = regs_.size() - 1;
    for (std::size_t k = 0; k < d; ++k) regs_[k] += regs_[k + 1];
    additions_ += d;
    return out;
  }

 private:
  std::vector<std::uint64_t> regs_;
  std::uint64_t additions_ = 0;
};

// coeffs[k] is the coefficient of t^k (mod 2^64).
DiffRegisters diff_init(std::span<const std::uint64_t> coeffs, std::int64_t start);

// Horner evaluation mod 2^64.
std::uint64_t eval_univariate(std::span<const std::uint64_t> coeffs, std::int64_t t);

class MonomialTree {
 public:
  // var_order[m-1] is the polynomial variable attached to level m; level 1
  // (var_order[0]) is the innermost, enumerated by finite differences.
  MonomialTree(const MPoly& poly, std::span<const std::size_t> var_order);

  std::size_t nvars() const { return nvars_; }
  std::size_t variable_at_level(std::size_t level) const { return order_[level - 1]; }
  std::size_t level_size(std::size_t level) const { return levels_[level].exps.size(); }
  // Nodes on levels 1..n (leaves included).
  std::size_t node_count() const;
  // Root plus all non-leaf nodes (levels 0..n-1): the nodes whose registers
  // are written during instantiation.
  std::size_t internal_node_count() const;
  std::size_t leaf_count() const { return level_size(nvars_); }
  int degree_at_level(std::size_t level) const { return levels_[level].max_exp; }
  // Bytes of register, exponent and parent-link storage.
  std::size_t storage_bytes() const;

  // Fixes the level-m variable to value: level m-1 registers receive the
  // coefficients of the partially instantiated polynomial.  Levels above m
  // must already be instantiated.
  void instantiate_level(std::size_t m, std::uint64_t value);

  // Level 0 holds the single fully instantiated value.
  std::span<const std::uint64_t> registers(std::size_t level) const { return levels_[level].regs; }
  std::span<const std::uint8_t> exponents(std::size_t level) const { return levels_[level].exps; }

  // Dense coefficients of the level-1 univariate polynomial, length
  // degree_at_level(1) + 1.
  void univariate_coefficients(std::vector<std::uint64_t>& out) const;

 private:
  struct Level {
    std::vector<std::uint8_t> exps;
    std::vector<std::uint32_t> parents;
    std::vector<std::uint64_t> regs;
    int max_exp = 0;
  };

  std::size_t nvars_;
  std::vector<std::size_t> order_;
  std::vector<Level> levels_;  // index 0..n
  std::vector<std::uint64_t> powers_;
};

// Registers mod 2^64 of an integer (two's complement for negatives).
std::uint64_t residue_of(std::int64_t v);

MonomialTree build_tree(const MPoly& poly, std::span<const std::size_t> var_order);

// Calls sink(point, residue) once per lattice point of box, outermost
// variable slowest.  point is indexed by polynomial variable.
template <class Sink>
void enumerate(MonomialTree& tree, const BoxSpec& box, Sink&& sink);

// ---------------------------------------------------------------------------

namespace detail {

template <class Sink>
void enumerate_level(MonomialTree& tree, const BoxSpec& box, std::size_t level,
                     std::vector<std::int64_t>& point, std::vector<std::uint64_t>& coeffs,
                     Sink& sink) {
  const std::size_t var = tree.variable_at_level(level);
  const Interval r = box.ranges[var];
  if (level == 1) {
    tree.univariate_coefficients(coeffs);
    DiffRegisters regs = diff_init(coeffs, r.lo);
    for (std::int64_t t = r.lo;; ++t) {
      point[var] = t;
      sink(std::span<const std::int64_t>(point), regs.step());
      if (t == r.hi) break;
    }
    return;
  }
  for (std::int64_t a = r.lo;; ++a) {
    tree.instantiate_level(level, residue_of(a));
    point[var] = a;
    enumerate_level(tree, box, level - 1, point, coeffs, sink);
    if (a == r.hi) break;
  }
}

}  // namespace detail

template <class Sink>
void enumerate(MonomialTree& tree, const BoxSpec& box, Sink&& sink) {
  if (box.dims() != tree.nvars()) throw std::invalid_argument("enumerate: box dimension mismatch");
  if (tree.nvars() == 0) return;
  std::vector<std::int64_t> point(tree.nvars(), 0);
  std::vector<std::uint64_t> coeffs;
  detail::enumerate_level(tree, box, tree.nvars(), point, coeffs, sink);
}

}  // namespace g2scan

#endif  // G2SCAN_POLY_ENUM_HPP
