// Copyright (c) 2026, The g2scan Authors
// SPDX-License-Identifier: Apache-2.0

#include "g2scan/mpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace g2scan {

MPoly::MPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars > kMaxVars) throw std::invalid_argument("MPoly: too many variables");
}

MPoly MPoly::constant(std::size_t nvars, const mpz_class& c) {
  MPoly p(nvars);
  p.add_term(Exponent{}, c);
  return p;
}

MPoly MPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("MPoly::variable");
  MPoly p(nvars);
  Exponent e{};
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

void MPoly::add_term(const Exponent& e, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MPoly& MPoly::operator+=(const MPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& other) {
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MPoly& MPoly::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("MPoly: ring mismatch");
  MPoly out(a.nvars_);
  mpz_class prod;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned s = unsigned(ea[i]) + eb[i];
        if (s > 255) throw std::overflow_error("MPoly: exponent overflow");
        e[i] = static_cast<std::uint8_t>(s);
      }
      mpz_mul(prod.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
      out.add_term(e, prod);
    }
  }
  return out;
}

MPoly MPoly::pow(unsigned k) const {
  MPoly result = constant(nvars_, 1);
  MPoly base = *this;
  while (k) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (std::size_t i = 0; i < nvars_; ++i) s += e[i];
    d = std::max(d, s);
  }
  return d;
}

int MPoly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e[var]));
  return d;
}

bool MPoly::is_homogeneous(int degree) const {
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (std::size_t i = 0; i < nvars_; ++i) s += e[i];
    if (s != degree) return false;
  }
  return true;
}

mpz_class MPoly::content() const {
  mpz_class g = 0;
  for (const auto& [e, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

MPoly MPoly::divide_exact(const mpz_class& d) const {
  MPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()))
      throw std::domain_error("MPoly::divide_exact: coefficient not divisible");
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    out.terms_.emplace_hint(out.terms_.end(), e, std::move(q));
  }
  return out;
}

mpz_class MPoly::evaluate(std::span<const mpz_class> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("MPoly::evaluate: arity");
  // Power tables keep evaluation at one multiplication per variable per term.
  std::vector<std::vector<mpz_class>> powers(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    int d = std::max(degree_in(i), 0);
    powers[i].resize(d + 1);
    powers[i][0] = 1;
    for (int k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  mpz_class sum = 0, term;
  for (const auto& [e, c] : terms_) {
    term = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i]) term *= powers[i][e[i]];
    sum += term;
  }
  return sum;
}

MPoly MPoly::substitute(std::span<const MPoly> values) const {
  if (values.size() != nvars_) throw std::invalid_argument("MPoly::substitute: arity");
  const std::size_t target = values.empty() ? 0 : values[0].nvars();
  std::vector<std::vector<MPoly>> powers(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    int d = std::max(degree_in(i), 0);
    powers[i].reserve(d + 1);
    powers[i].push_back(constant(target, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * values[i]);
  }
  MPoly out(target);
  for (const auto& [e, c] : terms_) {
    MPoly term = constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i]) term = term * powers[i][e[i]];
    out += term;
  }
  return out;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    bool unit = true;
    for (std::size_t i = 0; i < nvars_; ++i) unit = unit && e[i] == 0;
    if (a != 1 || unit) os << a.get_str();
    bool star = a != 1;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!e[i]) continue;
      os << (star ? "*" : "") << "x" << i;
      if (e[i] > 1) os << "^" << int(e[i]);
      star = true;
    }
  }
  return os.str();
}

}  // namespace g2scan
