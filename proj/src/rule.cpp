#include "flipproc/rule.hpp"

#include <bit>

#include "flipproc/error.hpp"

namespace flipproc {

using graph::GraphCode;

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

Rule::Rule(int order) : order_(order) {
  if (order < 1 || order > graph::kMaxCodeOrder) {
    throw InputError("rule order " + std::to_string(order) + " outside [1, " +
                     std::to_string(graph::kMaxCodeOrder) + "]");
  }
}

void Rule::check_code(std::uint64_t code) const {
  if ((code & ~graph::full_mask(order_)) != 0) {
    throw InputError("graph code " + std::to_string(code) + " out of range for order " +
                     std::to_string(order_));
  }
}

void Rule::set(std::uint64_t from, std::uint64_t to, const Rational& p) {
  check_code(from);
  check_code(to);
  rows_[from][to] = p;
}

void Rule::adjust(std::uint64_t from, std::uint64_t to, const Rational& delta) {
  check_code(from);
  check_code(to);
  auto [it, inserted] = rows_.try_emplace(from);
  if (inserted) it->second[from] = Rational(1);
  it->second[to] += delta;
}

void Rule::set_row(std::uint64_t from, Row row) {
  check_code(from);
  for (const auto& [to, p] : row) check_code(to);
  rows_[from] = std::move(row);
}

Rule::Row Rule::row(std::uint64_t from) const {
  check_code(from);
  auto it = rows_.find(from);
  if (it == rows_.end()) return Row{{from, Rational(1)}};
  Row out;
  for (const auto& [to, p] : it->second) {
    if (!p.is_zero()) out.emplace(to, p);
  }
  return out;
}

Rational Rule::probability(std::uint64_t from, std::uint64_t to) const {
  check_code(from);
  check_code(to);
  auto it = rows_.find(from);
  if (it == rows_.end()) return Rational(from == to ? 1 : 0);
  auto jt = it->second.find(to);
  return jt == it->second.end() ? Rational(0) : jt->second;
}

Rule Rule::normalized() const {
  Rule out(order_);
  for (const auto& [from, r] : rows_) {
    Row cleaned;
    for (const auto& [to, p] : r) {
      if (!p.is_zero()) cleaned.emplace(to, p);
    }
    const bool identity_row = cleaned.size() == 1 && cleaned.begin()->first == from &&
                              cleaned.begin()->second == Rational(1);
    if (!identity_row) out.rows_.emplace(from, std::move(cleaned));
  }
  return out;
}

ValidationReport Rule::validate() const {
  ValidationReport report;
  for (const auto& [from, r] : rows_) {
    Rational sum;
    for (const auto& [to, p] : r) {
      if (p.sign() < 0 || p > Rational(1)) {
        report.problems.push_back("row " + std::to_string(from) + ": probability " + p.to_string() +
                                  " for " + std::to_string(to) + " outside [0,1]");
      }
      sum += p;
    }
    if (sum != Rational(1)) {
      report.problems.push_back("row " + std::to_string(from) + ": row sum " + sum.to_string());
    }
  }
  return report;
}

const Rule& Rule::require_valid() const {
  const ValidationReport report = validate();
  if (!report.ok()) throw InputError("invalid rule: " + report.summary());
  return *this;
}

Rule Rule::permuted(const graph::Permutation& sigma) const {
  if (sigma.size() != order_) throw InputError("permutation size does not match rule order");
  Rule out(order_);
  for (const auto& [from, r] : rows_) {
    Row image;
    for (const auto& [to, p] : r) {
      image.emplace(graph::apply_perm(sigma, GraphCode{order_, to}).bits, p);
    }
    out.rows_.emplace(graph::apply_perm(sigma, GraphCode{order_, from}).bits, std::move(image));
  }
  return out;
}

bool operator==(const Rule& a, const Rule& b) {
  if (a.order_ != b.order_) return false;
  return a.normalized().rows_ == b.normalized().rows_;
}

bool is_symmetric(const Rule& rule) {
  const int k = rule.order();
  if (k == 1) return true;
  const Rule base = rule.normalized();
  const auto& perms = graph::PermutationTable::get(k);
  for (std::size_t g : perms.generators()) {
    if (!(base.permuted(perms.perm(g)) == base)) return false;
  }
  return true;
}

bool is_deterministic(const Rule& rule) {
  const Rule base = rule.normalized();
  for (const auto& [from, r] : base.explicit_rows()) {
    if (r.size() != 1 || r.begin()->second != Rational(1)) return false;
  }
  return true;
}

std::optional<Rational> ignorant_edge_count(const Rule& rule) {
  const int k = rule.order();
  const Rule base = rule.normalized();
  const std::uint64_t total_rows = std::uint64_t{1} << graph::num_pairs(k);
  const std::uint64_t explicit_count = base.explicit_rows().size();
  // Two implicit identity rows F -> F and G -> G always differ.
  if (total_rows - explicit_count >= 2) return std::nullopt;
  const Rule::Row first = base.row(0);
  for (std::uint64_t code = 1; code < total_rows; ++code) {
    if (base.row(code) != first) return std::nullopt;
  }
  Rational expected;
  for (const auto& [to, p] : first) expected += p * Rational(std::popcount(to));
  return expected;
}

}  // namespace flipproc
