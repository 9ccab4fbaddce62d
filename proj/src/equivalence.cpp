#include "flipproc/equivalence.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "flipproc/error.hpp"

namespace flipproc {

using graph::ClassTable;
using graph::full_mask;
using graph::GraphCode;
using graph::num_pairs;
using graph::pair_index;
using graph::PermutationTable;
using graph::RootedPairGraph;

bool CoeffVector::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](const CoeffEntry& e) { return e.coeff.is_zero(); });
}

Rational CoeffVector::at(const RootedPairGraph& g, const Limits& limits) const {
  if (g.order() != order) throw InputError("rooted graph order does not match coefficient vector");
  const graph::OrbitClass cls = graph::canonical_class(g, limits);
  auto it = std::lower_bound(entries.begin(), entries.end(), cls,
                             [](const CoeffEntry& e, const graph::OrbitClass& c) { return e.cls < c; });
  if (it == entries.end() || !(it->cls == cls)) throw InternalError("class missing from coefficient vector");
  return it->coeff;
}

CoeffVector coeff_vector(const Rule& rule, const Limits& limits) {
  const int k = rule.order();
  CoeffVector out;
  out.order = k;
  if (k < 2) return out;
  const auto table = ClassTable::get(k, limits);
  std::vector<Rational> sums(table->size());
  const int pairs = num_pairs(k);
  std::vector<Rational> edge_mass(static_cast<std::size_t>(pairs));
  const Rule base = rule.normalized();
  for (const auto& [from, row] : base.explicit_rows()) {
    std::fill(edge_mass.begin(), edge_mass.end(), Rational(0));
    for (const auto& [to, p] : row) {
      for (std::uint64_t rest = to; rest != 0; rest &= rest - 1) {
        edge_mass[static_cast<std::size_t>(std::countr_zero(rest))] += p;
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        const int pr = pair_index(a, b);
        Rational z = edge_mass[static_cast<std::size_t>(pr)];
        if ((from >> pr) & 1U) z -= Rational(1);
        if (!z.is_zero()) sums[table->class_index(from, a, b)] += z;
      }
    }
  }
  out.entries.reserve(table->size());
  for (std::size_t i = 0; i < table->size(); ++i) {
    out.entries.push_back(CoeffEntry{table->classes()[i], std::move(sums[i])});
  }
  return out;
}

Rule lift(const Rule& rule, int to, const Limits& limits) {
  const int k1 = rule.order();
  if (to < k1) throw InputError("cannot lift a rule of order " + std::to_string(k1) + " to order " + std::to_string(to));
  if (to == k1) return rule;
  limits.require_order(to, "lift");
  Rule out(to);
  const std::uint64_t low_mask = full_mask(k1);
  const int low_pairs = num_pairs(k1);
  const std::uint64_t high_count = std::uint64_t{1} << (num_pairs(to) - low_pairs);
  const Rule base = rule.normalized();
  for (const auto& [from, row] : base.explicit_rows()) {
    for (std::uint64_t high = 0; high < high_count; ++high) {
      const std::uint64_t outside = high << low_pairs;
      Rule::Row lifted;
      for (const auto& [image, p] : row) lifted.emplace(outside | (image & low_mask), p);
      out.set_row(outside | from, std::move(lifted));
    }
  }
  return out;
}

Rule symmetrize(const Rule& rule, const Limits& limits) {
  const int k = rule.order();
  if (k == 1) return rule;
  limits.require_order(k, "symmetrize");
  const PermutationTable& perms = PermutationTable::get(k);
  const Rule base = rule.normalized();

  std::set<std::uint64_t> closure;
  for (const auto& [from, row] : base.explicit_rows()) {
    for (std::size_t s = 0; s < perms.size(); ++s) closure.insert(perms.apply(s, from));
  }
  const Rational share(1, static_cast<long>(perms.size()));
  std::map<std::uint64_t, Rule::Row> rows;
  for (std::uint64_t from : closure) {
    for (const auto& [to, p] : base.row(from)) {
      const Rational mass = p * share;
      for (std::size_t s = 0; s < perms.size(); ++s) {
        rows[perms.apply(s, from)][perms.apply(s, to)] += mass;
      }
    }
  }
  Rule out(k);
  for (auto& [from, row] : rows) out.set_row(from, std::move(row));
  return out.normalized();
}

int pair_orbit_size(const GraphCode& drawn, int u, int v) {
  const PermutationTable& perms = PermutationTable::get(drawn.order);
  const int pr = pair_index(u, v);
  std::set<int> orbit;
  for (std::size_t s = 0; s < perms.size(); ++s) {
    if (perms.apply(s, drawn.bits) == drawn.bits) orbit.insert(perms.pair_image(s, pr));
  }
  return static_cast<int>(orbit.size());
}

std::map<int, Rational> orbit_edge_histogram(const Rule& rule, std::uint64_t drawn, int u, int v) {
  if (!is_symmetric(rule)) throw ContractError("orbit edge histogram needs a symmetric rule");
  const int k = rule.order();
  const GraphCode f = GraphCode::make(k, drawn);
  if (u == v || u < 0 || v < 0 || u >= k || v >= k) throw InputError("invalid vertex pair");
  const PermutationTable& perms = PermutationTable::get(k);
  const int pr = pair_index(u, v);
  std::uint64_t orbit_mask = 0;
  for (std::size_t s = 0; s < perms.size(); ++s) {
    if (perms.apply(s, f.bits) == f.bits) orbit_mask |= std::uint64_t{1} << perms.pair_image(s, pr);
  }
  std::map<int, Rational> hist;
  for (const auto& [to, p] : rule.row(drawn)) hist[std::popcount(to & orbit_mask)] += p;
  return hist;
}

Rational coefficient_from_histogram(const Rule& rule, std::uint64_t drawn, int a, int b, const Limits& limits) {
  const int k = rule.order();
  const GraphCode f = GraphCode::make(k, drawn);
  const auto hist = orbit_edge_histogram(rule, drawn, a, b);
  Rational expected_level;
  for (const auto& [level, p] : hist) expected_level += Rational(level) * p;
  const Rational orbit(pair_orbit_size(f, a, b));
  Rational z = expected_level / orbit;
  if (f.has_edge(a, b)) z -= Rational(1);
  const auto cls = graph::canonical_class(RootedPairGraph::make(f, a, b), limits);
  return Rational(static_cast<long>(cls.size)) * z;
}

bool check_k1(const Rule& r1, const Rule& r2) {
  if (r1.order() != r2.order()) throw InputError("conjecture check needs rules of equal order");
  const int k = r1.order();
  const Rule a = r1.normalized();
  const Rule b = r2.normalized();
  std::set<std::uint64_t> rows;
  for (const auto& [from, row] : a.explicit_rows()) rows.insert(from);
  for (const auto& [from, row] : b.explicit_rows()) rows.insert(from);

  const PermutationTable& perms = PermutationTable::get(k);
  auto canonical_pair = [&](std::uint64_t f, std::uint64_t h) {
    std::pair<std::uint64_t, std::uint64_t> best{f, h};
    for (std::size_t s = 0; s < perms.size(); ++s) best = std::min(best, {perms.apply(s, f), perms.apply(s, h)});
    return best;
  };
  // Rows outside `rows` are identity in both rules and cancel.
  std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> diff;
  for (std::uint64_t from : rows) {
    for (const auto& [to, p] : a.row(from)) diff[canonical_pair(from, to)] += p;
    for (const auto& [to, p] : b.row(from)) diff[canonical_pair(from, to)] -= p;
  }
  return std::all_of(diff.begin(), diff.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

namespace {

std::pair<Rule, Rule> to_common_order(const Rule& r1, const Rule& r2, const Limits& limits) {
  const int k = std::max(r1.order(), r2.order());
  return {lift(r1, k, limits), lift(r2, k, limits)};
}

}  // namespace

EquivalenceVerdict compare(const Rule& r1, const Rule& r2, const Limits& limits) {
  auto [a, b] = to_common_order(r1, r2, limits);
  EquivalenceVerdict v;
  v.order = a.order();
  v.left = coeff_vector(a, limits);
  v.right = coeff_vector(b, limits);
  for (std::size_t i = 0; i < v.left.entries.size(); ++i) {
    if (v.left.entries[i].coeff != v.right.entries[i].coeff) {
      v.first_difference = v.left.entries[i].cls;
      break;
    }
  }
  v.equivalent = !v.first_difference.has_value();
  return v;
}

std::optional<Rational> dilation_factor(const Rule& r1, const Rule& r2, const Limits& limits) {
  auto [a, b] = to_common_order(r1, r2, limits);
  const CoeffVector va = coeff_vector(a, limits);
  const CoeffVector vb = coeff_vector(b, limits);
  if (va.is_zero() && vb.is_zero()) return Rational(1);
  std::optional<Rational> factor;
  for (std::size_t i = 0; i < va.entries.size(); ++i) {
    const Rational& x = va.entries[i].coeff;
    const Rational& y = vb.entries[i].coeff;
    if (y.is_zero()) {
      if (!x.is_zero()) return std::nullopt;
      continue;
    }
    const Rational ratio = x / y;
    if (!factor) {
      if (ratio.sign() <= 0) return std::nullopt;
      factor = ratio;
    } else if (*factor != ratio) {
      return std::nullopt;
    }
  }
  return factor;
}

}  // namespace flipproc
