#include "flipproc/named_rules.hpp"

#include <bit>
#include <functional>

#include "flipproc/error.hpp"

namespace flipproc::rules {

namespace {

using graph::full_mask;
using graph::num_pairs;
using graph::pair_index;

std::uint64_t row_count(int k) { return std::uint64_t{1} << num_pairs(k); }

Rule deterministic(int k, const std::function<std::uint64_t(std::uint64_t)>& image, const Limits& limits,
                   const char* name) {
  limits.require_order(k, name);
  Rule out(k);
  for (std::uint64_t from = 0; from < row_count(k); ++from) {
    const std::uint64_t to = image(from);
    if (to != from) out.set(from, to, Rational(1));
  }
  return out;
}

void require_order_three(int k, std::string_view family) {
  if (k != 3) throw InputError(std::string(family) + " is defined for order 3 only");
}

}  // namespace

Rule identity(int k) { return Rule(k); }

Rule triangle_removal() {
  Rule r(3);
  r.set(7, 0, Rational(1));
  return r;
}

Rule triangle_edge_removal() {
  Rule r(3);
  for (std::uint64_t to : {6U, 5U, 3U}) r.set(7, to, Rational(1, 3));
  return r;
}

Rule complementing(int k, const Limits& limits) {
  return deterministic(k, [k](std::uint64_t f) { return ~f & full_mask(k); }, limits, "complementing rule");
}

Rule extremist(int k, std::optional<Rational> threshold, const Limits& limits) {
  const Rational cut = threshold.value_or(Rational(num_pairs(k), 2));
  return deterministic(
      k,
      [k, &cut](std::uint64_t f) {
        return Rational(std::popcount(f)) >= cut ? full_mask(k) : std::uint64_t{0};
      },
      limits, "extremist rule");
}

Rule clique_removal(int k) {
  Rule r(k);
  if (k >= 2) r.set(full_mask(k), 0, Rational(1));
  return r;
}

Rule component_completion(int k, const Limits& limits) {
  auto complete = [k](std::uint64_t f) {
    std::vector<int> comp(static_cast<std::size_t>(k));
    for (int v = 0; v < k; ++v) comp[static_cast<std::size_t>(v)] = v;
    // Label propagation; k is tiny.
    for (bool changed = true; changed;) {
      changed = false;
      for (int j = 1; j < k; ++j) {
        for (int i = 0; i < j; ++i) {
          if (!((f >> pair_index(i, j)) & 1U)) continue;
          auto& ci = comp[static_cast<std::size_t>(i)];
          auto& cj = comp[static_cast<std::size_t>(j)];
          if (ci != cj) {
            ci = cj = std::min(ci, cj);
            changed = true;
          }
        }
      }
    }
    std::uint64_t out = 0;
    for (int j = 1; j < k; ++j) {
      for (int i = 0; i < j; ++i) {
        if (comp[static_cast<std::size_t>(i)] == comp[static_cast<std::size_t>(j)]) {
          out |= std::uint64_t{1} << pair_index(i, j);
        }
      }
    }
    return out;
  };
  return deterministic(k, complete, limits, "component completion rule");
}

Rule ignorant(int k, const Rule::Row& distribution, const Limits& limits) {
  limits.require_order(k, "ignorant rule");
  Rule out(k);
  Rule::Row cleaned;
  Rational total;
  for (const auto& [to, p] : distribution) {
    if ((to & ~full_mask(k)) != 0) throw InputError("distribution code out of range");
    if (p.sign() < 0) throw InputError("negative probability in distribution");
    total += p;
    if (!p.is_zero()) cleaned.emplace(to, p);
  }
  if (total != Rational(1)) throw InputError("distribution sums to " + total.to_string());
  for (std::uint64_t from = 0; from < row_count(k); ++from) out.set_row(from, cleaned);
  return out;
}

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "identity",      "triangle-removal", "triangle-edge-removal", "complementing",
      "extremist",     "clique-removal",   "component-completion",  "ignorant"};
  return names;
}

Rule make_named(std::string_view family, int k, const NamedParams& params, const Limits& limits) {
  if (family == "identity") return identity(k);
  if (family == "triangle-removal") {
    require_order_three(k, family);
    return triangle_removal();
  }
  if (family == "triangle-edge-removal") {
    require_order_three(k, family);
    return triangle_edge_removal();
  }
  if (family == "complementing") return complementing(k, limits);
  if (family == "extremist") return extremist(k, params.threshold, limits);
  if (family == "clique-removal") return clique_removal(k);
  if (family == "component-completion") return component_completion(k, limits);
  if (family == "ignorant") {
    if (params.distribution.empty()) throw InputError("ignorant rule needs a distribution");
    return ignorant(k, params.distribution, limits);
  }
  throw InputError("unknown rule family '" + std::string(family) + "'");
}

}  // namespace flipproc::rules
