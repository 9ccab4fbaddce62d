#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flipproc/orbit_classes.hpp"
#include "flipproc/rule.hpp"

namespace flipproc::rules {

Rule identity(int k);

/// Order 3: K3 -> empty graph.
Rule triangle_removal();

/// Order 3: K3 -> K3 minus one uniformly random edge.
Rule triangle_edge_removal();

/// F -> complement of F.
Rule complementing(int k, const Limits& limits = {});

/// F -> K_k if e(F) >= threshold, else the empty graph. The default threshold
/// is C(k,2)/2.
Rule extremist(int k, std::optional<Rational> threshold = std::nullopt, const Limits& limits = {});

/// K_k -> empty graph, all other rows identity.
Rule clique_removal(int k);

/// Every connected component of F becomes a clique. This is a convention:
/// the family is named but not defined in the source material this library
/// follows.
Rule component_completion(int k, const Limits& limits = {});

/// Every row equals `distribution` (replacement code -> probability).
/// Throws InputError unless the distribution sums to 1.
Rule ignorant(int k, const Rule::Row& distribution, const Limits& limits = {});

struct NamedParams {
  std::optional<Rational> threshold;
  Rule::Row distribution;
};

/// Family names accepted by make_named.
const std::vector<std::string>& family_names();

/// Dispatches on a family name. Throws InputError for an unknown family or an
/// order the family does not support.
Rule make_named(std::string_view family, int k, const NamedParams& params = {}, const Limits& limits = {});

}  // namespace flipproc::rules
