#pragma once

#include <optional>
#include <string>

#include "flipproc/orbit_classes.hpp"
#include "flipproc/rule.hpp"

namespace flipproc {

enum class UniquenessReason { Order2, SymmetricDeterministic, Witness };

std::string to_string(UniquenessReason reason);

struct UniquenessVerdict {
  bool unique = false;
  UniquenessReason reason = UniquenessReason::Witness;
  /// A different rule with the same coefficient vector; present iff !unique.
  std::optional<Rule> witness;
  /// Construction that produced the witness: "symmetrize", "D1".."D4" or
  /// "exchange". Empty when unique.
  std::string construction;
};

/// Decides whether any other rule of the same order shares the trajectories of
/// `rule`, and builds a verified witness when one does.
///
/// Unique exactly for orders 1 and 2 and for symmetric deterministic rules. A
/// non-symmetric rule is witnessed by its symmetrization. A symmetric
/// non-deterministic rule is perturbed by the first applicable case D1..D4,
/// tried in that order, with ε at its largest admissible value. If none of
/// them applies, two support graphs of one row whose orbit profiles differ on
/// at least two orbits swap their contents on one orbit ("exchange"), which
/// keeps every expected profile. Throws InternalError if the chosen witness
/// fails verification.
UniquenessVerdict classify_unique(const Rule& rule, const Limits& limits = {});

}  // namespace flipproc
