#pragma once

#include <map>
#include <optional>
#include <vector>

#include "flipproc/orbit_classes.hpp"
#include "flipproc/rational.hpp"
#include "flipproc/rule.hpp"

namespace flipproc {

/// One coordinate of a coefficient vector.
struct CoeffEntry {
  graph::OrbitClass cls;
  Rational coeff;

  friend bool operator==(const CoeffEntry&, const CoeffEntry&) = default;
};

/// a_{J,R} for every class J of order k, sorted by canonical class.
///
/// Each coefficient is the orbit sum of the expected change of the root-pair
/// indicator, so |coeff| <= size. Two rules of equal order have the same
/// trajectories exactly when their vectors are equal.
struct CoeffVector {
  int order = 1;
  std::vector<CoeffEntry> entries;

  bool is_zero() const;
  /// Coefficient of the class containing g.
  Rational at(const graph::RootedPairGraph& g, const Limits& limits = {}) const;

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;
};

CoeffVector coeff_vector(const Rule& rule, const Limits& limits = {});

struct EquivalenceVerdict {
  bool equivalent = false;
  /// Common order after lifting.
  int order = 1;
  CoeffVector left;
  CoeffVector right;
  /// First class, in canonical order, where the vectors differ.
  std::optional<graph::OrbitClass> first_difference;
};

/// Decides trajectory equivalence by coefficient equality; the lower-order
/// rule is lifted first.
EquivalenceVerdict compare(const Rule& r1, const Rule& r2, const Limits& limits = {});

/// Order-`to` rule that applies `rule` to the subgraph induced on the first
/// rule.order() vertices and leaves every other pair unchanged.
Rule lift(const Rule& rule, int to, const Limits& limits = {});

/// Average of the rule over simultaneous relabelings of F and H.
Rule symmetrize(const Rule& rule, const Limits& limits = {});

/// For a symmetric rule, drawn graph F and pair {u, v}: the probability that
/// the replacement graph has exactly ℓ edges in the orbit of {u, v} under the
/// automorphism group of F, keyed by ℓ. Levels with zero mass are omitted.
/// Throws ContractError for a non-symmetric rule.
std::map<int, Rational> orbit_edge_histogram(const Rule& rule, std::uint64_t drawn, int u, int v);

/// Size of the orbit of pair {u, v} under the automorphism group of F.
int pair_orbit_size(const graph::GraphCode& drawn, int u, int v);

/// Coefficient of the class of (F, a, b) recomputed from the orbit edge
/// histogram. Agrees with coeff_vector for symmetric rules.
Rational coefficient_from_histogram(const Rule& rule, std::uint64_t drawn, int a, int b,
                                    const Limits& limits = {});

/// Conjectural flip-distribution test: sums of R over every S_k-orbit of
/// (F, H) pairs coincide. Not a theorem; callers must label it as such.
/// Throws InputError on an order mismatch.
bool check_k1(const Rule& r1, const Rule& r2);

/// C > 0 with a(r1) = C·a(r2), or none. Two zero vectors give 1.
std::optional<Rational> dilation_factor(const Rule& r1, const Rule& r2, const Limits& limits = {});

}  // namespace flipproc
