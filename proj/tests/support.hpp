#pragma once

// Independent reference implementations and random generators shared by the
// unit tests and the acceptance runner. Nothing here calls the class table,
// the velocity operator or the permutation tables of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "flipproc/equivalence.hpp"
#include "flipproc/graph_code.hpp"
#include "flipproc/rational.hpp"
#include "flipproc/rooted_graph.hpp"
#include "flipproc/rule.hpp"
#include "flipproc/step_kernel.hpp"

namespace flipproc::testing {

using Key = std::tuple<std::uint64_t, int, int>;

inline int pairs_of(int k) { return k * (k - 1) / 2; }

/// Colex pair index written out independently of the library.
inline int colex(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

inline bool edge(std::uint64_t bits, int i, int j) { return (bits >> colex(i, j)) & 1U; }

inline std::uint64_t relabel(std::uint64_t bits, const std::vector<int>& sigma) {
  std::uint64_t out = 0;
  const int k = static_cast<int>(sigma.size());
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) {
      if (edge(bits, i, j)) out |= std::uint64_t{1} << colex(sigma[i], sigma[j]);
    }
  }
  return out;
}

struct BruteClass {
  Key canon;
  std::uint64_t size = 0;
};

/// Least (bits, a, b) over all k! relabelings and the number of distinct images.
inline BruteClass brute_canonical(int k, std::uint64_t bits, int a, int b) {
  std::vector<int> sigma(static_cast<std::size_t>(k));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::set<Key> images;
  do {
    images.emplace(relabel(bits, sigma), sigma[a], sigma[b]);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return {*images.begin(), images.size()};
}

/// |J_k| by Burnside: a permutation with f fixed points fixes f(f-1) root
/// pairs and 2^(cycles on pairs) graphs.
inline std::uint64_t burnside_class_count(int k) {
  std::vector<int> sigma(static_cast<std::size_t>(k));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::uint64_t total = 0;
  std::uint64_t group = 0;
  do {
    ++group;
    int fixed = 0;
    for (int i = 0; i < k; ++i) fixed += sigma[i] == i;
    std::vector<int> pair_image(static_cast<std::size_t>(pairs_of(k)));
    for (int j = 1; j < k; ++j) {
      for (int i = 0; i < j; ++i) pair_image[colex(i, j)] = colex(sigma[i], sigma[j]);
    }
    std::vector<bool> seen(pair_image.size(), false);
    int cycles = 0;
    for (std::size_t p = 0; p < pair_image.size(); ++p) {
      if (seen[p]) continue;
      ++cycles;
      for (std::size_t q = p; !seen[q]; q = static_cast<std::size_t>(pair_image[q])) seen[q] = true;
    }
    total += static_cast<std::uint64_t>(fixed * (fixed - 1)) << cycles;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total / group;
}

/// Z_{F^{a,b},R} straight from its definition.
inline Rational naive_summand(const Rule& rule, std::uint64_t drawn, int a, int b) {
  Rational z = edge(drawn, a, b) ? Rational(-1) : Rational(0);
  for (const auto& [to, p] : rule.row(drawn)) {
    if (edge(to, a, b)) z += p;
  }
  return z;
}

/// a_{J,R} for every class, summed over all 2^C(k,2)·k(k-1) elements.
inline std::map<Key, Rational> naive_coefficients(const Rule& rule) {
  const int k = rule.order();
  std::map<Key, Rational> out;
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << pairs_of(k)); ++f) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        out[brute_canonical(k, f, a, b).canon] += naive_summand(rule, f, a, b);
      }
    }
  }
  return out;
}

inline std::map<Key, Rational> as_map(const CoeffVector& v) {
  std::map<Key, Rational> out;
  for (const CoeffEntry& e : v.entries) out[{e.cls.canon.graph.bits, e.cls.canon.a, e.cls.canon.b}] = e.coeff;
  return out;
}

/// Literal induced density of (F, a, b) with a in part x and b in part y:
/// every other vertex ranges over all parts.
inline double literal_rooted_density(int k, std::uint64_t drawn, int a, int b, const StepKernel& w, int x, int y) {
  const int m = w.parts();
  std::vector<int> free_vertices;
  for (int v = 0; v < k; ++v) {
    if (v != a && v != b) free_vertices.push_back(v);
  }
  std::vector<int> part(static_cast<std::size_t>(k), 0);
  part[a] = x;
  part[b] = y;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < free_vertices.size(); ++i) combos *= static_cast<std::size_t>(m);
  double total = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    double weight = 1.0;
    for (int v : free_vertices) {
      part[v] = static_cast<int>(rest % static_cast<std::size_t>(m));
      rest /= static_cast<std::size_t>(m);
      weight *= w.weight(part[v]);
    }
    for (int j = 1; j < k; ++j) {
      for (int i = 0; i < j; ++i) {
        const double p = w.value(part[i], part[j]);
        weight *= edge(drawn, i, j) ? p : 1.0 - p;
      }
    }
    total += weight;
  }
  return total;
}

/// Velocity block as the literal double sum over elements and their
/// induced densities.
inline double literal_velocity(const Rule& rule, const StepKernel& w, int x, int y) {
  const int k = rule.order();
  double total = 0.0;
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << pairs_of(k)); ++f) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        const double z = naive_summand(rule, f, a, b).to_double();
        if (z != 0.0) total += z * literal_rooted_density(k, f, a, b, w, x, y);
      }
    }
  }
  return total;
}

// Random generators. Every generator takes the engine explicitly so a test
// seed pins the whole instance.

using Engine = std::mt19937_64;

inline int uniform_int(Engine& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Engine& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// A random distribution over up to max_support codes with small integer
/// weights, so probabilities are exact rationals.
inline Rule::Row random_row(Engine& rng, int k, int max_support) {
  const std::uint64_t codes = std::uint64_t{1} << pairs_of(k);
  const int support = uniform_int(rng, 1, max_support);
  std::map<std::uint64_t, long> weights;
  for (int s = 0; s < support; ++s) {
    weights[std::uniform_int_distribution<std::uint64_t>(0, codes - 1)(rng)] += uniform_int(rng, 1, 6);
  }
  long sum = 0;
  for (const auto& [code, wt] : weights) sum += wt;
  Rule::Row row;
  for (const auto& [code, wt] : weights) row[code] = Rational(wt, sum);
  return row;
}

/// Random rule with about `rows` explicit rows; the rest stay identity.
inline Rule random_rule(Engine& rng, int k, int rows, int max_support = 3) {
  Rule rule(k);
  const std::uint64_t codes = std::uint64_t{1} << pairs_of(k);
  for (int r = 0; r < rows; ++r) {
    rule.set_row(std::uniform_int_distribution<std::uint64_t>(0, codes - 1)(rng), random_row(rng, k, max_support));
  }
  return rule;
}

/// Rule whose every row is the same distribution.
inline Rule ignorant_rule(int k, const Rule::Row& row) {
  Rule rule(k);
  for (std::uint64_t f = 0; f < (std::uint64_t{1} << pairs_of(k)); ++f) rule.set_row(f, row);
  return rule;
}

/// Symmetric deterministic rule: each isomorphism class of drawn graphs picks
/// one relabeling-equivariant map (keep, complement, empty, complete).
inline Rule random_symmetric_deterministic(Engine& rng, int k) {
  Rule rule(k);
  const std::uint64_t full = (std::uint64_t{1} << pairs_of(k)) - 1;
  std::map<std::uint64_t, int> choice;
  for (std::uint64_t f = 0; f <= full; ++f) {
    std::vector<int> sigma(static_cast<std::size_t>(k));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::uint64_t least = f;
    do {
      least = std::min(least, relabel(f, sigma));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    auto [it, fresh] = choice.emplace(least, 0);
    if (fresh) it->second = uniform_int(rng, 0, 3);
    const std::uint64_t image = it->second == 0 ? f : it->second == 1 ? (full & ~f) : it->second == 2 ? 0 : full;
    rule.set_row(f, Rule::Row{{image, Rational(1)}});
  }
  return rule;
}

/// Random step graphon on m parts with random positive weights.
inline StepKernel random_graphon(Engine& rng, int m) {
  std::vector<double> weights(static_cast<std::size_t>(m));
  double sum = 0.0;
  for (double& z : weights) sum += (z = uniform_real(rng, 0.1, 1.0));
  for (double& z : weights) z /= sum;
  StepKernel w(weights);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) w.set(i, j, uniform_real(rng));
  }
  return w;
}

/// Same partition as w, independent values.
inline StepKernel random_graphon_like(Engine& rng, const StepKernel& w) {
  StepKernel out(w.weights());
  for (int i = 0; i < w.parts(); ++i) {
    for (int j = i; j < w.parts(); ++j) out.set(i, j, uniform_real(rng));
  }
  return out;
}

inline graph::RootedGraph random_graph(Engine& rng, int n, double p) {
  graph::RootedGraph g = graph::RootedGraph::with_vertices(n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      if (uniform_real(rng) < p) g.add_edge(i, j);
    }
  }
  return g;
}

/// Brute-force root-order-preserving isomorphism test over all bijections.
inline bool brute_isomorphic(const graph::RootedGraph& a, const graph::RootedGraph& b) {
  const int n = a.num_vertices();
  if (n != b.num_vertices() || a.num_roots() != b.num_roots() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> phi(static_cast<std::size_t>(n));
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool ok = true;
    for (int r = 0; r < a.num_roots() && ok; ++r) ok = phi[a.roots()[r]] == b.roots()[r];
    for (int v = 0; v < n && ok; ++v) ok = a.is_root(v) == b.is_root(phi[v]);
    for (int j = 1; j < n && ok; ++j) {
      for (int i = 0; i < j && ok; ++i) ok = a.has_edge(i, j) == b.has_edge(phi[i], phi[j]);
    }
    if (ok) return true;
  } while (std::next_permutation(phi.begin(), phi.end()));
  return false;
}

}  // namespace flipproc::testing
