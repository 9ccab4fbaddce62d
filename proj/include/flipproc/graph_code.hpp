#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace flipproc::graph {

// Vertices of a labelled graph on [k] are 0-based internally (0..k-1). The
// JSON and CLI layers print them 1-based.

/// Largest order whose pair set fits in a 64-bit edge mask.
inline constexpr int kMaxCodeOrder = 11;
inline constexpr int kMaxTableOrder = 8;

constexpr int num_pairs(int k) { return k * (k - 1) / 2; }

/// Colexicographic index of the unordered pair {i, j}, i != j.
///
/// Pairs inside [k] occupy indices 0..C(k,2)-1, so a code of order k denotes
/// the same edge set when reinterpreted at any larger order.
constexpr int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

/// Inverse of pair_index: returns (i, j) with i < j.
std::pair<int, int> pair_vertices(int index);

/// A labelled graph on [k] stored as an edge bitmask.
struct GraphCode {
  int order = 1;
  std::uint64_t bits = 0;

  /// Throws InputError if the order is unsupported or bits exceed C(k,2).
  static GraphCode make(int order, std::uint64_t bits);
  static GraphCode empty(int order) { return make(order, 0); }
  static GraphCode complete(int order);

  bool has_edge(int i, int j) const { return (bits >> pair_index(i, j)) & 1U; }
  int edge_count() const;
  GraphCode complement() const;

  friend auto operator<=>(const GraphCode&, const GraphCode&) = default;
};

std::uint64_t full_mask(int k);

/// A permutation of [k] given by its images (0-based).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless images is a bijection on 0..n-1.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int k);
  /// Permutation from 1-based cycle notation, e.g. {{2, 3}} on k = 3.
  static Permutation from_cycles(int k, const std::vector<std::vector<int>>& cycles);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const { return images_; }

  /// (this ∘ other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;
  Permutation inverse() const;

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// Every permutation of S_k in lexicographic order, with precomputed images of
/// each pair index. Built once per k and shared; available for k <= 8.
class PermutationTable {
 public:
  static const PermutationTable& get(int k);

  int order() const { return k_; }
  std::size_t size() const { return perms_.size(); }
  const Permutation& perm(std::size_t idx) const { return perms_[idx]; }
  int pair_image(std::size_t idx, int pair) const {
    return pair_map_[idx * static_cast<std::size_t>(pairs_) + static_cast<std::size_t>(pair)];
  }
  std::uint64_t apply(std::size_t idx, std::uint64_t bits) const;

  /// Indices of the adjacent transpositions (i i+1), which generate S_k.
  const std::vector<std::size_t>& generators() const { return generators_; }

 private:
  explicit PermutationTable(int k);

  int k_;
  int pairs_;
  std::vector<Permutation> perms_;
  std::vector<std::uint8_t> pair_map_;
  std::vector<std::size_t> generators_;
};

/// σ·F: σ(i)σ(j) is an edge of σ·F iff ij is an edge of F.
GraphCode apply_perm(const Permutation& sigma, const GraphCode& g);

/// A labelled graph on [k] with an ordered pair (a, b) of distinct roots.
struct RootedPairGraph {
  GraphCode graph;
  int a = 0;
  int b = 1;

  /// Throws InputError when a == b or a root lies outside [k].
  static RootedPairGraph make(GraphCode graph, int a, int b);

  int order() const { return graph.order; }

  /// Lexicographic order on (bits, a, b); used to pick canonical forms.
  friend auto operator<=>(const RootedPairGraph& x, const RootedPairGraph& y) {
    if (auto c = x.graph.order <=> y.graph.order; c != 0) return c;
    if (auto c = x.graph.bits <=> y.graph.bits; c != 0) return c;
    if (auto c = x.a <=> y.a; c != 0) return c;
    return x.b <=> y.b;
  }
  friend bool operator==(const RootedPairGraph&, const RootedPairGraph&) = default;
};

/// Returns (σ·F, σ(a), σ(b)). Throws InputError if |σ| != k.
RootedPairGraph apply_perm(const Permutation& sigma, const RootedPairGraph& g);

std::string to_string(const RootedPairGraph& g);

}  // namespace flipproc::graph
