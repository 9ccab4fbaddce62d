#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flipproc/graph_code.hpp"

namespace flipproc::graph {

/// A finite simple graph with named vertices and an ordered list of roots.
///
/// Vertices are addressed by index 0..n-1; names only matter for I/O. The
/// position of a vertex in roots() is its place in the root order.
class RootedGraph {
 public:
  RootedGraph() = default;
  explicit RootedGraph(std::vector<std::string> names);
  /// n vertices named "1".."n".
  static RootedGraph with_vertices(int n);
  /// Graph on [k] from an edge code; roots are 0-based vertex indices.
  static RootedGraph from_code(const GraphCode& code, std::vector<int> roots = {});

  int add_vertex(std::string name);
  void add_edge(int u, int v);
  void set_roots(std::vector<int> roots);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  int num_roots() const { return static_cast<int>(roots_.size()); }
  int edge_count() const;
  bool has_edge(int u, int v) const { return adjacency_[idx(u)].count(v) != 0; }
  const std::set<int>& neighbors(int v) const { return adjacency_[idx(v)]; }
  int degree(int v) const { return static_cast<int>(adjacency_[idx(v)].size()); }
  const std::vector<int>& roots() const { return roots_; }
  bool is_root(int v) const { return root_position_[idx(v)] >= 0; }
  /// Place of v in the root order, or -1 for non-roots.
  int root_position(int v) const { return root_position_[idx(v)]; }
  const std::string& name(int v) const { return names_[idx(v)]; }
  /// Index of the vertex with the given name. Throws InputError if absent.
  int vertex(std::string_view name) const;
  std::vector<std::pair<int, int>> edges() const;
  /// The same graph without roots.
  RootedGraph unrooted() const;

 private:
  static std::size_t idx(int v) { return static_cast<std::size_t>(v); }
  void check_vertex(int v) const;

  std::vector<std::string> names_;
  std::vector<std::set<int>> adjacency_;
  std::vector<int> roots_;
  std::vector<int> root_position_;
};

/// Multiplicity of every base vertex, indexed by vertex.
using BlowupVector = std::vector<int>;

/// A map between vertex sets, image of vertex i at position i.
using VertexMap = std::vector<int>;

/// N(u) = N(v).
bool are_twins(const RootedGraph& g, int u, int v);

/// No twins other than root/non-root pairs.
bool is_twinfree(const RootedGraph& g);

/// Number of non-root vertices without a twin among the roots.
int free_vertex_count_without_root_twin(const RootedGraph& g);

/// Quotient by the twin relation that never merges a root with a non-root.
struct TwinfreeDecomposition {
  RootedGraph quotient;
  /// Quotient vertex of each original vertex.
  std::vector<int> class_of;
  /// Class sizes; blowup(quotient, multiplicities) is isomorphic to the input.
  BlowupVector multiplicities;
};

TwinfreeDecomposition twinfree_decomposition(const RootedGraph& g);

/// The twinfree version of g. Classes are ordered by their least member; the
/// root order follows the earliest root of each root class.
RootedGraph twinfree_version(const RootedGraph& g);

/// Replaces each vertex i by an independent set of m[i] copies and each edge by
/// a complete bipartite graph. Copies of a root form a contiguous interval of
/// the root order. Throws InputError if m does not cover the base exactly or
/// has a negative entry.
RootedGraph blowup(const RootedGraph& base, const BlowupVector& m);

/// The X-rooted version: each vertex of X is blown up by a factor of 2 and the
/// duplicates, in X order, become the roots. Existing roots of g are ignored. Duplicates are
/// appended after the original vertices and named with a trailing "'".
RootedGraph rooted_version(const RootedGraph& g, const std::vector<int>& x);

/// All maps src -> dst that are relation-preserving (uv edge iff φ(u)φ(v)
/// edge), root-respecting, and root-order-preserving.
std::vector<VertexMap> relation_preserving_maps(const RootedGraph& src, const RootedGraph& dst);

/// Root-order-preserving isomorphism, if one exists.
std::optional<VertexMap> find_isomorphism(const RootedGraph& a, const RootedGraph& b);
bool isomorphic(const RootedGraph& a, const RootedGraph& b);
std::vector<VertexMap> automorphisms(const RootedGraph& g);

/// True iff some automorphism φ of the twinfree base has m[i] = n[φ(i)] for all
/// i. Throws ContractError if the base has forbidden twins.
bool blowup_vectors_equivalent(const RootedGraph& base, const BlowupVector& m, const BlowupVector& n);

}  // namespace flipproc::graph
