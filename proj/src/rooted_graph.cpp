#include "flipproc/rooted_graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "flipproc/error.hpp"

namespace flipproc::graph {

RootedGraph::RootedGraph(std::vector<std::string> names) {
  for (auto& n : names) add_vertex(std::move(n));
}

RootedGraph RootedGraph::with_vertices(int n) {
  RootedGraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i + 1));
  return g;
}

RootedGraph RootedGraph::from_code(const GraphCode& code, std::vector<int> roots) {
  RootedGraph g = with_vertices(code.order);
  for (int j = 1; j < code.order; ++j) {
    for (int i = 0; i < j; ++i) {
      if (code.has_edge(i, j)) g.add_edge(i, j);
    }
  }
  g.set_roots(std::move(roots));
  return g;
}

int RootedGraph::add_vertex(std::string name) {
  names_.push_back(std::move(name));
  adjacency_.emplace_back();
  root_position_.push_back(-1);
  return num_vertices() - 1;
}

void RootedGraph::check_vertex(int v) const {
  if (v < 0 || v >= num_vertices()) throw InputError("vertex index " + std::to_string(v) + " out of range");
}

void RootedGraph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw InputError("self-loop at vertex " + names_[idx(u)]);
  adjacency_[idx(u)].insert(v);
  adjacency_[idx(v)].insert(u);
}

void RootedGraph::set_roots(std::vector<int> roots) {
  std::fill(root_position_.begin(), root_position_.end(), -1);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    check_vertex(roots[i]);
    if (root_position_[idx(roots[i])] >= 0) throw InputError("repeated root " + names_[idx(roots[i])]);
    root_position_[idx(roots[i])] = static_cast<int>(i);
  }
  roots_ = std::move(roots);
}

int RootedGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& n : adjacency_) total += n.size();
  return static_cast<int>(total / 2);
}

int RootedGraph::vertex(std::string_view name) const {
  for (int v = 0; v < num_vertices(); ++v) {
    if (names_[idx(v)] == name) return v;
  }
  throw InputError("unknown vertex '" + std::string(name) + "'");
}

std::vector<std::pair<int, int>> RootedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < num_vertices(); ++u) {
    for (int v : adjacency_[idx(u)]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

RootedGraph RootedGraph::unrooted() const {
  RootedGraph g = *this;
  g.set_roots({});
  return g;
}

bool are_twins(const RootedGraph& g, int u, int v) { return g.neighbors(u) == g.neighbors(v); }

bool is_twinfree(const RootedGraph& g) {
  for (int u = 0; u < g.num_vertices(); ++u) {
    for (int v = u + 1; v < g.num_vertices(); ++v) {
      if (g.is_root(u) == g.is_root(v) && are_twins(g, u, v)) return false;
    }
  }
  return true;
}

int free_vertex_count_without_root_twin(const RootedGraph& g) {
  int count = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.is_root(v)) continue;
    const bool has_root_twin =
        std::any_of(g.roots().begin(), g.roots().end(), [&](int r) { return are_twins(g, v, r); });
    if (!has_root_twin) ++count;
  }
  return count;
}

TwinfreeDecomposition twinfree_decomposition(const RootedGraph& g) {
  const int n = g.num_vertices();
  TwinfreeDecomposition out;
  out.class_of.assign(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> members;
  for (int v = 0; v < n; ++v) {
    if (out.class_of[static_cast<std::size_t>(v)] >= 0) continue;
    const int c = static_cast<int>(members.size());
    members.push_back({v});
    out.class_of[static_cast<std::size_t>(v)] = c;
    for (int u = v + 1; u < n; ++u) {
      if (out.class_of[static_cast<std::size_t>(u)] < 0 && g.is_root(u) == g.is_root(v) &&
          are_twins(g, u, v)) {
        out.class_of[static_cast<std::size_t>(u)] = c;
        members.back().push_back(u);
      }
    }
  }

  for (const auto& cls : members) {
    std::string name;
    for (int v : cls) {
      if (!name.empty()) name += "+";
      name += g.name(v);
    }
    out.quotient.add_vertex(std::move(name));
    out.multiplicities.push_back(static_cast<int>(cls.size()));
  }
  for (auto [u, v] : g.edges()) {
    const int cu = out.class_of[static_cast<std::size_t>(u)];
    const int cv = out.class_of[static_cast<std::size_t>(v)];
    // Twins are never adjacent: adjacency would put each in the other's
    // neighbourhood but not its own.
    if (cu != cv) out.quotient.add_edge(cu, cv);
  }
  std::vector<int> root_classes;
  for (int r : g.roots()) {
    const int c = out.class_of[static_cast<std::size_t>(r)];
    if (std::find(root_classes.begin(), root_classes.end(), c) == root_classes.end()) {
      root_classes.push_back(c);
    }
  }
  out.quotient.set_roots(std::move(root_classes));
  return out;
}

RootedGraph twinfree_version(const RootedGraph& g) { return twinfree_decomposition(g).quotient; }

RootedGraph blowup(const RootedGraph& base, const BlowupVector& m) {
  if (static_cast<int>(m.size()) != base.num_vertices()) {
    throw InputError("blowup vector has " + std::to_string(m.size()) + " entries for " +
                     std::to_string(base.num_vertices()) + " vertices");
  }
  RootedGraph out;
  std::vector<std::vector<int>> copies(m.size());
  for (int v = 0; v < base.num_vertices(); ++v) {
    const int mult = m[static_cast<std::size_t>(v)];
    if (mult < 0) throw InputError("negative blowup multiplicity");
    for (int c = 0; c < mult; ++c) {
      std::string name = mult == 1 ? base.name(v) : base.name(v) + "#" + std::to_string(c + 1);
      copies[static_cast<std::size_t>(v)].push_back(out.add_vertex(std::move(name)));
    }
  }
  for (auto [u, v] : base.edges()) {
    for (int cu : copies[static_cast<std::size_t>(u)]) {
      for (int cv : copies[static_cast<std::size_t>(v)]) out.add_edge(cu, cv);
    }
  }
  std::vector<int> roots;
  for (int r : base.roots()) {
    for (int c : copies[static_cast<std::size_t>(r)]) roots.push_back(c);
  }
  out.set_roots(std::move(roots));
  return out;
}

RootedGraph rooted_version(const RootedGraph& g, const std::vector<int>& x) {
  RootedGraph out = g.unrooted();
  std::vector<int> seen;
  std::vector<int> roots;
  for (int v : x) {
    if (v < 0 || v >= g.num_vertices()) throw InputError("rooting set is not a subset of the vertices");
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) {
      throw InputError("rooting set has a repeated vertex");
    }
    seen.push_back(v);
    const int dup = out.add_vertex(g.name(v) + "'");
    for (int u : g.neighbors(v)) out.add_edge(dup, u);
    roots.push_back(dup);
  }
  // Duplicates of adjacent vertices are adjacent, as in any blowup.
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (g.has_edge(x[i], x[j])) out.add_edge(roots[i], roots[j]);
    }
  }
  out.set_roots(std::move(roots));
  return out;
}

namespace {

// Vertices of src sorted so roots come first (in root order), then by
// decreasing degree; better pruning for both searches below.
std::vector<int> search_order(const RootedGraph& src) {
  std::vector<int> order = src.roots();
  std::vector<int> rest;
  for (int v = 0; v < src.num_vertices(); ++v) {
    if (!src.is_root(v)) rest.push_back(v);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [&](int a, int b) { return src.degree(a) > src.degree(b); });
  order.insert(order.end(), rest.begin(), rest.end());
  return order;
}

// Enumerates maps with `check(v, image, phi)` deciding whether v may map to
// image given the partial map phi. `emit` returns false to stop the search.
void enumerate_maps(const RootedGraph& src, const RootedGraph& dst,
                    const std::function<bool(int, int, const VertexMap&)>& check,
                    const std::function<bool(const VertexMap&)>& emit) {
  const std::vector<int> order = search_order(src);
  VertexMap phi(static_cast<std::size_t>(src.num_vertices()), -1);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    if (depth == order.size()) {
      if (!emit(phi)) stop = true;
      return;
    }
    const int v = order[depth];
    for (int w = 0; w < dst.num_vertices() && !stop; ++w) {
      if (!check(v, w, phi)) continue;
      phi[static_cast<std::size_t>(v)] = w;
      rec(depth + 1);
      phi[static_cast<std::size_t>(v)] = -1;
    }
  };
  rec(0);
}

bool relation_consistent(const RootedGraph& src, const RootedGraph& dst, int v, int w,
                         const VertexMap& phi) {
  for (int u = 0; u < src.num_vertices(); ++u) {
    const int pu = phi[static_cast<std::size_t>(u)];
    if (pu < 0) continue;
    const bool src_edge = src.has_edge(u, v);
    const bool dst_edge = pu != w && dst.has_edge(pu, w);
    if (src_edge != dst_edge) return false;
  }
  return true;
}

void enumerate_isomorphisms(const RootedGraph& a, const RootedGraph& b,
                            const std::function<bool(const VertexMap&)>& emit) {
  if (a.num_vertices() != b.num_vertices() || a.num_roots() != b.num_roots() ||
      a.edge_count() != b.edge_count()) {
    return;
  }
  std::vector<char> used(static_cast<std::size_t>(b.num_vertices()), 0);
  auto check = [&](int v, int w, const VertexMap& phi) {
    if (used[static_cast<std::size_t>(w)]) return false;
    if (a.root_position(v) != b.root_position(w)) return false;
    if (a.degree(v) != b.degree(w)) return false;
    if (!relation_consistent(a, b, v, w, phi)) return false;
    return true;
  };
  // `used` must track the partial map; wrap emit/check through phi state.
  const std::vector<int> order = search_order(a);
  VertexMap phi(static_cast<std::size_t>(a.num_vertices()), -1);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    if (depth == order.size()) {
      if (!emit(phi)) stop = true;
      return;
    }
    const int v = order[depth];
    for (int w = 0; w < b.num_vertices() && !stop; ++w) {
      if (!check(v, w, phi)) continue;
      phi[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = 1;
      rec(depth + 1);
      used[static_cast<std::size_t>(w)] = 0;
      phi[static_cast<std::size_t>(v)] = -1;
    }
  };
  rec(0);
}

}  // namespace

std::vector<VertexMap> relation_preserving_maps(const RootedGraph& src, const RootedGraph& dst) {
  std::vector<VertexMap> out;
  auto check = [&](int v, int w, const VertexMap& phi) {
    if (src.is_root(v) != dst.is_root(w)) return false;
    if (src.is_root(v)) {
      for (int r : src.roots()) {
        const int pr = phi[static_cast<std::size_t>(r)];
        if (pr < 0) continue;
        const bool src_before = src.root_position(r) < src.root_position(v);
        const bool dst_before = dst.root_position(pr) < dst.root_position(w);
        if (src_before != dst_before || pr == w) return false;
      }
    }
    return relation_consistent(src, dst, v, w, phi);
  };
  enumerate_maps(src, dst, check, [&](const VertexMap& phi) {
    out.push_back(phi);
    return true;
  });
  return out;
}

std::optional<VertexMap> find_isomorphism(const RootedGraph& a, const RootedGraph& b) {
  std::optional<VertexMap> found;
  enumerate_isomorphisms(a, b, [&](const VertexMap& phi) {
    found = phi;
    return false;
  });
  return found;
}

bool isomorphic(const RootedGraph& a, const RootedGraph& b) { return find_isomorphism(a, b).has_value(); }

std::vector<VertexMap> automorphisms(const RootedGraph& g) {
  std::vector<VertexMap> out;
  enumerate_isomorphisms(g, g, [&](const VertexMap& phi) {
    out.push_back(phi);
    return true;
  });
  return out;
}

bool blowup_vectors_equivalent(const RootedGraph& base, const BlowupVector& m, const BlowupVector& n) {
  if (!is_twinfree(base)) throw ContractError("blowup vector comparison needs a twinfree base");
  const auto size = static_cast<std::size_t>(base.num_vertices());
  if (m.size() != size || n.size() != size) throw InputError("blowup vector size mismatch");
  for (const VertexMap& phi : automorphisms(base)) {
    bool match = true;
    for (std::size_t i = 0; i < size && match; ++i) {
      match = m[i] == n[static_cast<std::size_t>(phi[i])];
    }
    if (match) return true;
  }
  return false;
}

}  // namespace flipproc::graph
