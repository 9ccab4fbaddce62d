#include "flipproc/graph_code.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "flipproc/error.hpp"

namespace flipproc::graph {

std::pair<int, int> pair_vertices(int index) {
  int j = 1;
  while ((j + 1) * j / 2 <= index) ++j;
  return {index - j * (j - 1) / 2, j};
}

std::uint64_t full_mask(int k) {
  const int p = num_pairs(k);
  return p >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << p) - 1);
}

GraphCode GraphCode::make(int order, std::uint64_t bits) {
  if (order < 1 || order > kMaxCodeOrder) {
    throw InputError("graph order " + std::to_string(order) + " outside [1, " +
                     std::to_string(kMaxCodeOrder) + "]");
  }
  if ((bits & ~full_mask(order)) != 0) {
    throw InputError("graph code " + std::to_string(bits) + " has bits beyond C(" +
                     std::to_string(order) + ",2)");
  }
  return GraphCode{order, bits};
}

GraphCode GraphCode::complete(int order) { return make(order, full_mask(order)); }

int GraphCode::edge_count() const { return std::popcount(bits); }

GraphCode GraphCode::complement() const { return GraphCode{order, ~bits & full_mask(order)}; }

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw InputError("not a permutation");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int k) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(int k, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const int from = cycle[i] - 1;
      const int to = cycle[(i + 1) % cycle.size()] - 1;
      if (from < 0 || from >= k || to < 0 || to >= k) throw InputError("cycle entry out of range");
      images[static_cast<std::size_t>(from)] = to;
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw InputError("composing permutations of different sizes");
  std::vector<int> images(images_.size());
  for (int i = 0; i < size(); ++i) images[static_cast<std::size_t>(i)] = (*this)(other(i));
  return Permutation(std::move(images));
}

Permutation Permutation::inverse() const {
  std::vector<int> images(images_.size());
  for (int i = 0; i < size(); ++i) images[static_cast<std::size_t>((*this)(i))] = i;
  return Permutation(std::move(images));
}

PermutationTable::PermutationTable(int k) : k_(k), pairs_(num_pairs(k)) {
  std::vector<int> images(static_cast<std::size_t>(k));
  std::iota(images.begin(), images.end(), 0);
  do {
    perms_.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));

  pair_map_.resize(perms_.size() * static_cast<std::size_t>(pairs_));
  for (std::size_t idx = 0; idx < perms_.size(); ++idx) {
    const Permutation& s = perms_[idx];
    for (int p = 0; p < pairs_; ++p) {
      auto [i, j] = pair_vertices(p);
      pair_map_[idx * static_cast<std::size_t>(pairs_) + static_cast<std::size_t>(p)] =
          static_cast<std::uint8_t>(pair_index(s(i), s(j)));
    }
  }
  for (int i = 0; i + 1 < k; ++i) {
    Permutation t = Permutation::from_cycles(k, {{i + 1, i + 2}});
    auto it = std::lower_bound(perms_.begin(), perms_.end(), t);
    generators_.push_back(static_cast<std::size_t>(it - perms_.begin()));
  }
}

const PermutationTable& PermutationTable::get(int k) {
  if (k < 1) throw InputError("unsupported order " + std::to_string(k));
  if (k > kMaxTableOrder) {
    throw ResourceError("permutation table for order " + std::to_string(k) + " exceeds the limit " +
                        std::to_string(kMaxTableOrder));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PermutationTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[k];
  if (!slot) slot.reset(new PermutationTable(k));
  return *slot;
}

std::uint64_t PermutationTable::apply(std::size_t idx, std::uint64_t bits) const {
  std::uint64_t out = 0;
  const std::uint8_t* map = &pair_map_[idx * static_cast<std::size_t>(pairs_)];
  while (bits) {
    const int p = std::countr_zero(bits);
    out |= std::uint64_t{1} << map[p];
    bits &= bits - 1;
  }
  return out;
}

GraphCode apply_perm(const Permutation& sigma, const GraphCode& g) {
  if (sigma.size() != g.order) {
    throw InputError("permutation of length " + std::to_string(sigma.size()) +
                     " applied to graph of order " + std::to_string(g.order));
  }
  std::uint64_t out = 0;
  std::uint64_t bits = g.bits;
  while (bits) {
    auto [i, j] = pair_vertices(std::countr_zero(bits));
    out |= std::uint64_t{1} << pair_index(sigma(i), sigma(j));
    bits &= bits - 1;
  }
  return GraphCode{g.order, out};
}

RootedPairGraph RootedPairGraph::make(GraphCode graph, int a, int b) {
  if (a == b) throw InputError("roots of a pair-rooted graph must be distinct");
  if (a < 0 || b < 0 || a >= graph.order || b >= graph.order) {
    throw InputError("root outside the vertex set");
  }
  return RootedPairGraph{graph, a, b};
}

RootedPairGraph apply_perm(const Permutation& sigma, const RootedPairGraph& g) {
  return RootedPairGraph{apply_perm(sigma, g.graph), sigma(g.a), sigma(g.b)};
}

std::string to_string(const RootedPairGraph& g) {
  return "(" + std::to_string(g.graph.bits) + "," + std::to_string(g.a + 1) + "," +
         std::to_string(g.b + 1) + ")";
}

}  // namespace flipproc::graph
