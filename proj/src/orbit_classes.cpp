#include "flipproc/orbit_classes.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

#include "flipproc/error.hpp"

namespace flipproc {

Limits Limits::from_environment() {
  Limits limits;
  if (const char* env = std::getenv("FLIPPROC_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw InputError(std::string("FLIPPROC_CAP is not a positive integer: ") + env);
    }
    limits.class_cap = static_cast<int>(v);
  }
  return limits;
}

void Limits::require_order(int k, const char* what) const {
  const int cap = std::min(class_cap, kHardClassCap);
  if (k > cap) {
    throw ResourceError(std::string(what) + ": order " + std::to_string(k) +
                        " exceeds the enumeration cap " + std::to_string(cap));
  }
}

}  // namespace flipproc

namespace flipproc::graph {

namespace {

constexpr std::uint16_t kUnassigned = std::numeric_limits<std::uint16_t>::max();

OrbitClass brute_force_class(const RootedPairGraph& g) {
  const int k = g.order();
  RootedPairGraph best = g;
  std::set<RootedPairGraph> images;
  std::vector<int> p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 0);
  do {
    RootedPairGraph img = apply_perm(Permutation(p), g);
    images.insert(img);
    best = std::min(best, img);
  } while (std::next_permutation(p.begin(), p.end()));
  return OrbitClass{best, images.size()};
}

}  // namespace

ClassTable::ClassTable(int k) : k_(k) {
  if (k < 2) return;
  const std::uint64_t codes = std::uint64_t{1} << num_pairs(k);
  const std::size_t ordered = static_cast<std::size_t>(k * (k - 1));
  element_class_.assign(codes * ordered, kUnassigned);
  const PermutationTable& perms = PermutationTable::get(k);

  for (std::uint64_t bits = 0; bits < codes; ++bits) {
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b || element_class_[element_id(bits, a, b)] != kUnassigned) continue;
        // Elements are visited in (bits, a, b) order, so the first unassigned
        // element of an orbit is its least member.
        if (classes_.size() >= kUnassigned) throw ResourceError("too many classes for the table");
        const auto id = static_cast<std::uint16_t>(classes_.size());
        std::uint64_t count = 0;
        for (std::size_t s = 0; s < perms.size(); ++s) {
          const Permutation& sigma = perms.perm(s);
          auto& slot = element_class_[element_id(perms.apply(s, bits), sigma(a), sigma(b))];
          if (slot == kUnassigned) {
            slot = id;
            ++count;
          }
        }
        classes_.push_back(OrbitClass{RootedPairGraph{GraphCode{k, bits}, a, b}, count});
      }
    }
  }
}

std::size_t ClassTable::element_id(std::uint64_t bits, int a, int b) const {
  const int pos = a * (k_ - 1) + (b > a ? b - 1 : b);
  return static_cast<std::size_t>(bits) * static_cast<std::size_t>(k_ * (k_ - 1)) +
         static_cast<std::size_t>(pos);
}

std::size_t ClassTable::class_index(std::uint64_t bits, int a, int b) const {
  return element_class_[element_id(bits, a, b)];
}

std::shared_ptr<const ClassTable> ClassTable::get(int k, const Limits& limits) {
  limits.require_order(k, "class enumeration");
  if (k < 1) throw InputError("order must be positive");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const ClassTable>> tables;
  std::lock_guard lock(mutex);
  auto& slot = tables[k];
  if (!slot) slot = std::make_shared<const ClassTable>(k);
  return slot;
}

OrbitClass canonical_class(const RootedPairGraph& g, const Limits& limits) {
  const int k = g.order();
  if (k <= std::min(limits.class_cap, Limits::kHardClassCap)) {
    return ClassTable::get(k, limits)->class_of(g);
  }
  return brute_force_class(g);
}

std::vector<OrbitClass> enumerate_classes(int k, const Limits& limits) {
  return ClassTable::get(k, limits)->classes();
}

}  // namespace flipproc::graph
