#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "flipproc/graph_code.hpp"

namespace flipproc {

/// Enumeration limits shared by every operation that walks all of G_k.
struct Limits {
  static constexpr int kDefaultClassCap = 6;
  /// Class tables grow as 2^C(k,2)·k(k-1); order 7 is the largest supported.
  static constexpr int kHardClassCap = 7;

  int class_cap = kDefaultClassCap;

  /// Reads FLIPPROC_CAP if set, otherwise the default.
  static Limits from_environment();
  /// Throws ResourceError if k exceeds the cap.
  void require_order(int k, const char* what) const;
};

}  // namespace flipproc

namespace flipproc::graph {

/// An S_k-isomorphism class of pair-rooted graphs, represented by its
/// lexicographically least member.
struct OrbitClass {
  RootedPairGraph canon;
  std::uint64_t size = 0;

  friend auto operator<=>(const OrbitClass& x, const OrbitClass& y) { return x.canon <=> y.canon; }
  friend bool operator==(const OrbitClass& x, const OrbitClass& y) { return x.canon == y.canon; }
};

/// All classes J_k together with a lookup from every element of G_k to its
/// class. Classes are sorted by canonical representative.
class ClassTable {
 public:
  /// Shared, lazily built table. Throws ResourceError if k exceeds the cap.
  static std::shared_ptr<const ClassTable> get(int k, const Limits& limits = {});

  int order() const { return k_; }
  const std::vector<OrbitClass>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }

  std::size_t class_index(std::uint64_t bits, int a, int b) const;
  std::size_t class_index(const RootedPairGraph& g) const { return class_index(g.graph.bits, g.a, g.b); }
  const OrbitClass& class_of(const RootedPairGraph& g) const { return classes_[class_index(g)]; }

  explicit ClassTable(int k);

 private:
  std::size_t element_id(std::uint64_t bits, int a, int b) const;

  int k_;
  std::vector<OrbitClass> classes_;
  std::vector<std::uint16_t> element_class_;
};

/// Canonical class of g: least image over S_k, plus orbit size. Uses the
/// shared class table when k is within the cap, brute force otherwise.
OrbitClass canonical_class(const RootedPairGraph& g, const Limits& limits = {});

/// J_k in canonical order. Throws ResourceError when k exceeds the cap.
std::vector<OrbitClass> enumerate_classes(int k, const Limits& limits = {});

}  // namespace flipproc::graph
