#pragma once

#include <vector>

#include "flipproc/rooted_graph.hpp"

namespace flipproc {

/// A symmetric kernel that is constant on the blocks of a finite partition
/// with part weights z (z_i >= 0, Σ z_i = 1).
class StepKernel {
 public:
  StepKernel() = default;
  /// All blocks zero. Throws InputError on invalid weights.
  explicit StepKernel(std::vector<double> weights);
  StepKernel(std::vector<double> weights, const std::vector<std::vector<double>>& values);

  /// One part with constant value p.
  static StepKernel constant(double p);
  /// The z-scaled graphon representation of a graph: block (i,j) is 1 iff ij
  /// is an edge.
  static StepKernel graph_representation(const graph::RootedGraph& g, std::vector<double> weights);

  int parts() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  double value(int i, int j) const { return values_[index(i, j)]; }
  /// Sets blocks (i,j) and (j,i).
  void set(int i, int j, double v);

  /// Values in [0, 1].
  bool is_graphon() const;
  /// Throws InputError unless 0 <= i < parts().
  void check_part(int i) const;

  /// Upper-triangle block values, row-major: (0,0), (0,1), ..., (m-1,m-1).
  std::vector<double> upper_triangle() const;
  void set_upper_triangle(const std::vector<double>& values);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * weights_.size() + static_cast<std::size_t>(j);
  }

  std::vector<double> weights_;
  std::vector<double> values_;
};

/// Largest block difference; the kernels must share a partition.
double max_abs_diff(const StepKernel& a, const StepKernel& b);
double max_abs(const StepKernel& a);

}  // namespace flipproc
