#include "flipproc/step_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flipproc/error.hpp"

namespace flipproc {

namespace {

constexpr double kWeightSumTolerance = 1e-12;

void check_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw InputError("a step kernel needs at least one part");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("part weights must be non-negative");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(sum - 1.0) > kWeightSumTolerance * static_cast<double>(weights.size())) {
    throw InputError("part weights sum to " + std::to_string(sum) + ", expected 1");
  }
}

}  // namespace

StepKernel::StepKernel(std::vector<double> weights) : weights_(std::move(weights)) {
  check_weights(weights_);
  values_.assign(weights_.size() * weights_.size(), 0.0);
}

StepKernel::StepKernel(std::vector<double> weights, const std::vector<std::vector<double>>& values)
    : StepKernel(std::move(weights)) {
  const int m = parts();
  if (static_cast<int>(values.size()) != m) throw InputError("value matrix does not match the number of parts");
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(values[static_cast<std::size_t>(i)].size()) != m) {
      throw InputError("value matrix is not square");
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double v = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!std::isfinite(v)) throw InputError("kernel values must be finite");
      if (v != values[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) {
        throw InputError("kernel values are not symmetric");
      }
      values_[index(i, j)] = v;
    }
  }
}

StepKernel StepKernel::constant(double p) {
  StepKernel w({1.0});
  w.set(0, 0, p);
  return w;
}

StepKernel StepKernel::graph_representation(const graph::RootedGraph& g, std::vector<double> weights) {
  if (static_cast<int>(weights.size()) != g.num_vertices()) {
    throw InputError("one weight per vertex is required");
  }
  StepKernel w(std::move(weights));
  for (auto [u, v] : g.edges()) w.set(u, v, 1.0);
  return w;
}

void StepKernel::set(int i, int j, double v) {
  check_part(i);
  check_part(j);
  values_[index(i, j)] = v;
  values_[index(j, i)] = v;
}

bool StepKernel::is_graphon() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

void StepKernel::check_part(int i) const {
  if (i < 0 || i >= parts()) throw InputError("part index " + std::to_string(i) + " out of range");
}

std::vector<double> StepKernel::upper_triangle() const {
  std::vector<double> out;
  for (int i = 0; i < parts(); ++i) {
    for (int j = i; j < parts(); ++j) out.push_back(value(i, j));
  }
  return out;
}

void StepKernel::set_upper_triangle(const std::vector<double>& values) {
  const std::size_t m = weights_.size();
  if (values.size() != m * (m + 1) / 2) throw InputError("wrong number of block values");
  std::size_t t = 0;
  for (int i = 0; i < parts(); ++i) {
    for (int j = i; j < parts(); ++j) set(i, j, values[t++]);
  }
}

double max_abs_diff(const StepKernel& a, const StepKernel& b) {
  if (a.parts() != b.parts()) throw InputError("kernels live on different partitions");
  double out = 0.0;
  for (int i = 0; i < a.parts(); ++i) {
    for (int j = i; j < a.parts(); ++j) out = std::max(out, std::abs(a.value(i, j) - b.value(i, j)));
  }
  return out;
}

double max_abs(const StepKernel& a) {
  double out = 0.0;
  for (int i = 0; i < a.parts(); ++i) {
    for (int j = i; j < a.parts(); ++j) out = std::max(out, std::abs(a.value(i, j)));
  }
  return out;
}

}  // namespace flipproc
