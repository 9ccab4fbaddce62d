#include "flipproc/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>

#include "flipproc/error.hpp"

namespace flipproc {

using graph::num_pairs;
using graph::pair_index;
using graph::RootedGraph;

double rooted_density(const RootedGraph& g, const StepKernel& w, const std::vector<int>& root_parts) {
  if (static_cast<int>(root_parts.size()) != g.num_roots()) {
    throw InputError("one part per root is required");
  }
  for (int p : root_parts) w.check_part(p);
  const int n = g.num_vertices();
  std::vector<int> order = g.roots();
  for (int v = 0; v < n; ++v) {
    if (!g.is_root(v)) order.push_back(v);
  }
  std::vector<int> part(static_cast<std::size_t>(n), -1);

  std::function<double(std::size_t)> rec = [&](std::size_t depth) -> double {
    if (depth == order.size()) return 1.0;
    const int v = order[depth];
    auto factor_for = [&](int p) {
      double f = 1.0;
      for (std::size_t d = 0; d < depth && f != 0.0; ++d) {
        const int u = order[d];
        const double val = w.value(part[static_cast<std::size_t>(u)], p);
        f *= g.has_edge(u, v) ? val : 1.0 - val;
      }
      return f;
    };
    double total = 0.0;
    if (g.is_root(v)) {
      const int p = root_parts[static_cast<std::size_t>(g.root_position(v))];
      const double f = factor_for(p);
      if (f != 0.0) {
        part[static_cast<std::size_t>(v)] = p;
        total = f * rec(depth + 1);
      }
    } else {
      for (int p = 0; p < w.parts(); ++p) {
        const double f = w.weight(p) * factor_for(p);
        if (f == 0.0) continue;
        part[static_cast<std::size_t>(v)] = p;
        total += f * rec(depth + 1);
      }
    }
    part[static_cast<std::size_t>(v)] = -1;
    return total;
  };
  return rec(0);
}

double rooted_density(const graph::RootedPairGraph& g, const StepKernel& w, int x, int y) {
  return rooted_density(RootedGraph::from_code(g.graph, {g.a, g.b}), w, {x, y});
}

namespace {

// Code of π·F where π sends a -> 0, b -> 1 and the remaining vertices, in
// increasing order, to 2, 3, ...
std::uint64_t root_first_relabel(int k, std::uint64_t bits, int a, int b) {
  std::vector<int> image(static_cast<std::size_t>(k));
  image[static_cast<std::size_t>(a)] = 0;
  image[static_cast<std::size_t>(b)] = 1;
  int next = 2;
  for (int v = 0; v < k; ++v) {
    if (v != a && v != b) image[static_cast<std::size_t>(v)] = next++;
  }
  std::uint64_t out = 0;
  for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
    const auto [i, j] = graph::pair_vertices(std::countr_zero(rest));
    out |= std::uint64_t{1} << pair_index(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]);
  }
  return out;
}

// Replaces the lowest pair bit by its expectation under edge probability p.
std::vector<double> fold_low_bit(const std::vector<double>& in, double p) {
  std::vector<double> out(in.size() / 2);
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = (1.0 - p) * in[2 * t] + p * in[2 * t + 1];
  return out;
}

}  // namespace

VelocityOperator::VelocityOperator(const Rule& rule, const Limits& limits) : order_(rule.order()) {
  const int k = order_;
  if (k < 2) return;
  limits.require_order(k, "velocity operator");
  const int pairs = num_pairs(k);
  std::map<std::uint64_t, Rational> aggregated;
  std::vector<Rational> edge_mass(static_cast<std::size_t>(pairs));
  const Rule base = rule.normalized();
  for (const auto& [from, row] : base.explicit_rows()) {
    std::fill(edge_mass.begin(), edge_mass.end(), Rational(0));
    for (const auto& [to, p] : row) {
      for (std::uint64_t rest = to; rest != 0; rest &= rest - 1) {
        edge_mass[static_cast<std::size_t>(std::countr_zero(rest))] += p;
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        const int pr = pair_index(a, b);
        Rational z = edge_mass[static_cast<std::size_t>(pr)];
        if ((from >> pr) & 1U) z -= Rational(1);
        if (!z.is_zero()) aggregated[root_first_relabel(k, from, a, b)] += z;
      }
    }
  }
  table_.assign(std::size_t{1} << pairs, 0.0);
  for (const auto& [code, z] : aggregated) {
    table_[code] = z.to_double();
    if (!z.is_zero()) zero_ = false;
  }
}

double VelocityOperator::block(const StepKernel& w, int x, int y) const {
  w.check_part(x);
  w.check_part(y);
  if (zero_) return 0.0;
  const int k = order_;
  std::vector<int> part(static_cast<std::size_t>(k), -1);
  part[0] = x;
  part[1] = y;
  std::function<double(int, const std::vector<double>&)> rec = [&](int j, const std::vector<double>& table) {
    if (j == k) return table[0];
    double total = 0.0;
    for (int p = 0; p < w.parts(); ++p) {
      if (w.weight(p) == 0.0) continue;
      // Pairs (0,j), ..., (j-1,j) are now the lowest bits, in that order.
      std::vector<double> folded = fold_low_bit(table, w.value(part[0], p));
      for (int i = 1; i < j; ++i) folded = fold_low_bit(folded, w.value(part[static_cast<std::size_t>(i)], p));
      part[static_cast<std::size_t>(j)] = p;
      total += w.weight(p) * rec(j + 1, folded);
    }
    return total;
  };
  return rec(2, fold_low_bit(table_, w.value(x, y)));
}

StepKernel VelocityOperator::apply(const StepKernel& w) const {
  StepKernel out(w.weights());
  if (zero_) return out;
  for (int i = 0; i < w.parts(); ++i) {
    for (int j = i; j < w.parts(); ++j) out.set(i, j, block(w, i, j));
  }
  return out;
}

StepKernel velocity(const Rule& rule, const StepKernel& w, const Limits& limits) {
  return VelocityOperator(rule, limits).apply(w);
}

namespace {

void check_time_arguments(double t_max, const IntegrateOptions& options) {
  if (!std::isfinite(t_max) || t_max < 0.0) throw InputError("time horizon must be a non-negative number");
  if (!std::isfinite(options.step) || options.step <= 0.0) throw InputError("step size must be positive");
  if (options.record_every == 0) throw InputError("record interval must be positive");
}

// Runs RK4 from w0 to t_max, calling emit(step index, time, state) for step 0
// and every step after.
void run_rk4(const VelocityOperator& op, const StepKernel& w0, double t_max, const IntegrateOptions& options,
             const std::function<void(std::size_t, std::size_t, double, const StepKernel&)>& emit) {
  check_time_arguments(t_max, options);
  if (!options.allow_kernel && !w0.is_graphon() && t_max > 0.0) {
    throw ContractError("integration from a kernel outside [0,1] needs the expert kernel mode");
  }
  const auto steps = t_max == 0.0 ? std::size_t{0}
                                  : static_cast<std::size_t>(std::ceil(t_max / options.step - 1e-9));
  const double h = steps == 0 ? 0.0 : t_max / static_cast<double>(steps);
  StepKernel state = w0;
  emit(0, steps, 0.0, state);
  if (steps == 0) return;

  std::vector<double> y = state.upper_triangle();
  const std::size_t dim = y.size();
  StepKernel scratch = w0;
  auto derivative = [&](const std::vector<double>& at) {
    scratch.set_upper_triangle(at);
    return op.apply(scratch).upper_triangle();
  };
  std::vector<double> tmp(dim);
  for (std::size_t s = 1; s <= steps; ++s) {
    const std::vector<double> k1 = derivative(y);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<double> k2 = derivative(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = derivative(tmp);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
    const std::vector<double> k4 = derivative(tmp);
    for (std::size_t i = 0; i < dim; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (options.allow_kernel) continue;
      if (y[i] < -kClampTolerance || y[i] > 1.0 + kClampTolerance || !std::isfinite(y[i])) {
        throw IntegrationError("block value " + std::to_string(y[i]) + " left [0,1] at t = " +
                               std::to_string(static_cast<double>(s) * h));
      }
      y[i] = std::clamp(y[i], 0.0, 1.0);
    }
    state.set_upper_triangle(y);
    emit(s, steps, s == steps ? t_max : static_cast<double>(s) * h, state);
  }
}

}  // namespace

Trajectory integrate(const Rule& rule, const StepKernel& w0, double t_max, const IntegrateOptions& options,
                     const Limits& limits) {
  const VelocityOperator op(rule, limits);
  Trajectory out;
  out.rule_order = rule.order();
  run_rk4(op, w0, t_max, options, [&](std::size_t s, std::size_t total, double t, const StepKernel& state) {
    if (out.step == 0.0 && total > 0) out.step = t_max / static_cast<double>(total);
    if (s % options.record_every == 0 || s == total) {
      out.times.push_back(t);
      out.states.push_back(state);
    }
  });
  return out;
}

StepKernel evolve(const VelocityOperator& op, const StepKernel& w0, double t, const IntegrateOptions& options) {
  StepKernel last = w0;
  run_rk4(op, w0, t, options, [&](std::size_t, std::size_t, double, const StepKernel& state) { last = state; });
  return last;
}

double lipschitz_constant(int k) {
  if (k < 1) throw InputError("order must be positive");
  const double falling = static_cast<double>(k) * static_cast<double>(k - 1);
  return falling * falling * std::ldexp(1.0, num_pairs(k) - 1);
}

DensityFormulaSides density_formula_check(const RootedGraph& base, const graph::BlowupVector& m,
                                          const RootedGraph& g, const std::vector<double>& z, int x, int y) {
  const RootedGraph target = g.unrooted();
  if (!graph::is_twinfree(base)) throw ContractError("base graph has forbidden twins");
  if (!graph::is_twinfree(target)) throw ContractError("target graph has twins");
  if (static_cast<int>(m.size()) != base.num_vertices()) throw ContractError("blowup vector size mismatch");
  int root_mass = 0;
  for (int v = 0; v < base.num_vertices(); ++v) {
    if (m[static_cast<std::size_t>(v)] < 1) throw ContractError("blowup multiplicities must be positive");
    if (base.is_root(v)) root_mass += m[static_cast<std::size_t>(v)];
  }
  if (root_mass != 2) throw ContractError("root multiplicities must sum to 2");

  const StepKernel w = StepKernel::graph_representation(target, z);
  w.check_part(x);
  w.check_part(y);
  DensityFormulaSides out;
  out.numeric = rooted_density(graph::blowup(base, m), w, {x, y});

  const std::vector<int> rooting = x == y ? std::vector<int>{x} : std::vector<int>{x, y};
  const RootedGraph version = graph::rooted_version(target, rooting);
  if (base.num_roots() > version.num_roots()) {
    out.combinatorial = 0.0;
    return out;
  }
  if (base.num_roots() < version.num_roots() ||
      graph::free_vertex_count_without_root_twin(base) < graph::free_vertex_count_without_root_twin(version)) {
    throw ContractError("neither hypothesis of the density formula holds");
  }
  for (const graph::VertexMap& phi : graph::relation_preserving_maps(base, version)) {
    double term = 1.0;
    for (int v = 0; v < base.num_vertices(); ++v) {
      if (base.is_root(v)) continue;
      term *= std::pow(z[static_cast<std::size_t>(phi[static_cast<std::size_t>(v)])], m[static_cast<std::size_t>(v)]);
    }
    out.combinatorial += term;
  }
  return out;
}

}  // namespace flipproc
