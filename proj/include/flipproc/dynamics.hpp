#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "flipproc/graph_code.hpp"
#include "flipproc/orbit_classes.hpp"
#include "flipproc/rooted_graph.hpp"
#include "flipproc/rule.hpp"
#include "flipproc/step_kernel.hpp"

namespace flipproc {

/// Probability that a W-random embedding of g, with root a in part x and root
/// b in part y, induces exactly g.
double rooted_density(const graph::RootedPairGraph& g, const StepKernel& w, int x, int y);

/// Same for a general rooted graph; root i (in root order) is pinned to part
/// root_parts[i].
double rooted_density(const graph::RootedGraph& g, const StepKernel& w, const std::vector<int>& root_parts);

/// V_R as a reusable operator. Construction aggregates the per-element
/// summands Z_{F^{a,b}} onto graphs rooted at (1, 2); application folds that
/// table against the kernel one vertex at a time.
class VelocityOperator {
 public:
  explicit VelocityOperator(const Rule& rule, const Limits& limits = {});

  int order() const { return order_; }
  bool is_zero() const { return zero_; }

  /// Velocity of w; a kernel on the same partition, not necessarily a graphon.
  StepKernel apply(const StepKernel& w) const;
  /// Block (x, y) of the velocity.
  double block(const StepKernel& w, int x, int y) const;

 private:
  int order_;
  bool zero_ = true;
  /// Aggregated coefficient of each graph code rooted at (1, 2).
  std::vector<double> table_;
};

StepKernel velocity(const Rule& rule, const StepKernel& w, const Limits& limits = {});

struct IntegrateOptions {
  double step = 1e-3;
  /// Emit every n-th state (the final state is always emitted).
  std::size_t record_every = 1;
  /// Integrate from a kernel that is not a graphon, without range checks.
  bool allow_kernel = false;
};

/// Time series of step kernels on one partition.
struct Trajectory {
  int rule_order = 1;
  double step = 0.0;
  std::vector<double> times;
  std::vector<StepKernel> states;
};

/// Largest drift outside [0, 1] that is silently clamped.
inline constexpr double kClampTolerance = 1e-9;

/// Classical RK4 on the upper-triangle block values. The step is shortened
/// uniformly so that t_max is hit exactly. Throws IntegrationError if a state
/// leaves [0, 1] by more than kClampTolerance.
Trajectory integrate(const Rule& rule, const StepKernel& w0, double t_max, const IntegrateOptions& options = {},
                     const Limits& limits = {});
/// Final state only.
StepKernel evolve(const VelocityOperator& op, const StepKernel& w0, double t, const IntegrateOptions& options = {});

/// (k(k-1))^2 · 2^(C(k,2)-1): Lipschitz constant of V_R in the max-block norm.
double lipschitz_constant(int k);

struct DensityFormulaSides {
  double numeric = 0.0;
  double combinatorial = 0.0;
};

/// Both sides of the map-counting formula for the induced density of
/// base(m) at the z-scaled representation of g, with the two roots of the
/// blowup pinned to parts x and y.
///
/// The combinatorial side sums Π z_{φ(i)}^{m_i} over the relation-preserving
/// maps from base into the (x,y)-rooted version of g, and is 0 when base has
/// more roots than that version. Throws ContractError if base or g has
/// forbidden twins, the root multiplicities do not sum to 2, or neither of the
/// formula's hypotheses holds.
DensityFormulaSides density_formula_check(const graph::RootedGraph& base, const graph::BlowupVector& m,
                                          const graph::RootedGraph& g, const std::vector<double>& z, int x, int y);

}  // namespace flipproc
