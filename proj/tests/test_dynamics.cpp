#include <doctest.h>

#include <cmath>

#include "flipproc/dynamics.hpp"
#include "flipproc/equivalence.hpp"
#include "flipproc/error.hpp"
#include "flipproc/named_rules.hpp"
#include "support.hpp"

using namespace flipproc;
using graph::GraphCode;
using graph::RootedGraph;
using graph::RootedPairGraph;
namespace ft = flipproc::testing;

TEST_CASE("step kernels validate their inputs") {
  CHECK_THROWS_AS(StepKernel({0.5, 0.4}), InputError);
  CHECK_THROWS_AS(StepKernel({1.0}, {{0.1, 0.2}}), InputError);
  CHECK_THROWS_AS(StepKernel({0.5, 0.5}, {{0.1, 0.2}, {0.3, 0.1}}), InputError);
  const StepKernel w({0.5, 0.5}, {{0.1, 0.2}, {0.2, 1.5}});
  CHECK(!w.is_graphon());
  CHECK(StepKernel::constant(0.3).is_graphon());
  CHECK_THROWS_AS(w.check_part(2), InputError);
  CHECK(w.upper_triangle() == std::vector<double>{0.1, 0.2, 1.5});
}

TEST_CASE("rooted density worked examples") {
  const StepKernel w = StepKernel::constant(0.3);
  CHECK(rooted_density(RootedPairGraph::make(GraphCode::make(3, 7), 0, 1), w, 0, 0) == doctest::Approx(0.027));
  CHECK(rooted_density(RootedPairGraph::make(GraphCode::make(2, 0), 0, 1), w, 0, 0) == doctest::Approx(0.7));
  CHECK_THROWS_AS(rooted_density(RootedPairGraph::make(GraphCode::make(2, 0), 0, 1), w, 0, 1), InputError);
}

TEST_CASE("rooted densities sum to one over drawn graphs") {
  ft::Engine rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = ft::uniform_int(rng, 2, 4);
    const StepKernel w = ft::random_graphon(rng, ft::uniform_int(rng, 1, 4));
    const int x = ft::uniform_int(rng, 0, w.parts() - 1);
    const int y = ft::uniform_int(rng, 0, w.parts() - 1);
    const int a = ft::uniform_int(rng, 0, k - 1);
    const int b = (a + ft::uniform_int(rng, 1, k - 1)) % k;
    double total = 0.0;
    for (std::uint64_t f = 0; f <= graph::full_mask(k); ++f) {
      const double d = rooted_density(RootedPairGraph::make(GraphCode::make(k, f), a, b), w, x, y);
      CHECK(std::abs(d - ft::literal_rooted_density(k, f, a, b, w, x, y)) <= 1e-14);
      total += d;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("velocity worked examples") {
  const double p = 0.37;
  CHECK(velocity(rules::triangle_removal(), StepKernel::constant(p)).value(0, 0) ==
        doctest::Approx(-6 * p * p * p).epsilon(1e-14));
  CHECK(std::abs(velocity(rules::complementing(3), StepKernel::constant(0.5)).value(0, 0)) <= 1e-15);
  CHECK(velocity(rules::complementing(3), StepKernel::constant(p)).value(0, 0) ==
        doctest::Approx(6 * (1 - 2 * p)).epsilon(1e-14));
  ft::Engine rng(1);
  const StepKernel w = ft::random_graphon(rng, 3);
  CHECK(max_abs(velocity(Rule(4), w)) == 0.0);
  CHECK(VelocityOperator(Rule(3)).is_zero());
}

TEST_CASE("aggregated velocity equals the literal double sum") {
  ft::Engine rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = ft::uniform_int(rng, 2, 4);
    const Rule rule = ft::random_rule(rng, k, ft::uniform_int(rng, 1, 10));
    const StepKernel w = ft::random_graphon(rng, ft::uniform_int(rng, 1, 4));
    const StepKernel v = velocity(rule, w);
    for (int x = 0; x < w.parts(); ++x) {
      for (int y = 0; y < w.parts(); ++y) {
        CHECK(std::abs(v.value(x, y) - ft::literal_velocity(rule, w, x, y)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("equivalent rules have equal velocities") {
  ft::Engine rng(44);
  const Rule half = rules::ignorant(4, {{63, Rational(1, 2)}, {0, Rational(1, 2)}});
  const Rule star = rules::ignorant(4, {{11, Rational(1)}});
  const Rule tr = rules::triangle_removal();
  const Rule lifted = lift(tr, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const StepKernel w = ft::random_graphon(rng, ft::uniform_int(rng, 1, 4));
    CHECK(max_abs_diff(velocity(half, w), velocity(star, w)) <= 1e-12);
    CHECK(max_abs_diff(velocity(tr, w), velocity(lifted, w)) <= 1e-12);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Rule rule = ft::random_rule(rng, 3, 4);
    const StepKernel w = ft::random_graphon(rng, 3);
    CHECK(max_abs_diff(velocity(rule, w), velocity(symmetrize(rule), w)) <= 1e-12);
  }
}

TEST_CASE("Lipschitz constants") {
  CHECK(lipschitz_constant(1) == 0.0);
  CHECK(lipschitz_constant(2) == 4.0);
  CHECK(lipschitz_constant(3) == 144.0);
}

TEST_CASE("analytic trajectories") {
  const Trajectory tr = integrate(rules::triangle_removal(), StepKernel::constant(0.8), 2.0);
  REQUIRE(tr.times.size() == tr.states.size());
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == 2.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    const double expected = 0.8 / std::sqrt(1.0 + 12.0 * 0.64 * tr.times[s]);
    worst = std::max(worst, std::abs(tr.states[s].value(0, 0) - expected));
  }
  CHECK(worst <= 1e-6);

  const Trajectory cp = integrate(rules::complementing(3), StepKernel::constant(0.1), 1.0);
  worst = 0.0;
  for (std::size_t s = 0; s < cp.times.size(); ++s) {
    const double expected = 0.5 - 0.4 * std::exp(-12.0 * cp.times[s]);
    worst = std::max(worst, std::abs(cp.states[s].value(0, 0) - expected));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("identity trajectories are constant") {
  ft::Engine rng(2);
  const StepKernel w = ft::random_graphon(rng, 3);
  const Trajectory t = integrate(Rule(3), w, 1.0, {.step = 0.1});
  for (const StepKernel& s : t.states) CHECK(max_abs_diff(s, w) == 0.0);
}

TEST_CASE("integration options and errors") {
  const Trajectory t = integrate(rules::triangle_removal(), StepKernel::constant(0.5), 1.0,
                                 {.step = 0.3, .record_every = 2});
  CHECK(t.times.back() == 1.0);
  CHECK(t.step == doctest::Approx(0.25));
  CHECK(t.times.size() == 3);
  const StepKernel bad({1.0}, {{1.5}});
  CHECK_THROWS_AS(integrate(rules::triangle_removal(), bad, 1.0), ContractError);
  CHECK_NOTHROW(integrate(rules::triangle_removal(), bad, 0.1, {.allow_kernel = true}));
  CHECK_THROWS_AS(integrate(rules::triangle_removal(), StepKernel::constant(0.5), -1.0), InputError);
  CHECK_THROWS_AS(integrate(rules::triangle_removal(), StepKernel::constant(0.5), 1.0, {.step = 0.0}), InputError);
  // A step far too large for the dynamics leaves [0, 1].
  CHECK_THROWS_AS(integrate(rules::complementing(3), StepKernel::constant(0.0), 2.0, {.step = 0.5}),
                  IntegrationError);
}

TEST_CASE("states stay graphons and the flow is a semigroup") {
  ft::Engine rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const Rule rule = ft::random_rule(rng, ft::uniform_int(rng, 2, 4), 6);
    const StepKernel w = ft::random_graphon(rng, ft::uniform_int(rng, 1, 3));
    const Trajectory t = integrate(rule, w, 1.0);
    for (const StepKernel& s : t.states) CHECK(s.is_graphon());
    const VelocityOperator op(rule);
    for (double s : {0.1, 0.5}) {
      for (double u : {0.1, 0.5}) {
        const StepKernel direct = evolve(op, w, s + u);
        const StepKernel composed = evolve(op, evolve(op, w, s), u);
        CHECK(max_abs_diff(direct, composed) <= 1e-6);
      }
    }
  }
}

namespace {

RootedGraph complete(int n) {
  RootedGraph g = RootedGraph::with_vertices(n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) g.add_edge(i, j);
  }
  return g;
}

}  // namespace

TEST_CASE("density formula worked examples") {
  RootedGraph base = complete(2);
  base.set_roots({0, 1});
  const DensityFormulaSides sides = density_formula_check(base, {1, 1}, complete(2), {0.5, 0.5}, 0, 1);
  CHECK(sides.numeric == doctest::Approx(1.0));
  CHECK(sides.combinatorial == doctest::Approx(1.0));
  // Two roots but both pinned in one part: the rooted version has one root.
  const DensityFormulaSides same = density_formula_check(base, {1, 1}, complete(2), {0.5, 0.5}, 0, 0);
  CHECK(same.numeric == 0.0);
  CHECK(same.combinatorial == 0.0);

  RootedGraph twins = RootedGraph::with_vertices(2);
  twins.set_roots({0});
  CHECK_THROWS_AS(density_formula_check(base, {1, 1}, twins.unrooted(), {0.5, 0.5}, 0, 1), ContractError);
  CHECK_THROWS_AS(density_formula_check(base, {2, 1}, complete(2), {0.5, 0.5}, 0, 1), ContractError);
}

TEST_CASE("general rooted density agrees with the pair version") {
  ft::Engine rng(46);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = ft::uniform_int(rng, 2, 4);
    const std::uint64_t f = rng() & graph::full_mask(k);
    const StepKernel w = ft::random_graphon(rng, ft::uniform_int(rng, 1, 3));
    const int x = ft::uniform_int(rng, 0, w.parts() - 1);
    const int y = ft::uniform_int(rng, 0, w.parts() - 1);
    const RootedGraph g = RootedGraph::from_code(GraphCode::make(k, f), {0, 1});
    CHECK(std::abs(rooted_density(g, w, {x, y}) -
                   rooted_density(RootedPairGraph::make(GraphCode::make(k, f), 0, 1), w, x, y)) <= 1e-14);
  }
}
