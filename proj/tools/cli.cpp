#include "cli.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "flipproc/dynamics.hpp"
#include "flipproc/equivalence.hpp"
#include "flipproc/error.hpp"
#include "flipproc/json_io.hpp"
#include "flipproc/named_rules.hpp"
#include "flipproc/orbit_classes.hpp"
#include "flipproc/simulator.hpp"
#include "flipproc/uniqueness.hpp"

namespace flipproc::cli {

namespace {

using io::Json;

constexpr const char* kConjectureBanner =
    "CONJECTURE: orbit-sum equality of rule entries is the conjectured criterion for equal flip "
    "process distributions; it is not a proven theorem.";

struct Output {
  std::ostream& out;
  std::string path;

  void emit(const std::string& text) const {
    if (path.empty()) {
      out << text;
    } else {
      io::write_text_file(path, text);
    }
  }
  void emit(const Json& j) const { emit(j.dump(2) + "\n"); }
};

Rule load_rule(const std::string& path) { return io::rule_from_json(io::read_json_file(path)); }
StepKernel load_kernel(const std::string& path) { return io::kernel_from_json(io::read_json_file(path)); }

// "code=p" pairs for ignorant distributions.
Rule::Row parse_distribution(const std::vector<std::string>& items) {
  Rule::Row row;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("distribution entries look like CODE=P, got '" + item + "'");
    std::uint64_t code = 0;
    try {
      std::size_t used = 0;
      code = std::stoull(item.substr(0, eq), &used);
      if (used != eq) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw InputError("invalid graph code in '" + item + "'");
    }
    row[code] += Rational::parse(item.substr(eq + 1));
  }
  return row;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flip-process rule equivalence, graphon trajectories and simulation"};
  app.name("flipproc");
  app.require_subcommand(1);

  int cap = 0;
  app.add_option("--cap", cap, "Enumeration cap on the rule order (overrides FLIPPROC_CAP)")
      ->check(CLI::Range(1, Limits::kHardClassCap));

  std::function<int(const Limits&)> action;
  std::string out_path;

  // classes
  int classes_k = 0;
  auto* classes = app.add_subcommand("classes", "List the isomorphism classes of pair-rooted graphs of order k");
  classes->add_option("--k", classes_k, "Order")->required();
  classes->callback([&] {
    action = [&](const Limits& limits) {
      Json list = Json::array();
      for (const auto& cls : graph::enumerate_classes(classes_k, limits)) {
        Json entry = io::class_to_json(cls);
        entry["size"] = cls.size;
        list.push_back(std::move(entry));
      }
      Output{out, ""}.emit(list);
      return kSuccess;
    };
  });

  // coeffs
  std::string rule_path;
  std::string rule_path2;
  auto* coeffs = app.add_subcommand("coeffs", "Coefficient certificate of a rule");
  coeffs->add_option("RULE", rule_path, "Rule JSON file")->required();
  coeffs->add_option("--out", out_path, "Write to file instead of stdout");
  coeffs->callback([&] {
    action = [&](const Limits& limits) {
      Output{out, out_path}.emit(io::certificate_to_json(coeff_vector(load_rule(rule_path), limits)));
      return kSuccess;
    };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "Check that a rule file is row-stochastic");
  validate->add_option("RULE", rule_path, "Rule JSON file")->required();
  validate->callback([&] {
    action = [&](const Limits&) {
      const Rule rule = io::rule_from_json(io::read_json_file(rule_path), false);
      const ValidationReport report = rule.validate();
      Json problems = Json::array();
      for (const auto& p : report.problems) problems.push_back(p);
      Output{out, ""}.emit(Json{{"ok", report.ok()}, {"problems", std::move(problems)}});
      return report.ok() ? kSuccess : kNegative;
    };
  });

  // compare
  bool dilation = false;
  auto* cmp = app.add_subcommand("compare", "Decide whether two rules have the same trajectories");
  cmp->add_option("R1", rule_path, "First rule")->required();
  cmp->add_option("R2", rule_path2, "Second rule")->required();
  cmp->add_flag("--dilation", dilation, "Report C with a(R1) = C a(R2) instead");
  cmp->add_option("--out", out_path, "Write to file instead of stdout");
  cmp->callback([&] {
    action = [&](const Limits& limits) {
      const Rule r1 = load_rule(rule_path);
      const Rule r2 = load_rule(rule_path2);
      if (dilation) {
        const auto factor = dilation_factor(r1, r2, limits);
        Json j{{"dilation", factor ? Json(factor->to_string()) : Json(nullptr)}};
        Output{out, out_path}.emit(j);
        return factor ? kSuccess : kNegative;
      }
      const EquivalenceVerdict v = compare(r1, r2, limits);
      Output{out, out_path}.emit(io::verdict_to_json(v));
      if (!v.equivalent) {
        const auto& c = v.first_difference->canon;
        err << "not equivalent: class (" << c.graph.bits << "," << c.a + 1 << "," << c.b + 1 << ") differs\n";
      } else {
        err << "equivalent\n";
      }
      return v.equivalent ? kSuccess : kNegative;
    };
  });

  // lift
  int lift_to = 0;
  auto* lft = app.add_subcommand("lift", "Lift a rule to a larger order");
  lft->add_option("RULE", rule_path, "Rule JSON file")->required();
  lft->add_option("--to", lift_to, "Target order")->required();
  lft->add_option("--out", out_path, "Write to file instead of stdout");
  lft->callback([&] {
    action = [&](const Limits& limits) {
      Output{out, out_path}.emit(io::rule_to_json(lift(load_rule(rule_path), lift_to, limits)));
      return kSuccess;
    };
  });

  // symmetrize
  auto* sym = app.add_subcommand("symmetrize", "Average a rule over simultaneous relabelings");
  sym->add_option("RULE", rule_path, "Rule JSON file")->required();
  sym->add_option("--out", out_path, "Write to file instead of stdout");
  sym->callback([&] {
    action = [&](const Limits& limits) {
      Output{out, out_path}.emit(io::rule_to_json(symmetrize(load_rule(rule_path), limits)));
      return kSuccess;
    };
  });

  // unique
  std::string witness_path;
  auto* uniq = app.add_subcommand("unique", "Decide whether a rule is the only one with its trajectories");
  uniq->add_option("RULE", rule_path, "Rule JSON file")->required();
  uniq->add_option("--witness", witness_path, "Write the witness rule here when not unique");
  uniq->callback([&] {
    action = [&](const Limits& limits) {
      const UniquenessVerdict v = classify_unique(load_rule(rule_path), limits);
      if (v.witness && !witness_path.empty()) {
        io::write_text_file(witness_path, io::rule_to_json(*v.witness).dump(2) + "\n");
      }
      Output{out, ""}.emit(io::uniqueness_to_json(v));
      return v.unique ? kSuccess : kNegative;
    };
  });

  // k1
  auto* k1 = app.add_subcommand("k1", "Conjectural orbit-sum test for equal flip process distributions");
  k1->add_option("R1", rule_path, "First rule")->required();
  k1->add_option("R2", rule_path2, "Second rule")->required();
  k1->callback([&] {
    action = [&](const Limits&) {
      err << kConjectureBanner << "\n";
      const bool holds = check_k1(load_rule(rule_path), load_rule(rule_path2));
      Output{out, ""}.emit(Json{{"status", "conjecture"}, {"orbit_sums_equal", holds}});
      return holds ? kSuccess : kNegative;
    };
  });

  // velocity
  std::string kernel_path;
  auto* vel = app.add_subcommand("velocity", "Velocity of a rule at a step kernel");
  vel->add_option("RULE", rule_path, "Rule JSON file")->required();
  vel->add_option("W", kernel_path, "Step kernel JSON file")->required();
  vel->add_option("--out", out_path, "Write to file instead of stdout");
  vel->callback([&] {
    action = [&](const Limits& limits) {
      Output{out, out_path}.emit(io::kernel_to_json(velocity(load_rule(rule_path), load_kernel(kernel_path), limits)));
      return kSuccess;
    };
  });

  // integrate
  double t_max = 0.0;
  IntegrateOptions integrate_options;
  auto* integ = app.add_subcommand("integrate", "Integrate the trajectory from a step graphon");
  integ->add_option("RULE", rule_path, "Rule JSON file")->required();
  integ->add_option("W", kernel_path, "Initial step kernel JSON file")->required();
  integ->add_option("--t-max", t_max, "Time horizon")->required();
  integ->add_option("--dt", integrate_options.step, "RK4 step size")->capture_default_str();
  integ->add_option("--record-every", integrate_options.record_every, "Emit every n-th step")
      ->capture_default_str();
  integ->add_flag("--expert-kernel", integrate_options.allow_kernel,
                  "Allow a start outside [0,1]; no range checks, no domain guarantees");
  integ->add_option("--out", out_path, "CSV file (default stdout)");
  integ->callback([&] {
    action = [&](const Limits& limits) {
      const Trajectory tr = integrate(load_rule(rule_path), load_kernel(kernel_path), t_max, integrate_options, limits);
      std::ostringstream csv;
      io::write_trajectory_csv(csv, tr);
      Output{out, out_path}.emit(csv.str());
      return kSuccess;
    };
  });

  // simulate / transference share their options
  sim::SimConfig sim_config;
  std::string w0_path;
  double tolerance = 0.05;
  double min_pass_fraction = 1.0;
  auto add_sim_options = [&](CLI::App* sub) {
    sub->add_option("RULE", rule_path, "Rule JSON file")->required();
    sub->add_option("--n", sim_config.n, "Number of vertices")->required();
    sub->add_option("--w0", w0_path, "Initial step graphon JSON file")->required();
    sub->add_option("--time", sim_config.horizon, "Horizon T; the process runs floor(T n^2) steps")->required();
    sub->add_option("--seed", sim_config.seed, "Master seed")->capture_default_str();
    sub->add_option("--max-n", sim_config.max_vertices, "Vertex cap")->capture_default_str();
    sub->add_option("--intervals", sim_config.intervals, "Sampling intervals")->capture_default_str();
  };
  auto* simulate = app.add_subcommand("simulate", "Run the flip process and compare with the trajectory");
  add_sim_options(simulate);
  simulate->add_option("--runs", sim_config.runs, "Independent runs")->capture_default_str();
  simulate->add_option("--out", out_path, "CSV file (default stdout)");
  simulate->callback([&] {
    action = [&](const Limits& limits) {
      sim_config.initial = load_kernel(w0_path);
      const sim::SimResult result = sim::run(load_rule(rule_path), sim_config, limits);
      std::ostringstream csv;
      io::write_simulation_csv(csv, result);
      Output{out, out_path}.emit(csv.str());
      return kSuccess;
    };
  });

  auto* transfer = app.add_subcommand("transference", "Check that simulated densities track the trajectory");
  add_sim_options(transfer);
  transfer->add_option("--eps", tolerance, "Tolerance on the max block deviation")->capture_default_str();
  transfer->add_option("--runs", sim_config.runs, "Independent runs")->capture_default_str();
  transfer->add_option("--min-pass-fraction", min_pass_fraction, "Fraction of runs that must pass")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  transfer->add_option("--out", out_path, "Write the report to a file instead of stdout");
  transfer->callback([&] {
    action = [&](const Limits& limits) {
      sim_config.initial = load_kernel(w0_path);
      const auto report =
          sim::transference_check(load_rule(rule_path), sim_config, tolerance, min_pass_fraction, limits);
      Output{out, out_path}.emit(io::transference_to_json(report));
      return report.passed ? kSuccess : kNegative;
    };
  });

  // named
  std::string family;
  int named_k = 0;
  std::string threshold;
  std::vector<std::string> dist;
  auto* named = app.add_subcommand("named", "Write a rule from a named family");
  named->add_option("FAMILY", family, "Rule family")->required()->check(CLI::IsMember(rules::family_names()));
  named->add_option("--k", named_k, "Order")->required();
  named->add_option("--threshold", threshold, "Edge-count threshold of the extremist rule");
  named->add_option("--dist", dist, "Ignorant distribution as CODE=P entries");
  named->add_option("--out", out_path, "Write to file instead of stdout");
  named->callback([&] {
    action = [&](const Limits& limits) {
      rules::NamedParams params;
      if (!threshold.empty()) params.threshold = Rational::parse(threshold);
      params.distribution = parse_distribution(dist);
      Output{out, out_path}.emit(io::rule_to_json(rules::make_named(family, named_k, params, limits)));
      return kSuccess;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    Limits limits = Limits::from_environment();
    if (cap > 0) limits.class_cap = cap;
    return action(limits);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ContractError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << "\n";
    return kResourceCap;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << "\n";
    return kInternal;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace flipproc::cli
