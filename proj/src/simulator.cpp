#include "flipproc/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "flipproc/error.hpp"

namespace flipproc::sim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run) {
  return splitmix64(master + (run + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

Adjacency::Adjacency(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64) {
  if (n < 0) throw InputError("negative vertex count");
  rows_.assign(static_cast<std::size_t>(n) * words_, 0);
}

void Adjacency::set_edge(int u, int v, bool present) {
  const std::uint64_t bu = std::uint64_t{1} << (u & 63);
  const std::uint64_t bv = std::uint64_t{1} << (v & 63);
  auto& wu = rows_[row_offset(v) + static_cast<std::size_t>(u >> 6)];
  auto& wv = rows_[row_offset(u) + static_cast<std::size_t>(v >> 6)];
  if (present) {
    wu |= bu;
    wv |= bv;
  } else {
    wu &= ~bu;
    wv &= ~bv;
  }
}

std::uint64_t Adjacency::edge_count() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : rows_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total / 2;
}

int Adjacency::degree_in_range(int u, int begin, int end) const {
  int total = 0;
  const std::size_t base = row_offset(u);
  for (int w = begin >> 6; begin < end && w <= (end - 1) >> 6; ++w) {
    std::uint64_t word = rows_[base + static_cast<std::size_t>(w)];
    const int lo = std::max(begin, w * 64) - w * 64;
    const int hi = std::min(end, w * 64 + 64) - w * 64;
    if (lo > 0) word &= ~std::uint64_t{0} << lo;
    if (hi < 64) word &= (std::uint64_t{1} << hi) - 1;
    total += std::popcount(word);
  }
  return total;
}

std::vector<std::pair<int, int>> Adjacency::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (has_edge(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

FlipSampler::FlipSampler(const Rule& rule, int n) : k_(rule.order()), n_(n) {
  if (n < k_) throw InputError("the process needs at least " + std::to_string(k_) + " vertices");
  if (graph::num_pairs(k_) > 24) throw ResourceError("rule order too large for the simulator");
  index_.resize(static_cast<std::size_t>(n));
  std::iota(index_.begin(), index_.end(), 0);
  tuple_.resize(static_cast<std::size_t>(k_));
  row_slot_.assign(std::size_t{1} << graph::num_pairs(k_), -1);
  const Rule base = rule.normalized();
  for (const auto& [from, row] : base.explicit_rows()) {
    CumulativeRow c;
    double acc = 0.0;
    for (const auto& [to, p] : row) {
      acc += p.to_double();
      c.targets.push_back(to);
      c.cumulative.push_back(acc);
    }
    c.cumulative.back() = 1.0;
    row_slot_[from] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(c));
  }
}

const std::vector<int>& FlipSampler::step(Adjacency& g, Rng& rng) {
  for (int i = 0; i < k_; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(n_ - i));
    std::swap(index_[static_cast<std::size_t>(i)], index_[j]);
    tuple_[static_cast<std::size_t>(i)] = index_[static_cast<std::size_t>(i)];
  }
  std::uint64_t drawn = 0;
  for (int j = 1; j < k_; ++j) {
    for (int i = 0; i < j; ++i) {
      if (g.has_edge(tuple_[static_cast<std::size_t>(i)], tuple_[static_cast<std::size_t>(j)])) {
        drawn |= std::uint64_t{1} << graph::pair_index(i, j);
      }
    }
  }
  const int slot = row_slot_[drawn];
  if (slot < 0) return tuple_;
  const CumulativeRow& row = rows_[static_cast<std::size_t>(slot)];
  const double u = rng.uniform01();
  const auto it = std::upper_bound(row.cumulative.begin(), row.cumulative.end(), u);
  const std::uint64_t replacement = row.targets[static_cast<std::size_t>(it - row.cumulative.begin())];
  const std::uint64_t changed = replacement ^ drawn;
  for (std::uint64_t rest = changed; rest != 0; rest &= rest - 1) {
    const int pr = std::countr_zero(rest);
    const auto [i, j] = graph::pair_vertices(pr);
    g.set_edge(tuple_[static_cast<std::size_t>(i)], tuple_[static_cast<std::size_t>(j)], (replacement >> pr) & 1U);
  }
  return tuple_;
}

std::vector<int> part_sizes(const std::vector<double>& weights, int n) {
  std::vector<int> sizes(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(n);
    sizes[i] = static_cast<int>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r % remainders.size()].second];
  return sizes;
}

namespace {

std::vector<int> part_starts(const std::vector<int>& sizes) {
  std::vector<int> starts(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) starts[i + 1] = starts[i] + sizes[i];
  return starts;
}

}  // namespace

Adjacency instantiate(const StepKernel& w, const std::vector<int>& sizes, Rng& rng) {
  const std::vector<int> starts = part_starts(sizes);
  const int n = starts.back();
  Adjacency g(n);
  std::vector<int> part_of(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    for (int v = starts[p]; v < starts[p + 1]; ++v) part_of[static_cast<std::size_t>(v)] = static_cast<int>(p);
  }
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double p = w.value(part_of[static_cast<std::size_t>(u)], part_of[static_cast<std::size_t>(v)]);
      if (rng.uniform01() < p) g.set_edge(u, v, true);
    }
  }
  return g;
}

StepKernel block_densities(const Adjacency& g, const std::vector<int>& sizes) {
  const std::vector<int> starts = part_starts(sizes);
  const int m = static_cast<int>(sizes.size());
  std::vector<double> weights(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    weights[i] = static_cast<double>(sizes[i]) / static_cast<double>(starts.back());
  }
  StepKernel out(weights);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      std::uint64_t ends = 0;
      for (int u = starts[static_cast<std::size_t>(i)]; u < starts[static_cast<std::size_t>(i) + 1]; ++u) {
        ends += static_cast<std::uint64_t>(
            g.degree_in_range(u, starts[static_cast<std::size_t>(j)], starts[static_cast<std::size_t>(j) + 1]));
      }
      const double si = sizes[static_cast<std::size_t>(i)];
      const double sj = sizes[static_cast<std::size_t>(j)];
      const double pairs = i == j ? si * (si - 1.0) / 2.0 : si * sj;
      const double edges = i == j ? static_cast<double>(ends) / 2.0 : static_cast<double>(ends);
      out.set(i, j, pairs > 0.0 ? edges / pairs : std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

namespace {

struct Prepared {
  std::vector<int> sizes;
  StepKernel start;  // block values of the initial description
  std::vector<double> times;
  std::vector<std::uint64_t> sample_steps;
  std::optional<VelocityOperator> op;
};

Prepared prepare(const Rule& rule, const SimConfig& config, const Limits& limits) {
  if (config.n > config.max_vertices) {
    throw ResourceError("n = " + std::to_string(config.n) + " exceeds the vertex cap " +
                        std::to_string(config.max_vertices));
  }
  if (config.n < rule.order()) throw InputError("n must be at least the rule order");
  if (!std::isfinite(config.horizon) || config.horizon < 0.0) throw InputError("horizon must be non-negative");
  if (config.runs < 1) throw InputError("at least one run is required");
  if (config.intervals < 1) throw InputError("at least one sampling interval is required");

  Prepared p;
  if (config.initial_edges) {
    p.sizes = {config.n};
    Adjacency g(config.n);
    for (auto [u, v] : *config.initial_edges) {
      if (u < 0 || v < 0 || u >= config.n || v >= config.n || u == v) throw InputError("invalid initial edge");
      g.set_edge(u, v, true);
    }
    p.start = block_densities(g, p.sizes);
  } else {
    if (config.initial.parts() == 0) throw InputError("missing initial kernel");
    if (!config.initial.is_graphon()) throw InputError("the initial kernel must be a graphon");
    p.sizes = part_sizes(config.initial.weights(), config.n);
    std::vector<double> actual(p.sizes.size());
    for (std::size_t i = 0; i < actual.size(); ++i) actual[i] = static_cast<double>(p.sizes[i]) / config.n;
    std::vector<std::vector<double>> values(actual.size(), std::vector<double>(actual.size()));
    for (int i = 0; i < config.initial.parts(); ++i) {
      for (int j = 0; j < config.initial.parts(); ++j) {
        values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = config.initial.value(i, j);
      }
    }
    p.start = StepKernel(actual, values);
  }

  const double n2 = static_cast<double>(config.n) * static_cast<double>(config.n);
  p.op.emplace(rule, limits);
  for (int s = 0; s <= config.intervals; ++s) {
    const double t = config.horizon * s / config.intervals;
    p.times.push_back(t);
    p.sample_steps.push_back(static_cast<std::uint64_t>(std::floor(t * n2)));
  }
  return p;
}

/// Trajectory from the block densities of G_0, sampled at p.times. A block
/// without pairs keeps the value of the initial description.
std::vector<StepKernel> reference_trajectory(const SimConfig& config, const Prepared& p, const Adjacency& g0) {
  StepKernel state = block_densities(g0, p.sizes);
  for (int i = 0; i < state.parts(); ++i) {
    for (int j = i; j < state.parts(); ++j) {
      if (std::isnan(state.value(i, j))) state.set(i, j, p.start.value(i, j));
    }
  }
  std::vector<StepKernel> out{state};
  for (std::size_t s = 1; s < p.times.size(); ++s) {
    state = evolve(*p.op, state, config.horizon / config.intervals, config.integrate);
    out.push_back(state);
  }
  return out;
}

struct RunOutput {
  std::vector<BlockSample> samples;
  std::vector<double> max_deviation;
};

RunOutput simulate_one(const Rule& rule, const SimConfig& config, const Prepared& p, int run_index) {
  Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(run_index)));
  Adjacency g(config.n);
  if (config.initial_edges) {
    for (auto [u, v] : *config.initial_edges) g.set_edge(u, v, true);
  } else {
    g = instantiate(p.start, p.sizes, rng);
  }
  const std::vector<StepKernel> reference = reference_trajectory(config, p, g);
  FlipSampler sampler(rule, config.n);
  RunOutput out;
  std::uint64_t done = 0;
  for (std::size_t s = 0; s < p.times.size(); ++s) {
    for (; done < p.sample_steps[s]; ++done) sampler.step(g, rng);
    const StepKernel observed = block_densities(g, p.sizes);
    double worst = 0.0;
    for (int i = 0; i < observed.parts(); ++i) {
      for (int j = i; j < observed.parts(); ++j) {
        const double d = observed.value(i, j);
        if (std::isnan(d)) continue;
        const double ref = reference[s].value(i, j);
        worst = std::max(worst, std::abs(d - ref));
        out.samples.push_back(BlockSample{run_index, p.times[s], i, j, d, ref});
      }
    }
    out.max_deviation.push_back(worst);
  }
  return out;
}

}  // namespace

SimResult run(const Rule& rule, const SimConfig& config, const Limits& limits) {
  rule.require_valid();
  const Prepared p = prepare(rule, config, limits);
  std::vector<RunOutput> outputs(static_cast<std::size_t>(config.runs));
  const unsigned workers = std::max(1U, std::min(std::thread::hardware_concurrency(),
                                                 static_cast<unsigned>(config.runs)));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int r = static_cast<int>(w); r < config.runs; r += static_cast<int>(workers)) {
          outputs[static_cast<std::size_t>(r)] = simulate_one(rule, config, p, r);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimResult result;
  result.times = p.times;
  result.sizes = p.sizes;
  for (auto& o : outputs) {
    result.samples.insert(result.samples.end(), o.samples.begin(), o.samples.end());
    result.max_deviation.push_back(std::move(o.max_deviation));
  }
  return result;
}

TransferenceReport transference_check(const Rule& rule, const SimConfig& config, double tolerance,
                                      double min_pass_fraction, const Limits& limits) {
  if (!(tolerance >= 0.0)) throw InputError("tolerance must be non-negative");
  TransferenceReport report;
  report.tolerance = tolerance;
  report.result = run(rule, config, limits);
  for (const auto& per_time : report.result.max_deviation) {
    const bool ok = std::all_of(per_time.begin(), per_time.end(), [&](double d) { return d <= tolerance; });
    report.run_passed.push_back(ok);
    if (ok) ++report.runs_passed;
  }
  report.passed = static_cast<double>(report.runs_passed) >= min_pass_fraction * config.runs - 1e-12;
  return report;
}

}  // namespace flipproc::sim
