#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "flipproc/dynamics.hpp"
#include "flipproc/rule.hpp"
#include "flipproc/step_kernel.hpp"

namespace flipproc::sim {

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of run r: splitmix64(master + (r + 1) · 0x9E3779B97F4A7C15).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run);

/// mt19937_64 with fixed integer and real conversions, so a seed yields the
/// same stream on every platform (std distributions are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Symmetric adjacency of a simple graph on n vertices, one bitset row per
/// vertex.
class Adjacency {
 public:
  explicit Adjacency(int n);

  int size() const { return n_; }
  bool has_edge(int u, int v) const {
    return (rows_[row_offset(u) + static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1U;
  }
  void set_edge(int u, int v, bool present);
  std::uint64_t edge_count() const;
  /// Neighbours of u among vertices [begin, end).
  int degree_in_range(int u, int begin, int end) const;
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::size_t row_offset(int u) const { return static_cast<std::size_t>(u) * words_; }

  int n_;
  std::size_t words_;
  std::vector<std::uint64_t> rows_;
};

/// One flip step at a time, with the replacement rows precomputed in floating
/// point.
class FlipSampler {
 public:
  FlipSampler(const Rule& rule, int n);

  int order() const { return k_; }
  /// Draws an ordered k-tuple of distinct vertices, reads the induced graph F
  /// in tuple order, samples H from row F and writes H onto the tuple's pairs.
  /// Returns the tuple.
  const std::vector<int>& step(Adjacency& g, Rng& rng);

 private:
  struct CumulativeRow {
    std::vector<std::uint64_t> targets;
    std::vector<double> cumulative;
  };

  int k_;
  int n_;
  std::vector<int> index_;
  std::vector<int> tuple_;
  /// Row slot per drawn code; -1 means the identity row.
  std::vector<int> row_slot_;
  std::vector<CumulativeRow> rows_;
};

/// Part sizes floor(z_i n) plus one extra vertex for each of the largest
/// remainders (ties to the lower index).
std::vector<int> part_sizes(const std::vector<double>& weights, int n);

/// W-random graph: vertices are assigned to parts contiguously; each pair is an
/// edge independently with its block probability.
Adjacency instantiate(const StepKernel& w, const std::vector<int>& sizes, Rng& rng);

/// Edge densities between parts; within a part, over distinct pairs. Blocks
/// without pairs are NaN.
StepKernel block_densities(const Adjacency& g, const std::vector<int>& sizes);

inline constexpr int kDefaultMaxVertices = 5000;

struct SimConfig {
  int n = 0;
  StepKernel initial;
  /// Optional explicit starting graph; the partition is then a single part.
  std::optional<std::vector<std::pair<int, int>>> initial_edges;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  int runs = 1;
  /// Sample times are i·horizon/intervals for i = 0..intervals.
  int intervals = 10;
  int max_vertices = kDefaultMaxVertices;
  IntegrateOptions integrate;
};

struct BlockSample {
  int run = 0;
  double t = 0.0;
  int block_i = 0;
  int block_j = 0;
  double density = 0.0;
  double reference = 0.0;
};

struct SimResult {
  std::vector<double> times;
  std::vector<int> sizes;
  /// Ordered by run, time, then block.
  std::vector<BlockSample> samples;
  /// max_dev[run][time]: largest |density - reference| over blocks.
  std::vector<std::vector<double>> max_deviation;
};

/// Runs the process `runs` times. Each run measures its block densities
/// against the trajectory integrated from the block densities of its own
/// starting graph G_0, on the realised part proportions. Deterministic in
/// (config, seed).
SimResult run(const Rule& rule, const SimConfig& config, const Limits& limits = {});

struct TransferenceReport {
  double tolerance = 0.0;
  SimResult result;
  std::vector<bool> run_passed;
  int runs_passed = 0;
  bool passed = false;
};

/// Passes when at least min_pass_fraction of runs keep every sampled block
/// within `tolerance` of the trajectory.
TransferenceReport transference_check(const Rule& rule, const SimConfig& config, double tolerance,
                                      double min_pass_fraction = 1.0, const Limits& limits = {});

}  // namespace flipproc::sim
