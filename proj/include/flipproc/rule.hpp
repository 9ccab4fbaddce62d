#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flipproc/graph_code.hpp"
#include "flipproc/rational.hpp"

namespace flipproc {

/// Outcome of Rule::validate. Problems are human-readable, one per offending row.
struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  std::string summary() const;
};

/// A row-stochastic replacement matrix over labelled graphs on [k], stored
/// sparsely. Rows never written default to the identity row F -> F.
class Rule {
 public:
  /// Replacement distribution of one drawn graph, keyed by replacement code.
  using Row = std::map<std::uint64_t, Rational>;
  using Rows = std::map<std::uint64_t, Row>;

  /// The identity rule of order k.
  explicit Rule(int order);

  int order() const { return order_; }

  /// Stores R[from][to] = p verbatim. A row first touched by set() starts
  /// empty, so a caller building a full row must supply all of its mass.
  void set(std::uint64_t from, std::uint64_t to, const Rational& p);
  /// Adds delta to R[from][to], starting from the identity row if the row is
  /// still implicit.
  void adjust(std::uint64_t from, std::uint64_t to, const Rational& delta);
  /// Replaces a whole row.
  void set_row(std::uint64_t from, Row row);

  /// Row of `from`, with the implicit identity made explicit. Zero entries are
  /// omitted.
  Row row(std::uint64_t from) const;
  Rational probability(std::uint64_t from, std::uint64_t to) const;
  /// Rows that were written, as stored.
  const Rows& explicit_rows() const { return rows_; }

  /// Same matrix with zero entries and identity rows dropped. Two rules are
  /// equal iff their normalized forms are.
  Rule normalized() const;

  ValidationReport validate() const;
  /// Throws InputError carrying the report unless validate() is ok.
  const Rule& require_valid() const;

  /// σ·R with (σ·R)_{σF,σH} = R_{F,H}.
  Rule permuted(const graph::Permutation& sigma) const;

  friend bool operator==(const Rule& a, const Rule& b);

 private:
  void check_code(std::uint64_t code) const;

  int order_;
  Rows rows_;
};

/// R_{σF,σH} = R_{F,H} for all σ; checked on the adjacent transpositions.
bool is_symmetric(const Rule& rule);

/// Every row is a point mass.
bool is_deterministic(const Rule& rule);

/// If every row (explicit or implicit) is the same distribution, the expected
/// number of edges of the replacement graph; otherwise none.
std::optional<Rational> ignorant_edge_count(const Rule& rule);

}  // namespace flipproc
