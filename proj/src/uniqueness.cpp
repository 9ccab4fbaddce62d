#include "flipproc/uniqueness.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <vector>

#include "flipproc/equivalence.hpp"
#include "flipproc/error.hpp"

namespace flipproc {

using graph::pair_index;
using graph::PermutationTable;

std::string to_string(UniquenessReason reason) {
  switch (reason) {
    case UniquenessReason::Order2: return "order-2";
    case UniquenessReason::SymmetricDeterministic: return "symmetric-deterministic";
    case UniquenessReason::Witness: return "witness";
  }
  return "witness";
}

namespace {

using Profile = std::vector<int>;

// Orbits of the automorphism group of a drawn graph acting on pairs.
struct DrawnRow {
  std::uint64_t drawn = 0;
  std::vector<std::uint64_t> pair_orbits;  // pair masks, ordered by least pair
  std::vector<std::pair<std::uint64_t, Profile>> support;  // ascending code

  Profile profile(std::uint64_t h) const {
    Profile p;
    p.reserve(pair_orbits.size());
    for (std::uint64_t mask : pair_orbits) p.push_back(std::popcount(h & mask));
    return p;
  }
  int orbit_size(std::size_t i) const { return std::popcount(pair_orbits[i]); }

  const std::uint64_t* find(const Profile& p) const {
    for (const auto& [h, q] : support) {
      if (q == p) return &h;
    }
    return nullptr;
  }

  // Some graph with the given profile: the least pairs of each orbit.
  std::uint64_t realize(const Profile& p) const {
    std::uint64_t h = 0;
    for (std::size_t i = 0; i < pair_orbits.size(); ++i) {
      std::uint64_t rest = pair_orbits[i];
      for (int c = 0; c < p[i]; ++c) {
        h |= rest & (~rest + 1);
        rest &= rest - 1;
      }
    }
    return h;
  }
};

DrawnRow make_row(const Rule& rule, std::uint64_t drawn, const PermutationTable& perms) {
  DrawnRow row;
  row.drawn = drawn;
  const int pairs = graph::num_pairs(rule.order());
  std::vector<std::size_t> stabilizer;
  for (std::size_t s = 0; s < perms.size(); ++s) {
    if (perms.apply(s, drawn) == drawn) stabilizer.push_back(s);
  }
  std::uint64_t seen = 0;
  for (int pr = 0; pr < pairs; ++pr) {
    if ((seen >> pr) & 1U) continue;
    std::uint64_t mask = 0;
    for (std::size_t s : stabilizer) mask |= std::uint64_t{1} << perms.pair_image(s, pr);
    seen |= mask;
    row.pair_orbits.push_back(mask);
  }
  for (const auto& [h, p] : rule.row(drawn)) row.support.emplace_back(h, row.profile(h));
  return row;
}

// Accumulates orbit-level edits on a symmetric rule.
class Perturbation {
 public:
  Perturbation(const Rule& base, const PermutationTable& perms) : rule_(base), perms_(perms) {}

  // Spreads `total` uniformly over the S_k-orbit of (F, H).
  void add_orbit(std::uint64_t f, std::uint64_t h, const Rational& total) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> orbit;
    for (std::size_t s = 0; s < perms_.size(); ++s) orbit.emplace(perms_.apply(s, f), perms_.apply(s, h));
    const Rational share = total / Rational(static_cast<long>(orbit.size()));
    for (const auto& [g, x] : orbit) rule_.adjust(g, x, share);
  }
  void add_entry(std::uint64_t f, std::uint64_t h, const Rational& delta) { rule_.adjust(f, h, delta); }

  Rule result() const { return rule_.normalized(); }

 private:
  Rule rule_;
  const PermutationTable& perms_;
};

std::size_t pair_orbit_count(std::uint64_t f, std::uint64_t h, const PermutationTable& perms) {
  std::set<std::pair<std::uint64_t, std::uint64_t>> orbit;
  for (std::size_t s = 0; s < perms.size(); ++s) orbit.emplace(perms.apply(s, f), perms.apply(s, h));
  return orbit.size();
}

struct Attempt {
  std::string name;
  Rule witness;
};

// |orb(F,H)|·R_{F,H}
Rational orbit_mass(const Rule& rule, const DrawnRow& row, std::uint64_t h, const PermutationTable& perms) {
  return Rational(static_cast<long>(pair_orbit_count(row.drawn, h, perms))) * rule.probability(row.drawn, h);
}

std::optional<Attempt> try_d1(const Rule& rule, const std::vector<DrawnRow>& rows, const PermutationTable& perms) {
  for (const DrawnRow& row : rows) {
    for (std::size_t i = 0; i < row.pair_orbits.size(); ++i) {
      const int size = row.orbit_size(i);
      for (const auto& [h, p] : row.support) {
        if (p[i] < 1 || p[i] > size - 1) continue;
        Profile lower = p;
        Profile upper = p;
        --lower[i];
        ++upper[i];
        const Rational eps = orbit_mass(rule, row, h, perms);
        Perturbation pert(rule, perms);
        pert.add_orbit(row.drawn, h, -eps);
        pert.add_orbit(row.drawn, row.realize(lower), eps / Rational(2));
        pert.add_orbit(row.drawn, row.realize(upper), eps / Rational(2));
        return Attempt{"D1", pert.result()};
      }
    }
  }
  return std::nullopt;
}

std::optional<Attempt> try_d2(const Rule& rule, const std::vector<DrawnRow>& rows, const PermutationTable& perms) {
  for (const DrawnRow& row : rows) {
    for (std::size_t i = 0; i < row.pair_orbits.size(); ++i) {
      const int size = row.orbit_size(i);
      if (size < 2) continue;
      for (const auto& [h0, p0] : row.support) {
        if (p0[i] != 0) continue;
        Profile full = p0;
        full[i] = size;
        const std::uint64_t* h1 = row.find(full);
        if (h1 == nullptr) continue;
        const Rational eps = std::min(orbit_mass(rule, row, h0, perms), orbit_mass(rule, row, *h1, perms));
        Perturbation pert(rule, perms);
        pert.add_orbit(row.drawn, h0, -eps);
        pert.add_orbit(row.drawn, *h1, -eps);
        if (size >= 3) {
          Profile low = p0;
          Profile high = p0;
          low[i] = 1;
          high[i] = size - 1;
          pert.add_orbit(row.drawn, row.realize(low), eps);
          pert.add_orbit(row.drawn, row.realize(high), eps);
        } else {
          Profile mid = p0;
          mid[i] = 1;
          pert.add_orbit(row.drawn, row.realize(mid), Rational(2) * eps);
        }
        return Attempt{"D2", pert.result()};
      }
    }
  }
  return std::nullopt;
}

std::optional<Attempt> try_d3(const Rule& rule, const std::vector<DrawnRow>& rows, const PermutationTable& perms) {
  for (const DrawnRow& row : rows) {
    const std::size_t n = row.pair_orbits.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (row.orbit_size(i) != 1) continue;
      for (std::size_t l = i + 1; l < n; ++l) {
        if (row.orbit_size(l) != 1) continue;
        for (const auto& [h00, p00] : row.support) {
          if (p00[i] != 0 || p00[l] != 0) continue;
          std::uint64_t corner[2][2] = {{h00, 0}, {0, 0}};
          bool complete = true;
          for (int a = 0; a < 2 && complete; ++a) {
            for (int b = 0; b < 2 && complete; ++b) {
              if (a == 0 && b == 0) continue;
              Profile q = p00;
              q[i] = a;
              q[l] = b;
              const std::uint64_t* h = row.find(q);
              complete = h != nullptr;
              if (complete) corner[a][b] = *h;
            }
          }
          if (!complete) continue;
          // Even corners gain mass, odd corners lose it.
          std::optional<Rational> delta;
          Rational odd_bound;
          bool odd_set = false;
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              const Rational m = orbit_mass(rule, row, corner[a][b], perms);
              const bool even = (a + b) % 2 == 0;
              const Rational bound = even ? Rational(1) - m : m;
              if (!delta || bound < *delta) delta = bound;
              if (!even && (!odd_set || m < odd_bound)) {
                odd_bound = m;
                odd_set = true;
              }
            }
          }
          // The even-corner bound can be non-positive when an orbit has more
          // than one element; entries stay below 1 regardless because row
          // sums are preserved, so only non-negativity binds.
          const Rational eps = delta->sign() > 0 ? *delta : odd_bound;
          Perturbation pert(rule, perms);
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
              pert.add_orbit(row.drawn, corner[a][b], (a + b) % 2 == 0 ? eps : -eps);
            }
          }
          return Attempt{"D3", pert.result()};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Attempt> try_d4(const Rule& rule, const std::vector<DrawnRow>& rows, const PermutationTable& perms) {
  for (const DrawnRow& row : rows) {
    for (std::size_t i = 0; i < row.pair_orbits.size(); ++i) {
      if (row.orbit_size(i) != 1) continue;
      for (const auto& [minus, pm] : row.support) {
        if (pm[i] != 0) continue;
        Profile q = pm;
        q[i] = 1;
        const std::uint64_t* plus = row.find(q);
        if (plus == nullptr) continue;
        std::size_t sigma = perms.size();
        for (std::size_t s = 0; s < perms.size(); ++s) {
          if (perms.apply(s, row.drawn) != row.drawn) {
            sigma = s;
            break;
          }
        }
        if (sigma == perms.size()) continue;
        const std::uint64_t other = perms.apply(sigma, row.drawn);
        const std::uint64_t other_plus = perms.apply(sigma, *plus);
        const std::uint64_t other_minus = perms.apply(sigma, minus);
        const Rational eps = std::min({rule.probability(row.drawn, minus), rule.probability(other, other_plus),
                                       Rational(1) - rule.probability(row.drawn, *plus),
                                       Rational(1) - rule.probability(other, other_minus)});
        Perturbation pert(rule, perms);
        pert.add_entry(row.drawn, minus, -eps);
        pert.add_entry(other, other_plus, -eps);
        pert.add_entry(row.drawn, *plus, eps);
        pert.add_entry(other, other_minus, eps);
        return Attempt{"D4", pert.result()};
      }
    }
  }
  return std::nullopt;
}

std::optional<Attempt> try_exchange(const Rule& rule, const std::vector<DrawnRow>& rows,
                                    const PermutationTable& perms) {
  for (const DrawnRow& row : rows) {
    for (std::size_t x = 0; x < row.support.size(); ++x) {
      for (std::size_t y = x + 1; y < row.support.size(); ++y) {
        const auto& [h0, p0] = row.support[x];
        const auto& [h1, p1] = row.support[y];
        std::vector<std::size_t> differ;
        for (std::size_t i = 0; i < p0.size(); ++i) {
          if (p0[i] != p1[i]) differ.push_back(i);
        }
        if (differ.size() < 2) continue;
        const std::uint64_t mask = row.pair_orbits[differ.front()];
        const std::uint64_t g0 = (h0 & ~mask) | (h1 & mask);
        const std::uint64_t g1 = (h1 & ~mask) | (h0 & mask);
        const Rational eps = std::min(orbit_mass(rule, row, h0, perms), orbit_mass(rule, row, h1, perms));
        Perturbation pert(rule, perms);
        pert.add_orbit(row.drawn, h0, -eps);
        pert.add_orbit(row.drawn, h1, -eps);
        pert.add_orbit(row.drawn, g0, eps);
        pert.add_orbit(row.drawn, g1, eps);
        return Attempt{"exchange", pert.result()};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

UniquenessVerdict classify_unique(const Rule& rule, const Limits& limits) {
  rule.require_valid();
  const int k = rule.order();
  UniquenessVerdict verdict;
  if (k == 1) {
    verdict.unique = true;
    verdict.reason = UniquenessReason::SymmetricDeterministic;
    return verdict;
  }
  if (k == 2) {
    verdict.unique = true;
    verdict.reason = UniquenessReason::Order2;
    return verdict;
  }
  limits.require_order(k, "uniqueness classification");

  std::optional<Attempt> attempt;
  if (!is_symmetric(rule)) {
    attempt = Attempt{"symmetrize", symmetrize(rule, limits)};
  } else if (is_deterministic(rule)) {
    verdict.unique = true;
    verdict.reason = UniquenessReason::SymmetricDeterministic;
    return verdict;
  } else {
    const PermutationTable& perms = PermutationTable::get(k);
    std::vector<DrawnRow> rows;
    const Rule base = rule.normalized();
    for (const auto& [from, r] : base.explicit_rows()) {
      if (r.size() > 1) rows.push_back(make_row(rule, from, perms));
    }
    for (auto* builder : {&try_d1, &try_d2, &try_d3, &try_d4, &try_exchange}) {
      attempt = builder(rule, rows, perms);
      if (attempt) break;
    }
    if (!attempt) throw InternalError("no witness construction applies to a symmetric non-deterministic rule");
  }

  const Rule& witness = attempt->witness;
  if (!witness.validate().ok() || witness == rule || !compare(rule, witness, limits).equivalent) {
    throw InternalError("witness from construction " + attempt->name + " failed verification");
  }
  verdict.unique = false;
  verdict.reason = UniquenessReason::Witness;
  verdict.witness = witness;
  verdict.construction = attempt->name;
  return verdict;
}

}  // namespace flipproc
