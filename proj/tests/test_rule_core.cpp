#include <doctest.h>

#include "flipproc/equivalence.hpp"
#include "flipproc/error.hpp"
#include "flipproc/json_io.hpp"
#include "flipproc/named_rules.hpp"
#include "flipproc/rational.hpp"
#include "flipproc/rule.hpp"
#include "support.hpp"

using namespace flipproc;
namespace ft = flipproc::testing;

TEST_CASE("rationals parse exactly and stay reduced") {
  CHECK(Rational::parse("2/4") == Rational(1, 2));
  CHECK(Rational::parse("2/4").to_string() == "1/2");
  CHECK(Rational::parse("0.125") == Rational(1, 8));
  CHECK(Rational::parse("-3.5e-2") == Rational(-7, 200));
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational(6, -4).to_string() == "-3/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
  CHECK_THROWS_AS(Rational::parse("abc"), InputError);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), InputError);
}

TEST_CASE("validation worked examples") {
  CHECK(Rule(3).validate().ok());
  Rule half(3);
  half.set(7, 0, Rational(1, 2));
  const ValidationReport report = half.validate();
  REQUIRE(!report.ok());
  CHECK(report.summary().find("1/2") != std::string::npos);
  CHECK_THROWS_AS(half.require_valid(), InputError);

  Rule negative(2);
  negative.set(0, 0, Rational(3, 2));
  negative.set(0, 1, Rational(-1, 2));
  CHECK(!negative.validate().ok());

  Rule out_of_range(2);
  CHECK_THROWS_AS(out_of_range.set(2, 0, Rational(1)), InputError);
  CHECK(rules::triangle_removal().validate().ok());
}

TEST_CASE("adjust starts from the identity row") {
  Rule rule(3);
  rule.adjust(7, 7, Rational(-1, 2));
  rule.adjust(7, 0, Rational(1, 2));
  CHECK(rule.validate().ok());
  CHECK(rule.probability(7, 7) == Rational(1, 2));
  CHECK(rule.probability(1, 1) == Rational(1));
  CHECK(rule.probability(1, 0) == Rational(0));
}

TEST_CASE("equality ignores identity rows and zero entries") {
  Rule a(3);
  a.set_row(1, Rule::Row{{1, Rational(1)}});
  a.set_row(7, Rule::Row{{0, Rational(1)}, {3, Rational(0)}});
  CHECK(a == rules::triangle_removal());
  CHECK(a.normalized().explicit_rows().size() == 1);
}

TEST_CASE("named families") {
  const Rule tr = rules::triangle_removal();
  CHECK(tr.normalized().explicit_rows().size() == 1);
  CHECK(tr.probability(7, 0) == Rational(1));

  const Rule ter = rules::triangle_edge_removal();
  for (std::uint64_t to : {3, 5, 6}) CHECK(ter.probability(7, to) == Rational(1, 3));

  const Rule c2 = rules::complementing(2);
  CHECK(c2.probability(0, 1) == Rational(1));
  CHECK(c2.probability(1, 0) == Rational(1));

  const Rule ext = rules::extremist(3);
  CHECK(ext.probability(3, 7) == Rational(1));
  CHECK(ext.probability(1, 0) == Rational(1));
  CHECK(rules::extremist(3, Rational(3)).probability(3, 0) == Rational(1));

  CHECK(rules::clique_removal(4).probability(63, 0) == Rational(1));
  CHECK(rules::clique_removal(4).probability(62, 62) == Rational(1));

  const Rule cc = rules::component_completion(3);
  CHECK(cc.probability(3, 7) == Rational(1));
  CHECK(cc.probability(1, 1) == Rational(1));

  const Rule half = rules::ignorant(4, {{63, Rational(1, 2)}, {0, Rational(1, 2)}});
  for (std::uint64_t f = 0; f < 64; ++f) {
    CHECK(half.probability(f, 63) == Rational(1, 2));
    CHECK(half.probability(f, 0) == Rational(1, 2));
  }
  CHECK_THROWS_AS(rules::ignorant(3, {{7, Rational(1, 2)}}), InputError);
  CHECK_THROWS_AS(rules::make_named("triangle-removal", 4), InputError);
  CHECK_THROWS_AS(rules::make_named("no-such-family", 3), InputError);
}

TEST_CASE("every named family validates") {
  for (const std::string& family : rules::family_names()) {
    for (int k = 2; k <= 4; ++k) {
      rules::NamedParams params;
      params.distribution = {{0, Rational(1)}};
      Rule rule(1);
      try {
        rule = rules::make_named(family, k, params);
      } catch (const InputError&) {
        continue;  // family/order mismatch
      }
      CHECK_MESSAGE(rule.validate().ok(), family);
    }
  }
}

TEST_CASE("symmetry and determinism worked examples") {
  CHECK(is_symmetric(Rule(3)));
  CHECK(is_symmetric(rules::triangle_removal()));
  Rule single(3);
  single.set_row(1, Rule::Row{{0, Rational(1)}});
  CHECK(!is_symmetric(single));

  CHECK(is_deterministic(rules::triangle_removal()));
  CHECK(is_deterministic(Rule(3)));
  CHECK(!is_deterministic(rules::ignorant(4, {{63, Rational(1, 2)}, {0, Rational(1, 2)}})));
}

TEST_CASE("ignorant edge counts") {
  CHECK(ignorant_edge_count(rules::ignorant(4, {{63, Rational(1, 2)}, {0, Rational(1, 2)}})) == Rational(3));
  CHECK(ignorant_edge_count(rules::ignorant(4, {{11, Rational(1)}})) == Rational(3));
  CHECK(!ignorant_edge_count(rules::triangle_removal()));
}

TEST_CASE("symmetrized rules are symmetric and valid") {
  ft::Engine rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = ft::uniform_int(rng, 2, 4);
    const Rule sym = symmetrize(ft::random_rule(rng, k, 4));
    CHECK(is_symmetric(sym));
    CHECK(sym.validate().ok());
  }
}

TEST_CASE("rule JSON round-trips byte-identically") {
  ft::Engine rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const Rule rule = ft::random_rule(rng, ft::uniform_int(rng, 2, 4), 5);
    const std::string once = io::rule_to_json(rule).dump(2);
    const Rule parsed = io::rule_from_json(io::Json::parse(once));
    CHECK(parsed == rule);
    CHECK(io::rule_to_json(parsed).dump(2) == once);
  }
}

TEST_CASE("rule JSON rejects malformed input") {
  using io::Json;
  CHECK_THROWS_AS(io::rule_from_json(Json::parse(R"({"order":3,"entries":[],"extra":1})")), InputError);
  CHECK_THROWS_AS(io::rule_from_json(Json::parse(R"({"order":3,"entries":[{"from":7,"to":0,"p":"1/2"}]})")),
                  InputError);
  CHECK_THROWS_AS(
      io::rule_from_json(Json::parse(R"({"order":3,"entries":[{"from":7,"to":0,"p":"1"},{"from":7,"to":0,"p":"0"}]})")),
      InputError);
  CHECK_THROWS_AS(io::rule_from_json(Json::parse(R"({"order":3,"entries":[{"from":9,"to":0,"p":"1"}]})")),
                  InputError);
  CHECK_THROWS_AS(io::rule_from_json(Json::parse(R"({"order":3,"entries":[{"from":7,"to":0,"p":0.5}]})")),
                  InputError);
  const Rule decimal = io::rule_from_json(
      Json::parse(R"({"order":3,"entries":[{"from":7,"to":0,"p":"0.25"},{"from":7,"to":7,"p":"0.75"}]})"));
  CHECK(decimal.probability(7, 0) == Rational(1, 4));
}
