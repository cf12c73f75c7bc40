#include <doctest.h>

#include <algorithm>

#include "tempo/minorcond.hpp"

using namespace tempo;

namespace {

TemporalStructure t_lt() { return TemporalStructure{}; }

TemporalStructure t_i_neq() {
  return make_temporal({{"I", compile_relation("x0!=x1 | x2<=x0", 3)},
                        {"neq", compile_relation("x0!=x1", 2)}});
}

TemporalStructure t_x() {
  return make_temporal(
      {{"X", relation_from_patterns(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})}});
}

Structure k2() {
  Structure a;
  a.size = 2;
  a.signature = {{"e", 2}};
  a.relations["e"] = {{0, 1}, {1, 0}};
  a.normalize();
  return a;
}

Structure loop1() {
  Structure a;
  a.size = 1;
  a.signature = {{"e", 2}};
  a.relations["e"] = {{0, 0}};
  a.normalize();
  return a;
}

int indicator_vars(const MinorCondition& c, const Structure& a) {
  Structure empty = a;
  for (auto& [name, tuples] : empty.relations) tuples.clear();
  return indicator(c, empty).instance.num_vars;
}

}  // namespace

TEST_CASE("condition builders produce the advertised identity systems") {
  MinorCondition cyc3 = build_condition("cyclic", 3);
  REQUIRE(cyc3.symbols.size() == 1);
  CHECK(cyc3.symbols[0].name == "f");
  CHECK(cyc3.symbols[0].arity == 3);
  REQUIRE(cyc3.identities.size() == 1);
  CHECK(cyc3.identities[0].sigma == std::vector<int>{0, 1, 2});
  CHECK(cyc3.identities[0].tau == std::vector<int>{1, 2, 0});
  CHECK(cyc3.identities[0].target_arity == 3);

  MinorCondition sym4 = build_condition("symmetric", 4);
  CHECK(sym4.symbols[0].arity == 4);
  CHECK(sym4.identities.size() == 3);  // adjacent transpositions

  MinorCondition bs3 = build_condition("block_symmetric", 3);
  CHECK(bs3.symbols[0].arity == 7);
  CHECK(bs3.identities.size() == 3 + 2);  // inside {1..4} and {5..7}

  MinorCondition wnu4 = build_condition("wnu", 4);
  CHECK(wnu4.symbols[0].arity == 4);
  CHECK(wnu4.identities.size() == 3);
  for (const auto& id : wnu4.identities) CHECK(id.target_arity == 2);

  CHECK(build_condition("olsak").identities.size() == 2);
  CHECK(build_condition("olsak").symbols[0].arity == 6);
  CHECK(build_condition("siggers6").identities.size() == 1);
  CHECK(build_condition("siggers4").symbols[0].arity == 4);

  CHECK_THROWS_AS(build_condition("cyclic", 1), input_error);
  CHECK_THROWS_AS(build_condition("wnu", 2), input_error);
  CHECK_THROWS_AS(build_condition("no-such-kind", 3), input_error);
}

TEST_CASE("hand-built conditions are validated structurally") {
  MinorCondition c;
  c.symbols = {{"f", 2}};
  c.identities.push_back({"f", {0, 1}, "f", {1, 0}, 2});
  validate_condition(c);

  MinorCondition bad = c;
  bad.identities[0].sigma = {0};  // wrong length for f's arity
  CHECK_THROWS_AS(validate_condition(bad), input_error);

  MinorCondition bad2 = c;
  bad2.identities[0].tau = {0, 5};  // target variable out of range
  CHECK_THROWS_AS(validate_condition(bad2), input_error);

  MinorCondition bad3 = c;
  bad3.identities[0].rhs_symbol = "g";  // unknown symbol
  CHECK_THROWS_AS(validate_condition(bad3), input_error);
}

TEST_CASE("indicator instances identify exactly the forced variables") {
  Structure a2 = k2();
  // Orbit counting under rotation: binary necklaces.
  CHECK(indicator_vars(build_condition("cyclic", 2), a2) == 3);
  CHECK(indicator_vars(build_condition("cyclic", 3), a2) == 4);
  CHECK(indicator_vars(build_condition("cyclic", 5), a2) == 8);
  Structure a3 = k2();
  a3.size = 3;
  CHECK(indicator_vars(build_condition("cyclic", 5), a3) == 51);
  // Unordered 4-multisets over a 3-element set: C(6,2).
  CHECK(indicator_vars(build_condition("symmetric", 4), a3) == 15);
  // Two symmetric blocks of sizes 4 and 3 over three elements.
  CHECK(indicator_vars(build_condition("block_symmetric", 3), a3) == 150);
}

TEST_CASE("the indicator carries constraints from every relation tuple") {
  Structure a = induced_finite_template(t_lt(), 2);
  IndicatorResult ir = indicator(build_condition("cyclic", 2), a);
  CHECK(ir.domain == 2);
  CHECK(ir.instance.num_vars == 3);
  REQUIRE(ir.instance.constraints.size() == 1);
  const Constraint& c = ir.instance.constraints[0];
  CHECK(c.rel == "<");
  // The only "<" tuple is (0,1): f(0,0) < f(1,1), classes 0 and 2.
  CHECK(c.args == Tuple{0, 2});
  // Two base tuples and two argument slots need four combinations.
  CHECK_THROWS_AS(indicator(build_condition("cyclic", 2), k2(), 1),
                  input_error);
}

TEST_CASE("finite decision finds operations or proves none exist") {
  // A commutative binary polymorphism of the 2-element edge graph would
  // invert the automorphism orbit; none exists.
  CHECK(!decide_finite(build_condition("cyclic", 2), k2(), k2()).has_value());
  // The one-element loop absorbs everything.
  auto t = decide_finite(build_condition("cyclic", 2), k2(), loop1());
  REQUIRE(t.has_value());
  CHECK(t->at("f").domain == 2);
  CHECK(t->at("f").values == std::vector<long>(4, 0));
}

TEST_CASE("the order template has commutative polymorphisms on two points") {
  TemporalDecision d = decide_temporal(build_condition("cyclic", 2), 2, t_lt());
  REQUIRE(d.verdict.tag == VerdictTag::Sat);
  const FuncTable& f = d.tables.at("f");
  CHECK(f.at({0, 1}) == f.at({1, 0}));
  CHECK(f.at({0, 0}) < f.at({1, 1}));
}

TEST_CASE("the ternary template refutes binary commutativity") {
  TemporalDecision d =
      decide_temporal(build_condition("cyclic", 2), 2, t_i_neq());
  CHECK(d.verdict.tag == VerdictTag::Unsat);
  CHECK(!d.verdict.stage.empty());
}

TEST_CASE("temporal decision rejects non-permutation conditions") {
  CHECK_THROWS_AS(decide_temporal(build_condition("wnu", 3), 2, t_lt()),
                  input_error);
}

TEST_CASE("block padding transfers symmetric refutations") {
  CHECK(block_padding_exists(induced_finite_template(t_x(), 3), 4));
  CHECK(!block_padding_exists(induced_finite_template(t_lt(), 2), 4));
}

TEST_CASE("the report battery returns NO with certificates where expected") {
  TemplateReport rep = report_template(2, t_i_neq(), {2, 3}, {2}, {});
  CHECK(rep.finitely_tractable == ReportAnswer::No);
  CHECK(rep.blp_aip_solvable == ReportAnswer::No);
  CHECK(!rep.lines.empty());
  bool cyclic_refuted = false, block_refuted = false;
  for (const auto& p : rep.probes) {
    if (p.kind == "cyclic" && p.tag == VerdictTag::Unsat) cyclic_refuted = true;
    if (p.kind == "block_symmetric" && p.tag == VerdictTag::Unsat)
      block_refuted = true;
  }
  CHECK(cyclic_refuted);
  CHECK(block_refuted);
}

TEST_CASE("the report battery stays inconclusive on the plain order") {
  TemplateReport rep = report_template(2, t_lt(), {2}, {}, {});
  CHECK(rep.finitely_tractable == ReportAnswer::Inconclusive);
  CHECK(rep.blp_aip_solvable == ReportAnswer::Inconclusive);
  for (const auto& p : rep.probes) CHECK(p.tag != VerdictTag::Unsat);
}
