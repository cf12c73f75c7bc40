#include <doctest.h>

#include <algorithm>

#include "tempo/tempsolve.hpp"

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

TemporalStructure t_betw() {
  return make_temporal(
      {{"betw", relation_from_patterns(3, {{0, 1, 2}, {2, 1, 0}})}});
}

TemporalInstance chain(int n) {
  std::vector<std::pair<std::string, std::vector<int>>> cs;
  for (int i = 0; i + 1 < n; ++i) cs.push_back({"<", {i, i + 1}});
  return instance_over(t_lt(), n, cs);
}

}  // namespace

TEST_CASE("instances intern relation values and validate argument lists") {
  TemporalInstance x = instance_over(t_lt(), 3, {{"<", {0, 1}}, {"<", {1, 2}}});
  CHECK(x.num_vars == 3);
  CHECK(x.constraints.size() == 2);
  CHECK(x.rels.size() == 1);  // both constraints share one interned value
  CHECK(x.constraints[0].rel == x.constraints[1].rel);
  CHECK(x.rel_of(x.constraints[0]).patterns ==
        std::vector<OrderPattern>{{0, 1}});

  CHECK_THROWS_AS(instance_over(t_lt(), 2, {{"<", {0, 5}}}), input_error);
  CHECK_THROWS_AS(instance_over(t_lt(), 2, {{"missing", {0, 1}}}), input_error);
  CHECK_THROWS_AS(instance_over(t_lt(), 2, {{"<", {0}}}), input_error);
}

TEST_CASE("the finite view tabulates relation values over a chain") {
  TemporalInstance x = instance_over(t_x(), 3, {{"X", {0, 1, 2}}});
  FiniteView fv = to_finite(x, 3);
  CHECK(fv.structure.size == 3);
  CHECK(fv.instance.num_vars == 3);
  CHECK(fv.instance.constraints.size() == 1);
  const std::string& rname = fv.instance.constraints[0].rel;
  CHECK(fv.structure.rel(rname).size() == 9);
}

TEST_CASE("order reversal flips relation values in place") {
  TemporalInstance x = instance_over(t_lt(), 2, {{"<", {0, 1}}});
  TemporalInstance r = reverse_instance(x);
  CHECK(r.rel_of(r.constraints[0]).patterns ==
        std::vector<OrderPattern>{{1, 0}});
  CHECK(verify_assignment(r, {5, 3}));
  CHECK(!verify_assignment(r, {3, 5}));
}

TEST_CASE("projection drops variables position-wise") {
  TemporalInstance x = instance_over(t_x(), 3, {{"X", {0, 1, 2}}});
  Projection p = project_instance(x, {0, 1, 0});  // drop the middle variable
  CHECK(p.instance.num_vars == 2);
  CHECK(p.kept == std::vector<int>{0, 2});
  CHECK(p.old_to_new == std::vector<int>{0, -1, 1});
  REQUIRE(p.instance.constraints.size() == 1);
  const auto& r = p.instance.rel_of(p.instance.constraints[0]);
  CHECK(r.patterns ==
        std::vector<OrderPattern>{{0, 0}, {0, 1}, {1, 0}});
  // Dropping everything a constraint mentions drops the constraint.
  Projection q = project_instance(x, {1, 1, 1});
  CHECK(q.instance.num_vars == 0);
  CHECK(q.instance.constraints.empty());
}

TEST_CASE("contraction keeps only patterns where fused variables tie") {
  TemporalInstance x = instance_over(t_x(), 3, {{"X", {0, 1, 2}}});
  TemporalInstance c = contract_instance(x, {1, 1, 0});
  REQUIRE(c.constraints.size() == 1);
  CHECK(c.rel_of(c.constraints[0]).patterns ==
        std::vector<OrderPattern>{{0, 0, 1}});
}

TEST_CASE("ascending chains are satisfiable and cycles are not") {
  Verdict v = solve(chain(5), t_lt());
  CHECK(v.tag == VerdictTag::Sat);
  REQUIRE(v.assignment.size() == 5);
  for (int i = 0; i + 1 < 5; ++i) CHECK(v.assignment[i] < v.assignment[i + 1]);
  CHECK(verify_assignment(chain(5), v.assignment));

  TemporalInstance cyc =
      instance_over(t_lt(), 3, {{"<", {0, 1}}, {"<", {1, 2}}, {"<", {2, 0}}});
  Verdict u = solve(cyc, t_lt());
  CHECK(u.tag == VerdictTag::Unsat);
  CHECK(!u.stage.empty());
}

TEST_CASE("the ternary template solves planted instances") {
  TemporalStructure b = t_i_neq();
  TemporalInstance x = instance_over(
      b, 4,
      {{"I", {0, 1, 2}}, {"I", {2, 3, 0}}, {"neq", {0, 3}}, {"neq", {1, 2}}});
  Verdict v = solve(x, b);
  CHECK(v.tag == VerdictTag::Sat);
  CHECK(verify_assignment(x, v.assignment));

  // x0 != x0 is a contradiction.
  TemporalInstance bad = instance_over(b, 1, {{"neq", {0, 0}}});
  CHECK(solve(bad, b).tag == VerdictTag::Unsat);
}

TEST_CASE("the minority-path template accepts and refutes correctly") {
  TemporalStructure b = t_x();
  // One constraint alone is satisfiable.
  TemporalInstance ok = instance_over(b, 3, {{"X", {0, 1, 2}}});
  Verdict v = solve(ok, b);
  CHECK(v.tag == VerdictTag::Sat);
  CHECK(verify_assignment(ok, v.assignment));
  // All three arguments equal cannot match any pattern.
  TemporalInstance bad = instance_over(b, 1, {{"X", {0, 0, 0}}});
  CHECK(solve(bad, b).tag == VerdictTag::Unsat);
}

TEST_CASE("templates outside every tractable class stay honest") {
  TemporalStructure b = t_betw();
  TemporalInstance x = instance_over(
      b, 4, {{"betw", {0, 1, 2}}, {"betw", {1, 2, 3}}, {"betw", {2, 3, 0}}});
  Verdict v = solve(x, b);
  CHECK((v.tag == VerdictTag::Unsat || v.tag == VerdictTag::Unknown));
  // An immediately contradictory instance is still refuted.
  TemporalInstance bad = instance_over(b, 1, {{"betw", {0, 0, 0}}});
  CHECK(solve(bad, b).tag == VerdictTag::Unsat);
}

TEST_CASE("decomposition layers the chain in order") {
  TemporalInstance x = chain(4);
  auto d = decompose(x, 4, 3);
  REQUIRE(d.has_value());
  CHECK(d->layers.size() == 4);
  std::vector<int> order;
  for (const auto& layer : d->layers)
    for (int v : layer) order.push_back(v);
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3});
  CHECK(d->layers[0] == std::vector<int>{0});
  CHECK(d->layers[3] == std::vector<int>{3});
}

TEST_CASE("assignment verification is strict") {
  TemporalInstance x = chain(3);
  CHECK(verify_assignment(x, {1, 2, 9}));
  CHECK(!verify_assignment(x, {1, 1, 2}));
  CHECK(!verify_assignment(x, {1, 2}));  // wrong length
}

TEST_CASE("an explicit consistency level gives the same verdicts") {
  TemporalStructure b = t_i_neq();
  TemporalInstance x = instance_over(
      b, 4,
      {{"I", {0, 1, 2}}, {"I", {2, 3, 0}}, {"neq", {0, 3}}, {"neq", {1, 2}}});
  CHECK(solve(x, b, 4).tag == solve(x, b).tag);
  TemporalInstance cyc =
      instance_over(t_lt(), 3, {{"<", {0, 1}}, {"<", {1, 2}}, {"<", {2, 0}}});
  CHECK(solve(cyc, t_lt(), 3).tag == VerdictTag::Unsat);
  TemporalStructure betw = t_betw();
  TemporalInstance bb = instance_over(betw, 1, {{"betw", {0, 0, 0}}});
  CHECK(solve(bb, betw, 3).tag == VerdictTag::Unsat);
  CHECK(solve(bb, betw, 4).tag == VerdictTag::Unsat);
}

TEST_CASE("solving an empty instance yields the empty assignment") {
  TemporalInstance x;
  x.num_vars = 0;
  Verdict v = solve(x, t_lt());
  CHECK(v.tag == VerdictTag::Sat);
  CHECK(v.assignment.empty());
}
