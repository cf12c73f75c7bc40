#include <doctest.h>

#include <algorithm>

#include "tempo/order.hpp"

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

}  // namespace

TEST_CASE("patterns are dense rank vectors of the inputs") {
  CHECK(canonical_pattern(std::vector<long>{5, 2, 2}) == OrderPattern{1, 0, 0});
  CHECK(canonical_pattern(std::vector<long>{-1, -1}) == OrderPattern{0, 0});
  CHECK(canonical_pattern(std::vector<long>{3}) == OrderPattern{0});
  CHECK(canonical_pattern(std::vector<long>{10, 0, 5, 5}) ==
        OrderPattern{2, 0, 1, 1});
  CHECK(canonical_pattern(std::vector<mpq_class>{mpq_class(1, 2),
                                                 mpq_class(1, 3)}) ==
        OrderPattern{1, 0});
  CHECK(is_dense_pattern({1, 0, 1}));
  CHECK(!is_dense_pattern({0, 2, 0}));
}

TEST_CASE("pattern enumeration matches the ordered set partition counts") {
  CHECK(all_patterns(1).size() == 1);
  CHECK(all_patterns(2).size() == 3);
  CHECK(all_patterns(3).size() == 13);
  CHECK(all_patterns(4).size() == 75);
  CHECK(all_patterns(5).size() == 541);
  CHECK(all_patterns(6).size() == 4683);
  const auto& p3 = all_patterns(3);
  for (const auto& p : p3) CHECK(is_dense_pattern(p));
  CHECK(std::is_sorted(p3.begin(), p3.end()));
}

TEST_CASE("formula relations hold exactly on the defining patterns") {
  TemporalRelation i = compile_relation("x0!=x1 | x2<=x0", 3);
  CHECK(i.contains({0, 1, 2}));
  CHECK(i.contains({1, 1, 0}));
  CHECK(i.contains({0, 0, 0}));
  CHECK(i.contains({1, 0, 0}));
  CHECK(!i.contains({0, 0, 1}));
  CHECK(compile_relation("x0<x1", 2).patterns ==
        std::vector<OrderPattern>{{0, 1}});
  CHECK(compile_relation("!(x0<x1) & !(x1<x0)", 2).patterns ==
        std::vector<OrderPattern>{{0, 0}});
}

TEST_CASE("formula parsing rejects malformed text") {
  CHECK_THROWS_AS(parse_formula("x0 << x1", 2), input_error);
  CHECK_THROWS_AS(parse_formula("x0<x5", 2), input_error);
  CHECK_THROWS_AS(parse_formula("x0<x1 x0", 2), input_error);
  CHECK_THROWS_AS(parse_formula("", 2), input_error);
}

TEST_CASE("template construction guards names and the built-in order") {
  CHECK_THROWS_AS(make_temporal({{"r", compile_relation("x0<x1", 2)},
                                 {"r", compile_relation("x0<x1", 2)}}),
                  input_error);
  CHECK_THROWS_AS(make_temporal({{"<", compile_relation("x0<=x1", 2)}}),
                  input_error);
  CHECK_THROWS_AS(make_temporal({{"", compile_relation("x0<x1", 2)}}),
                  input_error);
  CHECK_THROWS_AS(relation_from_patterns(2, {{0, 2}}), input_error);
  TemporalStructure b = t_lt();
  CHECK(b.rel("<").patterns == std::vector<OrderPattern>{{0, 1}});
  CHECK(b.max_arity() == 2);
  CHECK(t_i_neq().max_arity() == 3);
}

TEST_CASE("finite slices list realizations over a bounded chain") {
  Structure a = induced_finite_template(t_i_neq(), 2);
  CHECK(a.size == 2);
  CHECK(a.rel("I").size() == 7);
  CHECK(a.rel("neq").size() == 2);
  CHECK(a.rel("<") == std::vector<Tuple>{{0, 1}});

  Structure b = induced_finite_template(t_x(), 3);
  CHECK(b.rel("X").size() == 9);
  CHECK(b.has("X", {0, 0, 1}));
  CHECK(b.has("X", {1, 1, 2}));
  CHECK(!b.has("X", {0, 1, 2}));
}

TEST_CASE("sign vectors record which zero sets are realizable") {
  auto sv = sign_vectors(lt_relation());
  std::sort(sv.begin(), sv.end());
  CHECK(sv == std::vector<Tuple>{{0, 1}, {1, 1}});
}

TEST_CASE("classification picks the advertised solve path per template") {
  CHECK(classify(t_lt()).path == SolvePath::SacPp);
  CHECK(classify(t_i_neq()).path == SolvePath::SacPp);
  CHECK(classify(t_x()).path == SolvePath::SaipMinority);
  CHECK(classify(t_betw()).path == SolvePath::CompleteOnly);
  CHECK(path_name(SolvePath::SacPp) == std::string("SAC_PP"));
  CHECK(path_name(SolvePath::SaipMinority) == std::string("SAIP_MINORITY"));
  CHECK(path_name(SolvePath::KconsLl) == std::string("KCONS_LL"));
  CHECK(path_name(SolvePath::CompleteOnly) == std::string("COMPLETE_ONLY"));
}

TEST_CASE("the flattened three-pattern relation is preserved by minority") {
  Structure q = sign_quotient(t_x());
  CHECK(check_quotient_op(q, BoolOp::Minority));
  CHECK(!check_quotient_op(q, BoolOp::Majority));
}

TEST_CASE("canonical binary operations hold where the theory says") {
  CHECK(check_binary_canonical(t_lt(), CanonicalBinaryOp::PP));
  CHECK(check_binary_canonical(t_i_neq(), CanonicalBinaryOp::PP));
  CHECK(!check_binary_canonical(t_betw(), CanonicalBinaryOp::PP));
  CHECK(!check_binary_canonical(t_betw(), CanonicalBinaryOp::LL));
  CHECK(check_binary_canonical(t_i_neq(), CanonicalBinaryOp::PP, 1) ==
        check_binary_canonical(t_i_neq(), CanonicalBinaryOp::PP, 4));
}

TEST_CASE("projection keeps the named positions and re-densifies") {
  TemporalRelation x =
      relation_from_patterns(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  TemporalRelation p = project_relation(x, {0, 1});
  CHECK(p.arity == 2);
  CHECK(p.patterns ==
        std::vector<OrderPattern>{{0, 0}, {0, 1}, {1, 0}});
}

TEST_CASE("contraction keeps patterns where fused positions already tie") {
  TemporalRelation x =
      relation_from_patterns(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
  TemporalRelation c = contract_relation(x, {0, 1});
  CHECK(c.patterns == std::vector<OrderPattern>{{0, 0, 1}});
  TemporalRelation all = contract_relation(x, {2});
  CHECK(all.patterns == x.patterns);
}

TEST_CASE("reversal flips every pattern but keeps the order ascending") {
  TemporalStructure r = reverse_template(t_x());
  CHECK(r.rel("<").patterns == std::vector<OrderPattern>{{0, 1}});
  CHECK(r.rel("reversed<").patterns == std::vector<OrderPattern>{{1, 0}});
  CHECK(r.rel("X").patterns ==
        std::vector<OrderPattern>{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CHECK(reverse_relation(reverse_relation(t_x().rel("X"))).patterns ==
        t_x().rel("X").patterns);
}
