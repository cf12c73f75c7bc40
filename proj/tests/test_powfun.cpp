#include <doctest.h>

#include <algorithm>
#include <random>

#include "tempo/powfun.hpp"

using namespace tempo;

namespace {

Structure k2() {
  Structure a;
  a.size = 2;
  a.signature = {{"e", 2}};
  a.relations["e"] = {{0, 1}, {1, 0}};
  a.normalize();
  return a;
}

int pattern_idx(const OrderPattern& p) {
  const auto& all = all_patterns((int)p.size());
  auto it = std::lower_bound(all.begin(), all.end(), p);
  REQUIRE(it != all.end());
  REQUIRE(*it == p);
  return (int)(it - all.begin());
}

Structure chain2() { return induced_finite_template(TemporalStructure{}, 2); }

}  // namespace

TEST_CASE("tuple codes are lexicographic with the first digit on top") {
  CHECK(encode_tuple({1, 0, 0}, 2) == 4);
  CHECK(encode_tuple({0, 1, 1}, 2) == 3);
  CHECK(decode_tuple(5, 2, 3) == std::vector<int>{1, 0, 1});
  for (long e = 0; e < 27; ++e)
    CHECK(encode_tuple(decode_tuple(e, 3, 3), 3) == e);
}

TEST_CASE("power symbols spell index maps with one-based digits") {
  CHECK(pow_rel_name("R", {1, 3}) == "R@13");
  CHECK(pow_rel_name("<", {2}) == "<@2");
  CHECK(pow_eq_name({1}, {2}) == "eq@1/2");
  CHECK(pow_eq_name({1, 2, 3}, {3, 2, 1}) == "eq@123/321");
  CHECK_THROWS_AS(pow_rel_name("R", {0}), input_error);
  CHECK_THROWS_AS(pow_eq_name({1}, {1, 2}), input_error);
}

TEST_CASE("the cube of the edge structure has the advertised tables") {
  Structure p = mpow(k2(), 3);
  CHECK(p.size == 8);
  // 9 index maps on the binary edge + (3 + 9 + 27 squared summed) equalities.
  CHECK(p.signature.size() == 9 + 819);
  CHECK(p.rel("e@12") ==
        std::vector<Tuple>{{2}, {3}, {4}, {5}});
  CHECK(p.rel("eq@1/1").size() == 32);
  CHECK(p.rel("eq@123/123").size() == 8);  // full-coordinate equality: diagonal
  CHECK(p.has("eq@12/23", {1, 4}));   // (0,0,·) matches (·,0,0) shifted
  CHECK(!p.has("eq@12/23", {2, 3}));  // (0,1,·) cannot match (·,1,1)
}

TEST_CASE("power construction enforces its preconditions") {
  CHECK_THROWS_AS(mpow(k2(), 1), input_error);  // exponent below arity
  CHECK_THROWS_AS(mpow(k2(), 9), input_error);  // above the configured cap
  Structure bad = k2();
  bad.signature[0].name = "e@1";
  bad.relations["e@1"] = bad.relations["e"];
  bad.relations.erase("e");
  CHECK_THROWS_AS(mpow(bad, 3), input_error);
}

TEST_CASE("gluing the power back down returns the base structure") {
  Structure p = mpow(k2(), 3);
  MlowResult lr = mlow(p, 3);
  CHECK(lr.structure.size == 2);
  CHECK(isomorphic(lr.structure, k2()));
  // The explicit counit: class of (element, coordinate) -> that coordinate.
  VarMap h(lr.structure.size, -1);
  bool consistent = true;
  for (int e = 0; e < 8; ++e) {
    auto digits = decode_tuple(e, 2, 3);
    for (int pos = 0; pos < 3; ++pos) {
      int c = lr.class_of[e * 3 + pos];
      if (h[c] < 0) h[c] = digits[pos];
      else if (h[c] != digits[pos]) consistent = false;
    }
  }
  CHECK(consistent);
  CHECK(isomorphic_via(lr.structure, k2(), h));
}

TEST_CASE("the pattern quotient of the order template has thirteen points") {
  Structure q = mpow_quotient_temporal(TemporalStructure{}, 3);
  CHECK(q.size == 13);
  CHECK(q.has("<@12", {pattern_idx({0, 1, 2})}));
  CHECK(q.has("<@12", {pattern_idx({0, 1, 1})}));
  CHECK(!q.has("<@12", {pattern_idx({1, 0, 2})}));
  CHECK(!q.has("<@12", {pattern_idx({0, 0, 1})}));
  // Full-coordinate equality is exactly the diagonal.
  const auto& diag = q.rel("eq@123/123");
  CHECK(diag.size() == 13);
  for (const auto& t : diag) CHECK(t[0] == t[1]);
  // Partial equality can relate distinct patterns.
  CHECK(q.has("eq@1/1", {pattern_idx({0, 1, 2}), pattern_idx({0, 0, 1})}));
}

TEST_CASE("power tables over the two-element chain match hand enumeration") {
  Structure g = mpow(chain2(), 3);
  CHECK(g.rel("<@12") == std::vector<Tuple>{{2}, {3}});
  CHECK(g.rel("<@21").size() == 2);  // codes 4 and 5
  CHECK(g.has("<@21", {4}));
  CHECK(g.has("<@21", {5}));
  CHECK(g.rel("<@11").empty());  // a coordinate is never below itself
}

TEST_CASE("the pattern map of a function is computed pointwise") {
  PatternTable id3 = pi_map({0, 1}, 3);
  CHECK(id3.domain == 2);
  CHECK(id3.m == 3);
  CHECK(id3.entries.size() == 8);
  CHECK(id3.at({0, 1, 1}) == OrderPattern{0, 1, 1});
  CHECK(id3.at({1, 0, 1}) == OrderPattern{1, 0, 1});
  PatternTable cst = pi_map({4, 4, 4}, 2);
  for (const auto& e : cst.entries) CHECK(e == OrderPattern{0, 0});
}

TEST_CASE("collapsing a function to patterns commutes with the level step") {
  std::mt19937 rng(90041);
  for (int trial = 0; trial < 5; ++trial) {
    FuncTable f;
    f.domain = 3;
    f.arity = 2;
    f.values.resize(9);
    for (auto& v : f.values) v = (long)(rng() % 5);
    PolyTable g3 = xi_inf(f, 3);
    PolyTable g2 = xi_inf(f, 2);
    PolyTable stepped = xi_step(g3);
    CHECK(stepped.domain == g2.domain);
    CHECK(stepped.m == g2.m);
    CHECK(stepped.arity == g2.arity);
    CHECK(stepped.entries == g2.entries);
  }
}

TEST_CASE("restricting a pattern map drops coordinates consistently") {
  std::mt19937 rng(90042);
  for (int trial = 0; trial < 5; ++trial) {
    int d = 2 + (int)(rng() % 4);
    std::vector<long> f(d);
    for (auto& v : f) v = (long)(rng() % d);
    f[0] = (f[0] + 1) % d;  // keep it interesting
    PatternTable h3 = pi_map(f, 3);
    PatternTable h2 = restrict_hom(h3, {0, 1});
    CHECK(h2.entries == pi_map(f, 2).entries);
    PatternTable h1 = restrict_hom(h3, {2});
    CHECK(h1.entries == pi_map(f, 1).entries);
  }
  CHECK_THROWS_AS(restrict_hom(pi_map({0, 1}, 3), {1, 0}), input_error);
}

TEST_CASE("a pattern map decodes back to the ranks of its function") {
  std::mt19937 rng(90043);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + (int)(rng() % 5);
    std::vector<long> f(d);
    for (auto& v : f) v = (long)(rng() % d);
    FuncTable back = decode_hom(pi_map(f, 3));
    CHECK(back.domain == d);
    OrderPattern ranks = canonical_pattern(f);
    CHECK(back.values == std::vector<long>(ranks.begin(), ranks.end()));
    CHECK(pi_map(back.values, 3).entries == pi_map(f, 3).entries);
  }
}

TEST_CASE("corrupted pattern maps are rejected while decoding") {
  // f(0) != f(1), so smashing the (0,0,1) entry to all-ties must clash.
  std::vector<long> f = {0, 1, 1};
  PatternTable h = pi_map(f, 3);
  h.entries[encode_tuple({0, 0, 1}, 3)] = {0, 0, 0};
  CHECK_THROWS_AS(decode_hom(h), input_error);
  CHECK_THROWS_AS(decode_hom(pi_map(f, 2)), input_error);  // wrong level
}

TEST_CASE("hom checks accept genuine maps and reject corrupted ones") {
  Structure ga = mpow(chain2(), 3);
  Structure gbq = mpow_quotient_temporal(TemporalStructure{}, 3);
  PatternTable h = pi_map({0, 1}, 3);
  CHECK(is_pattern_hom(h, ga, gbq));
  PatternTable badh = h;
  badh.entries[3] = OrderPattern{2, 1, 0};  // (0,1,1) no longer matches
  CHECK(!is_pattern_hom(badh, ga, gbq));

  FuncTable mn;
  mn.domain = 2;
  mn.arity = 2;
  mn.values = {0, 0, 0, 1};  // minimum of two chain elements
  PolyTable g = xi_inf(mn, 3);
  CHECK(is_poly_hom(g, ga, gbq));
  PolyTable badg = g;
  // Entry for ((0,1,0),(0,1,0)): min of two rising pairs cannot fall.
  badg.entries[2 * 8 + 2] = OrderPattern{1, 0, 0};
  CHECK(!is_poly_hom(badg, ga, gbq));
}

TEST_CASE("the adjunction maps invert each other and match hom counts") {
  Structure b = k2();
  Structure x = mpow(b, 2);
  MlowResult lx = mlow(x, 2);
  CHECK(hom_count_struct(x, mpow(b, 2)) ==
        hom_count_struct(lx.structure, b));

  VarMap h(x.size);
  for (int e = 0; e < x.size; ++e) h[e] = e;  // the identity is a hom
  VarMap g = eta(h, x, lx, b, 2);
  CHECK(satisfies(as_instance(lx.structure), b, g));
  VarMap h2 = mu(g, x, lx, b, 2);
  CHECK(h2 == h);

  VarMap junk(x.size, 0);
  CHECK_THROWS_AS(eta(junk, x, lx, b, 2), input_error);
}
