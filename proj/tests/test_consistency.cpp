#include <doctest.h>

#include <algorithm>
#include <random>

#include "tempo/consistency.hpp"

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

Instance triangle() {
  Instance x;
  x.num_vars = 3;
  x.constraints = {{"e", {0, 1}}, {"e", {1, 2}}, {"e", {2, 0}}};
  x.normalize();
  return x;
}

// Literal restatement of singleton arc consistency as a test oracle: strip
// one value at a time whenever pinning it kills plain arc consistency, and
// sweep until stable.
std::optional<Domains> naive_sac(const Instance& x, const Structure& a) {
  auto d = arc_consistency(x, a);
  if (!d) return std::nullopt;
  Domains dom = *d;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < x.num_vars; ++v) {
      std::vector<int> keep;
      for (int val : dom[v]) {
        Domains pinned = dom;
        pinned[v] = {val};
        if (arc_consistency(x, a, &pinned)) keep.push_back(val);
        else changed = true;
      }
      if (keep.empty()) return std::nullopt;
      dom[v] = std::move(keep);
    }
  }
  return dom;
}

Structure random_structure(std::mt19937& rng, int size) {
  Structure a;
  a.size = size;
  a.signature = {{"r", 2}, {"u", 1}};
  a.relations["r"];
  a.relations["u"];
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (rng() % 3 == 0) a.add("r", {i, j});
  for (int i = 0; i < size; ++i)
    if (rng() % 2 == 0) a.add("u", {i});
  a.normalize();
  return a;
}

Instance random_instance(std::mt19937& rng, int nv) {
  Instance x;
  x.num_vars = nv;
  int nc = 2 + (int)(rng() % 5);
  for (int c = 0; c < nc; ++c) {
    if (rng() % 4 == 0) {
      x.constraints.push_back({"u", {(int)(rng() % nv)}});
    } else {
      x.constraints.push_back({"r", {(int)(rng() % nv), (int)(rng() % nv)}});
    }
  }
  x.normalize();
  return x;
}

}  // namespace

TEST_CASE("arc consistency prunes unsupported values and detects wipeout") {
  Structure a = k2();
  // Support is tracked per position, so a repeated variable keeps its values
  // until a pin forces the positions to agree.
  Instance x;
  x.num_vars = 2;
  x.constraints = {{"e", {0, 0}}};
  x.normalize();
  CHECK(arc_consistency(x, a).has_value());
  CHECK(!sac(x, a).has_value());
  Structure empty = a;
  empty.relations["e"].clear();
  CHECK(!arc_consistency(x, empty).has_value());

  Instance y;
  y.num_vars = 2;
  y.constraints = {{"e", {0, 1}}};
  y.normalize();
  Domains init = {{0}, {0, 1}};
  auto d = arc_consistency(y, a, &init);
  REQUIRE(d.has_value());
  CHECK((*d)[0] == std::vector<int>{0});
  CHECK((*d)[1] == std::vector<int>{1});

  Domains dead = {{0}, {0}};
  CHECK(!arc_consistency(y, a, &dead).has_value());
}

TEST_CASE("initial domains may arrive unsorted or with repeats") {
  Structure a = k2();
  Instance y;
  y.num_vars = 2;
  y.constraints = {{"e", {0, 1}}};
  y.normalize();
  Domains init = {{1, 0, 1}, {1}};
  auto d = arc_consistency(y, a, &init);
  REQUIRE(d.has_value());
  CHECK((*d)[0] == std::vector<int>{0});
  Domains bad = {{0, 7}, {1}};
  CHECK_THROWS_AS(arc_consistency(y, a, &bad), input_error);
}

TEST_CASE("singleton test refutes the odd cycle where plain support cannot") {
  Structure a = k2();
  Instance t = triangle();
  CHECK(arc_consistency(t, a).has_value());
  CHECK(!sac(t, a).has_value());
}

TEST_CASE("singleton consistency agrees with its naive restatement") {
  std::mt19937 rng(20240817);
  int nontrivial = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Structure a = random_structure(rng, 2 + (int)(rng() % 3));
    Instance x = random_instance(rng, 3 + (int)(rng() % 3));
    auto fast = sac(x, a);
    auto slow = naive_sac(x, a);
    CHECK(fast.has_value() == slow.has_value());
    if (fast && slow) {
      CHECK(*fast == *slow);
      ++nontrivial;
    }
  }
  CHECK(nontrivial >= 5);
}

TEST_CASE("strategies exist at width two but not three on the odd cycle") {
  Structure a = k2();
  Instance t = triangle();
  auto h2 = k_strategy(t, a, 2);
  REQUIRE(h2.has_value());
  CHECK(h2->k == 2);
  CHECK(validate_strategy(t, a, *h2));
  CHECK(!k_strategy(t, a, 3).has_value());
}

TEST_CASE("strategy tables are closed and consistent by construction") {
  Structure a = k2();
  Instance path;
  path.num_vars = 4;
  path.constraints = {{"e", {0, 1}}, {"e", {1, 2}}, {"e", {2, 3}}};
  path.normalize();
  auto h = k_strategy(path, a, 3);
  REQUIRE(h.has_value());
  CHECK(validate_strategy(path, a, *h));
  CHECK(h->values_of(0) == std::vector<int>{0, 1});
  auto p01 = h->pairs_of(0, 1);
  CHECK(p01 == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
  // Every singleton and every pair subset is present.
  for (int v = 0; v < 4; ++v) CHECK(!h->at({v}).empty());
  CHECK(h->at({0, 1, 2}).size() == 2);
}

TEST_CASE("strategy preconditions are enforced") {
  Structure a = k2();
  Instance t = triangle();
  CHECK_THROWS_AS(k_strategy(t, a, 1), input_error);  // below max arity
  CHECK_THROWS_AS(k_strategy(t, a, 99), input_error);
}

TEST_CASE("restriction drops variables and survives validation") {
  Structure a = k2();
  Instance path;
  path.num_vars = 3;
  path.constraints = {{"e", {0, 1}}, {"e", {1, 2}}};
  path.normalize();
  auto h = k_strategy(path, a, 2);
  REQUIRE(h.has_value());
  // Drop the middle variable; keep 0 -> 0, 2 -> 1.
  Strategy r = strategy_restrict(*h, {0, -1, 1});
  Instance sub;
  sub.num_vars = 2;
  sub.normalize();
  CHECK(validate_strategy(sub, a, r));
  CHECK(r.at({0}).size() == 2);
  CHECK(r.at({0, 1}).size() == 4);  // no constraint links them anymore
}

TEST_CASE("validation rejects broken tables") {
  Structure a = k2();
  Instance path;
  path.num_vars = 3;
  path.constraints = {{"e", {0, 1}}, {"e", {1, 2}}};
  path.normalize();
  auto h = k_strategy(path, a, 2);
  REQUIRE(h.has_value());

  Strategy missing = *h;
  missing.table.erase({0, 2});
  CHECK(!validate_strategy(path, a, missing));

  Strategy junk = *h;
  junk.table[{0, 1}].push_back({0, 0});  // violates the edge constraint
  std::sort(junk.table[{0, 1}].begin(), junk.table[{0, 1}].end());
  CHECK(!validate_strategy(path, a, junk));

  Strategy hole = *h;
  hole.table[{0}] = {{0}};  // breaks closure: pair table still mentions 1
  CHECK(!validate_strategy(path, a, hole));
}
