#include <doctest.h>

#include <random>

#include "tempo/order.hpp"
#include "tempo/relax.hpp"

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

Instance cycle(int n) {
  Instance x;
  x.num_vars = n;
  for (int i = 0; i < n; ++i) x.constraints.push_back({"e", {i, (i + 1) % n}});
  x.normalize();
  return x;
}

}  // namespace

TEST_CASE("relaxation columns and rows have the advertised shape") {
  Structure a = k2();
  Instance t = cycle(3);
  RelaxationSystem r = build_relaxation(t, a);
  CHECK(r.num_vars == 3);
  CHECK(r.domain == 2);
  CHECK(r.var_cols() == 6);
  CHECK(r.cons_offset.size() == 3);
  CHECK(r.cons_count == std::vector<long>{2, 2, 2});
  CHECK(r.sys.num_vars == 6 + 6);
  // Rows: one per variable, one per constraint, one per (constraint,
  // position, value) marginal.
  CHECK(r.sys.rows.size() == 3 + 3 + 3 * 2 * 2);
}

TEST_CASE("integer relaxation refutes odd cycles, the rational one cannot") {
  Structure a = k2();
  CHECK(!aip(cycle(3), a));
  CHECK(aip(cycle(4), a));
  CHECK(blp(cycle(3), a));  // half-half weights satisfy every row
  CHECK(blp(cycle(4), a));
  CHECK(!blp_aip(cycle(3), a));
  CHECK(blp_aip(cycle(4), a));
  CHECK(blp_aip(cycle(3), a, 4) == blp_aip(cycle(3), a, 1));
}

TEST_CASE("a repeated-variable loop separates the relaxations") {
  Structure a = k2();
  Instance x;
  x.num_vars = 1;
  x.constraints = {{"e", {0, 0}}};
  x.normalize();
  // Half-half weights satisfy the rational rows, but the integer marginals
  // force the two positions to agree, which no tuple allows.
  CHECK(blp(x, a));
  CHECK(!aip(x, a));
  CHECK(!blp_aip(x, a));
  CHECK(!saip(x, a).has_value());
  CHECK(!saip_reference(x, a).has_value());
}

TEST_CASE("the singleton integer test prunes the odd cycle to nothing") {
  Structure a = k2();
  CHECK(!saip(cycle(3), a).has_value());
  auto d = saip(cycle(4), a);
  REQUIRE(d.has_value());
  for (int v = 0; v < 4; ++v) CHECK((*d)[v] == std::vector<int>{0, 1});
}

TEST_CASE("fast and reference singleton tests agree on random instances") {
  std::mt19937 rng(77003);
  int agree_nonempty = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Structure a;
    a.size = 2 + (int)(rng() % 2);
    a.signature = {{"r", 2}};
    for (int i = 0; i < a.size; ++i)
      for (int j = 0; j < a.size; ++j)
        if (rng() % 3 != 0) a.add("r", {i, j});
    a.normalize();
    Instance x;
    x.num_vars = 3 + (int)(rng() % 3);
    int nc = 2 + (int)(rng() % 4);
    for (int c = 0; c < nc; ++c)
      x.constraints.push_back(
          {"r", {(int)(rng() % x.num_vars), (int)(rng() % x.num_vars)}});
    x.normalize();

    auto fast = saip(x, a);
    auto slow = saip_reference(x, a);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      CHECK(*fast == *slow);
      ++agree_nonempty;
    }
    auto threaded = saip(x, a, 4);
    CHECK(fast.has_value() == threaded.has_value());
    if (fast && threaded) CHECK(*fast == *threaded);
  }
  CHECK(agree_nonempty >= 3);
}

TEST_CASE("the accelerated engine covers the order-template slices") {
  TemporalStructure x_t = make_temporal(
      {{"X", relation_from_patterns(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})}});
  CHECK(saip_uses_fast(induced_finite_template(x_t, 3)));
  Structure odd;
  odd.size = 3;
  odd.signature = {{"r", 2}};
  odd.relations["r"] = {{0, 1}, {1, 2}};  // not a coset-like tuple set
  odd.normalize();
  CHECK(!saip_uses_fast(odd));
}
