#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tempo/consistency.hpp"
#include "tempo/exactlin.hpp"
#include "tempo/order.hpp"
#include "tempo/relax.hpp"
#include "tempo/relstruct.hpp"
#include "tempo/tempsolve.hpp"
#include "tempo/util.hpp"

namespace {

using namespace tempo;
using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = Clock::now();
    f();
    double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

void row(const std::string& name, double serial, double parallel) {
  std::printf("%-28s %10.4fs %10.4fs %8.2fx\n", name.c_str(), serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("threads available: %d\n", threads);
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  Rng rng(12345);

  // Exhaustive homomorphism count on a mid-size random instance.
  {
    Structure a;
    a.size = 5;
    a.signature = {{"r", 2}, {"s", 3}};
    for (const auto& sym : a.signature) {
      a.relations[sym.name];
      long total = 1;
      for (int i = 0; i < sym.arity; ++i) total *= a.size;
      for (long e = 0; e < total; ++e)
        if (rng() % 3) {
          Tuple t(sym.arity);
          long q = e;
          for (int i = sym.arity - 1; i >= 0; --i) {
            t[i] = int(q % a.size);
            q /= a.size;
          }
          a.add(sym.name, std::move(t));
        }
    }
    a.normalize();
    Instance x;
    x.num_vars = 9;
    for (int c = 0; c < 14; ++c) {
      const RelSymbol& sym = a.signature[rng() % a.signature.size()];
      Tuple args(sym.arity);
      for (int& v : args) v = int(rng() % (unsigned)x.num_vars);
      x.constraints.push_back({sym.name, std::move(args)});
    }
    x.normalize();
    long serial_count = 0, parallel_count = 0;
    double ts = best_of(3, [&] { serial_count = hom_count(x, a, 1); });
    double tp = best_of(3, [&] { parallel_count = hom_count(x, a, threads); });
    require(serial_count == parallel_count,
            "hom_count: serial and parallel counts differ");
    row("hom_count", ts, tp);
  }

  // Canonical binary operation check over a three-relation template.
  {
    TemporalStructure b =
        make_temporal({{"I", compile_relation("x0!=x1 | x2<=x0", 3)},
                       {"neq", compile_relation("x0!=x1", 2)}});
    bool rs = false, rp = false;
    double ts = best_of(3, [&] { rs = check_binary_canonical(b, CanonicalBinaryOp::PP, 1); });
    double tp = best_of(3, [&] {
      rp = check_binary_canonical(b, CanonicalBinaryOp::PP, threads);
    });
    require(rs == rp, "check_binary_canonical: results differ");
    row("check_binary_canonical", ts, tp);
  }

  // Interior support of a planted nonnegative linear program.
  {
    AffineSystem s;
    const int nv = 12, nr = 6;
    s.num_vars = nv;
    std::vector<Int> x0(nv);
    for (auto& v : x0) v = long(rng() % 7);
    for (int r = 0; r < nr; ++r) {
      std::vector<Int> rowv(nv);
      Int rhs = 0;
      for (int c = 0; c < nv; ++c) {
        rowv[c] = long(rng() % 13) - 6;
        rhs += rowv[c] * x0[c];
      }
      s.add_row(std::move(rowv), rhs);
    }
    std::vector<char> nonneg(nv, 1);
    std::vector<char> ss, sp;
    double ts = best_of(3, [&] { ss = interior_support(s, nonneg, 1); });
    double tp = best_of(3, [&] { sp = interior_support(s, nonneg, threads); });
    require(ss == sp, "interior_support: supports differ");
    row("interior_support", ts, tp);
  }

  // Singleton affine consistency over a planted temporal instance.
  {
    TemporalStructure b = make_temporal(
        {{"X", relation_from_patterns(3, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}})}});
    const int nv = 18;
    std::vector<long> plan(nv);
    for (auto& v : plan) v = long(rng() % 3);
    std::vector<std::pair<std::string, std::vector<int>>> cons;
    const std::vector<std::pair<std::string, int>> rels = {{"X", 3}, {"<", 2}};
    for (int c = 0; c < 40; ++c) {
      const auto& [name, ar] = rels[rng() % rels.size()];
      const TemporalRelation& r = b.rel(name);
      for (int tries = 0; tries < 300; ++tries) {
        std::vector<int> args(ar);
        for (int& q : args) q = int(rng() % (unsigned)nv);
        std::vector<long> vals(ar);
        for (int i = 0; i < ar; ++i) vals[i] = plan[args[i]];
        if (r.contains(canonical_pattern(vals))) {
          cons.push_back({name, std::move(args)});
          break;
        }
      }
    }
    TemporalInstance x = instance_over(b, nv, cons);
    FiniteView fv = to_finite(x, nv);
    std::optional<Domains> ds, dp;
    double ts = best_of(3, [&] { ds = saip(fv.instance, fv.structure, 1); });
    double tp = best_of(3, [&] { dp = saip(fv.instance, fv.structure, threads); });
    require(ds == dp, "saip: pruned domains differ");
    row("saip", ts, tp);
  }

  std::printf("all kernels agree between serial and parallel runs\n");
  return 0;
}
