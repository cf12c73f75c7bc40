#pragma once

#include <optional>

#include "tempo/consistency.hpp"
#include "tempo/exactlin.hpp"
#include "tempo/relstruct.hpp"

namespace tempo {

// The standard relaxation of an instance: one column per (variable, value)
// pair and, per constraint, one column per tuple of its relation. Rows say
// each variable's weights sum to 1, each constraint's weights sum to 1, and
// constraint marginals agree with the variable weights.
struct RelaxationSystem {
  AffineSystem sys;
  int num_vars = 0;
  int domain = 0;
  std::vector<long> cons_offset;  // first tuple column of each constraint
  std::vector<long> cons_count;

  long var_col(int x, int a) const { return (long)x * domain + a; }
  long var_cols() const { return (long)num_vars * domain; }
};

RelaxationSystem build_relaxation(const Instance& x, const Structure& a);

// Integer feasibility of the relaxation.
bool aip(const Instance& x, const Structure& a);

// Nonnegative rational feasibility of the relaxation.
bool blp(const Instance& x, const Structure& a);

// Relative-interior support of the rational relaxation, then integer
// feasibility with the off-support columns removed.
bool blp_aip(const Instance& x, const Structure& a, int threads = 1);

// Greatest domains in which every remaining (variable, value) pin keeps the
// integer relaxation feasible. Deletions are decided per sweep from the same
// snapshot, so the result is the greatest fixpoint regardless of order.
std::optional<Domains> saip(const Instance& x, const Structure& a,
                            int threads = 1);

// Same fixpoint computed probe by probe on the explicit system; kept as the
// slow reference implementation for equivalence testing.
std::optional<Domains> saip_reference(const Instance& x, const Structure& a);

// True when the accelerated saip engine handles every relation of `a`
// (membership in each constraint's tuple lattice reduces to fixed zeros and
// parity rows); otherwise saip falls back to the reference implementation.
bool saip_uses_fast(const Structure& a);

}  // namespace tempo
