#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "tempo/util.hpp"

namespace tempo {

using Int = mpz_class;
using Rat = mpq_class;

// Dense system of linear equalities A·x = b over the integers/rationals.
struct AffineSystem {
  long num_vars = 0;
  std::vector<std::vector<Int>> rows;
  std::vector<Int> rhs;

  void add_row(std::vector<Int> coef, Int b);
};

// Some integer solution of the system, or absent; found by a column-style
// Hermite reduction with a tracked unimodular transform. The returned vector
// is re-verified by substitution.
std::optional<std::vector<Int>> integer_feasible(const AffineSystem& s);

// Exact rational solution with x_v >= 0 for every v with nonneg[v] set
// (phase-1 simplex, Bland's rule). Verified by substitution.
std::optional<std::vector<Rat>> rational_feasible(const AffineSystem& s,
                                                  const std::vector<char>& nonneg);

// Exact maximum of x_v over the feasible region (phase 2 after phase 1);
// absent means infeasible; unbounded reported via the flag.
struct MaxResult {
  bool feasible = false;
  bool unbounded = false;
  Rat value;
  std::vector<Rat> point;  // a feasible point attaining value (or witnessing > 0)
};
MaxResult maximize_var(const AffineSystem& s, const std::vector<char>& nonneg,
                       long v, bool stop_when_positive);

// { v in nonneg : some feasible point has x_v > 0 }; equals the support of
// any relative-interior point. Throws input_error if infeasible.
std::vector<char> interior_support(const AffineSystem& s,
                                   const std::vector<char>& nonneg,
                                   int threads = 1);

// GF(2) linear system; rows are bit vectors with a right-hand-side bit.
struct Gf2System {
  long num_vars = 0;
  std::vector<std::vector<uint64_t>> rows;
  std::vector<char> rhs;

  void add_row(const std::vector<long>& vars, int b);  // xor of listed vars = b
  void add_row_bits(std::vector<uint64_t> bits, int b);
};

// Incremental GF(2) elimination usable as a one-shot solver or a growing
// basis. Rows are reduced against the current basis on insertion.
struct Gf2Elim {
  long cols = 0;
  bool inconsistent = false;
  std::vector<std::vector<uint64_t>> basis;  // one row per pivot
  std::vector<char> brhs;
  std::vector<long> pivots;  // pivot column per basis row

  explicit Gf2Elim(long columns);
  // Returns false iff the row made the system inconsistent.
  bool add(std::vector<uint64_t> bits, int r);
  std::optional<std::vector<char>> solve() const;  // free variables set to 0
  // Basis of the homogeneous solution space, as bit rows.
  std::vector<std::vector<uint64_t>> kernel() const;
};

// Assignment satisfying all rows plus the listed pins, or absent.
std::optional<std::vector<char>> gf2_solve(
    const Gf2System& s, const std::vector<std::pair<long, int>>& pins = {});

// Column-echelon basis of the integer lattice spanned by inserted vectors.
struct LatticeBasis {
  long dim = 0;
  std::vector<std::vector<Int>> cols;    // echelon columns
  std::vector<long> pivot_rows;          // strictly increasing per column

  explicit LatticeBasis(long dimension);
  void insert(std::vector<Int> v);
  long rank() const { return (long)cols.size(); }
};

// Membership conditions for the lattice spanned by `basis`, via the Smith
// normal form U·M·V = diag(d): functionals U_t with d_t = 0 must match the
// reference point exactly; those with d_t > 1 must match modulo d_t.
struct LatticeConditions {
  std::vector<std::vector<Int>> exact_rows;
  std::vector<std::pair<std::vector<Int>, Int>> torsion_rows;  // (row, modulus)
};
LatticeConditions lattice_conditions(const LatticeBasis& basis);

}  // namespace tempo
