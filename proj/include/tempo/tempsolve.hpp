#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tempo/consistency.hpp"
#include "tempo/order.hpp"
#include "tempo/relstruct.hpp"

namespace tempo {

struct TemporalConstraint {
  int rel = 0;  // index into the owning instance's relation pool
  std::vector<int> args;
};

// Instance whose constraints carry temporal relation values directly (via an
// instance-local pool), so projection and contraction need no symbol table.
struct TemporalInstance {
  int num_vars = 0;
  std::vector<TemporalRelation> rels;
  std::vector<TemporalConstraint> constraints;

  int intern(const TemporalRelation& r);
  const TemporalRelation& rel_of(const TemporalConstraint& c) const {
    return rels[c.rel];
  }
};

void validate(const TemporalInstance& x);

// Builds an instance over b's named relations.
TemporalInstance instance_over(
    const TemporalStructure& b, int num_vars,
    const std::vector<std::pair<std::string, std::vector<int>>>& constraints);

// Order-reversal at the relation-value level.
TemporalInstance reverse_instance(const TemporalInstance& x);

// Rewrites every constraint so its argument variables are distinct:
// positions sharing a variable keep only the patterns that tie them, and the
// duplicate positions are then projected away. Exactly the same assignments
// satisfy the result.
TemporalInstance dedupe_args(const TemporalInstance& x);

// The instance paired with the finite template tabulating its relation
// values over {0..n-1}; relation names are positional ("r0", "r1", ...).
struct FiniteView {
  Instance instance;
  Structure structure;
};
FiniteView to_finite(const TemporalInstance& x, int n);

struct Projection {
  TemporalInstance instance;
  std::vector<int> kept;        // new var -> old var
  std::vector<int> old_to_new;  // old var -> new var, -1 when dropped
};

// Existentially projects away the flagged variables position-wise;
// constraints with no surviving position are dropped.
Projection project_instance(const TemporalInstance& x,
                            const std::vector<char>& drop);

// Keeps only patterns where the flagged variables' positions share a rank
// (the flagged set is about to collapse to one point).
TemporalInstance contract_instance(const TemporalInstance& x,
                                   const std::vector<char>& fuse);

struct FreeSet {
  std::vector<int> vars;       // sorted; the zero class of the witness
  std::vector<char> witness;   // per variable: 1 iff mapped to zero
};

// Free set containing `pin`, from arc consistency on the two-element sign
// quotient plus the extremal assignment of the semilattice `op` (Or keeps
// the positive class maximal, giving the minimal zero set containing pin;
// And gives the maximal one). Every value in `dom` must be >= pin_value.
std::optional<FreeSet> free_set_semilattice(const TemporalInstance& x,
                                            const Domains& dom, int pin,
                                            int pin_value, BoolOp op);

// Free set from the affine structure of the sign quotient (each quotient
// relation must be an affine subspace of its sign cube; violations are
// internal errors since the caller guarantees the classification). Unlike
// the semilattice extractor this takes no domains: integer certificates put
// cancelling weight on values outside any solution, so they cannot say
// which variables reach the bottom. Solving the parity system with free
// variables at zero either exposes a zero class or proves the all-positive
// map is the only quotient homomorphism, in which case this is absent.
std::optional<FreeSet> free_set_minority(const TemporalInstance& x);

// Inclusion-minimal free set contained in `within` (every variable outside
// it is pinned positive), found by reseeding while the forced-zero set
// shrinks; absent when no free set within `within` contains the seed.
std::optional<FreeSet> minimal_free_set(const TemporalInstance& x,
                                        const std::vector<char>& within,
                                        int seed);

struct Decomposition {
  std::vector<std::vector<int>> layers;  // original variable ids per layer
  std::vector<int> layer_value;          // minimal strategy value used
};

// Layered decomposition: strategy, free set, minimal free subset with
// pairwise-diagonal strategy pairs, then contract + project and repeat.
std::optional<Decomposition> decompose(const TemporalInstance& x,
                                       int domain_size, int k);

enum class VerdictTag { Sat, Unsat, Unknown };

struct Verdict {
  VerdictTag tag = VerdictTag::Unknown;
  std::vector<long> assignment;  // layer ranks when Sat
  std::string stage;             // refuting stage when Unsat
};

bool verify_assignment(const TemporalInstance& x, const std::vector<long>& s);

// Uniform solver: classify the template, run its path, certify the result.
// Sat assignments are layer ranks and re-verified (failure is an internal
// error); Unsat is certified by the path's completeness; Unknown only for
// templates outside all solvable classes. `k_override` > 0 replaces the
// automatic consistency level (max constraint arity + 1) on the paths that
// use one.
Verdict solve(const TemporalInstance& x, const TemporalStructure& b,
              int k_override = 0);

}  // namespace tempo
