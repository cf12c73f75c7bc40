#pragma once

#include <map>
#include <optional>
#include <vector>

#include "tempo/relstruct.hpp"

namespace tempo {

// Per-variable candidate value sets; each entry sorted ascending.
using Domains = std::vector<std::vector<int>>;

// Family of partial homomorphisms on all variable subsets of size <= k,
// closed under restriction and one-point extension. Subset keys are sorted
// variable lists; tuples list values in key order, sorted lexicographically.
struct Strategy {
  int k = 0;
  std::map<std::vector<int>, std::vector<Tuple>> table;

  const std::vector<Tuple>& at(const std::vector<int>& vars) const;
  std::vector<int> values_of(int x) const;                       // H_x
  std::vector<std::pair<int, int>> pairs_of(int x, int y) const;  // H_{x,y}
};

// Greatest family of locally consistent partial homomorphisms from x to a,
// or absent when some subset empties. Requires k at least the maximum
// constraint arity and within the configured caps.
std::optional<Strategy> k_strategy(const Instance& x, const Structure& a, int k);

// Greatest per-variable/per-position support system, starting from `init`
// domains when given (used for pinning), else from full domains.
std::optional<Domains> arc_consistency(const Instance& x, const Structure& a,
                                       const Domains* init = nullptr);

// Greatest domain family in which every remaining (variable, value) pin
// still admits arc consistency.
std::optional<Domains> sac(const Instance& x, const Structure& a);

// Restriction of a strategy to the variables not listed in `drop`,
// re-indexed by old_to_new (size = original variable count, -1 = dropped).
Strategy strategy_restrict(const Strategy& h, const std::vector<int>& old_to_new);

// True iff `h` is a valid k-strategy for x -> a (partial homomorphisms,
// downward closure, one-point extension, nonempty).
bool validate_strategy(const Instance& x, const Structure& a, const Strategy& h);

}  // namespace tempo
