#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempo/util.hpp"

namespace tempo {

using Tuple = std::vector<int>;

struct RelSymbol {
  std::string name;
  int arity = 0;
};
using Signature = std::vector<RelSymbol>;

// Finite relational structure. Relations are kept sorted and deduplicated;
// normalize() restores that canonical form after bulk edits.
struct Structure {
  Signature signature;
  int size = 0;
  std::map<std::string, std::vector<Tuple>> relations;

  const std::vector<Tuple>& rel(const std::string& name) const;
  int arity_of(const std::string& name) const;
  bool has(const std::string& name, const Tuple& t) const;
  void add(const std::string& name, Tuple t);
  void normalize();
};

void validate(const Structure& a);

struct Constraint {
  std::string rel;
  Tuple args;  // variable indices
  auto operator<=>(const Constraint&) const = default;
};

// Instance of the homomorphism problem over some structure's signature.
struct Instance {
  int num_vars = 0;
  std::vector<std::string> var_names;  // optional; empty means v0,v1,...
  std::vector<Constraint> constraints;

  void normalize();  // sort + dedup constraints
};

void validate(const Instance& x, const Structure& a);

// Total assignment variable -> element.
using VarMap = std::vector<int>;

bool satisfies(const Instance& x, const Structure& a, const VarMap& h);

// Backtracking search with an arc-consistency prepass; smallest domain
// first, values ascending, so the result is deterministic.
std::optional<VarMap> hom_search(const Instance& x, const Structure& a);

// Exhaustive count of homomorphisms; parallelizes over the first
// variable's values when threads > 1 (deterministic sum either way).
long hom_count(const Instance& x, const Structure& a, int threads = 1);

// Views a structure as the instance listing each of its tuples.
Instance as_instance(const Structure& a);

std::optional<VarMap> hom_search(const Structure& a, const Structure& b);
long hom_count_struct(const Structure& a, const Structure& b, int threads = 1);

// Binary product; element (i,j) of A x B is index i*|B|+j.
Structure product(const Structure& a, const Structure& b);

// Quotient by the partition class_of (values 0..k-1 for some k).
Structure quotient(const Structure& a, const std::vector<int>& class_of);

// Substructure induced on a sorted subset of elements, reindexed to 0..m-1.
Structure induced_substructure(const Structure& a, const std::vector<int>& elems);

// Relation-preserving-in-both-directions bijection test, exhaustive with
// pruning; |A| capped (caps().max_iso) because the search is exact.
bool isomorphic(const Structure& a, const Structure& b);

// Checks one explicit bijection h: A -> B for being a strong isomorphism.
bool isomorphic_via(const Structure& a, const Structure& b, const VarMap& h);

}  // namespace tempo
