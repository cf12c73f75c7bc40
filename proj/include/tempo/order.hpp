#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "tempo/relstruct.hpp"
#include "tempo/util.hpp"

namespace tempo {

// Order type of a rational tuple: dense ranks starting at 0, so the
// patterns of arity r are exactly the weak orders on r positions.
using OrderPattern = std::vector<int>;

// Dense ranking of any strictly comparable value vector.
template <class T>
OrderPattern ranks_of(const std::vector<T>& vals) {
  OrderPattern p(vals.size(), 0);
  for (size_t i = 0; i < vals.size(); i++)
    for (size_t j = 0; j < vals.size(); j++)
      if (vals[j] < vals[i]) {
        bool counted = false;
        for (size_t j2 = 0; j2 < j; j2++)
          if (!(vals[j2] < vals[j]) && !(vals[j] < vals[j2])) counted = true;
        if (!counted) p[i]++;
      }
  return p;
}

OrderPattern canonical_pattern(const std::vector<long>& vals);
OrderPattern canonical_pattern(const std::vector<mpq_class>& vals);

bool is_dense_pattern(const OrderPattern& p);

// All weak orders on r positions, sorted; 1, 3, 13, 75, 541, 4683 for
// r = 1..6. Cached per arity.
const std::vector<OrderPattern>& all_patterns(int r);

// Quantifier-free order formula over variables x0..x{arity-1}; atoms
// xi<xj, xi<=xj, xi=xj, xi!=xj; connectives & | ! and parentheses.
struct Formula {
  enum Kind { Lt, Le, Eq, Ne, Not, And, Or } kind;
  int lhs = 0, rhs = 0;
  std::shared_ptr<const Formula> a, b;
};
using FormulaPtr = std::shared_ptr<const Formula>;

FormulaPtr parse_formula(const std::string& text, int arity);

template <class T>
bool eval_formula(const Formula& f, const std::vector<T>& v) {
  switch (f.kind) {
    case Formula::Lt: return v[f.lhs] < v[f.rhs];
    case Formula::Le: return !(v[f.rhs] < v[f.lhs]);
    case Formula::Eq: return !(v[f.lhs] < v[f.rhs]) && !(v[f.rhs] < v[f.lhs]);
    case Formula::Ne: return v[f.lhs] < v[f.rhs] || v[f.rhs] < v[f.lhs];
    case Formula::Not: return !eval_formula(*f.a, v);
    case Formula::And: return eval_formula(*f.a, v) && eval_formula(*f.b, v);
    case Formula::Or: return eval_formula(*f.a, v) || eval_formula(*f.b, v);
  }
  return false;
}

// First-order-free temporal relation: the set of order patterns its
// tuples may have.
struct TemporalRelation {
  int arity = 0;
  std::vector<OrderPattern> patterns;  // sorted, unique, dense

  bool contains(const OrderPattern& p) const;
  auto operator<=>(const TemporalRelation&) const = default;
};

TemporalRelation relation_from_patterns(int arity, std::vector<OrderPattern> ps);
TemporalRelation compile_relation(const std::string& formula, int arity);

template <class T>
bool eval(const TemporalRelation& r, const std::vector<T>& vals) {
  return r.contains(ranks_of(vals));
}

TemporalRelation lt_relation();  // the built-in "<"

// Template over the rationals; always carries "<".
struct TemporalStructure {
  std::map<std::string, TemporalRelation> relations;

  TemporalStructure();
  int max_arity() const;
  const TemporalRelation& rel(const std::string& name) const;
};

TemporalStructure make_temporal(
    const std::vector<std::pair<std::string, TemporalRelation>>& rels);

// Substructure on n elements standing for n increasing rationals; the
// tables list every integer tuple satisfying each relation.
Structure induced_finite_template(const TemporalStructure& b, int n);

// Sign vectors over {Z=0, P=1}: images of nonnegative tuples, recording
// which positions are zero. A vector with a zero class belongs iff some
// pattern has exactly that class as its minimum-rank class.
std::vector<Tuple> sign_vectors(const TemporalRelation& r);

// Two-element quotient template of b restricted to nonnegatives.
Structure sign_quotient(const TemporalStructure& b);

// The two canonical binary operations on pairs of rationals, given by
// which comparisons decide the output order:
//   PP: nonpositive first arguments compare by first argument; a
//       nonpositive beats a positive; positives compare by second.
//   LL: as PP but ties break lexicographically (second argument below,
//       first argument above), making the operation injective.
enum class CanonicalBinaryOp { PP, LL };

bool check_binary_canonical(const TemporalStructure& b, CanonicalBinaryOp op,
                            int threads = 1);

enum class BoolOp { Or, And, Majority, Minority };

// Componentwise closure of every relation of a 2-element structure.
bool check_quotient_op(const Structure& q, BoolOp op);

enum class SolvePath { SacPp, SaipMinority, KconsLl, CompleteOnly };

struct Classification {
  bool has_pp = false, has_ll = false;
  bool quotient_or = false, quotient_and = false;
  bool quotient_minority = false, quotient_majority = false;
  SolvePath path = SolvePath::CompleteOnly;
  // Flags describe the order-reversed template when set.
  bool dualized = false;
};

Classification classify(const TemporalStructure& b);

const char* path_name(SolvePath p);

TemporalRelation reverse_relation(const TemporalRelation& r);

// Order-reversed template: every relation's patterns reversed under its
// own name, except "<" which stays ascending (the machinery needs it);
// the reversed "<" is carried as "reversed<".
TemporalStructure reverse_template(const TemporalStructure& b);

// Patterns restricted to the listed positions, re-densified.
TemporalRelation project_relation(const TemporalRelation& r,
                                  const std::vector<int>& keep);

// Patterns in which the listed positions share one rank.
TemporalRelation contract_relation(const TemporalRelation& r,
                                   const std::vector<int>& fuse);

}  // namespace tempo
