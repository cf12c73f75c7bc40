#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tempo/order.hpp"
#include "tempo/powfun.hpp"
#include "tempo/relstruct.hpp"
#include "tempo/tempsolve.hpp"

namespace tempo {

// One identity f(x_{sigma[0]},...,x_{sigma[n-1]}) = g(x_{tau[0]},...) over
// target variables x_0..x_{target_arity-1}; indices 0-based.
struct MinorIdentity {
  std::string lhs_symbol;
  std::vector<int> sigma;
  std::string rhs_symbol;
  std::vector<int> tau;
  int target_arity = 0;
};

struct MinorCondition {
  std::vector<RelSymbol> symbols;  // (name, arity) of the function symbols
  std::vector<MinorIdentity> identities;
};

void validate_condition(const MinorCondition& c);

// Named condition families over a single symbol f:
//   cyclic(n)          f(x1..xn) = f(x2..xn,x1), n >= 2
//   symmetric(n)       adjacent transpositions, n >= 2
//   block_symmetric(L) arity 2L+1, adjacent transpositions inside the blocks
//                      {1..L+1} and {L+2..2L+1}, L >= 1
//   wnu(k)             f(x,y..y) = f(y,x,y..y) = ... = f(y..y,x), k >= 3
//   olsak              f(x,x,y,y,y,x) = f(x,y,x,y,x,y) = f(y,x,x,x,y,y)
//   siggers6           s(x,y,x,z,y,z) = s(y,x,z,x,z,y)
//   siggers4           s(x,y,z,x) = s(y,z,x,z)
// `param` is the family parameter; ignored for the parameterless kinds.
MinorCondition build_condition(const std::string& kind, int param = 0);

// Indicator instance: one variable per (symbol, argument tuple) up to the
// identifications forced by the identities, one constraint per relation and
// per tuple-combination, deduplicated.
struct IndicatorResult {
  Instance instance;
  std::map<std::string, std::vector<int>> var_of;  // encoded args -> variable
  int domain = 0;
};

// `enum_cap` bounds tuple combinations per (symbol, relation); 0 means the
// global cap.
IndicatorResult indicator(const MinorCondition& c, const Structure& a,
                          long enum_cap = 0);

using SymbolTables = std::map<std::string, FuncTable>;

// Existence of operations A^n -> B satisfying the condition; found tables are
// re-verified as polymorphisms satisfying every identity pointwise.
std::optional<SymbolTables> decide_finite(const MinorCondition& c,
                                          const Structure& a,
                                          const Structure& b);

// Decision over the template with domain {0..a_size-1} inside b's order.
// Only permutation conditions on a single symbol are accepted. Sat comes
// with a verified rank table; Unsat is certified by the solver.
struct TemporalDecision {
  Verdict verdict;
  SymbolTables tables;  // filled when Sat
};

TemporalDecision decide_temporal(const MinorCondition& c, int a_size,
                                 const TemporalStructure& b,
                                 long enum_cap = 0);

// Whether some relation of `a` contains s-1 tuples whose per-coordinate
// value multisets all coincide. When they exist, plugging them as constants
// into the short block of a (2s-1)-ary 2-block symmetric operation yields a
// symmetric operation of arity s, so a refuted symmetric(s) probe also rules
// out block_symmetric(s-1).
bool block_padding_exists(const Structure& a, int s);

enum class ReportAnswer { No, Inconclusive };

struct ProbeOutcome {
  std::string kind;
  int param = 0;
  int arity = 0;
  VerdictTag tag = VerdictTag::Unknown;
  std::string note;
  double seconds = 0;
};

struct TemplateReport {
  ReportAnswer finitely_tractable = ReportAnswer::Inconclusive;
  ReportAnswer blp_aip_solvable = ReportAnswer::Inconclusive;
  std::vector<ProbeOutcome> probes;
  std::vector<std::string> lines;  // printable report
};

// Necessary-condition probe battery for the derived finite template built
// from b at domain size a_size. Answers are NO or INCONCLUSIVE, never YES.
TemplateReport report_template(int a_size, const TemporalStructure& b,
                               const std::vector<int>& cyclic_arities,
                               const std::vector<int>& block_params,
                               const std::vector<int>& symmetric_arities);

}  // namespace tempo
