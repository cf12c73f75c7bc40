#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tempo/order.hpp"
#include "tempo/relstruct.hpp"

namespace tempo {

// Lexicographic coding of m-tuples over {0..d-1}: first coordinate most
// significant.
long encode_tuple(const std::vector<int>& t, int d);
std::vector<int> decode_tuple(long idx, int d, int m);

// Signature names of power structures: base relation R with index map
// i : [l] -> [m] becomes the unary "R@i(1)..i(l)" (1-based digits), and the
// equalities are binary "eq@i(1)..i(l)/j(1)..j(l)".
std::string pow_rel_name(const std::string& base, const std::vector<int>& idx);
std::string pow_eq_name(const std::vector<int>& i, const std::vector<int>& j);

// m-th power of a finite structure: domain A^m, one unary relation per base
// relation and index map, one binary relation per pair of equal-length index
// maps relating coordinates across two elements.
Structure mpow(const Structure& a, int m);

// Power of a temporal template with the order-isomorphism classes of tuples
// as domain: elements are the order patterns of length m.
Structure mpow_quotient_temporal(const TemporalStructure& b, int m);

struct MlowResult {
  Structure structure;          // over the base signature
  std::vector<int> class_of;    // (element a)*m + coordinate p -> element
};

// Left adjoint of mpow: m tagged copies of the domain, glued along the
// equality constraints, with base-relation facts read off the unary ones.
// The input's signature must be a power signature.
MlowResult mlow(const Structure& x, int m);

// The adjunction maps; both verify their output is a homomorphism.
// eta: from h : X -> mpow(B) to mlow(X) -> B.
VarMap eta(const VarMap& h, const Structure& x, const MlowResult& lx,
           const Structure& b, int m);
// mu: from g : mlow(X) -> B to X -> mpow(B).
VarMap mu(const VarMap& g, const Structure& x, const MlowResult& lx,
          const Structure& b, int m);

// Unary function table over {0..domain-1}; values are layer ranks.
struct FuncTable {
  int domain = 0;
  int arity = 1;
  std::vector<long> values;  // lexicographic by argument tuple

  long at(const std::vector<int>& args) const;
};

// Map sending an m-tuple to the order pattern of its images under f.
struct PatternTable {
  int domain = 0;
  int m = 0;
  std::vector<OrderPattern> entries;  // lexicographic by m-tuple

  const OrderPattern& at(const std::vector<int>& t) const;
};

PatternTable pi_map(const std::vector<long>& f, int m);

// n-ary operation on m-tuples with pattern outputs.
struct PolyTable {
  int domain = 0;  // base domain size
  int m = 0;
  int arity = 0;
  std::vector<OrderPattern> entries;  // index: n m-tuple codes, lexicographic

  const OrderPattern& at(const std::vector<std::vector<int>>& tuples) const;
};

// Collapse of an n-ary function table to the pattern level: apply f
// coordinatewise to n m-tuples and take the pattern of the results.
PolyTable xi_inf(const FuncTable& f, int m);

// Step from level m+1 to level m: pad each argument by repeating its last
// coordinate, then drop the output's last coordinate.
PolyTable xi_step(const PolyTable& g);

// Restriction of a pattern-valued map to a subset of coordinates; all
// paddings must agree (that failing means the input was not a genuine
// homomorphism, reported as an input error).
PatternTable restrict_hom(const PatternTable& h, const std::vector<int>& indices);

// Reconstruction of a unary function from its level-3 pattern map;
// inconsistent pairwise data is reported as an input error.
FuncTable decode_hom(const PatternTable& h);

// Verification helpers against explicit power structures.
bool is_pattern_hom(const PatternTable& h, const Structure& ga,
                    const Structure& gbq);
bool is_poly_hom(const PolyTable& g, const Structure& ga, const Structure& gbq);

}  // namespace tempo
