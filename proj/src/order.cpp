#include "tempo/order.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>

namespace tempo {

OrderPattern canonical_pattern(const std::vector<long>& vals) {
  std::vector<long> sorted(vals);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  OrderPattern p(vals.size());
  for (size_t i = 0; i < vals.size(); i++)
    p[i] = (int)(std::lower_bound(sorted.begin(), sorted.end(), vals[i]) -
                 sorted.begin());
  return p;
}

OrderPattern canonical_pattern(const std::vector<mpq_class>& vals) {
  return ranks_of(vals);
}

bool is_dense_pattern(const OrderPattern& p) {
  if (p.empty()) return false;
  int mx = 0;
  for (int r : p) {
    if (r < 0) return false;
    mx = std::max(mx, r);
  }
  std::vector<char> seen(mx + 1, 0);
  for (int r : p) seen[r] = 1;
  for (char s : seen)
    if (!s) return false;
  return true;
}

const std::vector<OrderPattern>& all_patterns(int r) {
  require(r >= 1 && r <= 6, "pattern arity out of range");
  static std::array<std::vector<OrderPattern>, 7> cache;
  auto& out = cache[r];
  if (out.empty()) {
    OrderPattern p(r, 0);
    while (true) {
      if (is_dense_pattern(p)) out.push_back(p);
      int i = r - 1;
      while (i >= 0 && p[i] == r - 1) p[i--] = 0;
      if (i < 0) break;
      p[i]++;
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

namespace {

struct Parser {
  const std::string& s;
  int arity;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) pos++;
  }
  bool eat(const char* tok) {
    skip();
    size_t n = std::strlen(tok);
    if (s.compare(pos, n, tok) == 0) {
      pos += n;
      return true;
    }
    return false;
  }
  int var() {
    skip();
    require(pos < s.size() && s[pos] == 'x', "expected variable at position " +
                                                 std::to_string(pos) + " in formula");
    pos++;
    require(pos < s.size() && std::isdigit((unsigned char)s[pos]),
            "expected variable index in formula");
    int v = 0;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
      v = v * 10 + (s[pos++] - '0');
    require(v < arity, "variable x" + std::to_string(v) + " exceeds arity");
    return v;
  }
  FormulaPtr atom() {
    skip();
    if (eat("!")) {
      auto f = std::make_shared<Formula>();
      f->kind = Formula::Not;
      f->a = atom();
      return f;
    }
    if (eat("(")) {
      auto f = or_expr();
      require(eat(")"), "missing ')' in formula");
      return f;
    }
    int l = var();
    Formula::Kind k;
    if (eat("<=")) k = Formula::Le;
    else if (eat("<")) k = Formula::Lt;
    else if (eat("!=")) k = Formula::Ne;
    else if (eat("=")) k = Formula::Eq;
    else throw input_error("expected comparison operator in formula");
    int r = var();
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->lhs = l;
    f->rhs = r;
    return f;
  }
  FormulaPtr and_expr() {
    auto f = atom();
    while (eat("&")) {
      auto g = std::make_shared<Formula>();
      g->kind = Formula::And;
      g->a = f;
      g->b = atom();
      f = g;
    }
    return f;
  }
  FormulaPtr or_expr() {
    auto f = and_expr();
    while (eat("|")) {
      auto g = std::make_shared<Formula>();
      g->kind = Formula::Or;
      g->a = f;
      g->b = and_expr();
      f = g;
    }
    return f;
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, int arity) {
  require(arity >= 1, "formula arity must be positive");
  Parser p{text, arity};
  auto f = p.or_expr();
  p.skip();
  require(p.pos == text.size(), "trailing input in formula");
  return f;
}

bool TemporalRelation::contains(const OrderPattern& p) const {
  return std::binary_search(patterns.begin(), patterns.end(), p);
}

TemporalRelation relation_from_patterns(int arity, std::vector<OrderPattern> ps) {
  require(arity >= 1 && arity <= caps().max_arity, "relation arity out of range");
  for (const auto& p : ps) {
    require((int)p.size() == arity, "pattern arity mismatch");
    require(is_dense_pattern(p), "pattern ranks must be dense from 0");
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return TemporalRelation{arity, std::move(ps)};
}

TemporalRelation compile_relation(const std::string& formula, int arity) {
  auto f = parse_formula(formula, arity);
  std::vector<OrderPattern> ps;
  for (const auto& p : all_patterns(arity))
    if (eval_formula(*f, p)) ps.push_back(p);
  return relation_from_patterns(arity, std::move(ps));
}

TemporalRelation lt_relation() {
  return TemporalRelation{2, {{0, 1}}};
}

TemporalStructure::TemporalStructure() { relations["<"] = lt_relation(); }

int TemporalStructure::max_arity() const {
  int m = 0;
  for (const auto& [name, r] : relations) m = std::max(m, r.arity);
  return m;
}

const TemporalRelation& TemporalStructure::rel(const std::string& name) const {
  auto it = relations.find(name);
  require(it != relations.end(), "unknown temporal relation: " + name);
  return it->second;
}

TemporalStructure make_temporal(
    const std::vector<std::pair<std::string, TemporalRelation>>& rels) {
  TemporalStructure b;
  for (const auto& [name, r] : rels) {
    require(!name.empty(), "empty relation name");
    if (name == "<") {
      require(r == lt_relation(), "\"<\" must be the ascending order");
      continue;
    }
    require(b.relations.emplace(name, r).second, "duplicate relation: " + name);
  }
  return b;
}

Structure induced_finite_template(const TemporalStructure& b, int n) {
  require(n >= 1, "finite template needs at least one element");
  Structure a;
  a.size = n;
  for (const auto& [name, r] : b.relations) {
    a.signature.push_back({name, r.arity});
    auto& out = a.relations[name];
    Tuple t(r.arity, 0);
    std::vector<long> vals(r.arity);
    while (true) {
      for (int i = 0; i < r.arity; i++) vals[i] = t[i];
      if (r.contains(canonical_pattern(vals))) out.push_back(t);
      int i = r.arity - 1;
      while (i >= 0 && t[i] == n - 1) t[i--] = 0;
      if (i < 0) break;
      t[i]++;
    }
  }
  a.normalize();
  return a;
}

std::vector<Tuple> sign_vectors(const TemporalRelation& r) {
  std::vector<Tuple> out;
  Tuple s(r.arity, 0);
  while (true) {
    bool anyz = false;
    for (int v : s)
      if (v == 0) anyz = true;
    bool in;
    if (!anyz) {
      in = !r.patterns.empty();
    } else {
      in = false;
      for (const auto& p : r.patterns) {
        bool match = true;
        for (int i = 0; i < r.arity && match; i++)
          if ((p[i] == 0) != (s[i] == 0)) match = false;
        if (match) {
          in = true;
          break;
        }
      }
    }
    if (in) out.push_back(s);
    int i = r.arity - 1;
    while (i >= 0 && s[i] == 1) s[i--] = 0;
    if (i < 0) break;
    s[i]++;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Structure sign_quotient(const TemporalStructure& b) {
  Structure q;
  q.size = 2;
  for (const auto& [name, r] : b.relations) {
    q.signature.push_back({name, r.arity});
    q.relations[name] = sign_vectors(r);
  }
  return q;
}

namespace {

// Comparison key of one output coordinate given the two annotated input
// patterns; p[r]/q[r] is the rank of the virtual zero.
std::array<int, 3> output_key(CanonicalBinaryOp op, const OrderPattern& p,
                              const OrderPattern& q, int r, int i) {
  bool nonpos = p[i] <= p[r];
  if (op == CanonicalBinaryOp::PP)
    return nonpos ? std::array<int, 3>{0, p[i], 0}
                  : std::array<int, 3>{1, q[i], 0};
  return nonpos ? std::array<int, 3>{0, p[i], q[i]}
                : std::array<int, 3>{1, q[i], p[i]};
}

bool relation_closed_under(const TemporalRelation& rel, CanonicalBinaryOp op,
                           int threads) {
  int r = rel.arity;
  std::vector<OrderPattern> annotated;
  for (const auto& p : all_patterns(r + 1)) {
    OrderPattern prefix(p.begin(), p.begin() + r);
    std::vector<long> vals(prefix.begin(), prefix.end());
    if (rel.contains(canonical_pattern(vals))) annotated.push_back(p);
  }
  const size_t m = annotated.size();
  bool ok = true;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(&& : ok) \
    num_threads(threads > 1 ? threads : 1) if (threads > 1)
#endif
  for (size_t pi = 0; pi < m; pi++) {
    std::vector<std::array<int, 3>> keys(r);
    for (size_t qi = 0; qi < m; qi++) {
      if (!ok) continue;
      const auto& p = annotated[pi];
      const auto& q = annotated[qi];
      for (int i = 0; i < r; i++) keys[i] = output_key(op, p, q, r, i);
      if (!rel.contains(ranks_of(keys))) ok = false;
    }
  }
  return ok;
}

}  // namespace

bool check_binary_canonical(const TemporalStructure& b, CanonicalBinaryOp op,
                            int threads) {
  for (const auto& [name, r] : b.relations)
    if (!relation_closed_under(r, op, threads)) return false;
  return true;
}

namespace {

int apply_bool_op(BoolOp op, const std::vector<int>& args) {
  switch (op) {
    case BoolOp::Or: return args[0] | args[1];
    case BoolOp::And: return args[0] & args[1];
    case BoolOp::Majority:
      return (args[0] & args[1]) | (args[0] & args[2]) | (args[1] & args[2]);
    case BoolOp::Minority: return args[0] ^ args[1] ^ args[2];
  }
  return 0;
}

}  // namespace

bool check_quotient_op(const Structure& q, BoolOp op) {
  require(q.size == 2, "quotient operations live on two elements");
  int n = (op == BoolOp::Or || op == BoolOp::And) ? 2 : 3;
  for (const auto& s : q.signature) {
    const auto& ts = q.rel(s.name);
    std::vector<size_t> idx(n, 0);
    if (ts.empty()) continue;
    while (true) {
      Tuple out(s.arity);
      std::vector<int> args(n);
      for (int i = 0; i < s.arity; i++) {
        for (int j = 0; j < n; j++) args[j] = ts[idx[j]][i];
        out[i] = apply_bool_op(op, args);
      }
      if (!std::binary_search(ts.begin(), ts.end(), out)) return false;
      int j = n - 1;
      while (j >= 0 && idx[j] == ts.size() - 1) idx[j--] = 0;
      if (j < 0) break;
      idx[j]++;
    }
  }
  return true;
}

namespace {

Classification classify_flags(const TemporalStructure& b) {
  Classification c;
  c.has_pp = check_binary_canonical(b, CanonicalBinaryOp::PP);
  c.has_ll = check_binary_canonical(b, CanonicalBinaryOp::LL);
  Structure q = sign_quotient(b);
  c.quotient_or = check_quotient_op(q, BoolOp::Or);
  c.quotient_and = check_quotient_op(q, BoolOp::And);
  c.quotient_minority = check_quotient_op(q, BoolOp::Minority);
  c.quotient_majority = check_quotient_op(q, BoolOp::Majority);
  if (c.has_ll)
    ensure(c.quotient_or, "LL-closed template must have OR-closed quotient");
  if (c.has_pp && (c.quotient_or || c.quotient_and))
    c.path = SolvePath::SacPp;
  else if (c.has_pp && c.quotient_minority)
    c.path = SolvePath::SaipMinority;
  else if (c.has_ll)
    c.path = SolvePath::KconsLl;
  else
    c.path = SolvePath::CompleteOnly;
  return c;
}

}  // namespace

Classification classify(const TemporalStructure& b) {
  Classification c = classify_flags(b);
  if (c.path != SolvePath::CompleteOnly) return c;
  Classification rc = classify_flags(reverse_template(b));
  if (rc.path != SolvePath::CompleteOnly) {
    rc.dualized = true;
    return rc;
  }
  return c;
}

const char* path_name(SolvePath p) {
  switch (p) {
    case SolvePath::SacPp: return "SAC_PP";
    case SolvePath::SaipMinority: return "SAIP_MINORITY";
    case SolvePath::KconsLl: return "KCONS_LL";
    case SolvePath::CompleteOnly: return "COMPLETE_ONLY";
  }
  return "?";
}

TemporalRelation reverse_relation(const TemporalRelation& r) {
  std::vector<OrderPattern> ps;
  for (const auto& p : r.patterns) {
    int mx = *std::max_element(p.begin(), p.end());
    OrderPattern rev(p.size());
    for (size_t i = 0; i < p.size(); i++) rev[i] = mx - p[i];
    ps.push_back(std::move(rev));
  }
  std::sort(ps.begin(), ps.end());
  return TemporalRelation{r.arity, std::move(ps)};
}

TemporalStructure reverse_template(const TemporalStructure& b) {
  TemporalStructure out;
  for (const auto& [name, r] : b.relations) {
    if (name == "<") continue;
    require(name != "reversed<", "template already order-reversed");
    out.relations[name] = reverse_relation(r);
  }
  out.relations["reversed<"] = reverse_relation(lt_relation());
  return out;
}

TemporalRelation project_relation(const TemporalRelation& r,
                                  const std::vector<int>& keep) {
  require(!keep.empty(), "projection needs at least one position");
  for (int i : keep) require(i >= 0 && i < r.arity, "projection position range");
  std::vector<OrderPattern> ps;
  for (const auto& p : r.patterns) {
    std::vector<long> vals;
    vals.reserve(keep.size());
    for (int i : keep) vals.push_back(p[i]);
    ps.push_back(canonical_pattern(vals));
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return TemporalRelation{(int)keep.size(), std::move(ps)};
}

TemporalRelation contract_relation(const TemporalRelation& r,
                                   const std::vector<int>& fuse) {
  for (int i : fuse) require(i >= 0 && i < r.arity, "contraction position range");
  std::vector<OrderPattern> ps;
  for (const auto& p : r.patterns) {
    bool same = true;
    for (size_t i = 1; i < fuse.size(); i++)
      if (p[fuse[i]] != p[fuse[0]]) same = false;
    if (same) ps.push_back(p);
  }
  return TemporalRelation{r.arity, std::move(ps)};
}

}  // namespace tempo
