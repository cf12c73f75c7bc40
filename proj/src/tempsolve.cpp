#include "tempo/tempsolve.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "tempo/relax.hpp"

namespace tempo {

int TemporalInstance::intern(const TemporalRelation& r) {
  for (size_t i = 0; i < rels.size(); ++i)
    if (rels[i] == r) return (int)i;
  rels.push_back(r);
  return (int)rels.size() - 1;
}

void validate(const TemporalInstance& x) {
  require(x.num_vars >= 0, "negative variable count");
  require((long)x.num_vars <= caps().max_vars, "instance exceeds variable cap");
  for (const auto& c : x.constraints) {
    require(c.rel >= 0 && c.rel < (int)x.rels.size(), "relation index out of range");
    require((int)c.args.size() == x.rels[c.rel].arity, "argument count mismatch");
    for (int v : c.args)
      require(v >= 0 && v < x.num_vars, "argument variable out of range");
  }
}

TemporalInstance instance_over(
    const TemporalStructure& b, int num_vars,
    const std::vector<std::pair<std::string, std::vector<int>>>& constraints) {
  TemporalInstance x;
  x.num_vars = num_vars;
  for (const auto& [name, args] : constraints) {
    int idx = x.intern(b.rel(name));
    x.constraints.push_back({idx, args});
  }
  validate(x);
  return x;
}

TemporalInstance reverse_instance(const TemporalInstance& x) {
  TemporalInstance out;
  out.num_vars = x.num_vars;
  for (const auto& r : x.rels) out.rels.push_back(reverse_relation(r));
  out.constraints = x.constraints;
  return out;
}

TemporalInstance dedupe_args(const TemporalInstance& x) {
  TemporalInstance out;
  out.num_vars = x.num_vars;
  // Key: relation index plus each position's first position with the same
  // variable; constraints sharing that shape reuse one rewritten relation.
  std::map<std::pair<int, std::vector<int>>, int> memo;
  for (const auto& c : x.constraints) {
    std::vector<int> shape(c.args.size());
    std::vector<int> keep;
    std::vector<int> args;
    bool repeats = false;
    for (size_t i = 0; i < c.args.size(); ++i) {
      size_t j = 0;
      while (c.args[j] != c.args[i]) ++j;
      shape[i] = (int)j;
      if (j == i) {
        keep.push_back((int)i);
        args.push_back(c.args[i]);
      } else {
        repeats = true;
      }
    }
    if (!repeats) {
      out.constraints.push_back({out.intern(x.rels[c.rel]), c.args});
      continue;
    }
    auto key = std::make_pair(c.rel, shape);
    auto it = memo.find(key);
    if (it == memo.end()) {
      TemporalRelation r = x.rels[c.rel];
      for (int f : keep) {
        std::vector<int> group;
        for (size_t i = 0; i < shape.size(); ++i)
          if (shape[i] == f) group.push_back((int)i);
        if (group.size() > 1) r = contract_relation(r, group);
      }
      r = project_relation(r, keep);
      it = memo.emplace(key, out.intern(r)).first;
    }
    out.constraints.push_back({it->second, args});
  }
  return out;
}

FiniteView to_finite(const TemporalInstance& x, int n) {
  require(n >= 1, "finite view needs at least one element");
  FiniteView fv;
  fv.structure.size = n;
  for (size_t i = 0; i < x.rels.size(); ++i) {
    const auto& r = x.rels[i];
    std::string name = "r" + std::to_string(i);
    fv.structure.signature.push_back({name, r.arity});
    auto& tuples = fv.structure.relations[name];
    Tuple t(r.arity, 0);
    for (;;) {
      std::vector<long> vals(t.begin(), t.end());
      if (r.contains(canonical_pattern(vals))) tuples.push_back(t);
      int i2 = r.arity - 1;
      while (i2 >= 0 && t[i2] == n - 1) t[i2--] = 0;
      if (i2 < 0) break;
      ++t[i2];
    }
  }
  fv.structure.normalize();
  fv.instance.num_vars = x.num_vars;
  for (const auto& c : x.constraints)
    fv.instance.constraints.push_back({"r" + std::to_string(c.rel), c.args});
  return fv;
}

Projection project_instance(const TemporalInstance& x,
                            const std::vector<char>& drop) {
  require((int)drop.size() == x.num_vars, "drop mask has wrong length");
  Projection out;
  out.old_to_new.assign(x.num_vars, -1);
  for (int v = 0; v < x.num_vars; ++v) {
    if (!drop[v]) {
      out.old_to_new[v] = (int)out.kept.size();
      out.kept.push_back(v);
    }
  }
  out.instance.num_vars = (int)out.kept.size();
  std::map<std::pair<int, std::vector<int>>, int> memo;  // (rel, keep) -> new rel
  for (const auto& c : x.constraints) {
    std::vector<int> keep_pos;
    std::vector<int> new_args;
    for (size_t i = 0; i < c.args.size(); ++i) {
      if (!drop[c.args[i]]) {
        keep_pos.push_back((int)i);
        new_args.push_back(out.old_to_new[c.args[i]]);
      }
    }
    if (keep_pos.empty()) continue;
    auto key = std::make_pair(c.rel, keep_pos);
    auto it = memo.find(key);
    int ridx;
    if (it != memo.end()) {
      ridx = it->second;
    } else {
      ridx = out.instance.intern(project_relation(x.rels[c.rel], keep_pos));
      memo.emplace(key, ridx);
    }
    out.instance.constraints.push_back({ridx, std::move(new_args)});
  }
  return out;
}

TemporalInstance contract_instance(const TemporalInstance& x,
                                   const std::vector<char>& fuse) {
  require((int)fuse.size() == x.num_vars, "fuse mask has wrong length");
  TemporalInstance out;
  out.num_vars = x.num_vars;
  std::map<std::pair<int, std::vector<int>>, int> memo;
  for (const auto& c : x.constraints) {
    std::vector<int> fuse_pos;
    for (size_t i = 0; i < c.args.size(); ++i)
      if (fuse[c.args[i]]) fuse_pos.push_back((int)i);
    int ridx;
    if (fuse_pos.size() <= 1) {
      ridx = out.intern(x.rels[c.rel]);
    } else {
      auto key = std::make_pair(c.rel, fuse_pos);
      auto it = memo.find(key);
      if (it != memo.end()) {
        ridx = it->second;
      } else {
        ridx = out.intern(contract_relation(x.rels[c.rel], fuse_pos));
        memo.emplace(key, ridx);
      }
    }
    out.constraints.push_back({ridx, c.args});
  }
  return out;
}

namespace {

// ---- two-element sign quotient machinery --------------------------------

constexpr int kZ = 1, kP = 2;  // domain bitmasks

struct SignView {
  std::vector<std::vector<Tuple>> tuples;  // per relation-pool entry
};

SignView sign_view(const TemporalInstance& x) {
  SignView sv;
  for (const auto& r : x.rels) sv.tuples.push_back(sign_vectors(r));
  return sv;
}

// Arc consistency over {Z, P} with initial masks; returns false on wipeout.
bool sign_ac(const TemporalInstance& x, const SignView& sv,
             std::vector<int>& mask) {
  for (int m : mask)
    if (!m) return false;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : x.constraints) {
      const auto& tuples = sv.tuples[c.rel];
      const int r = (int)c.args.size();
      std::vector<int> seen(r, 0);
      for (const Tuple& t : tuples) {
        bool ok = true;
        for (int i = 0; i < r && ok; ++i)
          ok = (mask[c.args[i]] >> t[i]) & 1;
        if (!ok) continue;
        for (int i = 0; i < r; ++i) seen[i] |= 1 << t[i];
      }
      for (int i = 0; i < r; ++i) {
        int v = c.args[i];
        int nm = mask[v] & seen[i];
        if (nm != mask[v]) {
          if (!nm) return false;
          mask[v] = nm;
          changed = true;
        }
      }
    }
  }
  return true;
}

bool sign_holds(const TemporalInstance& x, const SignView& sv,
                const std::vector<char>& h) {
  for (const auto& c : x.constraints) {
    Tuple t(c.args.size());
    for (size_t i = 0; i < c.args.size(); ++i) t[i] = h[c.args[i]];
    const auto& tuples = sv.tuples[c.rel];
    if (!std::binary_search(tuples.begin(), tuples.end(), t)) return false;
  }
  return true;
}

FreeSet pack_free_set(const std::vector<char>& h) {
  FreeSet f;
  f.witness.resize(h.size());
  for (size_t v = 0; v < h.size(); ++v) {
    f.witness[v] = (char)(h[v] == 0);
    if (h[v] == 0) f.vars.push_back((int)v);
  }
  return f;
}

std::vector<int> sign_masks_from_domains(const Domains& dom, int pin,
                                         int pin_value) {
  std::vector<int> mask(dom.size(), 0);
  for (size_t v = 0; v < dom.size(); ++v) {
    for (int val : dom[v]) {
      require(val >= pin_value, "domain value below the pinned minimum");
      mask[v] |= val == pin_value ? kZ : kP;
    }
  }
  require(pin >= 0 && pin < (int)dom.size(), "pin variable out of range");
  require(mask[pin] & kZ, "pinned value missing from the pin's domain");
  mask[pin] = kZ;
  return mask;
}

}  // namespace

std::optional<FreeSet> free_set_semilattice(const TemporalInstance& x,
                                            const Domains& dom, int pin,
                                            int pin_value, BoolOp op) {
  validate(x);
  require(op == BoolOp::Or || op == BoolOp::And,
          "free set extraction needs a semilattice operation");
  require((int)dom.size() == x.num_vars, "domain family has wrong length");
  TemporalInstance nx = dedupe_args(x);
  SignView sv = sign_view(nx);
  std::vector<int> mask = sign_masks_from_domains(dom, pin, pin_value);
  if (!sign_ac(nx, sv, mask)) return std::nullopt;
  std::vector<char> h(nx.num_vars);
  for (int v = 0; v < nx.num_vars; ++v) {
    if (op == BoolOp::Or)
      h[v] = (char)((mask[v] & kP) ? 1 : 0);
    else
      h[v] = (char)((mask[v] & kZ) ? 0 : 1);
  }
  ensure(sign_holds(nx, sv, h),
         "extremal assignment violates a quotient constraint");
  ensure(h[pin] == 0, "pin escaped the zero class");
  return pack_free_set(h);
}

std::optional<FreeSet> free_set_minority(const TemporalInstance& x) {
  validate(x);
  TemporalInstance nx = dedupe_args(x);
  SignView sv = sign_view(nx);

  Gf2System sys;
  sys.num_vars = nx.num_vars;
  for (const auto& c : nx.constraints) {
    const auto& tuples = sv.tuples[c.rel];
    if (tuples.empty()) return std::nullopt;
    const int r = (int)c.args.size();
    // The sign relation must be an affine subspace of its cube.
    {
      std::vector<unsigned> words;
      for (const Tuple& t : tuples) {
        unsigned w = 0;
        for (int i = 0; i < r; ++i) w |= (unsigned)t[i] << i;
        words.push_back(w);
      }
      std::vector<unsigned> basis;
      for (size_t i = 1; i < words.size(); ++i) {
        unsigned w = words[i] ^ words[0];
        for (unsigned b : basis) w = std::min(w, w ^ b);
        if (w) basis.push_back(w);
      }
      ensure((size_t)1 << basis.size() == words.size(),
             "sign quotient relation is not affine");
    }
    // Every parity functional constant on the relation becomes a row.
    for (unsigned f = 1; f < (1u << r); ++f) {
      int val = -1;
      bool constant = true;
      for (const Tuple& t : tuples) {
        int acc = 0;
        for (int i = 0; i < r; ++i)
          if ((f >> i) & 1) acc ^= t[i];
        if (val < 0)
          val = acc;
        else if (val != acc) {
          constant = false;
          break;
        }
      }
      if (!constant) continue;
      std::vector<long> vars;
      for (int i = 0; i < r; ++i)
        if ((f >> i) & 1) vars.push_back(c.args[i]);
      sys.add_row(vars, val);
    }
  }
  // The all-positive map satisfies every row, so the system is consistent;
  // with free variables at zero, an all-ones solution is the unique one.
  auto sol = gf2_solve(sys);
  ensure(sol.has_value(), "sign parity rows exclude the all-positive map");
  std::vector<char> h = *sol;
  bool any_zero = false;
  for (char b : h) any_zero |= (b == 0);
  if (!any_zero) return std::nullopt;
  ensure(sign_holds(nx, sv, h),
         "affine solution violates a quotient constraint");
  return pack_free_set(h);
}

std::optional<FreeSet> minimal_free_set(const TemporalInstance& x,
                                        const std::vector<char>& within,
                                        int seed) {
  validate(x);
  require((int)within.size() == x.num_vars, "within mask has wrong length");
  require(seed >= 0 && seed < x.num_vars && within[seed],
          "seed must lie in the candidate set");
  TemporalInstance nx = dedupe_args(x);
  SignView sv = sign_view(nx);

  // Forced-zero set when `s` is pinned to zero; absent on wipeout.
  auto forced = [&](int s) -> std::optional<std::vector<char>> {
    std::vector<int> mask(nx.num_vars);
    for (int v = 0; v < nx.num_vars; ++v)
      mask[v] = within[v] ? (kZ | kP) : kP;
    mask[s] = kZ;
    if (!sign_ac(nx, sv, mask)) return std::nullopt;
    std::vector<char> h(nx.num_vars);
    for (int v = 0; v < nx.num_vars; ++v) h[v] = (char)((mask[v] & kP) ? 1 : 0);
    ensure(sign_holds(nx, sv, h),
           "extremal assignment violates a quotient constraint");
    return h;
  };

  auto cur = forced(seed);
  if (!cur) return std::nullopt;
  auto zeros = [&](const std::vector<char>& h) {
    long n = 0;
    for (char c : h) n += (c == 0);
    return n;
  };
  for (bool improved = true; improved;) {
    improved = false;
    long cur_size = zeros(*cur);
    for (int y = 0; y < x.num_vars && !improved; ++y) {
      if ((*cur)[y] != 0) continue;
      auto next = forced(y);
      ensure(next.has_value(), "reseeding inside a free set cannot fail");
      if (zeros(*next) < cur_size) {
        cur = next;
        improved = true;
      }
    }
  }
  return pack_free_set(*cur);
}

std::optional<Decomposition> decompose(const TemporalInstance& x,
                                       int domain_size, int k) {
  validate(x);
  Decomposition out;
  TemporalInstance cur = dedupe_args(x);
  std::vector<int> to_orig(x.num_vars);
  std::iota(to_orig.begin(), to_orig.end(), 0);
  while (cur.num_vars > 0) {
    FiniteView fv = to_finite(cur, domain_size);
    auto h = k_strategy(fv.instance, fv.structure, k);
    if (!h) return std::nullopt;
    Domains dom(cur.num_vars);
    int a_min = domain_size;
    for (int v = 0; v < cur.num_vars; ++v) {
      dom[v] = h->values_of(v);
      a_min = std::min(a_min, dom[v].front());
    }
    int pin = -1;
    for (int v = 0; v < cur.num_vars && pin < 0; ++v)
      if (dom[v].front() == a_min) pin = v;
    auto f = free_set_semilattice(cur, dom, pin, a_min, BoolOp::Or);
    ensure(f.has_value(), "free set must exist under a bounded strategy");
    std::vector<char> within(cur.num_vars, 0);
    for (int v : f->vars) within[v] = 1;
    auto f1 = minimal_free_set(cur, within, f->vars.front());
    ensure(f1.has_value(), "minimal free set must exist inside a free set");
    for (size_t i = 0; i < f1->vars.size(); ++i)
      for (size_t j = i + 1; j < f1->vars.size(); ++j)
        for (auto [aa, bb] : h->pairs_of(f1->vars[i], f1->vars[j]))
          ensure(aa == bb, "strategy not diagonal on the minimal free set");
    std::vector<int> layer;
    for (int v : f1->vars) layer.push_back(to_orig[v]);
    out.layers.push_back(std::move(layer));
    out.layer_value.push_back(a_min);
    std::vector<char> fuse(cur.num_vars, 0);
    for (int v : f1->vars) fuse[v] = 1;
    TemporalInstance contracted = contract_instance(cur, fuse);
    Projection proj = project_instance(contracted, fuse);
    std::vector<int> next_orig;
    for (int old : proj.kept) next_orig.push_back(to_orig[old]);
    to_orig = std::move(next_orig);
    cur = std::move(proj.instance);
  }
  return out;
}

bool verify_assignment(const TemporalInstance& x, const std::vector<long>& s) {
  if ((int)s.size() != x.num_vars) return false;
  for (const auto& c : x.constraints) {
    std::vector<long> vals(c.args.size());
    for (size_t i = 0; i < c.args.size(); ++i) vals[i] = s[c.args[i]];
    if (!x.rel_of(c).contains(canonical_pattern(vals))) return false;
  }
  return true;
}

namespace {

// Peel free sets off the instance, assigning ascending layer ranks.
Verdict peel(const TemporalInstance& x, Domains dom, bool minority, BoolOp op) {
  Verdict v;
  v.assignment.assign(x.num_vars, -1);
  TemporalInstance cur = x;
  std::vector<int> to_orig(x.num_vars);
  std::iota(to_orig.begin(), to_orig.end(), 0);
  long layer = 0;
  while (cur.num_vars > 0) {
    std::optional<FreeSet> f;
    if (minority) {
      f = free_set_minority(cur);
    } else {
      int pin_value = -1, pin = -1;
      for (int w = 0; w < cur.num_vars; ++w)
        if (pin_value < 0 || dom[w].front() < pin_value)
          pin_value = dom[w].front();
      for (int w = 0; w < cur.num_vars && pin < 0; ++w)
        if (dom[w].front() == pin_value) pin = w;
      f = free_set_semilattice(cur, dom, pin, pin_value, op);
    }
    ensure(f.has_value(), "free set extraction failed under a valid family");
    for (int w : f->vars) v.assignment[to_orig[w]] = layer;
    ++layer;
    std::vector<char> drop(cur.num_vars, 0);
    for (int w : f->vars) drop[w] = 1;
    Projection proj = project_instance(cur, drop);
    Domains next_dom;
    std::vector<int> next_orig;
    for (int old : proj.kept) {
      next_dom.push_back(dom[old]);
      next_orig.push_back(to_orig[old]);
    }
    dom = std::move(next_dom);
    to_orig = std::move(next_orig);
    cur = std::move(proj.instance);
  }
  ensure(verify_assignment(x, v.assignment),
         "peeled assignment failed verification");
  v.tag = VerdictTag::Sat;
  return v;
}

Verdict solve_path(const TemporalInstance& x, const Classification& c,
                   int k_override) {
  const int n = std::max(1, x.num_vars);
  int max_ar = 1;
  for (const auto& con : x.constraints)
    max_ar = std::max(max_ar, (int)con.args.size());
  switch (c.path) {
    case SolvePath::SacPp: {
      FiniteView fv = to_finite(x, n);
      auto dom = sac(fv.instance, fv.structure);
      if (!dom) return {VerdictTag::Unsat, {}, "sac"};
      return peel(x, *dom, /*minority=*/false,
                  c.quotient_or ? BoolOp::Or : BoolOp::And);
    }
    case SolvePath::SaipMinority: {
      FiniteView fv = to_finite(x, n);
      auto dom = saip(fv.instance, fv.structure);
      if (!dom) return {VerdictTag::Unsat, {}, "saip"};
      return peel(x, *dom, /*minority=*/true, BoolOp::Or);
    }
    case SolvePath::KconsLl: {
      int k = k_override > 0 ? k_override : std::max(3, max_ar + 1);
      auto d = decompose(x, n, k);
      if (!d) return {VerdictTag::Unsat, {}, "k-consistency"};
      Verdict v;
      v.assignment.assign(x.num_vars, -1);
      for (size_t i = 0; i < d->layers.size(); ++i)
        for (int w : d->layers[i]) v.assignment[w] = (long)i;
      ensure(verify_assignment(x, v.assignment),
             "layered assignment failed verification");
      v.tag = VerdictTag::Sat;
      return v;
    }
    case SolvePath::CompleteOnly: {
      int k = k_override > 0 ? k_override : std::max(2, max_ar + 1);
      FiniteView fv = to_finite(x, n);
      auto h = k_strategy(fv.instance, fv.structure, k);
      if (!h) return {VerdictTag::Unsat, {}, "k-consistency"};
      return {VerdictTag::Unknown, {}, "template outside the solvable classes"};
    }
  }
  throw internal_error("unreachable solve path");
}

}  // namespace

Verdict solve(const TemporalInstance& x, const TemporalStructure& b,
              int k_override) {
  validate(x);
  if (x.num_vars == 0) return {VerdictTag::Sat, {}, ""};
  // The relaxations read repeated arguments position-wise, which is weaker
  // than the constraint itself; fold repeats into the relation first.
  TemporalInstance nx = dedupe_args(x);
  Classification c = classify(b);
  if (!c.dualized) {
    Verdict v = solve_path(nx, c, k_override);
    if (v.tag == VerdictTag::Sat)
      ensure(verify_assignment(x, v.assignment), "verification failed");
    return v;
  }
  TemporalInstance xr = reverse_instance(nx);
  Verdict v = solve_path(xr, c, k_override);
  if (v.tag == VerdictTag::Sat) {
    long top = 0;
    for (long val : v.assignment) top = std::max(top, val);
    for (long& val : v.assignment) val = top - val;
    ensure(verify_assignment(x, v.assignment),
           "dualized assignment failed verification");
  }
  return v;
}

}  // namespace tempo
