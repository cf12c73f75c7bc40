#include "tempo/relstruct.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tempo {

Caps& caps() {
  static Caps c = [] {
    Caps init;
    if (const char* env = std::getenv("TEMPO_PCSP_CAPS")) {
      std::string s(env);
      size_t pos = 0;
      while (pos < s.size()) {
        size_t end = s.find(',', pos);
        if (end == std::string::npos) end = s.size();
        std::string item = s.substr(pos, end - pos);
        size_t eq = item.find('=');
        if (eq != std::string::npos) {
          std::string key = item.substr(0, eq);
          long val = std::strtol(item.c_str() + eq + 1, nullptr, 10);
          if (key == "max_vars") init.max_vars = val;
          else if (key == "max_k") init.max_k = (int)val;
          else if (key == "max_arity") init.max_arity = (int)val;
          else if (key == "max_power") init.max_power = (int)val;
          else if (key == "max_iso") init.max_iso = (int)val;
          else if (key == "enum_per_relation") init.enum_per_relation = val;
          else throw input_error("unknown cap key: " + key);
        }
        pos = end + 1;
      }
    }
    return init;
  }();
  return c;
}

const std::vector<Tuple>& Structure::rel(const std::string& name) const {
  auto it = relations.find(name);
  require(it != relations.end(), "unknown relation: " + name);
  return it->second;
}

int Structure::arity_of(const std::string& name) const {
  for (const auto& s : signature)
    if (s.name == name) return s.arity;
  throw input_error("relation not in signature: " + name);
}

bool Structure::has(const std::string& name, const Tuple& t) const {
  const auto& ts = rel(name);
  return std::binary_search(ts.begin(), ts.end(), t);
}

void Structure::add(const std::string& name, Tuple t) {
  relations[name].push_back(std::move(t));
}

void Structure::normalize() {
  for (auto& [name, ts] : relations) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }
}

void validate(const Structure& a) {
  require(a.size >= 0, "negative structure size");
  std::set<std::string> names;
  for (const auto& s : a.signature) {
    require(s.arity >= 1, "relation arity must be positive: " + s.name);
    require(names.insert(s.name).second, "duplicate relation name: " + s.name);
    require(a.relations.count(s.name) > 0, "missing relation table: " + s.name);
  }
  for (const auto& [name, ts] : a.relations) {
    require(names.count(name) > 0, "relation not in signature: " + name);
    int ar = 0;
    for (const auto& s : a.signature)
      if (s.name == name) ar = s.arity;
    for (const auto& t : ts) {
      require((int)t.size() == ar, "tuple arity mismatch in " + name);
      for (int v : t) require(v >= 0 && v < a.size, "element out of range in " + name);
    }
    require(std::is_sorted(ts.begin(), ts.end()), "relation not sorted: " + name);
    require(std::adjacent_find(ts.begin(), ts.end()) == ts.end(),
            "duplicate tuple in " + name);
  }
}

void Instance::normalize() {
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()),
                    constraints.end());
}

void validate(const Instance& x, const Structure& a) {
  require(x.num_vars >= 0, "negative variable count");
  if (!x.var_names.empty())
    require((int)x.var_names.size() == x.num_vars, "variable name count mismatch");
  for (const auto& c : x.constraints) {
    require((int)c.args.size() == a.arity_of(c.rel),
            "constraint arity mismatch on " + c.rel);
    for (int v : c.args)
      require(v >= 0 && v < x.num_vars, "constraint argument out of range");
  }
}

bool satisfies(const Instance& x, const Structure& a, const VarMap& h) {
  if ((int)h.size() != x.num_vars) return false;
  for (int v : h)
    if (v < 0 || v >= a.size) return false;
  Tuple img;
  for (const auto& c : x.constraints) {
    img.clear();
    for (int v : c.args) img.push_back(h[v]);
    if (!a.has(c.rel, img)) return false;
  }
  return true;
}

namespace {

using Domains = std::vector<std::vector<int>>;  // sorted candidate values

// One value of one variable has support in a constraint if some tuple of
// the relation matches it, matches repeated arguments, and stays inside
// the current domains.
bool has_support(const Constraint& c, const std::vector<Tuple>& ts,
                 const Domains& dom, int pos, int val) {
  for (const auto& t : ts) {
    if (t[pos] != val) continue;
    bool ok = true;
    for (size_t j = 0; ok && j < c.args.size(); j++) {
      for (size_t j2 = j + 1; ok && j2 < c.args.size(); j2++)
        if (c.args[j] == c.args[j2] && t[j] != t[j2]) ok = false;
      if (ok && !std::binary_search(dom[c.args[j]].begin(), dom[c.args[j]].end(), t[j]))
        ok = false;
    }
    if (ok) return true;
  }
  return false;
}

// Arc-consistency fixpoint on the given domains; false when some domain
// empties.
bool ac_prune(const Instance& x, const Structure& a, Domains& dom) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : x.constraints) {
      const auto& ts = a.rel(c.rel);
      for (size_t i = 0; i < c.args.size(); i++) {
        auto& d = dom[c.args[i]];
        std::vector<int> kept;
        kept.reserve(d.size());
        for (int v : d)
          if (has_support(c, ts, dom, (int)i, v)) kept.push_back(v);
        if (kept.size() != d.size()) {
          d = std::move(kept);
          changed = true;
          if (d.empty()) return false;
        }
      }
    }
  }
  return true;
}

bool backtrack(const Instance& x, const Structure& a, Domains& dom, VarMap& out);

bool try_value(const Instance& x, const Structure& a, const Domains& dom,
               int var, int val, VarMap& out) {
  Domains next = dom;
  next[var] = {val};
  if (!ac_prune(x, a, next)) return false;
  return backtrack(x, a, next, out);
}

bool backtrack(const Instance& x, const Structure& a, Domains& dom, VarMap& out) {
  int var = -1;
  size_t best = 0;
  for (int i = 0; i < x.num_vars; i++)
    if (dom[i].size() > 1 && (var < 0 || dom[i].size() < best)) {
      var = i;
      best = dom[i].size();
    }
  if (var < 0) {
    out.resize(x.num_vars);
    for (int i = 0; i < x.num_vars; i++) out[i] = dom[i][0];
    return true;
  }
  for (int val : dom[var])
    if (try_value(x, a, dom, var, val, out)) return true;
  return false;
}

long count_rec(const Instance& x, const Structure& a, Domains& dom) {
  int var = -1;
  size_t best = 0;
  for (int i = 0; i < x.num_vars; i++)
    if (dom[i].size() > 1 && (var < 0 || dom[i].size() < best)) {
      var = i;
      best = dom[i].size();
    }
  if (var < 0) return 1;
  long total = 0;
  for (int val : dom[var]) {
    Domains next = dom;
    next[var] = {val};
    if (ac_prune(x, a, next)) total += count_rec(x, a, next);
  }
  return total;
}

Domains full_domains(const Instance& x, const Structure& a) {
  std::vector<int> all(a.size);
  std::iota(all.begin(), all.end(), 0);
  return Domains(x.num_vars, all);
}

}  // namespace

std::optional<VarMap> hom_search(const Instance& x, const Structure& a) {
  validate(x, a);
  if (x.num_vars == 0) return VarMap{};
  if (a.size == 0) return std::nullopt;
  Domains dom = full_domains(x, a);
  if (!ac_prune(x, a, dom)) return std::nullopt;
  VarMap out;
  if (!backtrack(x, a, dom, out)) return std::nullopt;
  ensure(satisfies(x, a, out), "hom_search produced a non-homomorphism");
  return out;
}

long hom_count(const Instance& x, const Structure& a, int threads) {
  validate(x, a);
  if (x.num_vars == 0) return 1;
  if (a.size == 0) return 0;
  Domains dom = full_domains(x, a);
  if (!ac_prune(x, a, dom)) return 0;
  const std::vector<int> first = dom[0];
  long total = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : total) \
    num_threads(threads > 1 ? threads : 1) if (threads > 1)
#endif
  for (size_t i = 0; i < first.size(); i++) {
    Domains next = dom;
    next[0] = {first[i]};
    if (ac_prune(x, a, next)) total += count_rec(x, a, next);
  }
  return total;
}

Instance as_instance(const Structure& a) {
  Instance x;
  x.num_vars = a.size;
  for (const auto& s : a.signature)
    for (const auto& t : a.rel(s.name)) x.constraints.push_back({s.name, t});
  x.normalize();
  return x;
}

std::optional<VarMap> hom_search(const Structure& a, const Structure& b) {
  return hom_search(as_instance(a), b);
}

long hom_count_struct(const Structure& a, const Structure& b, int threads) {
  return hom_count(as_instance(a), b, threads);
}

Structure product(const Structure& a, const Structure& b) {
  require(a.signature.size() == b.signature.size(), "signature mismatch in product");
  Structure p;
  p.signature = a.signature;
  p.size = a.size * b.size;
  for (const auto& s : p.signature) {
    require(b.arity_of(s.name) == s.arity, "signature mismatch in product");
    auto& out = p.relations[s.name];
    for (const auto& ta : a.rel(s.name))
      for (const auto& tb : b.rel(s.name)) {
        Tuple t(s.arity);
        for (int i = 0; i < s.arity; i++) t[i] = ta[i] * b.size + tb[i];
        out.push_back(std::move(t));
      }
  }
  p.normalize();
  return p;
}

Structure quotient(const Structure& a, const std::vector<int>& class_of) {
  require((int)class_of.size() == a.size, "partition size mismatch");
  int k = 0;
  for (int c : class_of) {
    require(c >= 0, "negative class id");
    k = std::max(k, c + 1);
  }
  Structure q;
  q.signature = a.signature;
  q.size = k;
  for (const auto& s : q.signature) {
    auto& out = q.relations[s.name];
    for (const auto& t : a.rel(s.name)) {
      Tuple img(t.size());
      for (size_t i = 0; i < t.size(); i++) img[i] = class_of[t[i]];
      out.push_back(std::move(img));
    }
  }
  q.normalize();
  return q;
}

Structure induced_substructure(const Structure& a, const std::vector<int>& elems) {
  require(std::is_sorted(elems.begin(), elems.end()) &&
              std::adjacent_find(elems.begin(), elems.end()) == elems.end(),
          "element subset must be sorted and unique");
  std::vector<int> index(a.size, -1);
  for (size_t i = 0; i < elems.size(); i++) {
    require(elems[i] >= 0 && elems[i] < a.size, "element out of range");
    index[elems[i]] = (int)i;
  }
  Structure r;
  r.signature = a.signature;
  r.size = (int)elems.size();
  for (const auto& s : r.signature) {
    auto& out = r.relations[s.name];
    for (const auto& t : a.rel(s.name)) {
      Tuple img(t.size());
      bool inside = true;
      for (size_t i = 0; inside && i < t.size(); i++) {
        if (index[t[i]] < 0) inside = false;
        else img[i] = index[t[i]];
      }
      if (inside) out.push_back(std::move(img));
    }
  }
  r.normalize();
  return r;
}

bool isomorphic_via(const Structure& a, const Structure& b, const VarMap& h) {
  if (a.size != b.size || (int)h.size() != a.size) return false;
  std::vector<char> seen(b.size, 0);
  for (int v : h) {
    if (v < 0 || v >= b.size || seen[v]) return false;
    seen[v] = 1;
  }
  if (a.signature.size() != b.signature.size()) return false;
  for (const auto& s : a.signature) {
    if (b.relations.find(s.name) == b.relations.end()) return false;
    const auto& ta = a.rel(s.name);
    const auto& tb = b.rel(s.name);
    if (ta.size() != tb.size()) return false;
    Tuple img;
    for (const auto& t : ta) {
      img.resize(t.size());
      for (size_t i = 0; i < t.size(); i++) img[i] = h[t[i]];
      if (!std::binary_search(tb.begin(), tb.end(), img)) return false;
    }
  }
  return true;
}

namespace {

// Per-element profile: for every relation and position, how many tuples
// put the element there. Isomorphisms preserve profiles.
std::vector<std::vector<int>> profiles(const Structure& a) {
  std::vector<std::vector<int>> p(a.size);
  for (const auto& s : a.signature)
    for (int e = 0; e < a.size; e++) p[e].resize(p[e].size() + s.arity, 0);
  int off = 0;
  for (const auto& s : a.signature) {
    for (const auto& t : a.rel(s.name))
      for (int i = 0; i < s.arity; i++) p[t[i]][off + i]++;
    off += s.arity;
  }
  return p;
}

bool iso_rec(const Structure& a, const Structure& b,
             const std::vector<std::vector<int>>& pa,
             const std::vector<std::vector<int>>& pb, VarMap& h,
             std::vector<char>& used, int next) {
  if (next == a.size) return isomorphic_via(a, b, h);
  for (int v = 0; v < b.size; v++) {
    if (used[v] || pa[next] != pb[v]) continue;
    h[next] = v;
    used[v] = 1;
    if (iso_rec(a, b, pa, pb, h, used, next + 1)) return true;
    used[v] = 0;
  }
  return false;
}

}  // namespace

bool isomorphic(const Structure& a, const Structure& b) {
  require(a.size <= caps().max_iso && b.size <= caps().max_iso,
          "isomorphic: structures exceed the exhaustive-search cap");
  if (a.size != b.size) return false;
  if (a.signature.size() != b.signature.size()) return false;
  for (const auto& s : a.signature) {
    if (b.relations.find(s.name) == b.relations.end()) return false;
    if (b.arity_of(s.name) != s.arity) return false;
    if (a.rel(s.name).size() != b.rel(s.name).size()) return false;
  }
  auto pa = profiles(a), pb = profiles(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  VarMap h(a.size, -1);
  std::vector<char> used(b.size, 0);
  return iso_rec(a, b, pa, pb, h, used, 0);
}

}  // namespace tempo
