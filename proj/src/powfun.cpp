#include "tempo/powfun.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "tempo/util.hpp"

namespace tempo {

namespace {

long checked_pow(long base, int exp, long limit) {
  long r = 1;
  for (int i = 0; i < exp; i++) {
    require(r <= limit / std::max(base, 1L), "power domain too large");
    r *= base;
  }
  require(r >= 1 && r <= limit, "power domain too large");
  return r;
}

// All maps [l] -> [m] as digit vectors (values 1..m), lexicographic.
std::vector<std::vector<int>> index_maps(int l, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(l, 1);
  while (true) {
    out.push_back(cur);
    int p = l - 1;
    while (p >= 0 && cur[p] == m) cur[p--] = 1;
    if (p < 0) break;
    cur[p]++;
  }
  return out;
}

void check_base_name(const std::string& name) {
  require(!name.empty(), "relation name must be nonempty");
  require(name.find('@') == std::string::npos &&
              name.find('/') == std::string::npos,
          "relation name may not contain '@' or '/'");
  require(name != "eq", "relation name 'eq' is reserved");
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

int pattern_index(const OrderPattern& p, int m) {
  const auto& all = all_patterns(m);
  auto it = std::lower_bound(all.begin(), all.end(), p);
  require(it != all.end() && *it == p, "value is not a dense rank pattern");
  return int(it - all.begin());
}

}  // namespace

long encode_tuple(const std::vector<int>& t, int d) {
  require(d >= 1, "domain must be nonempty");
  long idx = 0;
  for (int v : t) {
    require(v >= 0 && v < d, "tuple entry out of domain");
    idx = idx * d + v;
  }
  return idx;
}

std::vector<int> decode_tuple(long idx, int d, int m) {
  require(d >= 1 && m >= 0, "bad decode shape");
  std::vector<int> t(m, 0);
  for (int p = m - 1; p >= 0; p--) {
    t[p] = int(idx % d);
    idx /= d;
  }
  require(idx == 0, "tuple code out of range");
  return t;
}

std::string pow_rel_name(const std::string& base, const std::vector<int>& idx) {
  std::string s = base + "@";
  for (int v : idx) {
    require(v >= 1 && v <= 9, "index digit out of range");
    s += char('0' + v);
  }
  return s;
}

std::string pow_eq_name(const std::vector<int>& i, const std::vector<int>& j) {
  require(i.size() == j.size() && !i.empty(), "index maps must match in length");
  std::string s = "eq@";
  for (int v : i) {
    require(v >= 1 && v <= 9, "index digit out of range");
    s += char('0' + v);
  }
  s += '/';
  for (int v : j) {
    require(v >= 1 && v <= 9, "index digit out of range");
    s += char('0' + v);
  }
  return s;
}

Structure mpow(const Structure& a, int m) {
  validate(a);
  require(m >= 1 && m <= caps().max_power, "power exponent out of range");
  require(m <= 9, "power exponent out of range");
  int max_ar = 0;
  for (const auto& sym : a.signature) {
    check_base_name(sym.name);
    max_ar = std::max(max_ar, sym.arity);
  }
  require(m >= max_ar, "power exponent below maximum arity");
  require(a.size >= 1, "domain must be nonempty");
  const long D = checked_pow(a.size, m, 1000);

  std::vector<std::vector<int>> dec(D);
  for (long e = 0; e < D; e++) dec[e] = decode_tuple(e, a.size, m);

  Structure out;
  out.size = int(D);

  for (const auto& sym : a.signature) {
    const auto& table = a.rel(sym.name);
    for (const auto& idx : index_maps(sym.arity, m)) {
      std::string name = pow_rel_name(sym.name, idx);
      out.signature.push_back({name, 1});
      auto& tuples = out.relations[name];
      Tuple sub(sym.arity);
      for (long e = 0; e < D; e++) {
        for (int s = 0; s < sym.arity; s++) sub[s] = dec[e][idx[s] - 1];
        if (std::binary_search(table.begin(), table.end(), sub))
          tuples.push_back({int(e)});
      }
    }
  }

  for (int l = 1; l <= m; l++) {
    auto maps = index_maps(l, m);
    for (const auto& i : maps)
      for (const auto& j : maps) {
        std::string name = pow_eq_name(i, j);
        out.signature.push_back({name, 2});
        auto& tuples = out.relations[name];
        for (long e = 0; e < D; e++)
          for (long f = 0; f < D; f++) {
            bool ok = true;
            for (int s = 0; s < l && ok; s++)
              ok = dec[e][i[s] - 1] == dec[f][j[s] - 1];
            if (ok) tuples.push_back({int(e), int(f)});
          }
      }
  }

  out.normalize();
  return out;
}

Structure mpow_quotient_temporal(const TemporalStructure& b, int m) {
  require(m >= 1 && m <= 3, "power exponent out of range");
  require(m >= b.max_arity(), "power exponent below maximum arity");
  const auto& pats = all_patterns(m);
  const int P = int(pats.size());

  Structure out;
  out.size = P;

  for (const auto& [base, rel] : b.relations) {
    check_base_name(base);
    for (const auto& idx : index_maps(rel.arity, m)) {
      std::string name = pow_rel_name(base, idx);
      out.signature.push_back({name, 1});
      auto& tuples = out.relations[name];
      std::vector<long> sub(rel.arity);
      for (int p = 0; p < P; p++) {
        for (int s = 0; s < rel.arity; s++) sub[s] = pats[p][idx[s] - 1];
        if (rel.contains(canonical_pattern(sub))) tuples.push_back({p});
      }
    }
  }

  // Joint weak orders on 2m positions, bucketed by the patterns of the two
  // halves; (p,q) is eq-related when some joint order links the halves on
  // the indexed coordinates.
  const auto& joint = all_patterns(2 * m);
  std::map<std::pair<int, int>, std::vector<const OrderPattern*>> buckets;
  {
    std::vector<long> half(m);
    for (const auto& w : joint) {
      for (int s = 0; s < m; s++) half[s] = w[s];
      int lp = pattern_index(canonical_pattern(half), m);
      for (int s = 0; s < m; s++) half[s] = w[m + s];
      int rp = pattern_index(canonical_pattern(half), m);
      buckets[{lp, rp}].push_back(&w);
    }
  }

  for (int l = 1; l <= m; l++) {
    auto maps = index_maps(l, m);
    for (const auto& i : maps)
      for (const auto& j : maps) {
        std::string name = pow_eq_name(i, j);
        out.signature.push_back({name, 2});
        auto& tuples = out.relations[name];
        for (const auto& [pq, ws] : buckets) {
          bool linked = false;
          for (const auto* w : ws) {
            bool ok = true;
            for (int s = 0; s < l && ok; s++)
              ok = (*w)[i[s] - 1] == (*w)[m + j[s] - 1];
            if (ok) {
              linked = true;
              break;
            }
          }
          if (linked) tuples.push_back({pq.first, pq.second});
        }
      }
  }

  out.normalize();
  return out;
}

namespace {

// Parsed power-signature symbol.
struct PowSymbol {
  bool is_eq = false;
  std::string base;
  std::vector<int> i, j;  // digit values 1..m; j used only for eq
};

PowSymbol parse_pow_symbol(const std::string& name, int m) {
  auto at = name.find('@');
  require(at != std::string::npos && at + 1 < name.size(),
          "not a power signature symbol: " + name);
  PowSymbol sym;
  std::string digits = name.substr(at + 1);
  std::string prefix = name.substr(0, at);
  auto parse_digits = [&](const std::string& s) {
    require(!s.empty(), "empty index list in symbol: " + name);
    std::vector<int> out;
    for (char c : s) {
      require(c >= '1' && c <= '9', "bad index digit in symbol: " + name);
      int v = c - '0';
      require(v <= m, "index digit exceeds exponent in symbol: " + name);
      out.push_back(v);
    }
    return out;
  };
  if (prefix == "eq") {
    auto slash = digits.find('/');
    require(slash != std::string::npos, "equality symbol lacks '/': " + name);
    sym.is_eq = true;
    sym.i = parse_digits(digits.substr(0, slash));
    sym.j = parse_digits(digits.substr(slash + 1));
    require(sym.i.size() == sym.j.size(),
            "equality index lists differ in length: " + name);
    require(int(sym.i.size()) <= m, "index list longer than exponent: " + name);
  } else {
    check_base_name(prefix);
    sym.base = prefix;
    sym.i = parse_digits(digits);
  }
  return sym;
}

}  // namespace

MlowResult mlow(const Structure& x, int m) {
  validate(x);
  require(m >= 1 && m <= 9, "power exponent out of range");

  std::map<std::string, int> base_arity;
  std::vector<std::pair<std::string, PowSymbol>> syms;
  for (const auto& rs : x.signature) {
    PowSymbol sym = parse_pow_symbol(rs.name, m);
    if (sym.is_eq) {
      require(rs.arity == 2, "equality symbol must be binary: " + rs.name);
    } else {
      require(rs.arity == 1, "indexed base symbol must be unary: " + rs.name);
      auto it = base_arity.emplace(sym.base, int(sym.i.size())).first;
      require(it->second == int(sym.i.size()),
              "inconsistent index lengths for base relation " + sym.base);
    }
    syms.emplace_back(rs.name, std::move(sym));
  }

  UnionFind uf(x.size * m);
  for (const auto& [name, sym] : syms) {
    if (!sym.is_eq) continue;
    for (const auto& t : x.rel(name))
      for (size_t s = 0; s < sym.i.size(); s++)
        uf.unite(t[0] * m + (sym.i[s] - 1), t[1] * m + (sym.j[s] - 1));
  }

  MlowResult res;
  res.class_of.assign(x.size * m, -1);
  int next = 0;
  std::vector<int> root_class(x.size * m, -1);
  for (int y = 0; y < x.size * m; y++) {
    int r = uf.find(y);
    if (root_class[r] < 0) root_class[r] = next++;
    res.class_of[y] = root_class[r];
  }

  res.structure.size = next;
  for (const auto& [base, ar] : base_arity)
    res.structure.signature.push_back({base, ar});
  for (const auto& [name, sym] : syms) {
    if (sym.is_eq) continue;
    auto& tuples = res.structure.relations[sym.base];
    for (const auto& t : x.rel(name)) {
      Tuple img(sym.i.size());
      for (size_t s = 0; s < sym.i.size(); s++)
        img[s] = res.class_of[t[0] * m + (sym.i[s] - 1)];
      tuples.push_back(std::move(img));
    }
  }
  res.structure.normalize();
  validate(res.structure);
  return res;
}

VarMap eta(const VarMap& h, const Structure& x, const MlowResult& lx,
           const Structure& b, int m) {
  require(int(h.size()) == x.size, "assignment size mismatch");
  require(int(lx.class_of.size()) == x.size * m, "glued structure mismatch");
  require(satisfies(as_instance(x), mpow(b, m), h),
          "input is not a homomorphism");

  VarMap g(lx.structure.size, -1);
  for (int a = 0; a < x.size; a++) {
    std::vector<int> digits = decode_tuple(h[a], b.size, m);
    for (int p = 0; p < m; p++) {
      int c = lx.class_of[a * m + p];
      if (g[c] < 0)
        g[c] = digits[p];
      else
        require(g[c] == digits[p],
                "input disagrees on glued coordinates; not a homomorphism");
    }
  }
  for (int c = 0; c < lx.structure.size; c++)
    ensure(g[c] >= 0, "glued class missing a coordinate");
  ensure(satisfies(as_instance(lx.structure), b, g),
         "adjunct of a homomorphism must be a homomorphism");
  return g;
}

VarMap mu(const VarMap& g, const Structure& x, const MlowResult& lx,
          const Structure& b, int m) {
  require(int(g.size()) == lx.structure.size, "assignment size mismatch");
  require(int(lx.class_of.size()) == x.size * m, "glued structure mismatch");
  for (int v : g) require(v >= 0 && v < b.size, "value out of target domain");
  require(satisfies(as_instance(lx.structure), b, g),
          "input is not a homomorphism");

  VarMap h(x.size, 0);
  std::vector<int> digits(m);
  for (int a = 0; a < x.size; a++) {
    for (int p = 0; p < m; p++) digits[p] = g[lx.class_of[a * m + p]];
    h[a] = int(encode_tuple(digits, b.size));
  }
  ensure(satisfies(as_instance(x), mpow(b, m), h),
         "adjunct of a homomorphism must be a homomorphism");
  return h;
}

long FuncTable::at(const std::vector<int>& args) const {
  require(int(args.size()) == arity, "argument count mismatch");
  long idx = encode_tuple(args, domain);
  require(idx < long(values.size()), "function table incomplete");
  return values[idx];
}

const OrderPattern& PatternTable::at(const std::vector<int>& t) const {
  require(int(t.size()) == m, "argument count mismatch");
  long idx = encode_tuple(t, domain);
  require(idx < long(entries.size()), "pattern table incomplete");
  return entries[idx];
}

PatternTable pi_map(const std::vector<long>& f, int m) {
  require(!f.empty(), "function table must be nonempty");
  require(m >= 1 && m <= 9, "power exponent out of range");
  PatternTable out;
  out.domain = int(f.size());
  out.m = m;
  const long D = checked_pow(out.domain, m, 4000000);
  out.entries.resize(D);
  std::vector<long> vals(m);
  for (long e = 0; e < D; e++) {
    std::vector<int> t = decode_tuple(e, out.domain, m);
    for (int p = 0; p < m; p++) vals[p] = f[t[p]];
    out.entries[e] = canonical_pattern(vals);
  }
  return out;
}

const OrderPattern& PolyTable::at(
    const std::vector<std::vector<int>>& tuples) const {
  require(int(tuples.size()) == arity, "argument count mismatch");
  const long D = checked_pow(domain, m, 4000000);
  long idx = 0;
  for (const auto& t : tuples) {
    require(int(t.size()) == m, "argument tuple length mismatch");
    idx = idx * D + encode_tuple(t, domain);
  }
  require(idx < long(entries.size()), "operation table incomplete");
  return entries[idx];
}

PolyTable xi_inf(const FuncTable& f, int m) {
  require(f.domain >= 1 && f.arity >= 1, "bad function table shape");
  require(m >= 1 && m <= 9, "power exponent out of range");
  const long D = checked_pow(f.domain, m, 4000000);
  const long total = checked_pow(D, f.arity, 4000000);
  require(long(f.values.size()) == checked_pow(f.domain, f.arity, 4000000),
          "function table incomplete");

  PolyTable out;
  out.domain = f.domain;
  out.m = m;
  out.arity = f.arity;
  out.entries.resize(total);
  std::vector<std::vector<int>> tup(f.arity);
  std::vector<int> args(f.arity);
  std::vector<long> vals(m);
  for (long idx = 0; idx < total; idx++) {
    long rest = idx;
    for (int k = f.arity - 1; k >= 0; k--) {
      tup[k] = decode_tuple(rest % D, f.domain, m);
      rest /= D;
    }
    for (int c = 0; c < m; c++) {
      for (int k = 0; k < f.arity; k++) args[k] = tup[k][c];
      vals[c] = f.at(args);
    }
    out.entries[idx] = canonical_pattern(vals);
  }
  return out;
}

PolyTable xi_step(const PolyTable& g) {
  require(g.m >= 2 && g.arity >= 1 && g.domain >= 1, "bad table shape");
  const int m = g.m - 1;
  const long D = checked_pow(g.domain, m, 4000000);
  const long total = checked_pow(D, g.arity, 4000000);

  PolyTable out;
  out.domain = g.domain;
  out.m = m;
  out.arity = g.arity;
  out.entries.resize(total);
  std::vector<std::vector<int>> padded(g.arity);
  std::vector<long> head(m);
  for (long idx = 0; idx < total; idx++) {
    long rest = idx;
    for (int k = g.arity - 1; k >= 0; k--) {
      padded[k] = decode_tuple(rest % D, g.domain, m);
      padded[k].push_back(padded[k].back());
      rest /= D;
    }
    const OrderPattern& full = g.at(padded);
    for (int c = 0; c < m; c++) head[c] = full[c];
    out.entries[idx] = canonical_pattern(head);
  }
  return out;
}

PatternTable restrict_hom(const PatternTable& h,
                          const std::vector<int>& indices) {
  const int m = h.m, k = int(indices.size());
  require(k >= 1 && k <= m, "index list size out of range");
  for (int s = 0; s < k; s++) {
    require(indices[s] >= 0 && indices[s] < m, "index out of range");
    require(s == 0 || indices[s] > indices[s - 1],
            "indices must be strictly increasing");
  }
  const int d = h.domain;
  require(long(h.entries.size()) == checked_pow(d, m, 4000000),
          "pattern table incomplete");

  std::vector<char> kept(m, 0);
  for (int s : indices) kept[s] = 1;
  std::vector<int> free_pos;
  for (int p = 0; p < m; p++)
    if (!kept[p]) free_pos.push_back(p);

  PatternTable out;
  out.domain = d;
  out.m = k;
  const long K = checked_pow(d, k, 4000000);
  out.entries.resize(K);
  const long F = checked_pow(d, int(free_pos.size()), 4000000);

  std::vector<int> full(m);
  std::vector<long> sub(k);
  for (long e = 0; e < K; e++) {
    std::vector<int> short_t = decode_tuple(e, d, k);
    bool first = true;
    for (long pad = 0; pad < F; pad++) {
      for (int s = 0; s < k; s++) full[indices[s]] = short_t[s];
      std::vector<int> padv = decode_tuple(pad, d, int(free_pos.size()));
      for (size_t s = 0; s < free_pos.size(); s++) full[free_pos[s]] = padv[s];
      const OrderPattern& w = h.at(full);
      for (int s = 0; s < k; s++) sub[s] = w[indices[s]];
      OrderPattern proj = canonical_pattern(sub);
      if (first) {
        out.entries[e] = proj;
        first = false;
      } else {
        require(out.entries[e] == proj,
                "projection depends on the padding; not a homomorphism");
      }
    }
  }
  return out;
}

FuncTable decode_hom(const PatternTable& h) {
  require(h.m == 3, "decoding needs exponent 3");
  const int d = h.domain;
  require(d >= 1, "domain must be nonempty");
  require(long(h.entries.size()) == checked_pow(d, 3, 4000000),
          "pattern table incomplete");

  PatternTable r01 = restrict_hom(h, {0, 1});
  PatternTable r12 = restrict_hom(h, {1, 2});
  PatternTable r02 = restrict_hom(h, {0, 2});
  require(r01.entries == r12.entries && r01.entries == r02.entries,
          "pairwise projections disagree; not a homomorphism");

  const OrderPattern tie{0, 0}, up{0, 1}, down{1, 0};
  auto p2 = [&](int a, int b) -> const OrderPattern& { return r01.at({a, b}); };
  for (int a = 0; a < d; a++)
    require(p2(a, a) == tie, "pair with itself must be tied");
  for (int a = 0; a < d; a++)
    for (int b = a + 1; b < d; b++) {
      const OrderPattern &pab = p2(a, b), &pba = p2(b, a);
      bool ok = (pab == tie && pba == tie) || (pab == up && pba == down) ||
                (pab == down && pba == up);
      require(ok, "pair data is not swap-consistent");
    }

  UnionFind uf(d);
  for (int a = 0; a < d; a++)
    for (int b = a + 1; b < d; b++)
      if (p2(a, b) == tie) uf.unite(a, b);

  // Rank each class by the number of classes strictly below it; the earlier
  // agreement checks make this a well-defined dense ranking.
  std::vector<int> rep;
  for (int a = 0; a < d; a++)
    if (uf.find(a) == a) rep.push_back(a);
  std::vector<long> rank_of_rep(d, -1);
  for (int ra : rep) {
    long below = 0;
    for (int rb : rep)
      if (p2(rb, ra) == up) below++;
    rank_of_rep[ra] = below;
  }
  {
    std::set<long> seen;
    for (int ra : rep) seen.insert(rank_of_rep[ra]);
    ensure(long(seen.size()) == long(rep.size()) &&
               *seen.begin() == 0 && *seen.rbegin() == long(rep.size()) - 1,
           "pair data fails to produce a dense ranking");
  }

  FuncTable f;
  f.domain = d;
  f.arity = 1;
  f.values.resize(d);
  for (int a = 0; a < d; a++) f.values[a] = rank_of_rep[uf.find(a)];
  ensure(pi_map(f.values, 3).entries == h.entries,
         "decoded function must reproduce the pattern map");
  return f;
}

bool is_pattern_hom(const PatternTable& h, const Structure& ga,
                    const Structure& gbq) {
  require(long(h.entries.size()) == long(ga.size), "table size mismatch");
  std::vector<int> img(ga.size);
  for (int e = 0; e < ga.size; e++) img[e] = pattern_index(h.entries[e], h.m);
  for (const auto& sym : ga.signature) {
    if (!gbq.relations.count(sym.name)) return false;
    for (const auto& t : ga.rel(sym.name)) {
      Tuple mapped(t.size());
      for (size_t s = 0; s < t.size(); s++) mapped[s] = img[t[s]];
      if (!gbq.has(sym.name, mapped)) return false;
    }
  }
  return true;
}

bool is_poly_hom(const PolyTable& g, const Structure& ga,
                 const Structure& gbq) {
  const int n = g.arity;
  const long D = checked_pow(g.domain, g.m, 4000000);
  require(long(ga.size) == D, "table does not match the power domain");

  auto pat_idx = [&](const std::vector<int>& elems) {
    std::vector<std::vector<int>> tuples(n);
    for (int k = 0; k < n; k++) tuples[k] = decode_tuple(elems[k], g.domain, g.m);
    return pattern_index(g.at(tuples), g.m);
  };

  for (const auto& sym : ga.signature) {
    if (!gbq.relations.count(sym.name)) return false;
    const auto& table = ga.rel(sym.name);
    if (table.empty()) continue;
    long combos = 1;
    for (int k = 0; k < n; k++) {
      require(combos <= caps().enum_per_relation / long(table.size()),
              "relation power too large to enumerate");
      combos *= long(table.size());
    }
    std::vector<long> pick(n, 0);
    std::vector<int> lefts(n), rights(n);
    for (long c = 0; c < combos; c++) {
      long rest = c;
      for (int k = n - 1; k >= 0; k--) {
        pick[k] = rest % table.size();
        rest /= table.size();
      }
      if (sym.arity == 1) {
        for (int k = 0; k < n; k++) lefts[k] = table[pick[k]][0];
        if (!gbq.has(sym.name, {pat_idx(lefts)})) return false;
      } else {
        require(sym.arity == 2, "power signature symbols are unary or binary");
        for (int k = 0; k < n; k++) {
          lefts[k] = table[pick[k]][0];
          rights[k] = table[pick[k]][1];
        }
        if (!gbq.has(sym.name, {pat_idx(lefts), pat_idx(rights)})) return false;
      }
    }
  }
  return true;
}

}  // namespace tempo
