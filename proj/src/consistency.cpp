#include "tempo/consistency.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace tempo {

const std::vector<Tuple>& Strategy::at(const std::vector<int>& vars) const {
  auto it = table.find(vars);
  require(it != table.end(), "strategy has no entry for the requested subset");
  return it->second;
}

std::vector<int> Strategy::values_of(int x) const {
  std::vector<int> out;
  for (const Tuple& t : at({x})) out.push_back(t[0]);
  return out;
}

std::vector<std::pair<int, int>> Strategy::pairs_of(int x, int y) const {
  require(x != y, "pair projection needs two distinct variables");
  std::vector<std::pair<int, int>> out;
  if (x < y) {
    for (const Tuple& t : at({x, y})) out.push_back({t[0], t[1]});
  } else {
    for (const Tuple& t : at({y, x})) out.push_back({t[1], t[0]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void enumerate_subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  // Iterative combinations, sizes 1..k, lexicographic.
  std::function<void(int)> rec = [&](int start) {
    if (!cur.empty()) out.push_back(cur);
    if ((int)cur.size() == k) return;
    for (int v = start; v < n; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

// Value tuple induced by constraint args inside subset S under map f.
bool constraint_holds_inside(const Constraint& c, const Structure& a,
                             const std::vector<int>& s, const Tuple& f) {
  Tuple vals(c.args.size());
  for (size_t i = 0; i < c.args.size(); ++i) {
    auto it = std::lower_bound(s.begin(), s.end(), c.args[i]);
    vals[i] = f[it - s.begin()];
  }
  return a.has(c.rel, vals);
}

}  // namespace

std::optional<Strategy> k_strategy(const Instance& x, const Structure& a, int k) {
  validate(x, a);
  require(k >= 1 && k <= caps().max_k, "k outside the configured cap");
  require((long)x.num_vars <= caps().max_vars, "instance too large for strategies");
  int max_ar = 0;
  for (const auto& c : x.constraints) max_ar = std::max(max_ar, (int)c.args.size());
  require(k >= max_ar, "k smaller than the maximum constraint arity");
  const int n = x.num_vars;
  if (n == 0) return Strategy{k, {}};

  std::vector<std::vector<int>> subsets;
  enumerate_subsets(n, std::min(k, n), subsets);

  Strategy h;
  h.k = k;
  // Constraints fully inside each subset, found once.
  std::map<std::vector<int>, std::vector<const Constraint*>> inside;
  for (const auto& s : subsets) inside[s] = {};
  for (const auto& c : x.constraints) {
    std::vector<int> sv(c.args.begin(), c.args.end());
    std::sort(sv.begin(), sv.end());
    sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
    if ((int)sv.size() > k) continue;  // cannot lie inside any table subset
    for (const auto& s : subsets) {
      if (std::includes(s.begin(), s.end(), sv.begin(), sv.end()))
        inside[s].push_back(&c);
    }
  }

  for (const auto& s : subsets) {
    std::vector<Tuple> tuples;
    Tuple f(s.size(), 0);
    for (;;) {
      bool ok = true;
      for (const Constraint* c : inside[s])
        if (!constraint_holds_inside(*c, a, s, f)) { ok = false; break; }
      if (ok) tuples.push_back(f);
      int i = (int)s.size() - 1;
      while (i >= 0 && f[i] == a.size - 1) f[i--] = 0;
      if (i < 0) break;
      ++f[i];
    }
    if (tuples.empty()) return std::nullopt;
    h.table[s] = std::move(tuples);
  }

  // Greatest fixpoint of downward closure + one-point extension.
  for (bool changed = true; changed;) {
    changed = false;
    // Downward closure: every restriction of a kept map must be kept.
    for (auto& [s, tuples] : h.table) {
      if (s.size() < 2) continue;
      std::vector<Tuple> kept;
      for (const Tuple& f : tuples) {
        bool ok = true;
        for (size_t drop = 0; drop < s.size() && ok; ++drop) {
          std::vector<int> sub = s;
          sub.erase(sub.begin() + drop);
          Tuple g = f;
          g.erase(g.begin() + drop);
          const auto& lower = h.table[sub];
          ok = std::binary_search(lower.begin(), lower.end(), g);
        }
        if (ok) kept.push_back(f);
      }
      if (kept.size() != tuples.size()) { tuples = std::move(kept); changed = true; }
      if (tuples.empty()) return std::nullopt;
    }
    // Extension: each map on < k variables extends by every other variable.
    for (auto& [s, tuples] : h.table) {
      if ((int)s.size() >= k) continue;
      std::vector<char> alive(tuples.size(), 1);
      for (int v = 0; v < n; ++v) {
        if (std::binary_search(s.begin(), s.end(), v)) continue;
        std::vector<int> sup = s;
        size_t pos = std::lower_bound(sup.begin(), sup.end(), v) - sup.begin();
        sup.insert(sup.begin() + pos, v);
        std::vector<Tuple> projected;
        for (const Tuple& g : h.table[sup]) {
          Tuple p = g;
          p.erase(p.begin() + pos);
          projected.push_back(std::move(p));
        }
        std::sort(projected.begin(), projected.end());
        projected.erase(std::unique(projected.begin(), projected.end()),
                        projected.end());
        for (size_t i = 0; i < tuples.size(); ++i)
          if (alive[i] &&
              !std::binary_search(projected.begin(), projected.end(), tuples[i]))
            alive[i] = 0;
      }
      std::vector<Tuple> kept;
      for (size_t i = 0; i < tuples.size(); ++i)
        if (alive[i]) kept.push_back(tuples[i]);
      if (kept.size() != tuples.size()) { tuples = std::move(kept); changed = true; }
      if (tuples.empty()) return std::nullopt;
    }
  }
  return h;
}

namespace {

using Member = std::vector<std::vector<char>>;

void member_refresh(const Domains& dom, Member& member, int v) {
  std::fill(member[v].begin(), member[v].end(), 0);
  for (int val : dom[v]) member[v][val] = 1;
}

std::vector<std::vector<int>> constraints_of_var(const Instance& x) {
  std::vector<std::vector<int>> of(x.num_vars);
  for (size_t c = 0; c < x.constraints.size(); ++c) {
    for (int v : x.constraints[c].args)
      if (of[v].empty() || of[v].back() != (int)c) of[v].push_back((int)c);
  }
  return of;
}

// Worklist propagation to the arc-consistent fixpoint; recounts supports
// only for constraints whose member variables shrank. Seeding with every
// constraint computes the fixpoint from scratch; seeding with the
// constraints of changed variables is sound when `dom` was a fixpoint
// before those variables shrank.
bool ac_propagate(const Instance& x, const Structure& a,
                  const std::vector<std::vector<int>>& of, Domains& dom,
                  Member& member, std::vector<int> worklist) {
  std::vector<char> queued(x.constraints.size(), 0);
  for (int c : worklist) queued[c] = 1;
  while (!worklist.empty()) {
    const int ci = worklist.back();
    worklist.pop_back();
    queued[ci] = 0;
    const auto& c = x.constraints[ci];
    const auto& tuples = a.rel(c.rel);
    const int r = (int)c.args.size();
    std::vector<std::vector<char>> seen(r, std::vector<char>(a.size, 0));
    long need = 0, have = 0;
    for (int i = 0; i < r; ++i) need += (long)dom[c.args[i]].size();
    for (const Tuple& t : tuples) {
      bool ok = true;
      for (int i = 0; i < r && ok; ++i) ok = member[c.args[i]][t[i]];
      if (!ok) continue;
      for (int i = 0; i < r; ++i)
        if (!seen[i][t[i]]) {
          seen[i][t[i]] = 1;
          ++have;
        }
      if (have == need) break;  // every remaining value already supported
    }
    if (have == need) continue;
    for (int i = 0; i < r; ++i) {
      int v = c.args[i];
      std::vector<int> kept;
      for (int val : dom[v])
        if (seen[i][val]) kept.push_back(val);
      if (kept.size() != dom[v].size()) {
        dom[v] = std::move(kept);
        if (dom[v].empty()) return false;
        member_refresh(dom, member, v);
        for (int cj : of[v])
          if (!queued[cj]) {
            queued[cj] = 1;
            worklist.push_back(cj);
          }
      }
    }
  }
  return true;
}

}  // namespace

std::optional<Domains> arc_consistency(const Instance& x, const Structure& a,
                                       const Domains* init) {
  validate(x, a);
  Domains dom;
  if (init) {
    require((int)init->size() == x.num_vars, "initial domains have wrong length");
    dom = *init;
    for (auto& d : dom) {
      std::sort(d.begin(), d.end());
      d.erase(std::unique(d.begin(), d.end()), d.end());
      for (int v : d) require(v >= 0 && v < a.size, "domain value out of range");
    }
  } else {
    dom.assign(x.num_vars, {});
    for (auto& d : dom) {
      d.resize(a.size);
      std::iota(d.begin(), d.end(), 0);
    }
  }
  for (const auto& d : dom)
    if (d.empty()) return std::nullopt;

  Member member(x.num_vars, std::vector<char>(a.size, 0));
  for (int v = 0; v < x.num_vars; ++v) member_refresh(dom, member, v);
  auto of = constraints_of_var(x);
  std::vector<int> all(x.constraints.size());
  std::iota(all.begin(), all.end(), 0);
  if (!ac_propagate(x, a, of, dom, member, std::move(all))) return std::nullopt;
  return dom;
}

std::optional<Domains> sac(const Instance& x, const Structure& a) {
  auto start = arc_consistency(x, a);
  if (!start) return std::nullopt;
  Domains dom = *start;
  Member member(x.num_vars, std::vector<char>(a.size, 0));
  for (int v = 0; v < x.num_vars; ++v) member_refresh(dom, member, v);
  const auto of = constraints_of_var(x);

  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < x.num_vars; ++v) {
      for (size_t idx = 0; idx < dom[v].size();) {
        Domains probe = dom;
        Member probe_member = member;
        probe[v] = {dom[v][idx]};
        member_refresh(probe, probe_member, v);
        if (ac_propagate(x, a, of, probe, probe_member, of[v])) {
          ++idx;
        } else {
          dom[v].erase(dom[v].begin() + idx);
          if (dom[v].empty()) return std::nullopt;
          member_refresh(dom, member, v);
          // Restore the fixpoint of the surviving domains.
          if (!ac_propagate(x, a, of, dom, member, of[v])) return std::nullopt;
          changed = true;
        }
      }
    }
  }
  return dom;
}

Strategy strategy_restrict(const Strategy& h, const std::vector<int>& old_to_new) {
  Strategy out;
  out.k = h.k;
  for (const auto& [s, tuples] : h.table) {
    bool keep = true;
    for (int v : s)
      if (old_to_new[v] < 0) { keep = false; break; }
    if (!keep) continue;
    std::vector<std::pair<int, size_t>> mapped;  // (new var, old position)
    for (size_t i = 0; i < s.size(); ++i) mapped.push_back({old_to_new[s[i]], i});
    std::sort(mapped.begin(), mapped.end());
    std::vector<int> key;
    for (auto& [nv, _] : mapped) key.push_back(nv);
    std::vector<Tuple> tt;
    for (const Tuple& f : tuples) {
      Tuple g(f.size());
      for (size_t i = 0; i < mapped.size(); ++i) g[i] = f[mapped[i].second];
      tt.push_back(std::move(g));
    }
    std::sort(tt.begin(), tt.end());
    tt.erase(std::unique(tt.begin(), tt.end()), tt.end());
    out.table[key] = std::move(tt);
  }
  return out;
}

bool validate_strategy(const Instance& x, const Structure& a, const Strategy& h) {
  const int n = x.num_vars;
  std::vector<std::vector<int>> subsets;
  enumerate_subsets(n, std::min(h.k, n), subsets);
  for (const auto& s : subsets) {
    auto it = h.table.find(s);
    if (it == h.table.end() || it->second.empty()) return false;
  }
  for (const auto& [s, tuples] : h.table) {
    for (const Tuple& f : tuples) {
      // Partial homomorphism on s.
      for (const auto& c : x.constraints) {
        bool ins = true;
        for (int v : c.args)
          if (!std::binary_search(s.begin(), s.end(), v)) { ins = false; break; }
        if (ins && !constraint_holds_inside(c, a, s, f)) return false;
      }
      // Downward closure.
      if (s.size() >= 2) {
        for (size_t drop = 0; drop < s.size(); ++drop) {
          std::vector<int> sub = s;
          sub.erase(sub.begin() + drop);
          Tuple g = f;
          g.erase(g.begin() + drop);
          const auto& lower = h.at(sub);
          if (!std::binary_search(lower.begin(), lower.end(), g)) return false;
        }
      }
      // One-point extension.
      if ((int)s.size() < h.k) {
        for (int v = 0; v < n; ++v) {
          if (std::binary_search(s.begin(), s.end(), v)) continue;
          std::vector<int> sup = s;
          size_t pos = std::lower_bound(sup.begin(), sup.end(), v) - sup.begin();
          sup.insert(sup.begin() + pos, v);
          bool found = false;
          for (const Tuple& g : h.at(sup)) {
            Tuple p = g;
            p.erase(p.begin() + pos);
            if (p == f) { found = true; break; }
          }
          if (!found) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace tempo
