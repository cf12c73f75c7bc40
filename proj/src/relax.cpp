#include "tempo/relax.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tempo {

RelaxationSystem build_relaxation(const Instance& x, const Structure& a) {
  validate(x, a);
  RelaxationSystem rs;
  rs.num_vars = x.num_vars;
  rs.domain = a.size;
  long cols = rs.var_cols();
  for (const auto& c : x.constraints) {
    rs.cons_offset.push_back(cols);
    long cnt = (long)a.rel(c.rel).size();
    rs.cons_count.push_back(cnt);
    cols += cnt;
  }
  rs.sys.num_vars = cols;
  // Each variable's weights sum to 1.
  for (int v = 0; v < x.num_vars; ++v) {
    std::vector<Int> row(cols, 0);
    for (int val = 0; val < a.size; ++val) row[rs.var_col(v, val)] = 1;
    rs.sys.add_row(std::move(row), 1);
  }
  for (size_t ci = 0; ci < x.constraints.size(); ++ci) {
    const auto& c = x.constraints[ci];
    const auto& tuples = a.rel(c.rel);
    const int r = (int)c.args.size();
    // Each constraint's weights sum to 1.
    std::vector<Int> row(cols, 0);
    for (long t = 0; t < rs.cons_count[ci]; ++t) row[rs.cons_offset[ci] + t] = 1;
    rs.sys.add_row(std::move(row), 1);
    // Marginals agree with variable weights.
    for (int i = 0; i < r; ++i) {
      for (int val = 0; val < a.size; ++val) {
        std::vector<Int> mrow(cols, 0);
        for (long t = 0; t < rs.cons_count[ci]; ++t)
          if (tuples[t][i] == val) mrow[rs.cons_offset[ci] + t] += 1;
        mrow[rs.var_col(c.args[i], val)] -= 1;
        rs.sys.add_row(std::move(mrow), 0);
      }
    }
  }
  return rs;
}

bool aip(const Instance& x, const Structure& a) {
  auto rs = build_relaxation(x, a);
  return integer_feasible(rs.sys).has_value();
}

bool blp(const Instance& x, const Structure& a) {
  auto rs = build_relaxation(x, a);
  std::vector<char> nonneg(rs.sys.num_vars, 1);
  return rational_feasible(rs.sys, nonneg).has_value();
}

bool blp_aip(const Instance& x, const Structure& a, int threads) {
  auto rs = build_relaxation(x, a);
  std::vector<char> nonneg(rs.sys.num_vars, 1);
  if (!rational_feasible(rs.sys, nonneg)) return false;
  std::vector<char> sup = interior_support(rs.sys, nonneg, threads);
  // Remove every column outside the support, then ask for integer values.
  std::vector<long> keep;
  for (long j = 0; j < rs.sys.num_vars; ++j)
    if (sup[j]) keep.push_back(j);
  AffineSystem red;
  red.num_vars = (long)keep.size();
  for (size_t r = 0; r < rs.sys.rows.size(); ++r) {
    std::vector<Int> row(keep.size());
    for (size_t j = 0; j < keep.size(); ++j) row[j] = rs.sys.rows[r][keep[j]];
    red.add_row(std::move(row), rs.sys.rhs[r]);
  }
  return integer_feasible(red).has_value();
}

namespace {

// ---- reference probe engine -------------------------------------------

// Integer feasibility of the relaxation with current domains enforced and
// one variable pinned to one value.
bool probe_reference(const RelaxationSystem& rs, const Domains& dom, int x0,
                     int val0) {
  AffineSystem sys = rs.sys;
  long cols = sys.num_vars;
  std::vector<char> zero(cols, 0);
  std::vector<char> in_dom((size_t)rs.num_vars * rs.domain, 0);
  for (int v = 0; v < rs.num_vars; ++v)
    for (int a : dom[v]) in_dom[rs.var_col(v, a)] = 1;
  for (int v = 0; v < rs.num_vars; ++v)
    for (int a = 0; a < rs.domain; ++a)
      if (!in_dom[rs.var_col(v, a)]) zero[rs.var_col(v, a)] = 1;
  for (int a = 0; a < rs.domain; ++a)
    if (a != val0) zero[rs.var_col(x0, a)] = 1;
  for (long j = 0; j < cols; ++j) {
    if (!zero[j]) continue;
    std::vector<Int> row(cols, 0);
    row[j] = 1;
    sys.add_row(std::move(row), 0);
  }
  {
    std::vector<Int> row(cols, 0);
    row[rs.var_col(x0, val0)] = 1;
    sys.add_row(std::move(row), 1);
  }
  return integer_feasible(sys).has_value();
}

// ---- accelerated engine -------------------------------------------------

// Positional indicator profile of a tuple: one block of |A| slots per
// position, a 1 at the position's value.
std::vector<Int> profile(const Tuple& t, int n) {
  std::vector<Int> v((long)t.size() * n, 0);
  for (size_t i = 0; i < t.size(); ++i) v[(long)i * n + t[i]] = 1;
  return v;
}

struct RelAnalysis {
  bool empty = false;
  bool exotic = false;
  int arity = 0;
  std::vector<std::pair<int, int>> missing;  // (position, value) always zero
  struct ParityRow {
    std::vector<char> coef;  // indexed position*|A|+value, mod 2
    char rhs = 0;
  };
  std::vector<ParityRow> parity;
};

RelAnalysis analyze_relation(const std::vector<Tuple>& tuples, int arity, int n) {
  RelAnalysis ra;
  ra.arity = arity;
  if (tuples.empty()) {
    ra.empty = true;
    return ra;
  }
  const long d = (long)arity * n;
  std::vector<std::vector<char>> present(arity, std::vector<char>(n, 0));
  for (const Tuple& t : tuples)
    for (int i = 0; i < arity; ++i) present[i][t[i]] = 1;
  for (int i = 0; i < arity; ++i)
    for (int v = 0; v < n; ++v)
      if (!present[i][v]) ra.missing.push_back({i, v});

  LatticeBasis basis(d);
  std::vector<Int> base = profile(tuples[0], n);
  for (size_t k = 1; k < tuples.size(); ++k) {
    std::vector<Int> diff = profile(tuples[k], n);
    for (long j = 0; j < d; ++j) diff[j] -= base[j];
    basis.insert(std::move(diff));
  }
  LatticeConditions lc = lattice_conditions(basis);

  // Exact functionals must be block-constant on present values; they are
  // then implied by the weight-sum rows plus the always-zero pairs.
  for (const auto& u : lc.exact_rows) {
    Int target = 0;
    for (long j = 0; j < d; ++j)
      if (u[j] != 0 && base[j] != 0) target += u[j] * base[j];
    Int csum = 0;
    for (int i = 0; i < arity && !ra.exotic; ++i) {
      bool have = false;
      Int ci = 0;
      for (int v = 0; v < n; ++v) {
        if (!present[i][v]) continue;
        if (!have) {
          ci = u[(long)i * n + v];
          have = true;
        } else if (u[(long)i * n + v] != ci) {
          ra.exotic = true;
          break;
        }
      }
      csum += ci;
    }
    if (ra.exotic) break;
    ensure(csum == target, "exact lattice row disagrees with its base point");
  }
  if (ra.exotic) return ra;
  for (const auto& [u, mod] : lc.torsion_rows) {
    if (mod != 2) {
      ra.exotic = true;
      return ra;
    }
    RelAnalysis::ParityRow pr;
    pr.coef.resize(d);
    Int dot = 0;
    for (long j = 0; j < d; ++j) {
      pr.coef[j] = (char)(mpz_odd_p(u[j].get_mpz_t()) ? 1 : 0);
      if (base[j] != 0) dot += u[j];
    }
    pr.rhs = (char)(mpz_odd_p(dot.get_mpz_t()) ? 1 : 0);
    ra.parity.push_back(std::move(pr));
  }
  return ra;
}

std::map<std::string, RelAnalysis> analyze_structure(const Structure& a) {
  std::map<std::string, RelAnalysis> out;
  for (const auto& sym : a.signature)
    out.emplace(sym.name,
                analyze_relation(a.rel(sym.name), sym.arity, a.size));
  return out;
}

std::optional<Domains> saip_run_reference(const Instance& x, const Structure& a) {
  RelaxationSystem rs = build_relaxation(x, a);
  Domains dom(x.num_vars);
  for (auto& d : dom) {
    d.resize(a.size);
    std::iota(d.begin(), d.end(), 0);
  }
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::vector<int>> kept(x.num_vars);
    for (int v = 0; v < x.num_vars; ++v)
      for (int val : dom[v])
        if (probe_reference(rs, dom, v, val)) kept[v].push_back(val);
    for (int v = 0; v < x.num_vars; ++v) {
      if (kept[v].size() != dom[v].size()) changed = true;
      dom[v] = std::move(kept[v]);
      if (dom[v].empty()) return std::nullopt;
    }
  }
  return dom;
}

// Reduce a one-word vector by a pivoted single-word basis.
inline uint64_t reduce_word(uint64_t w, const std::vector<uint64_t>& basis) {
  for (uint64_t b : basis) {
    uint64_t lead = b & ~(b - 1);  // lowest set bit as the pivot
    if (w & lead) w ^= b;
  }
  return w;
}

}  // namespace

bool saip_uses_fast(const Structure& a) {
  if (a.size > 64) return false;
  for (const auto& [name, ra] : analyze_structure(a))
    if (ra.exotic) return false;
  return true;
}

std::optional<Domains> saip(const Instance& x, const Structure& a, int threads) {
  validate(x, a);
  if (x.num_vars == 0) return Domains{};
  auto analyses = analyze_structure(a);
  bool fast = a.size <= 64;
  for (const auto& c : x.constraints) {
    const auto& ra = analyses.at(c.rel);
    if (ra.empty) return std::nullopt;
    if (ra.exotic) fast = false;
  }
  if (!fast) return saip_run_reference(x, a);

  const int n = a.size;
  Domains dom(x.num_vars);
  for (auto& d : dom) {
    d.resize(n);
    std::iota(d.begin(), d.end(), 0);
  }
  // Values identically zero in every relaxation solution can never survive
  // a pin; remove them up front.
  {
    std::vector<std::vector<char>> dead(x.num_vars, std::vector<char>(n, 0));
    for (const auto& c : x.constraints)
      for (auto [pos, val] : analyses.at(c.rel).missing)
        dead[c.args[pos]][val] = 1;
    for (int v = 0; v < x.num_vars; ++v) {
      std::vector<int> kept;
      for (int val : dom[v])
        if (!dead[v][val]) kept.push_back(val);
      dom[v] = std::move(kept);
      if (dom[v].empty()) return std::nullopt;
    }
  }

  for (bool changed = true; changed;) {
    changed = false;
    // Parametrize each variable's weights by its non-base domain values.
    std::vector<long> offset(x.num_vars, 0), width(x.num_vars, 0);
    long tbits = 0;
    std::vector<std::vector<int>> slot(x.num_vars);  // value -> bit index or -1
    for (int v = 0; v < x.num_vars; ++v) {
      offset[v] = tbits;
      width[v] = (long)dom[v].size() - 1;
      tbits += width[v];
      slot[v].assign(n, -1);
      for (size_t i = 1; i < dom[v].size(); ++i)
        slot[v][dom[v][i]] = (int)(i - 1);
    }
    const long nwords = std::max<long>(1, (tbits + 63) / 64);

    Gf2Elim elim(tbits);
    std::vector<uint64_t> row(nwords, 0);
    for (const auto& c : x.constraints) {
      const auto& ra = analyses.at(c.rel);
      for (const auto& pr : ra.parity) {
        std::fill(row.begin(), row.end(), 0);
        char rhs = pr.rhs;
        for (size_t i = 0; i < c.args.size(); ++i) {
          int v = c.args[i];
          char c0 = pr.coef[(long)i * n + dom[v][0]];
          rhs ^= c0;
          for (size_t kidx = 1; kidx < dom[v].size(); ++kidx) {
            char cv = pr.coef[(long)i * n + dom[v][kidx]];
            if (cv ^ c0) {
              long bit = offset[v] + (long)(kidx - 1);
              row[bit >> 6] ^= (uint64_t)1 << (bit & 63);
            }
          }
        }
        elim.add(row, rhs);
        if (elim.inconsistent) return std::nullopt;
      }
    }

    auto s0 = elim.solve();
    ensure(s0.has_value(), "consistent elimination must yield a solution");
    auto kern = elim.kernel();

    std::vector<std::vector<int>> kept(x.num_vars);
    std::vector<int> vars_idx(x.num_vars);
    std::iota(vars_idx.begin(), vars_idx.end(), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
    for (int vi = 0; vi < x.num_vars; ++vi) {
      int v = vars_idx[vi];
      // Project the solution space onto this variable's block.
      auto extract = [&](const std::vector<uint64_t>& bits) {
        uint64_t w = 0;
        for (long b = 0; b < width[v]; ++b) {
          long idx = offset[v] + b;
          if ((bits[idx >> 6] >> (idx & 63)) & 1) w |= (uint64_t)1 << b;
        }
        return w;
      };
      auto extract_chars = [&](const std::vector<char>& bits) {
        uint64_t w = 0;
        for (long b = 0; b < width[v]; ++b)
          if (bits[offset[v] + b]) w |= (uint64_t)1 << b;
        return w;
      };
      uint64_t base = extract_chars(*s0);
      std::vector<uint64_t> wbasis;
      for (const auto& kv : kern) {
        uint64_t w = reduce_word(extract(kv), wbasis);
        if (w) {
          wbasis.push_back(w);
          if ((long)wbasis.size() == width[v]) break;  // block fully free
        }
      }
      for (size_t ai = 0; ai < dom[v].size(); ++ai) {
        uint64_t pin = ai == 0 ? 0 : ((uint64_t)1 << (ai - 1));
        if (reduce_word(pin ^ base, wbasis) == 0) kept[v].push_back(dom[v][ai]);
      }
    }
    for (int v = 0; v < x.num_vars; ++v) {
      if (kept[v].size() != dom[v].size()) changed = true;
      dom[v] = std::move(kept[v]);
      if (dom[v].empty()) return std::nullopt;
    }
  }
  return dom;
}

std::optional<Domains> saip_reference(const Instance& x, const Structure& a) {
  validate(x, a);
  if (x.num_vars == 0) return Domains{};
  for (const auto& c : x.constraints)
    if (a.rel(c.rel).empty()) return std::nullopt;
  return saip_run_reference(x, a);
}

}  // namespace tempo
