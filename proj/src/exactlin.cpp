#include "tempo/exactlin.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tempo {

void AffineSystem::add_row(std::vector<Int> coef, Int b) {
  require((long)coef.size() == num_vars, "coefficient row has wrong length");
  rows.push_back(std::move(coef));
  rhs.push_back(std::move(b));
}

namespace {

// Extended gcd: returns g = gcd(a,b) and s,t with s*a + t*b = g.
Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return g;
}

}  // namespace

std::optional<std::vector<Int>> integer_feasible(const AffineSystem& s) {
  const long n = s.num_vars;
  const long m = (long)s.rows.size();
  std::vector<std::vector<Int>> w = s.rows;
  // Column transform: x = U * y.
  std::vector<std::vector<Int>> u(n, std::vector<Int>(n, 0));
  for (long j = 0; j < n; ++j) u[j][j] = 1;

  auto col_axpy = [&](long dst, long src, const Int& q) {
    // column dst -= q * column src
    for (long r = 0; r < m; ++r) w[r][dst] -= q * w[r][src];
    for (long r = 0; r < n; ++r) u[r][dst] -= q * u[r][src];
  };
  auto col_swap = [&](long a, long b) {
    if (a == b) return;
    for (long r = 0; r < m; ++r) std::swap(w[r][a], w[r][b]);
    for (long r = 0; r < n; ++r) std::swap(u[r][a], u[r][b]);
  };
  auto col_negate = [&](long c) {
    for (long r = 0; r < m; ++r) w[r][c] = -w[r][c];
    for (long r = 0; r < n; ++r) u[r][c] = -u[r][c];
  };

  long pc = 0;  // established pivot columns
  std::vector<long> pivot_col_of_row(m, -1);
  for (long r = 0; r < m && pc < n; ++r) {
    // Reduce row r on columns [pc, n) to a single nonzero via gcd steps.
    for (;;) {
      long jmin = -1;
      for (long j = pc; j < n; ++j) {
        if (w[r][j] != 0 && (jmin < 0 || cmp(abs(w[r][j]), abs(w[r][jmin])) < 0))
          jmin = j;
      }
      if (jmin < 0) break;  // row r is zero on the free columns
      bool others = false;
      for (long j = pc; j < n; ++j) {
        if (j == jmin || w[r][j] == 0) continue;
        Int q = w[r][j] / w[r][jmin];  // truncated division is fine here
        if (q != 0) col_axpy(j, jmin, q);
        if (w[r][j] != 0) others = true;
      }
      if (!others) {
        col_swap(pc, jmin);
        if (w[r][pc] < 0) col_negate(pc);
        pivot_col_of_row[r] = pc;
        ++pc;
        break;
      }
    }
  }

  // Forward substitution on y; non-pivot components stay zero.
  std::vector<Int> y(n, 0);
  for (long r = 0; r < m; ++r) {
    Int acc = 0;
    for (long j = 0; j < pc; ++j)
      if (w[r][j] != 0) acc += w[r][j] * y[j];
    Int need = s.rhs[r] - acc;
    long p = pivot_col_of_row[r];
    if (p >= 0) {
      // Row r's only nonzero at/after its pivot column is w[r][p]; but the
      // sum above already covered columns < p among pivots, and columns
      // between are zero by construction, so solve g*y[p] = need - g*y[p]?
      // acc included j == p with y[p] == 0, so need is the full residual.
      if (need % w[r][p] != 0) return std::nullopt;
      y[p] = need / w[r][p];
    } else {
      if (need != 0) return std::nullopt;
    }
  }

  std::vector<Int> x(n, 0);
  for (long i = 0; i < n; ++i) {
    Int acc = 0;
    for (long j = 0; j < n; ++j)
      if (u[i][j] != 0 && y[j] != 0) acc += u[i][j] * y[j];
    x[i] = acc;
  }
  for (long r = 0; r < m; ++r) {
    Int acc = 0;
    for (long j = 0; j < n; ++j)
      if (s.rows[r][j] != 0) acc += s.rows[r][j] * x[j];
    ensure(acc == s.rhs[r], "integer solution failed substitution check");
  }
  return x;
}

namespace {

// Exact primal simplex over the rationals in equality form with artificial
// variables; Bland's rule throughout, so it terminates without perturbation.
struct Simplex {
  long n_orig;                  // original variable count
  std::vector<long> pos_col;   // column carrying +x_v
  std::vector<long> neg_col;   // column for the negative part (-1 if none)
  long nz = 0;                 // structural columns
  long n_art = 0;
  std::vector<std::vector<Rat>> t;  // rows of [A' | b]
  std::vector<long> basis;          // basic column per row (>= nz: artificial)
  std::vector<Rat> obj;             // reduced cost row for the current phase
  Rat obj_val = 0;

  Simplex(const AffineSystem& s, const std::vector<char>& nonneg) {
    n_orig = s.num_vars;
    require((long)nonneg.size() == (size_t)n_orig || nonneg.empty(),
            "nonneg mask has wrong length");
    pos_col.assign(n_orig, -1);
    neg_col.assign(n_orig, -1);
    for (long v = 0; v < n_orig; ++v) {
      pos_col[v] = nz++;
      if (nonneg.empty() || !nonneg[v]) neg_col[v] = nz++;
    }
    long m = (long)s.rows.size();
    n_art = m;
    t.assign(m, std::vector<Rat>(nz + m + 1, 0));
    basis.resize(m);
    for (long r = 0; r < m; ++r) {
      int sign = s.rhs[r] < 0 ? -1 : 1;
      for (long v = 0; v < n_orig; ++v) {
        Rat a(sign * s.rows[r][v]);
        t[r][pos_col[v]] = a;
        if (neg_col[v] >= 0) t[r][neg_col[v]] = -a;
      }
      t[r][nz + r] = 1;
      t[r].back() = Rat(sign * s.rhs[r]);
      basis[r] = nz + r;
    }
  }

  void pivot(long row, long col) {
    Rat inv = 1 / t[row][col];
    for (auto& e : t[row]) e *= inv;
    for (long r = 0; r < (long)t.size(); ++r) {
      if (r == row || t[r][col] == 0) continue;
      Rat f = t[r][col];
      for (long j = 0; j <= nz + n_art; ++j)
        if (t[row][j] != 0) t[r][j] -= f * t[row][j];
    }
    if (obj[col] != 0) {
      Rat f = obj[col];
      for (long j = 0; j <= nz + n_art; ++j)
        if (t[row][j] != 0) obj[j] -= f * t[row][j];
      obj_val += f * t[row].back();
    }
    basis[row] = col;
  }

  // Maximize the objective currently loaded in `obj` (reduced costs), never
  // entering artificial columns. Returns false when unbounded. When
  // `stop_positive`, stops as soon as the objective value is > 0.
  bool run(bool stop_positive) {
    for (;;) {
      if (stop_positive && obj_val > 0) return true;
      long enter = -1;
      for (long j = 0; j < nz; ++j)
        if (obj[j] > 0) { enter = j; break; }  // Bland: least index
      if (enter < 0) return true;
      long leave = -1;
      Rat best;
      for (long r = 0; r < (long)t.size(); ++r) {
        if (t[r][enter] <= 0) continue;
        Rat ratio = t[r].back() / t[r][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;  // unbounded improving ray
      pivot(leave, enter);
    }
  }

  // Load reduced costs for maximizing c (given on structural columns).
  void load_objective(const std::vector<Rat>& c) {
    obj.assign(nz + n_art + 1, 0);
    obj_val = 0;
    for (long j = 0; j < nz; ++j) obj[j] = c[j];
    for (long r = 0; r < (long)t.size(); ++r) {
      long b = basis[r];
      if (b <= nz + n_art && obj[b] != 0) {
        Rat f = obj[b];
        for (long j = 0; j <= nz + n_art; ++j)
          if (t[r][j] != 0) obj[j] -= f * t[r][j];
        obj_val += f * t[r].back();
      }
    }
  }

  bool phase1() {
    std::vector<Rat> c(nz, 0);
    load_objective(c);
    // Minimize the artificial sum == maximize -(sum of artificials).
    obj.assign(nz + n_art + 1, 0);
    obj_val = 0;
    for (long r = 0; r < (long)t.size(); ++r) {
      if (basis[r] < nz) continue;
      for (long j = 0; j <= nz + n_art; ++j) obj[j] += t[r][j];
      obj_val -= t[r].back();
    }
    for (long a = 0; a < n_art; ++a) obj[nz + a] = 0;
    bool ok = run(false);
    ensure(ok, "artificial phase cannot be unbounded");
    if (obj_val < 0) return false;  // residual infeasibility
    // Drive remaining artificials (all at value 0) out of the basis.
    for (long r = 0; r < (long)t.size(); ++r) {
      if (basis[r] < nz) continue;
      long col = -1;
      for (long j = 0; j < nz; ++j)
        if (t[r][j] != 0) { col = j; break; }
      if (col >= 0) {
        pivot(r, col);
      } else {
        ensure(t[r].back() == 0, "redundant row with nonzero rhs");
        // Redundant all-zero row; blank it so it never limits a ratio test.
        std::fill(t[r].begin(), t[r].end(), Rat(0));
      }
    }
    return true;
  }

  std::vector<Rat> point() const {
    std::vector<Rat> z(nz, 0);
    for (long r = 0; r < (long)t.size(); ++r)
      if (basis[r] < nz) z[basis[r]] = t[r].back();
    std::vector<Rat> x(n_orig, 0);
    for (long v = 0; v < n_orig; ++v) {
      x[v] = z[pos_col[v]];
      if (neg_col[v] >= 0) x[v] -= z[neg_col[v]];
    }
    return x;
  }
};

void verify_point(const AffineSystem& s, const std::vector<char>& nonneg,
                  const std::vector<Rat>& x) {
  for (long r = 0; r < (long)s.rows.size(); ++r) {
    Rat acc = 0;
    for (long v = 0; v < s.num_vars; ++v)
      if (s.rows[r][v] != 0) acc += Rat(s.rows[r][v]) * x[v];
    ensure(acc == Rat(s.rhs[r]), "rational solution failed substitution check");
  }
  if (!nonneg.empty())
    for (long v = 0; v < s.num_vars; ++v)
      ensure(!nonneg[v] || x[v] >= 0, "rational solution violates sign bound");
}

}  // namespace

std::optional<std::vector<Rat>> rational_feasible(const AffineSystem& s,
                                                  const std::vector<char>& nonneg) {
  Simplex sx(s, nonneg);
  if (!sx.phase1()) return std::nullopt;
  auto x = sx.point();
  verify_point(s, nonneg, x);
  return x;
}

MaxResult maximize_var(const AffineSystem& s, const std::vector<char>& nonneg,
                       long v, bool stop_when_positive) {
  require(v >= 0 && v < s.num_vars, "objective variable out of range");
  MaxResult res;
  Simplex sx(s, nonneg);
  if (!sx.phase1()) return res;
  res.feasible = true;
  std::vector<Rat> c(sx.nz, 0);
  c[sx.pos_col[v]] = 1;
  if (sx.neg_col[v] >= 0) c[sx.neg_col[v]] = -1;
  sx.load_objective(c);
  bool bounded = sx.run(stop_when_positive);
  res.unbounded = !bounded;
  res.point = sx.point();
  verify_point(s, nonneg, res.point);
  res.value = res.point[v];
  return res;
}

std::vector<char> interior_support(const AffineSystem& s,
                                   const std::vector<char>& nonneg,
                                   int threads) {
  require(!nonneg.empty(), "interior support needs a sign mask");
  {
    Simplex sx(s, nonneg);
    require(sx.phase1(), "system is infeasible");
  }
  std::vector<char> sup(s.num_vars, 0);
  std::vector<long> todo;
  for (long v = 0; v < s.num_vars; ++v)
    if (nonneg[v]) todo.push_back(v);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
#endif
  for (long k = 0; k < (long)todo.size(); ++k) {
    long v = todo[k];
    MaxResult r = maximize_var(s, nonneg, v, /*stop_when_positive=*/true);
    if (r.unbounded || r.value > 0) sup[v] = 1;
  }
  return sup;
}

void Gf2System::add_row(const std::vector<long>& vars, int b) {
  std::vector<uint64_t> bits((num_vars + 63) / 64, 0);
  for (long v : vars) {
    require(v >= 0 && v < num_vars, "gf2 variable out of range");
    bits[v >> 6] ^= (uint64_t)1 << (v & 63);
  }
  rows.push_back(std::move(bits));
  rhs.push_back((char)(b & 1));
}

void Gf2System::add_row_bits(std::vector<uint64_t> bits, int b) {
  require((long)bits.size() == (num_vars + 63) / 64, "gf2 row has wrong width");
  rows.push_back(std::move(bits));
  rhs.push_back((char)(b & 1));
}

Gf2Elim::Gf2Elim(long columns) : cols(columns) {}

namespace {
inline long first_bit(const std::vector<uint64_t>& bits) {
  for (size_t w = 0; w < bits.size(); ++w)
    if (bits[w]) return (long)(w * 64 + __builtin_ctzll(bits[w]));
  return -1;
}
inline bool get_bit(const std::vector<uint64_t>& bits, long i) {
  return (bits[i >> 6] >> (i & 63)) & 1;
}
inline void xor_into(std::vector<uint64_t>& dst, const std::vector<uint64_t>& src) {
  for (size_t w = 0; w < src.size(); ++w) dst[w] ^= src[w];
}
}  // namespace

bool Gf2Elim::add(std::vector<uint64_t> bits, int r) {
  char rr = (char)(r & 1);
  for (size_t k = 0; k < basis.size(); ++k) {
    if (get_bit(bits, pivots[k])) {
      xor_into(bits, basis[k]);
      rr ^= brhs[k];
    }
  }
  long p = first_bit(bits);
  if (p < 0) {
    if (rr) inconsistent = true;
    return !inconsistent;
  }
  basis.push_back(std::move(bits));
  brhs.push_back(rr);
  pivots.push_back(p);
  return true;
}

std::optional<std::vector<char>> Gf2Elim::solve() const {
  if (inconsistent) return std::nullopt;
  std::vector<char> x(cols, 0);
  std::vector<size_t> order(basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return pivots[a] > pivots[b]; });
  for (size_t k : order) {
    char acc = brhs[k];
    const auto& row = basis[k];
    for (long j = pivots[k] + 1; j < cols; ++j)
      if (get_bit(row, j) && x[j]) acc ^= 1;
    x[pivots[k]] = acc;
  }
  return x;
}

std::vector<std::vector<uint64_t>> Gf2Elim::kernel() const {
  std::vector<char> is_pivot(cols, 0);
  for (long p : pivots) is_pivot[p] = 1;
  std::vector<size_t> order(basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return pivots[a] > pivots[b]; });
  std::vector<std::vector<uint64_t>> out;
  const long words = (cols + 63) / 64;
  for (long f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<char> x(cols, 0);
    x[f] = 1;
    for (size_t k : order) {
      char acc = 0;
      const auto& row = basis[k];
      for (long j = pivots[k] + 1; j < cols; ++j)
        if (get_bit(row, j) && x[j]) acc ^= 1;
      x[pivots[k]] = acc;
    }
    std::vector<uint64_t> bits(words, 0);
    for (long j = 0; j < cols; ++j)
      if (x[j]) bits[j >> 6] |= (uint64_t)1 << (j & 63);
    out.push_back(std::move(bits));
  }
  return out;
}

std::optional<std::vector<char>> gf2_solve(
    const Gf2System& s, const std::vector<std::pair<long, int>>& pins) {
  Gf2Elim e(s.num_vars);
  const long words = (s.num_vars + 63) / 64;
  for (auto [v, val] : pins) {
    require(v >= 0 && v < s.num_vars, "pinned variable out of range");
    std::vector<uint64_t> bits(words, 0);
    bits[v >> 6] |= (uint64_t)1 << (v & 63);
    if (!e.add(std::move(bits), val)) return std::nullopt;
  }
  for (size_t r = 0; r < s.rows.size(); ++r)
    if (!e.add(s.rows[r], s.rhs[r])) return std::nullopt;
  auto x = e.solve();
  if (!x) return std::nullopt;
  for (size_t r = 0; r < s.rows.size(); ++r) {
    char acc = 0;
    for (long j = 0; j < s.num_vars; ++j)
      if (get_bit(s.rows[r], j) && (*x)[j]) acc ^= 1;
    ensure(acc == s.rhs[r], "gf2 solution failed substitution check");
  }
  return x;
}

LatticeBasis::LatticeBasis(long dimension) : dim(dimension) {}

void LatticeBasis::insert(std::vector<Int> v) {
  require((long)v.size() == dim, "lattice vector has wrong dimension");
  for (;;) {
    long fr = -1;
    for (long i = 0; i < dim; ++i)
      if (v[i] != 0) { fr = i; break; }
    if (fr < 0) return;  // fully reduced into the lattice
    // Locate the basis column owning pivot row fr, or the insertion point.
    size_t k = 0;
    while (k < cols.size() && pivot_rows[k] < fr) ++k;
    if (k == cols.size() || pivot_rows[k] != fr) {
      if (v[fr] < 0)
        for (auto& e : v) e = -e;
      cols.insert(cols.begin() + k, std::move(v));
      pivot_rows.insert(pivot_rows.begin() + k, fr);
      return;
    }
    Int g = cols[k][fr];
    if (v[fr] % g == 0) {
      Int q = v[fr] / g;
      for (long i = fr; i < dim; ++i) v[i] -= q * cols[k][i];
    } else {
      Int s, t;
      Int g2 = xgcd(g, v[fr], s, t);
      std::vector<Int> u1(dim, 0), v2(dim, 0);
      Int qa = g / g2, qb = v[fr] / g2;
      for (long i = 0; i < dim; ++i) {
        u1[i] = s * cols[k][i] + t * v[i];
        v2[i] = qb * cols[k][i] - qa * v[i];
      }
      cols[k] = std::move(u1);
      v = std::move(v2);
    }
  }
}

LatticeConditions lattice_conditions(const LatticeBasis& basis) {
  const long dim = basis.dim;
  const long k = basis.rank();
  // Working copy M (dim x k) and tracked row transform U (dim x dim).
  std::vector<std::vector<Int>> m(dim, std::vector<Int>(k, 0));
  for (long c = 0; c < k; ++c)
    for (long r = 0; r < dim; ++r) m[r][c] = basis.cols[c][r];
  std::vector<std::vector<Int>> u(dim, std::vector<Int>(dim, 0));
  for (long r = 0; r < dim; ++r) u[r][r] = 1;

  auto row_axpy = [&](long dst, long src, const Int& q) {
    for (long c = 0; c < k; ++c) m[dst][c] -= q * m[src][c];
    for (long c = 0; c < dim; ++c) u[dst][c] -= q * u[src][c];
  };
  auto row_swap = [&](long a, long b) {
    if (a == b) return;
    std::swap(m[a], m[b]);
    std::swap(u[a], u[b]);
  };
  auto row_negate = [&](long r) {
    for (auto& e : m[r]) e = -e;
    for (auto& e : u[r]) e = -e;
  };
  auto col_axpy = [&](long dst, long src, const Int& q) {
    for (long r = 0; r < dim; ++r) m[r][dst] -= q * m[r][src];
  };
  auto col_swap = [&](long a, long b) {
    if (a == b) return;
    for (long r = 0; r < dim; ++r) std::swap(m[r][a], m[r][b]);
  };

  long t = 0;
  const long bound = std::min(dim, k);
  while (t < bound) {
    long pr = -1, pc = -1;
    for (long r = t; r < dim; ++r)
      for (long c = t; c < k; ++c)
        if (m[r][c] != 0 &&
            (pr < 0 || cmp(abs(m[r][c]), abs(m[pr][pc])) < 0)) {
          pr = r;
          pc = c;
        }
    if (pr < 0) break;
    row_swap(t, pr);
    col_swap(t, pc);
    bool clean = true;
    for (long r = t + 1; r < dim; ++r) {
      if (m[r][t] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[r][t].get_mpz_t(), m[t][t].get_mpz_t());
      row_axpy(r, t, q);
      if (m[r][t] != 0) clean = false;
    }
    for (long c = t + 1; c < k; ++c) {
      if (m[t][c] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[t][c].get_mpz_t(), m[t][t].get_mpz_t());
      col_axpy(c, t, q);
      if (m[t][c] != 0) clean = false;
    }
    if (!clean) continue;  // pivot shrank; repeat with a smaller pivot
    if (m[t][t] < 0) row_negate(t);
    // Enforce the divisibility chain before advancing.
    bool divides_all = true;
    for (long r = t + 1; r < dim && divides_all; ++r)
      for (long c = t + 1; c < k && divides_all; ++c)
        if (m[r][c] % m[t][t] != 0) {
          row_axpy(t, r, Int(-1));  // row t += row r, re-reduce
          divides_all = false;
        }
    if (divides_all) ++t;
  }

  LatticeConditions out;
  for (long r = 0; r < dim; ++r) {
    if (r < t) {
      if (m[r][r] > 1) out.torsion_rows.push_back({u[r], m[r][r]});
    } else {
      out.exact_rows.push_back(u[r]);
    }
  }
  return out;
}

}  // namespace tempo
