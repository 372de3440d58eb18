#pragma once

// Fixtures and independent oracles shared by the test binaries. Nothing here
// calls the library's reduction or elimination code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "circlift/circlift.hpp"

namespace circlift::testing {

inline FilteredComplex make_complex(const std::vector<std::vector<Vertex>>& simplices, int max_dim = -1) {
  std::vector<FilteredSimplex> in;
  for (const auto& s : simplices) in.push_back({Simplex(s), 0.0});
  return FilteredComplex::from_simplices(std::move(in), max_dim);
}

inline Index idx(const FilteredComplex& c, std::vector<Vertex> v) {
  auto i = c.find(Simplex(std::move(v)));
  if (!i) throw std::runtime_error("fixture simplex missing");
  return *i;
}

// Filled triangle on a=0, b=1, c=2.
inline FilteredComplex triangle() { return make_complex({{0, 1, 2}}); }

// Fig. 1 cocycle (3, 4, 1) on (bc, ac, ab) over F_7.
inline FpCochain fig1_cocycle(const FilteredComplex& t) {
  FpCochain c(1);
  c.set(idx(t, {1, 2}), 3);
  c.set(idx(t, {0, 2}), 4);
  c.set(idx(t, {0, 1}), 1);
  return c;
}

// Square abcd with both diagonals and no triangles; a..d = 0..3.
inline FilteredComplex square_with_diagonals() { return make_complex({{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}, {1, 3}}); }

// 3ab + 2bc + 3cd + 3ad + ac + bd over F_7.
inline FpChain ex47_cycle(const FilteredComplex& s) {
  FpChain c(1);
  c.set(idx(s, {0, 1}), 3);
  c.set(idx(s, {1, 2}), 2);
  c.set(idx(s, {2, 3}), 3);
  c.set(idx(s, {0, 3}), 3);
  c.set(idx(s, {0, 2}), 1);
  c.set(idx(s, {1, 3}), 1);
  return c;
}

// n-cycle graph v_0 ... v_{n-1}.
inline FilteredComplex cycle_graph(Vertex n = 6) {
  std::vector<std::vector<Vertex>> e;
  for (Vertex k = 0; k < n; ++k) e.push_back({std::min(k, (k + 1) % n), std::max(k, (k + 1) % n)});
  return make_complex(e);
}

// Indicator of edge v0 v1.
inline IntCochain edge_indicator(const FilteredComplex& h) {
  IntCochain g(1);
  g.set(idx(h, {0, 1}), 1);
  return g;
}

// Sum of [v_k, v_{k+1}] around the cycle with canonical orientations folded in.
inline IntChain fundamental_cycle(const FilteredComplex& h, Vertex n = 6) {
  IntChain b(1);
  for (Vertex k = 0; k < n; ++k) {
    Vertex a = k, c = (k + 1) % n;
    b.set(idx(h, {std::min(a, c), std::max(a, c)}), a < c ? 1 : -1);
  }
  return b;
}

// Six-vertex triangulation of the real projective plane.
inline FilteredComplex projective_plane() {
  return make_complex({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5}, {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5},
                       {1, 3, 5}});
}

// Disk whose boundary wraps three times around a triangle: H_1 = Z/3 and
// H^2 = Z/3.
inline FilteredComplex moore_space_z3() {
  // a, b, c = 0, 1, 2; inner ring x_i = 3 + i; centre o = 12.
  auto v = [](int i) { return static_cast<Vertex>(((i % 9) + 9) % 9 % 3); };
  auto x = [](int i) { return static_cast<Vertex>(3 + ((i % 9) + 9) % 9); };
  const Vertex o = 12;
  std::vector<std::vector<Vertex>> t;
  for (int i = 0; i < 9; ++i) {
    t.push_back({v(i), v(i + 1), x(i)});
    t.push_back({v(i + 1), x(i), x(i + 1)});
    t.push_back({x(i), x(i + 1), o});
  }
  for (auto& s : t) std::sort(s.begin(), s.end());
  return make_complex(t);
}

// Random complex: maximal simplices of dimension 1..top on n vertices with
// filtration values from a small grid, so ties occur.
inline FilteredComplex random_complex(Rng& rng, Vertex n, int top, std::size_t count, int levels = 5) {
  std::vector<FilteredSimplex> in;
  for (Vertex v = 0; v < n; ++v) in.push_back({Simplex({v}), 0.0});
  for (std::size_t s = 0; s < count; ++s) {
    int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(top)));
    std::set<Vertex> verts;
    while (static_cast<int>(verts.size()) < d + 1) verts.insert(static_cast<Vertex>(rng.below(n)));
    in.push_back({Simplex(std::vector<Vertex>(verts.begin(), verts.end())), static_cast<double>(1 + rng.below(levels))});
  }
  // Raise each listed simplex to the largest value among its listed faces.
  for (auto& s : in)
    for (const auto& f : in) {
      auto sv = s.simplex.vertices(), fv = f.simplex.vertices();
      if (std::includes(sv.begin(), sv.end(), fv.begin(), fv.end())) s.filtration = std::max(s.filtration, f.filtration);
    }
  return FilteredComplex::from_simplices(std::move(in), top);
}

// Connected random complex: a spanning path plus random extra simplices.
inline FilteredComplex random_connected_complex(Rng& rng, Vertex n, std::size_t extra) {
  std::vector<FilteredSimplex> in;
  for (Vertex v = 0; v + 1 < n; ++v) in.push_back({Simplex({v, v + 1}), 0.0});
  for (std::size_t s = 0; s < extra; ++s) {
    int d = 1 + static_cast<int>(rng.below(2));
    std::set<Vertex> verts;
    while (static_cast<int>(verts.size()) < d + 1) verts.insert(static_cast<Vertex>(rng.below(n)));
    in.push_back({Simplex(std::vector<Vertex>(verts.begin(), verts.end())), 0.0});
  }
  return FilteredComplex::from_simplices(std::move(in), 2);
}

inline IntCochain random_int_cochain(Rng& rng, const FilteredComplex& c, int dim, std::int64_t bound) {
  IntCochain f(dim);
  for (Index i = 0; i < c.size(dim); ++i) f.set(i, Integer(rng.between(-bound, bound)));
  return f;
}

// ---- dense oracles -----------------------------------------------------------

using Dense = std::vector<std::vector<std::int64_t>>;

// Rank over F_p by textbook elimination on a dense copy.
inline std::size_t dense_rank_mod(Dense a, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (auto& row : a)
    for (auto& x : row) x = ((x % p) + p) % p;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t inv = 1;
    for (std::int64_t e = p - 2, b = a[rank][c]; e > 0; e >>= 1, b = b * b % p)
      if (e & 1) inv = inv * b % p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      std::int64_t f = a[r][c] * inv % p;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Boundary matrix of degree m restricted to simplices with filtration <= row
// and column scales, rows (m-1)-simplices, computed from vertex lists.
inline Dense dense_boundary(const FilteredComplex& c, int m, double row_scale, double col_scale) {
  std::size_t nr = m >= 1 ? c.sublevel_size(m - 1, row_scale) : 0, nc = c.sublevel_size(m, col_scale);
  Dense d(nr, std::vector<std::int64_t>(nc, 0));
  if (m < 1) return d;
  for (Index j = 0; j < nc; ++j) {
    auto v = c.vertices(m, j);
    for (int k = 0; k <= m; ++k) {
      std::vector<Vertex> face;
      for (int i = 0; i <= m; ++i)
        if (i != k) face.push_back(v[i]);
      Index r = *c.find(std::span<const Vertex>(face));
      if (r < nr) d[r][j] = (k % 2 == 0) ? 1 : -1;
    }
  }
  return d;
}

// rank of the degree-m boundary on the sublevel at t, rows outside K_s only.
inline std::size_t rank_rows_outside(const FilteredComplex& c, int m, double s, double t, std::int64_t p) {
  Dense full = dense_boundary(c, m, t, t);
  std::size_t cut = c.sublevel_size(m - 1, s);
  Dense outside(full.begin() + static_cast<std::ptrdiff_t>(cut), full.end());
  return outside.empty() ? 0 : dense_rank_mod(outside, p);
}

// dim image(H_m(K_s) -> H_m(K_t)) over F_p.
inline std::int64_t persistent_betti(const FilteredComplex& c, int m, double s, double t, std::int64_t p) {
  auto rank_of = [&](const Dense& d) -> std::int64_t { return d.empty() || d[0].empty() ? 0 : dense_rank_mod(d, p); };
  std::int64_t cycles = static_cast<std::int64_t>(c.sublevel_size(m, s)) - rank_of(dense_boundary(c, m, s, s));
  if (m + 1 > c.max_dim()) return cycles;
  std::int64_t bt = rank_of(dense_boundary(c, m + 1, t, t));
  std::int64_t outside = static_cast<std::int64_t>(rank_rows_outside(c, m + 1, s, t, p));
  return cycles - (bt - outside);
}

// Intervals of positive length from persistent Betti numbers by
// inclusion-exclusion over the distinct filtration values.
inline std::vector<Interval> oracle_intervals(const FilteredComplex& c, int max_dim, std::int64_t p) {
  std::set<double> values;
  for (int d = 0; d <= c.max_dim(); ++d)
    for (double f : c.filtrations(d)) values.insert(f);
  std::vector<double> s(values.begin(), values.end());
  const std::size_t n = s.size();
  std::vector<Interval> out;
  for (int m = 0; m <= max_dim; ++m) {
    auto beta = [&](std::ptrdiff_t i, std::ptrdiff_t j) -> std::int64_t {
      if (i < 0 || j < i) return 0;
      return persistent_betti(c, m, s[i], s[j], p);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto jj = static_cast<std::ptrdiff_t>(j);
        std::int64_t mu = beta(ii, jj - 1) - beta(ii, jj) - beta(ii - 1, jj - 1) + beta(ii - 1, jj);
        for (std::int64_t k = 0; k < mu; ++k) out.push_back({m, s[i], s[j]});
      }
      const auto last = static_cast<std::ptrdiff_t>(n - 1);
      std::int64_t mu = beta(ii, last) - beta(ii - 1, last);
      for (std::int64_t k = 0; k < mu; ++k) out.push_back({m, s[i], kInfinity});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Exact determinant by cofactor expansion (small matrices only).
inline Integer det(const std::vector<std::vector<Integer>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  if (n == 1) return a[0][0];
  Integer total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<Integer>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    Integer term = a[0][c] * det(minor);
    total += (c % 2 == 0) ? term : Integer(-term);
  }
  return total;
}

// Determinantal divisors D_k = gcd of all k x k minors; invariant factors are
// D_k / D_{k-1} for k up to the rank.
inline std::vector<Integer> invariant_factors_oracle(const std::vector<std::vector<Integer>>& a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<Integer> d{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    Integer g = 0;
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        std::vector<std::vector<Integer>> m;
        for (std::size_t r = 0; r < rows; ++r) {
          if (!rsel[r]) continue;
          std::vector<Integer> row;
          for (std::size_t c = 0; c < cols; ++c)
            if (csel[c]) row.push_back(a[r][c]);
          m.push_back(row);
        }
        g = boost::multiprecision::gcd(g, abs(det(m)));
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    if (g.is_zero()) break;
    d.push_back(g);
  }
  std::vector<Integer> factors;
  for (std::size_t k = 1; k < d.size(); ++k) factors.push_back(d[k] / d[k - 1]);
  return factors;
}

}  // namespace circlift::testing
