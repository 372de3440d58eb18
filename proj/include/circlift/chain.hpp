#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "circlift/complex.hpp"
#include "circlift/error.hpp"
#include "circlift/finite_field.hpp"
#include "circlift/integer.hpp"

namespace circlift {

// Coefficient rings. Each exposes value_type and the handful of operations the
// chain algebra needs; F_p carries its modulus at runtime.

struct IntegerRing {
  using value_type = Integer;
  static bool is_zero(const Integer& a) { return a.is_zero(); }
  static Integer add(const Integer& a, const Integer& b) { return a + b; }
  static Integer mul(const Integer& a, const Integer& b) { return a * b; }
  static Integer from_int(std::int64_t v) { return Integer(v); }
};

struct RealRing {
  using value_type = double;
  static bool is_zero(double a) { return a == 0.0; }
  static double add(double a, double b) { return a + b; }
  static double mul(double a, double b) { return a * b; }
  static double from_int(std::int64_t v) { return static_cast<double>(v); }
};

struct PrimeField {
  using value_type = std::uint64_t;
  std::uint64_t p;

  explicit PrimeField(Prime prime) : p(prime.value()) {}
  bool is_zero(std::uint64_t a) const { return a == 0; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return mod_add(a, b, p); }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return mod_mul(a, b, p); }
  std::uint64_t from_int(std::int64_t v) const { return reduce_coeff(v, Prime(p)).value; }
};

struct ChainTag {};
struct CochainTag {};

/// Sparse map from simplex index (fixed dimension) to coefficient. Zero
/// coefficients are never stored.
template <class T, class Kind>
struct SparseChain {
  using value_type = T;
  using kind = Kind;

  int dim = 0;
  std::map<Index, T> entries;

  SparseChain() = default;
  explicit SparseChain(int d) : dim(d) {}

  bool empty() const { return entries.empty(); }
  std::size_t support_size() const { return entries.size(); }

  T at(Index i) const {
    auto it = entries.find(i);
    return it == entries.end() ? T{} : it->second;
  }
  void set(Index i, T value) {
    if (value == T{}) entries.erase(i);
    else entries[i] = std::move(value);
  }

  friend bool operator==(const SparseChain&, const SparseChain&) = default;
};

template <class T>
using Chain = SparseChain<T, ChainTag>;
template <class T>
using Cochain = SparseChain<T, CochainTag>;

using IntCochain = Cochain<Integer>;
using IntChain = Chain<Integer>;
using FpCochain = Cochain<std::uint64_t>;
using FpChain = Chain<std::uint64_t>;
using RealCochain = Cochain<double>;

namespace detail {

template <class Ring, class T, class K>
void accumulate(const Ring& ring, SparseChain<T, K>& out, Index i, const T& v) {
  auto [it, inserted] = out.entries.try_emplace(i, v);
  if (!inserted) {
    it->second = ring.add(it->second, v);
    if (ring.is_zero(it->second)) out.entries.erase(it);
  } else if (ring.is_zero(it->second)) {
    out.entries.erase(it);
  }
}

template <class C>
void check_support(const FilteredComplex& complex, const C& c) {
  if (c.dim < 0 || c.dim > complex.max_dim())
    throw Error(ErrorCode::DimensionOutOfRange, "chain dimension " + std::to_string(c.dim) + " out of range");
  if (!c.entries.empty() && c.entries.rbegin()->first >= complex.size(c.dim))
    throw Error(ErrorCode::InvalidSimplex, "chain references a simplex outside the complex");
}

}  // namespace detail

/// delta c: evaluates c on the faces of every (m+1)-simplex with signs (-1)^i.
template <class Ring>
Cochain<typename Ring::value_type> apply_coboundary(const FilteredComplex& complex, const Ring& ring,
                                                    const Cochain<typename Ring::value_type>& c) {
  detail::check_support(complex, c);
  using T = typename Ring::value_type;
  Cochain<T> out(c.dim + 1);
  if (c.dim + 1 > complex.max_dim()) return out;
  const T minus_one = ring.from_int(-1);
  for (const auto& [i, v] : c.entries) {
    for (const auto& cf : complex.cofaces(c.dim, i)) {
      T term = (cf.position % 2 == 0) ? v : ring.mul(minus_one, v);
      detail::accumulate(ring, out, cf.index, term);
    }
  }
  return out;
}

/// Boundary of an m-chain, m >= 1.
template <class Ring>
Chain<typename Ring::value_type> apply_boundary(const FilteredComplex& complex, const Ring& ring,
                                                const Chain<typename Ring::value_type>& c) {
  detail::check_support(complex, c);
  if (c.dim < 1) throw Error(ErrorCode::DimensionOutOfRange, "boundary of a 0-chain");
  using T = typename Ring::value_type;
  Chain<T> out(c.dim - 1);
  const T minus_one = ring.from_int(-1);
  for (const auto& [i, v] : c.entries) {
    for (int k = 0; k <= c.dim; ++k) {
      T term = (k % 2 == 0) ? v : ring.mul(minus_one, v);
      detail::accumulate(ring, out, complex.face(c.dim, i, k), term);
    }
  }
  return out;
}

/// <alpha, beta> = sum over simplices of alpha(sigma) * beta_sigma.
template <class Ring>
typename Ring::value_type pairing(const Ring& ring, const Cochain<typename Ring::value_type>& alpha,
                                  const Chain<typename Ring::value_type>& beta) {
  if (alpha.dim != beta.dim) throw Error(ErrorCode::DimensionMismatch, "pairing of different dimensions");
  typename Ring::value_type sum = ring.from_int(0);
  for (const auto& [i, a] : alpha.entries) {
    auto it = beta.entries.find(i);
    if (it != beta.entries.end()) sum = ring.add(sum, ring.mul(a, it->second));
  }
  return sum;
}

inline Integer kronecker_pairing(const IntCochain& alpha, const IntChain& beta) {
  return pairing(IntegerRing{}, alpha, beta);
}

/// Column-sparse matrix with explicit shape.
template <class T>
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<Index, T>>> columns;  // sorted by row

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  T at(std::size_t r, std::size_t c) const {
    for (const auto& [row, v] : columns[c])
      if (row == r) return v;
    return T{};
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols, rows);
    for (std::size_t c = 0; c < cols; ++c)
      for (const auto& [r, v] : columns[c]) t.columns[r].emplace_back(static_cast<Index>(c), v);
    return t;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& col : columns) n += col.size();
    return n;
  }
};

/// Matrix of the boundary map C_m -> C_{m-1}: rows are (m-1)-simplices,
/// columns m-simplices.
template <class Ring>
SparseMatrix<typename Ring::value_type> boundary_matrix(const FilteredComplex& complex, int m, const Ring& ring) {
  if (m < 1 || m > complex.max_dim())
    throw Error(ErrorCode::DimensionOutOfRange, "boundary_matrix dimension " + std::to_string(m));
  using T = typename Ring::value_type;
  SparseMatrix<T> mat(complex.size(m - 1), complex.size(m));
  const T plus = ring.from_int(1), minus = ring.from_int(-1);
  for (Index i = 0; i < complex.size(m); ++i) {
    auto& col = mat.columns[i];
    for (int k = 0; k <= m; ++k) col.emplace_back(complex.face(m, i, k), k % 2 == 0 ? plus : minus);
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return mat;
}

/// Matrix of the coboundary map C^m -> C^{m+1}: rows are (m+1)-simplices,
/// columns m-simplices. It is the transpose of boundary_matrix(m+1).
template <class Ring>
SparseMatrix<typename Ring::value_type> coboundary_matrix(const FilteredComplex& complex, int m, const Ring& ring) {
  if (m < 0 || m > complex.max_dim())
    throw Error(ErrorCode::DimensionOutOfRange, "coboundary_matrix dimension " + std::to_string(m));
  using T = typename Ring::value_type;
  SparseMatrix<T> mat(complex.size(m + 1), complex.size(m));
  const T plus = ring.from_int(1), minus = ring.from_int(-1);
  for (Index i = 0; i < complex.size(m); ++i)
    for (const auto& cf : complex.cofaces(m, i))
      mat.columns[i].emplace_back(cf.index, cf.position % 2 == 0 ? plus : minus);
  for (auto& col : mat.columns)
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return mat;
}

// Coefficient conversions between rings.

template <class K>
SparseChain<std::uint64_t, K> reduce_mod(const SparseChain<Integer, K>& c, Prime p) {
  SparseChain<std::uint64_t, K> out(c.dim);
  for (const auto& [i, v] : c.entries) out.set(i, mod_u64(v, p.value()));
  return out;
}

template <class K>
SparseChain<double, K> to_real(const SparseChain<Integer, K>& c) {
  SparseChain<double, K> out(c.dim);
  for (const auto& [i, v] : c.entries) out.set(i, static_cast<double>(v));
  return out;
}

template <class K>
SparseChain<Integer, K> scale(const SparseChain<Integer, K>& c, const Integer& s) {
  SparseChain<Integer, K> out(c.dim);
  if (s.is_zero()) return out;
  for (const auto& [i, v] : c.entries) out.entries.emplace(i, v * s);
  return out;
}

template <class K>
SparseChain<std::uint64_t, K> scale_mod(const SparseChain<std::uint64_t, K>& c, std::uint64_t s, Prime p) {
  SparseChain<std::uint64_t, K> out(c.dim);
  for (const auto& [i, v] : c.entries) out.set(i, mod_mul(v, s % p.value(), p.value()));
  return out;
}

template <class Ring, class K>
SparseChain<typename Ring::value_type, K> add(const Ring& ring, const SparseChain<typename Ring::value_type, K>& a,
                                              const SparseChain<typename Ring::value_type, K>& b) {
  if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "sum of chains of different dimensions");
  auto out = a;
  for (const auto& [i, v] : b.entries) detail::accumulate(ring, out, i, v);
  return out;
}

template <class K>
SparseChain<Integer, K> subtract(const SparseChain<Integer, K>& a, const SparseChain<Integer, K>& b) {
  return add(IntegerRing{}, a, scale(b, Integer(-1)));
}

/// Largest absolute coefficient (0 for the zero chain).
template <class K>
Integer max_abs(const SparseChain<Integer, K>& c) {
  Integer m = 0;
  for (const auto& [i, v] : c.entries) m = std::max(m, abs(v));
  return m;
}

}  // namespace circlift
