#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "circlift/chain.hpp"
#include "circlift/integer.hpp"

namespace circlift {

/// Smith normal form U A V = D of a dense integer matrix. U and V are kept as
/// logs of elementary operations, which is all that solving and kernel
/// extraction need.
class SmithForm {
 public:
  explicit SmithForm(const SparseMatrix<Integer>& a) : rows_(a.rows), cols_(a.cols) {
    std::vector<std::vector<Integer>> m(rows_, std::vector<Integer>(cols_));
    for (std::size_t c = 0; c < cols_; ++c)
      for (const auto& [r, v] : a.columns[c]) m[r][c] = v;
    reduce(m);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return diagonal_.size(); }
  /// Nonzero invariant factors d_1 | d_2 | ... , all positive.
  const std::vector<Integer>& diagonal() const { return diagonal_; }

  /// Some integer solution of A x = b, or nothing when none exists.
  std::optional<std::vector<Integer>> solve(std::vector<Integer> b) const {
    if (b.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
    for (const auto& op : row_ops_) apply_row_op(op, b);
    std::vector<Integer> y(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i < rank()) {
        if (b[i] % diagonal_[i] != 0) return std::nullopt;
        y[i] = b[i] / diagonal_[i];
      } else if (!b[i].is_zero()) {
        return std::nullopt;
      }
    }
    return apply_v(std::move(y));
  }

  /// A basis of the integer kernel {x : A x = 0}.
  std::vector<std::vector<Integer>> kernel_basis() const {
    std::vector<std::vector<Integer>> basis;
    for (std::size_t j = rank(); j < cols_; ++j) {
      std::vector<Integer> e(cols_);
      e[j] = 1;
      basis.push_back(apply_v(std::move(e)));
    }
    return basis;
  }

 private:
  struct Op {
    enum Kind { Swap, AddMul, Negate } kind;
    std::size_t i, j;
    Integer factor;
  };

  // Row op on a vector: swap, b_i += f * b_j, or b_i = -b_i.
  static void apply_row_op(const Op& op, std::vector<Integer>& b) {
    switch (op.kind) {
      case Op::Swap: std::swap(b[op.i], b[op.j]); break;
      case Op::AddMul: b[op.i] += op.factor * b[op.j]; break;
      case Op::Negate: b[op.i] = -b[op.i]; break;
    }
  }

  // x = V y with V = C_1 C_2 ... C_k, where column op "col_i += f col_j" is
  // C = I + f E_{j,i}.
  std::vector<Integer> apply_v(std::vector<Integer> y) const {
    for (auto it = col_ops_.rbegin(); it != col_ops_.rend(); ++it) {
      const Op& op = *it;
      switch (op.kind) {
        case Op::Swap: std::swap(y[op.i], y[op.j]); break;
        case Op::AddMul: y[op.j] += op.factor * y[op.i]; break;
        case Op::Negate: y[op.i] = -y[op.i]; break;
      }
    }
    return y;
  }

  void row_add(std::vector<std::vector<Integer>>& m, std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t c = 0; c < cols_; ++c)
      if (!m[j][c].is_zero()) m[i][c] += f * m[j][c];
    row_ops_.push_back({Op::AddMul, i, j, f});
  }
  void col_add(std::vector<std::vector<Integer>>& m, std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t r = 0; r < rows_; ++r)
      if (!m[r][j].is_zero()) m[r][i] += f * m[r][j];
    col_ops_.push_back({Op::AddMul, i, j, f});
  }
  void row_swap(std::vector<std::vector<Integer>>& m, std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(m[i], m[j]);
    row_ops_.push_back({Op::Swap, i, j, 0});
  }
  void col_swap(std::vector<std::vector<Integer>>& m, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : m) std::swap(row[i], row[j]);
    col_ops_.push_back({Op::Swap, i, j, 0});
  }

  void reduce(std::vector<std::vector<Integer>>& m) {
    const std::size_t n = std::min(rows_, cols_);
    for (std::size_t t = 0; t < n; ++t) {
      if (!move_smallest_to(m, t)) break;
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < rows_; ++i) {
          if (m[i][t].is_zero()) continue;
          row_add(m, i, t, -(m[i][t] / m[t][t]));
          if (!m[i][t].is_zero()) {
            row_swap(m, i, t);
            clean = false;
          }
        }
        for (std::size_t j = t + 1; j < cols_; ++j) {
          if (m[t][j].is_zero()) continue;
          col_add(m, j, t, -(m[t][j] / m[t][t]));
          if (!m[t][j].is_zero()) {
            col_swap(m, j, t);
            clean = false;
          }
        }
        if (!clean) continue;
        // Divisibility d_t | every remaining entry makes D a true Smith form.
        bool divides = true;
        for (std::size_t i = t + 1; i < rows_ && divides; ++i)
          for (std::size_t j = t + 1; j < cols_; ++j)
            if (!m[i][j].is_zero() && m[i][j] % m[t][t] != 0) {
              row_add(m, t, i, 1);
              divides = false;
              break;
            }
        if (divides) break;
      }
      if (m[t][t] < 0) {
        for (std::size_t c = 0; c < cols_; ++c) m[t][c] = -m[t][c];
        row_ops_.push_back({Op::Negate, t, t, 0});
      }
      diagonal_.push_back(m[t][t]);
    }
  }

  bool move_smallest_to(std::vector<std::vector<Integer>>& m, std::size_t t) {
    std::size_t br = rows_, bc = cols_;
    Integer best;
    for (std::size_t i = t; i < rows_; ++i)
      for (std::size_t j = t; j < cols_; ++j) {
        if (m[i][j].is_zero()) continue;
        Integer a = abs(m[i][j]);
        if (br == rows_ || a < best) {
          best = a;
          br = i;
          bc = j;
          if (best == 1) break;
        }
      }
    if (br == rows_) return false;
    row_swap(m, t, br);
    col_swap(m, t, bc);
    return true;
  }

  std::size_t rows_, cols_;
  std::vector<Integer> diagonal_;
  std::vector<Op> row_ops_;
  std::vector<Op> col_ops_;
};

/// Sparse matrix-vector product over Z.
inline std::vector<Integer> multiply(const SparseMatrix<Integer>& a, const std::vector<Integer>& x) {
  std::vector<Integer> y(a.rows);
  for (std::size_t c = 0; c < a.cols; ++c) {
    if (x[c].is_zero()) continue;
    for (const auto& [r, v] : a.columns[c]) y[r] += v * x[c];
  }
  return y;
}

template <class K>
std::vector<Integer> to_dense(const SparseChain<Integer, K>& c, std::size_t n) {
  std::vector<Integer> v(n);
  for (const auto& [i, x] : c.entries) v[i] = x;
  return v;
}

template <class K>
SparseChain<Integer, K> from_dense(const std::vector<Integer>& v, int dim) {
  SparseChain<Integer, K> c(dim);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) c.entries.emplace(static_cast<Index>(i), v[i]);
  return c;
}

}  // namespace circlift
