#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "circlift/chain.hpp"
#include "circlift/finite_field.hpp"

namespace circlift {

/// Dense Gaussian elimination over F_q for the (co)boundary systems of
/// desk-scale complexes. The matrix is brought to reduced row echelon form
/// once; right-hand sides are then solved against the recorded eliminations.
class ModularSystem {
 public:
  ModularSystem(const SparseMatrix<std::uint64_t>& a, Prime q)
      : q_(q.value()), rows_(a.rows), cols_(a.cols), m_(a.rows * a.cols, 0) {
    for (std::size_t c = 0; c < a.cols; ++c)
      for (const auto& [r, v] : a.columns[c]) m_[r * cols_ + c] = v % q_;
    eliminate();
  }

  std::size_t rank() const { return pivot_cols_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  /// Solves A x = b. Free variables come from free_value (default: all zero).
  std::optional<std::vector<std::uint64_t>> solve(
      std::vector<std::uint64_t> b, const std::function<std::uint64_t(std::size_t)>& free_value = {}) const {
    if (b.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
    for (auto& v : b) v %= q_;
    for (const auto& op : ops_) {
      switch (op.kind) {
        case Op::Swap: std::swap(b[op.i], b[op.j]); break;
        case Op::Scale: b[op.i] = mod_mul(b[op.i], op.factor, q_); break;
        case Op::AddMul: b[op.i] = mod_add(b[op.i], mod_mul(op.factor, b[op.j], q_), q_); break;
      }
    }
    for (std::size_t r = rank(); r < rows_; ++r)
      if (b[r] != 0) return std::nullopt;
    std::vector<std::uint64_t> x(cols_, 0);
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t c : pivot_cols_) is_pivot[c] = true;
    if (free_value) {
      for (std::size_t c = 0; c < cols_; ++c)
        if (!is_pivot[c]) x[c] = free_value(c) % q_;
    }
    for (std::size_t r = 0; r < rank(); ++r) {
      std::uint64_t v = b[r];
      if (free_value) {
        for (std::size_t c = 0; c < cols_; ++c)
          if (!is_pivot[c] && x[c] != 0) v = mod_sub(v, mod_mul(m_[r * cols_ + c], x[c], q_), q_);
      }
      x[pivot_cols_[r]] = v;
    }
    return x;
  }

 private:
  struct Op {
    enum Kind { Swap, Scale, AddMul } kind;
    std::size_t i, j;
    std::uint64_t factor;
  };

  void eliminate() {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t piv = r;
      while (piv < rows_ && m_[piv * cols_ + c] == 0) ++piv;
      if (piv == rows_) continue;
      if (piv != r) {
        for (std::size_t k = 0; k < cols_; ++k) std::swap(m_[piv * cols_ + k], m_[r * cols_ + k]);
        ops_.push_back({Op::Swap, piv, r, 0});
      }
      std::uint64_t inv = mod_inverse(m_[r * cols_ + c], q_);
      if (inv != 1) {
        for (std::size_t k = c; k < cols_; ++k) m_[r * cols_ + k] = mod_mul(m_[r * cols_ + k], inv, q_);
        ops_.push_back({Op::Scale, r, r, inv});
      }
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        std::uint64_t f = m_[i * cols_ + c];
        if (f == 0) continue;
        std::uint64_t neg = mod_neg(f, q_);
        for (std::size_t k = c; k < cols_; ++k) {
          std::uint64_t t = m_[r * cols_ + k];
          if (t != 0) m_[i * cols_ + k] = mod_add(m_[i * cols_ + k], mod_mul(neg, t, q_), q_);
        }
        ops_.push_back({Op::AddMul, i, r, neg});
      }
      pivot_cols_.push_back(c);
      ++r;
    }
  }

  std::uint64_t q_;
  std::size_t rows_, cols_;
  std::vector<std::uint64_t> m_;
  std::vector<std::size_t> pivot_cols_;
  std::vector<Op> ops_;
};

inline std::size_t rank_mod(const SparseMatrix<std::uint64_t>& a, Prime q) { return ModularSystem(a, q).rank(); }

/// Reduces integer matrix entries modulo q.
inline SparseMatrix<std::uint64_t> reduce_mod(const SparseMatrix<Integer>& a, Prime q) {
  SparseMatrix<std::uint64_t> out(a.rows, a.cols);
  for (std::size_t c = 0; c < a.cols; ++c)
    for (const auto& [r, v] : a.columns[c]) {
      std::uint64_t m = mod_u64(v, q.value());
      if (m != 0) out.columns[c].emplace_back(r, m);
    }
  return out;
}

}  // namespace circlift
