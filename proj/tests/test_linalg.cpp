#include <gtest/gtest.h>

#include "support.hpp"

using namespace circlift;
using namespace circlift::testing;

namespace {

SparseMatrix<Integer> random_int_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::int64_t bound, double density) {
  SparseMatrix<Integer> a(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r)
      if (rng.unit() < density) {
        auto v = rng.between(-bound, bound);
        if (v != 0) a.columns[c].emplace_back(static_cast<Index>(r), Integer(v));
      }
  return a;
}

std::vector<std::vector<Integer>> to_dense_matrix(const SparseMatrix<Integer>& a) {
  std::vector<std::vector<Integer>> d(a.rows, std::vector<Integer>(a.cols));
  for (std::size_t c = 0; c < a.cols; ++c)
    for (const auto& [r, v] : a.columns[c]) d[r][c] = v;
  return d;
}

Dense to_int64(const SparseMatrix<Integer>& a) {
  Dense d(a.rows, std::vector<std::int64_t>(a.cols, 0));
  for (std::size_t c = 0; c < a.cols; ++c)
    for (const auto& [r, v] : a.columns[c]) d[r][c] = static_cast<std::int64_t>(v);
  return d;
}

std::vector<std::uint64_t> mat_vec_mod(const SparseMatrix<std::uint64_t>& a, const std::vector<std::uint64_t>& x,
                                       std::uint64_t q) {
  std::vector<std::uint64_t> y(a.rows, 0);
  for (std::size_t c = 0; c < a.cols; ++c)
    for (const auto& [r, v] : a.columns[c]) y[r] = (y[r] + v * x[c]) % q;
  return y;
}

TEST(ModularSystem, RankMatchesDenseOracle) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = 1 + rng.below(7), cols = 1 + rng.below(7);
    for (std::uint64_t q : {2u, 3u, 7u}) {
      auto a = random_int_matrix(rng, rows, cols, 4, 0.5);
      EXPECT_EQ(rank_mod(reduce_mod(a, Prime(q)), Prime(q)), dense_rank_mod(to_int64(a), static_cast<std::int64_t>(q)));
    }
  }
}

// Solvability against exhaustive search over F_3^n.
TEST(ModularSystem, SolveMatchesEnumeration) {
  Rng rng(6);
  const std::uint64_t q = 3;
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(5);
    auto a = reduce_mod(random_int_matrix(rng, rows, cols, 2, 0.6), Prime(q));
    std::vector<std::uint64_t> b(rows);
    for (auto& v : b) v = rng.below(q);
    bool exists = false;
    std::vector<std::uint64_t> x(cols, 0);
    for (std::size_t code = 0, total = static_cast<std::size_t>(std::pow(3, cols)); code < total && !exists; ++code) {
      for (std::size_t k = 0, c = code; k < cols; ++k, c /= 3) x[k] = c % 3;
      exists = mat_vec_mod(a, x, q) == b;
    }
    ModularSystem sys(a, Prime(q));
    auto sol = sys.solve(b);
    EXPECT_EQ(sol.has_value(), exists);
    if (sol) {
      EXPECT_EQ(mat_vec_mod(a, *sol, q), b);
      auto other = sys.solve(b, [](std::size_t c) { return c + 1; });
      ASSERT_TRUE(other.has_value());
      EXPECT_EQ(mat_vec_mod(a, *other, q), b);
    }
  }
}

TEST(SmithForm, InvariantFactorsMatchDeterminantalDivisors) {
  Rng rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
    auto a = random_int_matrix(rng, rows, cols, 6, 0.7);
    SmithForm snf(a);
    auto expected = invariant_factors_oracle(to_dense_matrix(a));
    ASSERT_EQ(snf.diagonal().size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(snf.diagonal()[k], expected[k]);
    for (std::size_t k = 1; k < snf.diagonal().size(); ++k) EXPECT_EQ(snf.diagonal()[k] % snf.diagonal()[k - 1], 0);
  }
}

TEST(SmithForm, SolveAndKernel) {
  Rng rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = 1 + rng.below(6), cols = 1 + rng.below(6);
    auto a = random_int_matrix(rng, rows, cols, 5, 0.6);
    SmithForm snf(a);
    // Consistent right-hand side A x0 is always solvable.
    std::vector<Integer> x0(cols);
    for (auto& v : x0) v = rng.between(-5, 5);
    auto b = multiply(a, x0);
    auto x = snf.solve(b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(multiply(a, *x), b);
    for (const auto& k : snf.kernel_basis()) {
      auto z = multiply(a, k);
      for (const auto& v : z) EXPECT_TRUE(v.is_zero());
    }
    EXPECT_EQ(snf.kernel_basis().size(), cols - snf.rank());
  }
}

TEST(SmithForm, DetectsNonIntegerSolvability) {
  SparseMatrix<Integer> a(1, 1);
  a.columns[0].emplace_back(0, Integer(2));
  SmithForm snf(a);
  EXPECT_FALSE(snf.solve({Integer(3)}).has_value());
  EXPECT_EQ((*snf.solve({Integer(4)}))[0], 2);
}

TEST(SmithForm, TorsionOfFixtures) {
  // RP^2: H^2 = Z/2, one invariant factor 2.
  auto rp2 = projective_plane();
  SmithForm d1(coboundary_matrix(rp2, 1, IntegerRing{}));
  EXPECT_EQ(d1.diagonal().back(), 2);
  // Moore space: H^2 = Z/3.
  auto m3 = moore_space_z3();
  SmithForm d1m(coboundary_matrix(m3, 1, IntegerRing{}));
  EXPECT_EQ(d1m.diagonal().back(), 3);
}

}  // namespace
