#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circlift/chain.hpp"
#include "circlift/complex.hpp"
#include "circlift/finite_field.hpp"

namespace circlift {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Where in [birth, death) a representative is restricted to.
struct ScalePolicy {
  enum class Kind { Midpoint, Fraction, Absolute } kind = Kind::Midpoint;
  double value = 0.5;

  static ScalePolicy midpoint() { return {}; }
  static ScalePolicy fraction(double t) { return {Kind::Fraction, t}; }
  static ScalePolicy absolute(double eps) { return {Kind::Absolute, eps}; }
};

struct PersistencePair {
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;
  /// Representatives live on complex.sublevel(scale); birth <= scale < death.
  double scale = 0.0;
  Index birth_simplex = 0;
  std::optional<Index> death_simplex;
  FpCochain cocycle;
  std::optional<FpChain> cycle;

  bool essential() const { return std::isinf(death); }
  double persistence() const { return death - birth; }
};

struct Diagram {
  std::uint64_t prime = 3;
  /// pairs[m] holds the degree-m intervals sorted by persistence, descending.
  std::vector<std::vector<PersistencePair>> pairs;

  const std::vector<PersistencePair>& in_dim(int m) const {
    static const std::vector<PersistencePair> none;
    return m >= 0 && m < static_cast<int>(pairs.size()) ? pairs[m] : none;
  }
};

namespace detail {

using FpColumn = std::vector<std::pair<Index, std::uint64_t>>;  // sorted by index

/// a += f * b over F_p.
inline void axpy(FpColumn& a, std::uint64_t f, const FpColumn& b, std::uint64_t p, FpColumn& scratch) {
  scratch.clear();
  scratch.reserve(a.size() + b.size());
  auto ia = a.cbegin();
  auto ib = b.cbegin();
  while (ia != a.cend() || ib != b.end()) {
    if (ib == b.end() || (ia != a.cend() && ia->first < ib->first)) {
      scratch.push_back(*ia++);
    } else if (ia == a.cend() || ib->first < ia->first) {
      scratch.emplace_back(ib->first, mod_mul(f, ib->second, p));
      ++ib;
    } else {
      std::uint64_t v = mod_add(ia->second, mod_mul(f, ib->second, p), p);
      if (v != 0) scratch.emplace_back(ia->first, v);
      ++ia;
      ++ib;
    }
  }
  a.swap(scratch);
}

inline double representative_scale(const ScalePolicy& policy, double birth, double death, double final_scale) {
  if (std::isinf(death)) return std::max(birth, final_scale);
  switch (policy.kind) {
    case ScalePolicy::Kind::Midpoint: return 0.5 * (birth + death);
    case ScalePolicy::Kind::Fraction: return birth + policy.value * (death - birth);
    case ScalePolicy::Kind::Absolute:
      return (policy.value >= birth && policy.value < death) ? policy.value : 0.5 * (birth + death);
  }
  return birth;
}

}  // namespace detail

/// Persistent cohomology over F_p in degrees 0..max_dim with representative
/// cocycles. Columns of the coboundary matrix are reduced in reverse
/// filtration order; the pivot of a column is its earliest coface. A column
/// reducing to a nonzero vector with pivot tau yields [filt sigma, filt tau)
/// and its reduction vector, restricted below the death, is a cocycle.
inline Diagram persistent_cohomology(const FilteredComplex& complex, OddPrime prime, int max_dim,
                                     ScalePolicy policy = ScalePolicy::midpoint()) {
  if (max_dim < 0 || max_dim > complex.max_dim())
    throw Error(ErrorCode::DimensionOutOfRange, "persistence degree " + std::to_string(max_dim));
  const std::uint64_t p = prime.value();
  const double final_scale = complex.max_filtration();
  Diagram diagram;
  diagram.prime = p;
  diagram.pairs.resize(max_dim + 1);

  std::vector<bool> killed_below;  // m-simplices that are pivots of the degree m-1 reduction
  detail::FpColumn scratch;
  for (int m = 0; m <= max_dim; ++m) {
    const std::size_t n = complex.size(m);
    const std::size_t n_up = complex.size(m + 1);
    std::vector<bool> killed_here(n_up, false);
    std::vector<std::int64_t> pivot_owner(n_up, -1);
    std::vector<detail::FpColumn> reduced(n), reduction(n);

    for (std::size_t jj = n; jj-- > 0;) {
      const Index j = static_cast<Index>(jj);
      // Clearing: a simplex that killed a degree m-1 class has a column
      // reducing to zero and carries no interval.
      if (m > 0 && killed_below[j]) continue;
      detail::FpColumn col;
      for (const auto& cf : complex.cofaces(m, j))
        col.emplace_back(cf.index, cf.position % 2 == 0 ? 1 : p - 1);
      std::sort(col.begin(), col.end());
      detail::FpColumn v{{j, 1}};
      while (!col.empty()) {
        Index piv = col.front().first;
        std::int64_t owner = pivot_owner[piv];
        if (owner < 0) break;
        const auto& other = reduced[owner];
        std::uint64_t f = mod_mul(col.front().second, mod_inverse(other.front().second, p), p);
        detail::axpy(col, mod_neg(f, p), other, p, scratch);
        detail::axpy(v, mod_neg(f, p), reduction[owner], p, scratch);
      }

      const double birth = complex.filtration(m, j);
      std::optional<double> death;
      std::optional<Index> death_simplex;
      if (!col.empty()) {
        Index piv = col.front().first;
        pivot_owner[piv] = j;
        killed_here[piv] = true;
        death = complex.filtration(m + 1, piv);
        death_simplex = piv;
      } else {
        death = kInfinity;
      }
      if (death && *death > birth) {
        PersistencePair pair;
        pair.dim = m;
        pair.birth = birth;
        pair.death = *death;
        pair.birth_simplex = j;
        pair.death_simplex = death_simplex;
        pair.scale = detail::representative_scale(policy, birth, *death, final_scale);
        const std::size_t keep = complex.sublevel_size(m, pair.scale);
        pair.cocycle = FpCochain(m);
        for (const auto& [i, c] : v)
          if (i < keep) pair.cocycle.entries.emplace(i, c);
        diagram.pairs[m].push_back(std::move(pair));
      }
      reduced[j] = std::move(col);
      reduction[j] = std::move(v);
    }
    killed_below = std::move(killed_here);
  }

  for (auto& level : diagram.pairs)
    std::stable_sort(level.begin(), level.end(), [](const PersistencePair& a, const PersistencePair& b) {
      if (a.persistence() != b.persistence()) return a.persistence() > b.persistence();
      return a.birth < b.birth;
    });
  return diagram;
}

/// Standard boundary-matrix reduction over F_p for one degree: columns are
/// m-simplices in filtration order, the pivot is the largest face index.
struct BoundaryReduction {
  int dim = 0;
  std::vector<detail::FpColumn> reduced;    // R = D V
  std::vector<detail::FpColumn> reduction;  // V
  std::vector<std::int64_t> pivot_owner;    // (m-1)-simplex -> column

  bool is_cycle(Index j) const { return reduced[j].empty(); }
};

inline BoundaryReduction reduce_boundary(const FilteredComplex& complex, int m, std::uint64_t p) {
  BoundaryReduction red;
  red.dim = m;
  const std::size_t n = complex.size(m);
  red.reduced.resize(n);
  red.reduction.resize(n);
  red.pivot_owner.assign(m >= 1 ? complex.size(m - 1) : 0, -1);
  detail::FpColumn scratch;
  for (Index j = 0; j < n; ++j) {
    detail::FpColumn col;
    if (m >= 1) {
      for (int k = 0; k <= m; ++k) col.emplace_back(complex.face(m, j, k), k % 2 == 0 ? 1 : p - 1);
      std::sort(col.begin(), col.end());
    }
    detail::FpColumn v{{j, 1}};
    while (!col.empty()) {
      Index piv = col.back().first;
      std::int64_t owner = red.pivot_owner[piv];
      if (owner < 0) break;
      const auto& other = red.reduced[owner];
      std::uint64_t f = mod_mul(col.back().second, mod_inverse(other.back().second, p), p);
      detail::axpy(col, mod_neg(f, p), other, p, scratch);
      detail::axpy(v, mod_neg(f, p), red.reduction[owner], p, scratch);
    }
    if (!col.empty()) red.pivot_owner[col.back().first] = j;
    red.reduced[j] = std::move(col);
    red.reduction[j] = std::move(v);
  }
  return red;
}

/// Barcode interval without representatives.
struct Interval {
  int dim;
  double birth;
  double death;
  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Persistent homology intervals of positive length in degrees 0..max_dim.
inline std::vector<Interval> persistent_homology_intervals(const FilteredComplex& complex, Prime prime, int max_dim) {
  std::vector<Interval> out;
  std::vector<BoundaryReduction> reds;
  for (int m = 0; m <= std::min(max_dim + 1, complex.max_dim()); ++m)
    reds.push_back(reduce_boundary(complex, m, prime.value()));
  for (int m = 0; m <= max_dim; ++m) {
    const bool has_up = m + 1 < static_cast<int>(reds.size());
    for (Index j = 0; j < complex.size(m); ++j) {
      if (!reds[m].is_cycle(j)) continue;
      double birth = complex.filtration(m, j);
      double death = kInfinity;
      if (has_up && reds[m + 1].pivot_owner[j] >= 0)
        death = complex.filtration(m + 1, static_cast<Index>(reds[m + 1].pivot_owner[j]));
      if (death > birth) out.push_back({m, birth, death});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Interval> intervals_of(const Diagram& diagram) {
  std::vector<Interval> out;
  for (const auto& level : diagram.pairs)
    for (const auto& pr : level) out.push_back({pr.dim, pr.birth, pr.death});
  std::sort(out.begin(), out.end());
  return out;
}

/// Candidate homology cycles of a complex in degree m over F_p: the
/// essential basis cycles first, then every other reduced cycle column.
inline std::vector<FpChain> cycle_candidates(const FilteredComplex& complex, int m, std::uint64_t p) {
  if (m < 1 || m > complex.max_dim()) throw Error(ErrorCode::DimensionOutOfRange, "cycle degree");
  auto red = reduce_boundary(complex, m, p);
  std::vector<bool> bounding(complex.size(m), false);
  if (m + 1 <= complex.max_dim()) {
    auto up = reduce_boundary(complex, m + 1, p);
    for (std::size_t i = 0; i < up.pivot_owner.size(); ++i)
      if (up.pivot_owner[i] >= 0) bounding[i] = true;
  }
  std::vector<FpChain> essential, rest;
  for (Index j = 0; j < complex.size(m); ++j) {
    if (!red.is_cycle(j)) continue;
    FpChain c(m);
    for (const auto& [i, v] : red.reduction[j]) c.entries.emplace(i, v);
    (bounding[j] ? rest : essential).push_back(std::move(c));
  }
  auto by_support = [](const FpChain& a, const FpChain& b) { return a.support_size() < b.support_size(); };
  std::stable_sort(essential.begin(), essential.end(), by_support);
  essential.insert(essential.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  return essential;
}

/// A cycle on complex.sublevel(pair.scale) whose pairing with the pair's
/// cocycle is nonzero mod p.
inline FpChain cycle_representative(const FilteredComplex& complex, OddPrime prime, const PersistencePair& pair) {
  if (pair.dim < 1) throw Error(ErrorCode::NoDualCycle, "no cycle representatives in degree 0");
  FilteredComplex sub = complex.sublevel(pair.scale);
  PrimeField field(prime);
  for (auto& c : cycle_candidates(sub, pair.dim, prime.value()))
    if (pairing(field, pair.cocycle, c) != 0) return c;
  throw Error(ErrorCode::NoDualCycle, "no cycle pairs nonzero with the representative cocycle");
}

struct ClassSelection {
  enum class Kind { MaxPersistence, Index } kind = Kind::MaxPersistence;
  std::size_t index = 0;

  static ClassSelection max_persistence() { return {}; }
  static ClassSelection at(std::size_t k) { return {Kind::Index, k}; }
};

inline const PersistencePair& select_class(const Diagram& diagram, int dim, ClassSelection strategy) {
  const auto& level = diagram.in_dim(dim);
  if (level.empty()) throw Error(ErrorCode::EmptyDiagram, "no intervals in degree " + std::to_string(dim));
  if (strategy.kind == ClassSelection::Kind::MaxPersistence) return level.front();
  if (strategy.index >= level.size())
    throw Error(ErrorCode::EmptyDiagram, "class index " + std::to_string(strategy.index) + " out of range");
  return level[strategy.index];
}

}  // namespace circlift
