#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "circlift/chain.hpp"
#include "circlift/complex.hpp"
#include "circlift/finite_field.hpp"
#include "circlift/integer_linalg.hpp"

namespace circlift {

/// Which argument certified a lift, strongest first.
enum class Certificate {
  InRange,       // every scaled coefficient within floor((p-1)/(m+2)) (cocycles)
  PerFaceRange,  // every scaled coefficient within floor((p-1)/|I_tau|) (cycles)
  IndexSets,     // per-position bound from the cocycle's coface relations
  VerifiedOnly,  // a scaled naive lift happened to be closed
  SnfRepaired,   // closed by an integer correction term
};

constexpr std::string_view to_string(Certificate c) {
  switch (c) {
    case Certificate::InRange: return "InRange";
    case Certificate::PerFaceRange: return "PerFaceRange";
    case Certificate::IndexSets: return "IndexSets";
    case Certificate::VerifiedOnly: return "VerifiedOnly";
    case Certificate::SnfRepaired: return "SnfRepaired";
  }
  return "Unknown";
}

/// One linear relation sum_j sign_j * alpha_j = 0 over F_p among support
/// positions: the faces of one coface for a cocycle, the cofaces of one face
/// for a cycle.
struct IndexSet {
  Index relation = 0;  // the simplex the relation comes from
  std::vector<std::pair<Index, int>> members;  // (support simplex, orientation sign)
  std::size_t size() const { return members.size(); }
};

struct IndexSystem {
  std::vector<IndexSet> sets;

  /// floor((p-1)/|I|) minimised over the sets containing each support
  /// position; positions in no set are bounded only by (p-1)/2.
  template <class K>
  std::vector<std::uint64_t> bounds(const SparseChain<std::uint64_t, K>& c, OddPrime p) const {
    std::map<Index, std::uint64_t> bound;
    for (const auto& [i, v] : c.entries) bound[i] = (p.value() - 1) / 2;
    for (const auto& s : sets) {
      std::uint64_t b = (p.value() - 1) / s.size();
      for (const auto& [i, sign] : s.members) bound[i] = std::min(bound[i], b);
    }
    std::vector<std::uint64_t> out;
    out.reserve(bound.size());
    for (const auto& [i, b] : bound) out.push_back(b);
    return out;
  }
};

namespace detail {

template <class K>
void check_relations(const IndexSystem& system, const SparseChain<std::uint64_t, K>& c, OddPrime p) {
  const std::uint64_t q = p.value();
  for (const auto& s : system.sets) {
    std::uint64_t sum = 0;
    for (const auto& [i, sign] : s.members) {
      std::uint64_t v = c.at(i);
      sum = sign > 0 ? mod_add(sum, v, q) : mod_sub(sum, v, q);
    }
    if (sum != 0)
      throw Error(ErrorCode::NotClosed, "relation at simplex " + std::to_string(s.relation) + " sums to " +
                                            std::to_string(sum) + " mod " + std::to_string(q));
  }
}

}  // namespace detail

/// Coface relations of an m-cochain: one set per (m+1)-simplex touching the
/// support, listing its faces in the support.
inline IndexSystem cocycle_index_system(const FilteredComplex& complex, const FpCochain& c, OddPrime p) {
  detail::check_support(complex, c);
  std::map<Index, IndexSet> by_coface;
  for (const auto& [i, v] : c.entries)
    for (const auto& cf : complex.cofaces(c.dim, i)) {
      auto& s = by_coface[cf.index];
      s.relation = cf.index;
      s.members.emplace_back(i, cf.position % 2 == 0 ? 1 : -1);
    }
  IndexSystem system;
  for (auto& [idx, s] : by_coface) system.sets.push_back(std::move(s));
  detail::check_relations(system, c, p);
  return system;
}

/// Face relations of an m-chain: one set I_tau per (m-1)-face tau of the
/// support, listing the support simplices having tau as a face.
inline IndexSystem cycle_index_system(const FilteredComplex& complex, const FpChain& c, OddPrime p) {
  detail::check_support(complex, c);
  if (c.dim < 1) throw Error(ErrorCode::DimensionOutOfRange, "cycles of degree 0 carry no relations");
  std::map<Index, IndexSet> by_face;
  for (const auto& [i, v] : c.entries)
    for (int k = 0; k <= c.dim; ++k) {
      Index f = complex.face(c.dim, i, k);
      auto& s = by_face[f];
      s.relation = f;
      s.members.emplace_back(i, k % 2 == 0 ? 1 : -1);
    }
  IndexSystem system;
  for (auto& [idx, s] : by_face) system.sets.push_back(std::move(s));
  detail::check_relations(system, c, p);
  return system;
}

template <class K>
IndexSystem index_system(const FilteredComplex& complex, const SparseChain<std::uint64_t, K>& c, OddPrime p) {
  if constexpr (std::is_same_v<K, CochainTag>) return cocycle_index_system(complex, c, p);
  else return cycle_index_system(complex, c, p);
}

/// Coefficient-wise symmetric lift into (-p/2, p/2).
template <class K>
SparseChain<Integer, K> naive_lift(const SparseChain<std::uint64_t, K>& c, OddPrime p) {
  SparseChain<Integer, K> out(c.dim);
  for (const auto& [i, v] : c.entries) out.set(i, Integer(lift_coeff(v, p.value())));
  return out;
}

/// Smallest r in 1..p-1 with |r c_j|_p <= bounds[j] for every j, checking
/// r in O(n) each.
inline std::optional<FpElement> scaling_search(const std::vector<std::uint64_t>& coeffs,
                                               const std::vector<std::uint64_t>& bounds, OddPrime p) {
  if (coeffs.size() != bounds.size()) throw Error(ErrorCode::DimensionMismatch, "one bound per coefficient");
  const std::uint64_t q = p.value();
  for (std::uint64_t r = 1; r < q; ++r) {
    bool ok = true;
    for (std::size_t j = 0; j < coeffs.size() && ok; ++j) ok = abs_p(mod_mul(r, coeffs[j], q), q) <= bounds[j];
    if (ok) return FpElement(r, p);
  }
  return std::nullopt;
}

template <class K>
std::optional<FpElement> scaling_search(const SparseChain<std::uint64_t, K>& c, const std::vector<std::uint64_t>& bounds,
                                        OddPrime p) {
  std::vector<std::uint64_t> coeffs;
  coeffs.reserve(c.entries.size());
  for (const auto& [i, v] : c.entries) coeffs.push_back(v);
  return scaling_search(coeffs, bounds, p);
}

/// k^n + 1: every prime p with p - 1 > k^n makes the scaling search succeed
/// for all vectors with n nonzero coordinates.
inline Integer pigeonhole_bound(std::uint64_t n, std::uint64_t k) {
  if (n < 1 || k < 2) throw Error(ErrorCode::DimensionOutOfRange, "pigeonhole_bound needs n >= 1, k >= 2");
  Integer b = 1;
  for (std::uint64_t i = 0; i < n; ++i) b *= k;
  return b + 1;
}

template <class K>
struct LiftReport {
  SparseChain<std::uint64_t, K> input;
  FpElement r;
  SparseChain<Integer, K> working_lift;    // lift of r * input
  SparseChain<Integer, K> exact_preimage;  // reduces to input mod p
  Certificate certificate = Certificate::VerifiedOnly;
  bool is_closed = false;
};

using CocycleLift = LiftReport<CochainTag>;
using CycleLift = LiftReport<ChainTag>;

struct LiftOptions {
  /// Largest number of simplices in the two dimensions an integer repair
  /// touches before it is refused.
  std::size_t snf_cap = 1500;
};

namespace detail {

template <class K>
bool closed_over_z(const FilteredComplex& complex, const SparseChain<Integer, K>& c) {
  if constexpr (std::is_same_v<K, CochainTag>) return apply_coboundary(complex, IntegerRing{}, c).empty();
  else return c.dim == 0 || apply_boundary(complex, IntegerRing{}, c).empty();
}

// Matrix of the closedness operator (delta_m for cochains, boundary for chains).
template <class K>
SparseMatrix<Integer> closedness_matrix(const FilteredComplex& complex, int m) {
  if constexpr (std::is_same_v<K, CochainTag>) return coboundary_matrix(complex, m, IntegerRing{});
  else return boundary_matrix(complex, m, IntegerRing{});
}

template <class K>
std::size_t repair_size(const FilteredComplex& complex, int m) {
  return complex.size(m) + complex.size(std::is_same_v<K, CochainTag> ? m + 1 : m - 1);
}

template <class K>
SparseChain<Integer, K> integer_repair(const FilteredComplex& complex, const SparseChain<Integer, K>& alpha,
                                       OddPrime p, std::size_t cap) {
  if (repair_size<K>(complex, alpha.dim) > cap)
    throw Error(ErrorCode::ComplexTooLargeForSnf, std::to_string(repair_size<K>(complex, alpha.dim)) +
                                                      " simplices exceed the cap of " + std::to_string(cap));
  auto mat = closedness_matrix<K>(complex, alpha.dim);
  auto image = multiply(mat, to_dense(alpha, mat.cols));
  bool zero = true;
  for (auto& v : image) {
    if (v % p.value() != 0) throw Error(ErrorCode::NotClosed, "input is not closed modulo p");
    v /= p.value();
    zero = zero && v.is_zero();
  }
  if (zero) return alpha;
  SmithForm snf(mat);
  auto xi = snf.solve(image);
  if (!xi) throw Error(ErrorCode::TorsionObstruction, "correction system has no integer solution (p-torsion)");
  auto correction = from_dense<K>(*xi, alpha.dim);
  return subtract(alpha, scale(correction, Integer(p.value())));
}

}  // namespace detail

/// alpha - p xi where delta xi = eta and delta alpha = p eta: an integer
/// cocycle congruent to alpha mod p.
inline IntCochain snf_repair(const FilteredComplex& complex, const IntCochain& alpha, OddPrime p,
                             std::size_t cap = LiftOptions{}.snf_cap) {
  detail::check_support(complex, alpha);
  return detail::integer_repair(complex, alpha, p, cap);
}

/// True iff p divides a nontrivial invariant factor of delta_{degree-1},
/// i.e. the torsion of H^degree(X; Z) has p-part.
inline bool has_p_torsion(const FilteredComplex& complex, int degree, OddPrime p,
                          std::size_t cap = LiftOptions{}.snf_cap) {
  if (degree < 1 || degree > complex.max_dim()) return false;
  if (complex.size(degree - 1) + complex.size(degree) > cap)
    throw Error(ErrorCode::ComplexTooLargeForSnf, "torsion check exceeds the SNF cap");
  SmithForm snf(coboundary_matrix(complex, degree - 1, IntegerRing{}));
  for (const auto& d : snf.diagonal())
    if (d > 1 && d % p.value() == 0) return true;
  return false;
}

/// Lifts a mod-p cocycle or cycle to a closed integer one. Routes in order:
/// certified scaling, verify-only scaling sweep, integer repair.
template <class K>
LiftReport<K> lift_closed(const FilteredComplex& complex, const SparseChain<std::uint64_t, K>& c, OddPrime p,
                          LiftOptions options = {}) {
  const std::uint64_t q = p.value();
  const IndexSystem system = index_system(complex, c, p);
  LiftReport<K> report;
  report.input = c;

  auto finish = [&](std::uint64_t r, SparseChain<Integer, K> working, Certificate cert) {
    report.r = FpElement(r, p);
    report.working_lift = std::move(working);
    // Multiply by the canonical representative of r^{-1} in [1, p).
    report.exact_preimage = scale(report.working_lift, Integer(mod_inverse(r, q)));
    report.certificate = cert;
    report.is_closed = detail::closed_over_z(complex, report.working_lift);
    return report;
  };

  if (auto r = scaling_search(c, system.bounds(c, p), p)) {
    auto working = naive_lift(scale_mod(c, r->value, p), p);
    Certificate cert = Certificate::PerFaceRange;
    if constexpr (std::is_same_v<K, CochainTag>) {
      const Integer uniform = (q - 1) / static_cast<std::uint64_t>(c.dim + 2);
      cert = max_abs(working) <= uniform ? Certificate::InRange : Certificate::IndexSets;
    }
    return finish(r->value, std::move(working), cert);
  }

  for (std::uint64_t r = 1; r < q; ++r) {
    auto working = naive_lift(scale_mod(c, r, p), p);
    if (detail::closed_over_z(complex, working)) return finish(r, std::move(working), Certificate::VerifiedOnly);
  }

  if (detail::repair_size<K>(complex, c.dim) > options.snf_cap)
    throw Error(ErrorCode::Unliftable, "no scaled lift is closed and the complex exceeds the SNF cap");
  auto repaired = detail::integer_repair(complex, naive_lift(c, p), p, options.snf_cap);
  return finish(1, std::move(repaired), Certificate::SnfRepaired);
}

}  // namespace circlift
