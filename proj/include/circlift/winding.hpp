#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circlift/chain.hpp"
#include "circlift/complex.hpp"
#include "circlift/finite_field.hpp"
#include "circlift/integer_linalg.hpp"
#include "circlift/lifting.hpp"
#include "circlift/modular_linalg.hpp"

namespace circlift {

enum class DivisionRoute { ModPSolve, IntegerSnf };

constexpr std::string_view to_string(DivisionRoute r) {
  return r == DivisionRoute::ModPSolve ? "ModPSolve" : "IntegerSnf";
}

struct DivisionTraceEntry {
  std::uint64_t prime = 0;
  std::size_t times_divided = 0;
  DivisionRoute route = DivisionRoute::ModPSolve;
};

struct WindingReport {
  Integer pairing;
  std::vector<std::uint64_t> candidate_primes;
  std::vector<DivisionTraceEntry> division_trace;
  Integer winding_number = 1;  // positive; [alpha] = winding_number * [reduced_cocycle]
  IntCochain reduced_cocycle;
};

struct WindingOptions {
  std::size_t snf_cap = 1500;
  /// Skip the mod-q solve and go straight to the integer system.
  bool force_snf = false;
  /// Working prime for the lift validation; 0 picks one automatically.
  std::uint64_t working_prime = 0;
};

namespace detail {

inline void require_cocycle(const FilteredComplex& complex, const IntCochain& alpha) {
  check_support(complex, alpha);
  if (!apply_coboundary(complex, IntegerRing{}, alpha).empty())
    throw Error(ErrorCode::NotACocycle, "integer cochain is not a cocycle");
}

inline std::vector<std::uint64_t> mod_vector(const IntCochain& c, std::size_t n, std::uint64_t q) {
  std::vector<std::uint64_t> b(n, 0);
  for (const auto& [i, v] : c.entries) b[i] = mod_u64(v, q);
  return b;
}

}  // namespace detail

/// Whether alpha mod q lies in the image of delta_{m-1} over F_q.
inline bool class_vanishes_mod(const FilteredComplex& complex, const IntCochain& alpha, Prime q) {
  detail::require_cocycle(complex, alpha);
  auto b = detail::mod_vector(alpha, complex.size(alpha.dim), q.value());
  if (alpha.dim == 0) {
    for (auto v : b)
      if (v != 0) return false;
    return true;
  }
  auto delta = reduce_mod(coboundary_matrix(complex, alpha.dim - 1, IntegerRing{}), q);
  return ModularSystem(delta, q).solve(std::move(b)).has_value();
}

/// Distinct prime factors of |pairing| in ascending order.
inline std::vector<std::uint64_t> candidate_primes(const Integer& pairing) {
  if (pairing.is_zero()) throw Error(ErrorCode::ZeroPairing, "Kronecker pairing is zero");
  Integer n = abs(pairing);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t d = 2; Integer(d) * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      primes.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) primes.push_back(static_cast<std::uint64_t>(n));
  return primes;
}

/// Result of one division alpha = q gamma + delta f.
struct Division {
  IntCochain gamma;
  IntCochain potential;  // f, a (m-1)-cochain
  DivisionRoute route = DivisionRoute::ModPSolve;
  /// Working prime whose coefficient conditions certified gamma (0 if none).
  std::uint64_t working_prime = 0;
};

/// Integer route: solve [delta_{m-1} | q I] (f, gamma) = alpha via Smith form.
inline Division divide_step_snf(const FilteredComplex& complex, const IntCochain& alpha, Prime q,
                                std::size_t cap = WindingOptions{}.snf_cap) {
  detail::require_cocycle(complex, alpha);
  const int m = alpha.dim;
  const std::size_t n_low = m >= 1 ? complex.size(m - 1) : 0, n = complex.size(m);
  if (n_low + n > cap) throw Error(ErrorCode::ComplexTooLargeForSnf, "division system exceeds the SNF cap");
  SparseMatrix<Integer> system(n, n_low + n);
  if (m >= 1) {
    auto delta = coboundary_matrix(complex, m - 1, IntegerRing{});
    for (std::size_t c = 0; c < n_low; ++c) system.columns[c] = delta.columns[c];
  }
  for (std::size_t i = 0; i < n; ++i) system.columns[n_low + i].emplace_back(static_cast<Index>(i), Integer(q.value()));
  auto x = SmithForm(system).solve(to_dense(alpha, n));
  if (!x) throw Error(ErrorCode::NotDivisible, "class is not divisible by " + std::to_string(q.value()));
  Division d;
  d.route = DivisionRoute::IntegerSnf;
  d.potential = from_dense<CochainTag>(std::vector<Integer>(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(n_low)),
                                       std::max(m - 1, 0));
  d.gamma = from_dense<CochainTag>(std::vector<Integer>(x->begin() + static_cast<std::ptrdiff_t>(n_low), x->end()), m);
  return d;
}

/// Solves alpha = q gamma + delta f. The mod-q route solves delta f = alpha
/// over F_q (free variables zero), lifts f coefficient-wise and divides
/// alpha - delta f by q exactly; gamma is then re-derived in a working prime
/// where all coefficients fit the lifting range, which certifies it
/// independently. The integer route is the fallback.
inline Division divide_step(const FilteredComplex& complex, const IntCochain& alpha, Prime q,
                            WindingOptions options = {}) {
  detail::require_cocycle(complex, alpha);
  if (options.force_snf) return divide_step_snf(complex, alpha, q, options.snf_cap);
  const int m = alpha.dim;
  const std::uint64_t qq = q.value();

  IntCochain f(std::max(m - 1, 0));
  IntCochain delta_f(m);
  if (m >= 1) {
    auto delta = reduce_mod(coboundary_matrix(complex, m - 1, IntegerRing{}), q);
    auto sol = ModularSystem(delta, q).solve(detail::mod_vector(alpha, complex.size(m), qq));
    if (!sol) throw Error(ErrorCode::NotDivisible, "class does not vanish mod " + std::to_string(qq));
    for (std::size_t i = 0; i < sol->size(); ++i)
      if ((*sol)[i] != 0) f.entries.emplace(static_cast<Index>(i), Integer(lift_coeff((*sol)[i], qq)));
    delta_f = apply_coboundary(complex, IntegerRing{}, f);
  }
  auto residual = subtract(alpha, delta_f);
  Division d;
  d.potential = f;
  d.gamma = IntCochain(m);
  for (const auto& [i, v] : residual.entries) {
    // delta f = alpha mod q, so every residual coefficient is divisible.
    if (v % qq != 0) throw Error(ErrorCode::ValidationFailed, "alpha - delta f is not divisible by q");
    d.gamma.entries.emplace(i, v / qq);
  }

  // Certification in a working prime p > q whose range floor((p-1)/(m+2))
  // holds alpha, delta f and q gamma, and with no detected p-torsion.
  Integer needed = std::max({max_abs(alpha), max_abs(delta_f), max_abs(scale(d.gamma, Integer(qq)))});
  std::uint64_t p = options.working_prime;
  if (p == 0) {
    p = next_prime(std::max<std::uint64_t>(qq, 2));
    for (;;) {
      bool fits = Integer((p - 1) / static_cast<std::uint64_t>(m + 2)) >= needed;
      bool torsion = false;
      if (fits && complex.size(m) + complex.size(m + 1) <= options.snf_cap)
        torsion = has_p_torsion(complex, m + 1, OddPrime(p), options.snf_cap);
      if (fits && !torsion) break;
      p = next_prime(p);
    }
  }
  OddPrime work(p);
  const std::uint64_t q_inv = mod_inverse(qq % p, p);
  bool certified = Integer((p - 1) / static_cast<std::uint64_t>(m + 2)) >= needed;
  if (certified) {
    // gamma^p = (alpha^p - delta f^p) / q in F_p, lifted back.
    for (Index i = 0; i < complex.size(m) && certified; ++i) {
      std::uint64_t a = mod_u64(alpha.at(i), p), df = mod_u64(delta_f.at(i), p);
      std::uint64_t g = mod_mul(mod_sub(a, df, p), q_inv, p);
      certified = Integer(lift_coeff(g, p)) == d.gamma.at(i);
    }
  }
  // Exact identity over Z, asserted regardless of the certificate.
  if (add(IntegerRing{}, scale(d.gamma, Integer(qq)), delta_f) != alpha)
    throw Error(ErrorCode::ValidationFailed, "q gamma + delta f != alpha");
  if (certified) {
    d.working_prime = p;
    return d;
  }
  try {
    return divide_step_snf(complex, alpha, q, options.snf_cap);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ComplexTooLargeForSnf)
      throw Error(ErrorCode::ValidationFailed, "working-prime conditions failed and the SNF cap is exceeded");
    throw;
  }
}

/// Reduces alpha to a winding-one representative by repeatedly dividing out
/// the prime factors of its pairing with beta while the class vanishes mod
/// that prime.
inline WindingReport reduce_winding(const FilteredComplex& complex, const IntCochain& alpha, const IntChain& beta,
                                    WindingOptions options = {}) {
  detail::require_cocycle(complex, alpha);
  detail::check_support(complex, beta);
  if (beta.dim != alpha.dim) throw Error(ErrorCode::DimensionMismatch, "cocycle and cycle degrees differ");
  if (beta.dim >= 1 && !apply_boundary(complex, IntegerRing{}, beta).empty())
    throw Error(ErrorCode::NotClosed, "integer chain is not a cycle");

  WindingReport report;
  report.pairing = kronecker_pairing(alpha, beta);
  report.candidate_primes = candidate_primes(report.pairing);
  IntCochain current = alpha;
  Integer remaining = report.pairing;
  for (std::uint64_t q : report.candidate_primes) {
    DivisionTraceEntry entry{q, 0, options.force_snf ? DivisionRoute::IntegerSnf : DivisionRoute::ModPSolve};
    std::size_t bound = 0;
    for (Integer t = abs(remaining); t % q == 0; t /= q) ++bound;
    while (class_vanishes_mod(complex, current, Prime(q))) {
      if (entry.times_divided == bound)
        throw Error(ErrorCode::ValidationFailed, "division loop exceeded log_q |pairing|");
      Division d = divide_step(complex, current, Prime(q), options);
      if (d.route == DivisionRoute::IntegerSnf) entry.route = DivisionRoute::IntegerSnf;
      current = std::move(d.gamma);
      ++entry.times_divided;
      report.winding_number *= q;
      remaining /= q;
      if (kronecker_pairing(current, beta) != remaining)
        throw Error(ErrorCode::ValidationFailed, "pairing did not divide exactly");
    }
    report.division_trace.push_back(entry);
  }
  report.reduced_cocycle = std::move(current);
  return report;
}

/// Whether c is an integer coboundary, decided by an integer solve.
inline bool is_integer_coboundary(const FilteredComplex& complex, const IntCochain& c,
                                  std::size_t cap = WindingOptions{}.snf_cap) {
  if (c.empty()) return true;
  if (c.dim == 0) return false;
  if (complex.size(c.dim - 1) + complex.size(c.dim) > cap)
    throw Error(ErrorCode::ComplexTooLargeForSnf, "coboundary test exceeds the SNF cap");
  auto delta = coboundary_matrix(complex, c.dim - 1, IntegerRing{});
  return SmithForm(delta).solve(to_dense(c, delta.rows)).has_value();
}

}  // namespace circlift
