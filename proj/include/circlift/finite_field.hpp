#pragma once

#include <cstdint>
#include <string>

#include "circlift/error.hpp"
#include "circlift/integer.hpp"

namespace circlift {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Smallest prime strictly greater than n.
inline std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

/// A prime modulus, 2 allowed. Used where the winding analysis reduces modulo
/// the prime factors of a pairing value.
class Prime {
 public:
  explicit Prime(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  }
  std::uint64_t value() const noexcept { return p_; }
  friend bool operator==(Prime, Prime) = default;

 private:
  std::uint64_t p_;
};

/// An odd prime p >= 3. Every lifting statement assumes an odd characteristic.
class OddPrime {
 public:
  explicit OddPrime(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (p == 2) throw Error(ErrorCode::NotOddPrime, "p = 2 is not an odd prime");
  }
  std::uint64_t value() const noexcept { return p_; }
  Prime as_prime() const { return Prime(p_); }
  operator Prime() const { return Prime(p_); }  // NOLINT(google-explicit-constructor)
  friend bool operator==(OddPrime, OddPrime) = default;

 private:
  std::uint64_t p_;
};

/// Canonical representative of an element of F_p, value in [0, p).
struct FpElement {
  std::uint64_t value = 0;
  std::uint64_t modulus = 3;

  FpElement() = default;
  FpElement(std::uint64_t v, Prime p) : value(v % p.value()), modulus(p.value()) {}

  friend bool operator==(const FpElement&, const FpElement&) = default;
};

// Primitive modular helpers. The moduli in this library are small enough that
// products fit in 128 bits.
inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}
inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline std::uint64_t mod_neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }

/// Multiplicative inverse by the extended Euclidean algorithm.
inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw Error(ErrorCode::ZeroInverse, "0 has no inverse modulo " + std::to_string(p));
  std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    std::int64_t t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t0 < 0) t0 += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t0);
}

/// |x|_p = min{i(x), p - i(x)}.
inline std::uint64_t abs_p(std::uint64_t x, std::uint64_t p) {
  x %= p;
  return x <= p - x ? x : p - x;
}
inline std::uint64_t abs_p(const FpElement& x) { return abs_p(x.value, x.modulus); }

inline FpElement inverse(const FpElement& x) { return FpElement(mod_inverse(x.value, x.modulus), Prime(x.modulus)); }

/// Symmetric representative: x if x <= (p-1)/2, else x - p. The tie at
/// (p-1)/2 stays positive.
inline std::int64_t lift_coeff(std::uint64_t x, std::uint64_t p) {
  x %= p;
  return x <= (p - 1) / 2 ? static_cast<std::int64_t>(x)
                          : static_cast<std::int64_t>(x) - static_cast<std::int64_t>(p);
}
inline std::int64_t lift_coeff(const FpElement& x) { return lift_coeff(x.value, x.modulus); }

inline FpElement reduce_coeff(const Integer& z, Prime p) { return FpElement(mod_u64(z, p.value()), p); }
inline FpElement reduce_coeff(std::int64_t z, Prime p) {
  std::int64_t m = static_cast<std::int64_t>(p.value());
  std::int64_t r = z % m;
  if (r < 0) r += m;
  return FpElement(static_cast<std::uint64_t>(r), p);
}

/// Half-width floor((p-1)/k) of the coefficient range certifying a lift when
/// every relation has at most k terms.
inline std::uint64_t range_bound(OddPrime p, std::uint64_t k) {
  if (k == 0) throw Error(ErrorCode::DimensionOutOfRange, "range_bound requires k >= 1");
  return (p.value() - 1) / k;
}

}  // namespace circlift
