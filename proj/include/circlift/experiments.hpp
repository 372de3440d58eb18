#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "circlift/error.hpp"
#include "circlift/finite_field.hpp"
#include "circlift/lifting.hpp"

namespace circlift {

inline constexpr std::string_view kGeneratorName = "std::mt19937_64";
inline constexpr std::string_view kVersion = "0.1.0";

/// Deterministic draws from a 64-bit engine. Only the raw engine output is
/// used, so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n), by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (spare_) {
      double g = *spare_;
      spare_.reset();
      return g;
    }
    double u1;
    do u1 = unit();
    while (u1 <= 0.0);
    double u2 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Worker count: hardware concurrency, capped by CIRCLIFT_THREADS if set.
inline unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CIRCLIFT_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

struct SparsityRow {
  std::uint64_t p = 0;
  std::uint64_t samples = 0;
  std::uint64_t non_liftable = 0;
  double proportion = 0.0;
};

/// Whether some r in F_p^* brings every coordinate of r v within
/// floor((p-1)/k) of zero.
inline bool line_liftable(const std::vector<std::uint64_t>& v, OddPrime p, std::uint64_t k) {
  const std::vector<std::uint64_t> bounds(v.size(), range_bound(p, k));
  return scaling_search(v, bounds, p).has_value();
}

/// Samples uniform nonzero vectors in F_p^n for every odd prime in
/// [prime_min, prime_max] and counts the lines {r v} missing the box
/// [-floor((p-1)/k), floor((p-1)/k)]^n. Each prime draws from its own stream
/// seeded by (seed, p).
inline std::vector<SparsityRow> sparsity_sweep(std::uint64_t n, std::uint64_t prime_min, std::uint64_t prime_max,
                                               std::uint64_t samples_per_prime, std::uint64_t k, std::uint64_t seed,
                                               unsigned threads = 0) {
  if (n < 1) throw Error(ErrorCode::DimensionOutOfRange, "sweep needs n >= 1");
  if (k < 2) throw Error(ErrorCode::DimensionOutOfRange, "sweep needs k >= 2");
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = std::max<std::uint64_t>(prime_min, 3); p <= prime_max; ++p)
    if (is_prime(p)) primes.push_back(p);
  std::vector<SparsityRow> rows(primes.size());

  auto run_row = [&](std::size_t i) {
    const OddPrime p(primes[i]);
    Rng rng(seed, p.value());
    std::vector<std::uint64_t> v(n);
    SparsityRow row{p.value(), samples_per_prime, 0, 0.0};
    for (std::uint64_t s = 0; s < samples_per_prime; ++s) {
      bool nonzero = false;
      while (!nonzero) {
        for (auto& x : v) {
          x = rng.below(p.value());
          nonzero = nonzero || x != 0;
        }
      }
      if (!line_liftable(v, p, k)) ++row.non_liftable;
    }
    row.proportion = samples_per_prime ? static_cast<double>(row.non_liftable) / static_cast<double>(samples_per_prime)
                                       : 0.0;
    rows[i] = row;
  };

  const unsigned workers = std::min<std::size_t>(threads ? threads : worker_count(), std::max<std::size_t>(1, primes.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < primes.size(); i = next++) run_row(i);
    });
  for (auto& t : pool) t.join();
  return rows;
}

/// Least-squares slope of proportion against p.
inline double trend_slope(const std::vector<SparsityRow>& rows) {
  if (rows.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (const auto& r : rows) {
    mx += static_cast<double>(r.p);
    my += r.proportion;
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : rows) {
    double dx = static_cast<double>(r.p) - mx;
    sxy += dx * (r.proportion - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

using PointCloud = std::vector<std::vector<double>>;

struct CircleSample {
  PointCloud points;
  std::vector<double> angles;  // theta_i / 2 pi, in [0, 1)
};

/// count evenly spaced points of the unit circle, mapped by a random isometry
/// into R^ambient_dim, plus isotropic Gaussian noise.
inline CircleSample sample_circle(std::size_t count, double noise_sd, std::size_t ambient_dim, std::uint64_t seed) {
  if (ambient_dim < 2) throw Error(ErrorCode::DimensionOutOfRange, "circle needs ambient_dim >= 2");
  Rng rng(seed);
  // Orthonormal 2-frame by Gram-Schmidt on two Gaussian vectors.
  std::vector<double> u(ambient_dim), w(ambient_dim);
  auto normalize = [](std::vector<double>& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    s = std::sqrt(s);
    for (double& c : x) c /= s;
  };
  for (double& c : u) c = rng.gaussian();
  normalize(u);
  double dot = 0.0;
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    w[i] = rng.gaussian();
    dot += w[i] * u[i];
  }
  for (std::size_t i = 0; i < ambient_dim; ++i) w[i] -= dot * u[i];
  normalize(w);

  CircleSample out;
  out.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(count);
    double c = std::cos(2.0 * std::numbers::pi * t), s = std::sin(2.0 * std::numbers::pi * t);
    std::vector<double> x(ambient_dim);
    for (std::size_t d = 0; d < ambient_dim; ++d) x[d] = c * u[d] + s * w[d];
    if (noise_sd > 0.0)
      for (double& xd : x) xd += noise_sd * rng.gaussian();
    out.points.push_back(std::move(x));
    out.angles.push_back(t);
  }
  return out;
}

/// Trefoil (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t) at count uniform t.
inline PointCloud sample_trefoil(std::size_t count, double noise_sd, std::uint64_t seed) {
  if (count < 3) throw Error(ErrorCode::EmptyInput, "trefoil needs at least 3 points");
  Rng rng(seed);
  PointCloud out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
    std::vector<double> x{std::sin(t) + 2.0 * std::sin(2.0 * t), std::cos(t) - 2.0 * std::cos(2.0 * t),
                          -std::sin(3.0 * t)};
    if (noise_sd > 0.0)
      for (double& xd : x) xd += noise_sd * rng.gaussian();
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace circlift
