// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace circlift;
using namespace circlift::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Collects failed checks with a short note each.
struct Checker {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    if (!cond && out.ok) out.detail = what;
    out.ok = out.ok && cond;
  }
};

bool congruent(const IntCochain& a, const FpCochain& b, std::uint64_t p) {
  for (const auto& [i, v] : a.entries)
    if (reduce_coeff(v, Prime(p)).value != b.at(i)) return false;
  for (const auto& [i, v] : b.entries)
    if (reduce_coeff(a.at(i), Prime(p)).value != v) return false;
  return true;
}

bool congruent(const IntChain& a, const FpChain& b, std::uint64_t p) {
  for (const auto& [i, v] : a.entries)
    if (reduce_coeff(v, Prime(p)).value != b.at(i)) return false;
  for (const auto& [i, v] : b.entries)
    if (reduce_coeff(a.at(i), Prime(p)).value != v) return false;
  return true;
}

// Integer cocycles spanning H^1 of a complex whose simplices all sit at 0.
std::vector<IntCochain> h1_generators(const FilteredComplex& c) {
  std::vector<IntCochain> out;
  auto diagram = persistent_cohomology(c, OddPrime(47), 1);
  for (const auto& pr : diagram.in_dim(1))
    out.push_back(lift_closed(c, pr.cocycle, OddPrime(47)).working_lift);
  return out;
}

IntCochain random_cocycle(Rng& rng, const FilteredComplex& c, const std::vector<IntCochain>& gens, std::int64_t bound) {
  auto a = apply_coboundary(c, IntegerRing{}, random_int_cochain(rng, c, 0, bound));
  for (const auto& g : gens) a = add(IntegerRing{}, a, scale(g, Integer(rng.between(-bound, bound))));
  return a;
}

double norm2(const RealCochain& c) {
  double s = 0;
  for (const auto& [i, v] : c.entries) s += v * v;
  return s;
}

Outcome fig1_triangle() {
  Checker k;
  auto t = triangle();
  const Index bc = idx(t, {1, 2}), ac = idx(t, {0, 2}), ab = idx(t, {0, 1});
  auto input = fig1_cocycle(t);
  auto naive = naive_lift(input, OddPrime(7));
  k.expect(naive.at(bc) == 3 && naive.at(ac) == -3 && naive.at(ab) == 1, "naive lift is not (3,-3,1)");
  auto d = apply_coboundary(t, IntegerRing{}, naive);
  k.expect(d.support_size() == 1 && d.at(0) == 7, "coboundary of the naive lift is not 7 on abc");
  auto r = lift_closed(t, input, OddPrime(7));
  k.expect(r.r.value == 2, "r != 2");
  k.expect(r.working_lift.at(bc) == -1 && r.working_lift.at(ac) == 1 && r.working_lift.at(ab) == 2,
           "working lift is not (-1,1,2)");
  k.expect(apply_coboundary(t, IntegerRing{}, r.working_lift).empty(), "working lift is not a cocycle");
  k.expect(r.exact_preimage.at(bc) == -4 && r.exact_preimage.at(ac) == 4 && r.exact_preimage.at(ab) == 8,
           "exact preimage is not (-4,4,8)");
  k.expect(congruent(r.exact_preimage, input, 7), "exact preimage does not reduce to (3,4,1)");
  k.expect(apply_coboundary(t, IntegerRing{}, r.exact_preimage).empty(), "exact preimage is not a cocycle");
  k.out.detail = k.out.ok ? "r=2, working (-1,1,2), preimage (-4,4,8)" : k.out.detail;
  return k.out;
}

Outcome ex47_square() {
  Checker k;
  auto s = square_with_diagonals();
  auto z = ex47_cycle(s);
  auto b = apply_boundary(s, IntegerRing{}, naive_lift(z, OddPrime(7)));
  k.expect(b.at(idx(s, {0})) == -7 && b.at(idx(s, {1})) == 0 && b.at(idx(s, {2})) == 0 && b.at(idx(s, {3})) == 7,
           "naive boundary is not -7a + 0b + 0c + 7d");
  auto system = index_system(s, z, OddPrime(7));
  k.expect(!scaling_search(z, system.bounds(z, OddPrime(7)), OddPrime(7)).has_value(), "scaling search found a scalar");
  auto r = lift_closed(s, z, OddPrime(7));
  k.expect(r.certificate == Certificate::VerifiedOnly, "certificate is not VerifiedOnly");
  k.expect(r.r.value == 2, "r != 2");
  k.expect(apply_boundary(s, IntegerRing{}, r.exact_preimage).empty(), "exact preimage is not a cycle");
  k.expect(congruent(r.exact_preimage, z, 7), "exact preimage does not reduce to the input");
  k.out.detail = k.out.ok ? "scaling none, verify-only r=2" : k.out.detail;
  return k.out;
}

Outcome pigeonhole() {
  Checker k;
  std::ostringstream note;
  const std::uint64_t kk = 3;
  for (std::uint64_t n : {1u, 2u, 3u}) {
    const auto bound = static_cast<std::uint64_t>(pigeonhole_bound(n, kk));  // k^n + 1
    std::uint64_t p = bound;
    while (!is_prime(p)) ++p;  // smallest prime with p - 1 > k^n
    OddPrime op(p);
    std::vector<std::uint64_t> bounds(n, range_bound(op, kk)), v(n, 0);
    std::uint64_t total = 1, ok = 0;
    for (std::uint64_t i = 0; i < n; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
      for (std::uint64_t i = 0, c = code; i < n; ++i, c /= p) v[i] = c % p;
      if (scaling_search(v, bounds, op)) ++ok;
    }
    k.expect(ok == total, "n=" + std::to_string(n) + ", p=" + std::to_string(p) + ": " + std::to_string(total - ok) +
                              " vectors failed");
    note << "(n=" << n << ",p=" << p << "," << total << " vectors) ";
  }
  if (k.out.ok) k.out.detail = note.str();
  return k.out;
}

Outcome sparsity() {
  Checker k;
  std::ostringstream note;
  note << "slopes";
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    auto rows = sparsity_sweep(6, 13, 293, 10000, 3, seed);
    double slope = trend_slope(rows);
    k.expect(slope <= 0.0, "seed " + std::to_string(seed) + " slope " + std::to_string(slope));
    note << " " << slope;
  }
  auto spot = sparsity_sweep(6, 739, 739, 10000, 3, 1);
  k.expect(spot.size() == 1 && spot[0].non_liftable == 0, "p=739 has non-liftable lines");
  if (k.out.ok) k.out.detail = note.str() + "; p=739 proportion 0";
  return k.out;
}

Outcome winding_reduction() {
  Checker k;
  auto h = cycle_graph();
  auto g = edge_indicator(h);
  auto beta = fundamental_cycle(h);
  Rng rng(2024);
  for (int w : {1, 2, 5, 10}) {
    for (int rep = 0; rep < 20; ++rep) {
      auto alpha = add(IntegerRing{}, scale(g, Integer(w)),
                       apply_coboundary(h, IntegerRing{}, random_int_cochain(rng, h, 0, 5)));
      k.expect(abs(kronecker_pairing(alpha, beta)) == w, "pairing != w for w=" + std::to_string(w));
      auto r = reduce_winding(h, alpha, beta);
      k.expect(r.winding_number == w, "Omega != w for w=" + std::to_string(w));
      k.expect(abs(kronecker_pairing(r.reduced_cocycle, beta)) == 1, "reduced pairing is not +-1");
      for (std::uint64_t q : candidate_primes(Integer(w)))
        k.expect(!class_vanishes_mod(h, r.reduced_cocycle, Prime(q)), "reduced class vanishes mod " + std::to_string(q));
    }
  }
  if (k.out.ok) k.out.detail = "80 cocycles, w in {1,2,5,10}";
  return k.out;
}

Outcome division_oracle() {
  Checker k;
  Rng rng(77);
  std::size_t modp = 0, fallback = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto c = random_connected_complex(rng, static_cast<Vertex>(4 + rng.below(7)), 4 + rng.below(8));
    auto gens = h1_generators(c);
    const std::uint64_t q = std::vector<std::uint64_t>{2, 3, 5, 7}[rng.below(4)];
    auto gamma0 = random_cocycle(rng, c, gens, 4);
    auto alpha = add(IntegerRing{}, scale(gamma0, Integer(q)),
                     apply_coboundary(c, IntegerRing{}, random_int_cochain(rng, c, 0, 5)));
    auto d = divide_step(c, alpha, Prime(q));
    (d.route == DivisionRoute::ModPSolve ? modp : fallback) += 1;
    auto df = apply_coboundary(c, IntegerRing{}, d.potential);
    k.expect(add(IntegerRing{}, scale(d.gamma, Integer(q)), df) == alpha, "alpha != q gamma + delta f");
    auto s = divide_step_snf(c, alpha, Prime(q));
    k.expect(is_integer_coboundary(c, subtract(d.gamma, s.gamma)), "mod-p and SNF gammas differ in class");
    k.expect(is_integer_coboundary(c, subtract(d.gamma, gamma0)), "gamma differs from the planted class");
  }
  k.expect(modp > 0, "no division used the mod-p route");
  if (k.out.ok) k.out.detail = "200 complexes; mod-p route " + std::to_string(modp) + ", fallback " + std::to_string(fallback);
  return k.out;
}

Outcome smoothing() {
  Checker k;
  Rng rng(8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_connected_complex(rng, static_cast<Vertex>(5 + rng.below(10)), 4 + rng.below(10));
    auto alpha = random_cocycle(rng, c, h1_generators(c), 3);
    auto s = harmonic_smooth(c, alpha);
    worst = std::max(worst, s.relative_residual);
    k.expect(s.relative_residual <= 1e-9, "relative residual above 1e-9");
    auto rebuilt = add(RealRing{}, to_real(alpha), apply_coboundary(c, RealRing{}, s.potential));
    for (Index e = 0; e < c.size(1); ++e) k.expect(rebuilt.at(e) == s.alpha_tilde.at(e), "alpha_tilde != alpha + delta f");
    const double best = norm2(s.alpha_tilde);
    for (int j = 0; j < 100; ++j) {
      auto other = add(RealRing{}, to_real(alpha), apply_coboundary(c, RealRing{}, to_real(random_int_cochain(rng, c, 0, 3))));
      k.expect(best <= norm2(other) * (1 + 1e-12) + 1e-12, "an integer perturbation has smaller norm");
    }
  }
  if (k.out.ok) {
    std::ostringstream note;
    note << "100 complexes, worst relative residual " << worst;
    k.out.detail = note.str();
  }
  return k.out;
}

std::map<Vertex, double> truth_of(const CircleSample& s) {
  std::map<Vertex, double> t;
  for (std::size_t i = 0; i < s.angles.size(); ++i) t[static_cast<Vertex>(i)] = s.angles[i];
  return t;
}

Outcome circle_end_to_end() {
  Checker k;
  auto sample = sample_circle(60, 0.0, 300, 2024);
  auto truth = truth_of(sample);
  PipelineConfig config;
  config.prime = 47;
  auto [complex, diagram] = rips_with_diagram(sample.points, config);
  auto lifted = lift_class(complex, config, diagram);
  auto coords = coordinates(lifted.working, lifted.cocycle.working_lift, lifted.cycle.working_lift, config);
  const double base = circular_correlation(coords.coords, truth);
  k.expect(base >= 0.99, "pipeline correlation " + std::to_string(base));

  // Winding-3 representative 3g + delta h.
  Rng rng(3);
  const auto& g = coords.winding.reduced_cocycle;
  auto alpha = add(IntegerRing{}, scale(g, Integer(3)),
                   apply_coboundary(lifted.working, IntegerRing{}, random_int_cochain(rng, lifted.working, 0, 5)));
  PipelineConfig skip = config;
  skip.reduce_winding = false;
  const double skipped = circular_correlation(coordinates(lifted.working, alpha, lifted.cycle.working_lift, skip).coords, truth);
  k.expect(skipped < 0.9, "unreduced winding-3 correlation " + std::to_string(skipped));
  auto fixed = coordinates(lifted.working, alpha, lifted.cycle.working_lift, config);
  const double restored = circular_correlation(fixed.coords, truth);
  k.expect(restored >= 0.99, "reduced correlation " + std::to_string(restored));
  k.expect(fixed.winding.winding_number == 3, "winding reported as " + to_decimal(fixed.winding.winding_number));
  if (k.out.ok) {
    std::ostringstream note;
    note << "correlation " << base << "; winding 3 unreduced " << skipped << ", reduced " << restored;
    k.out.detail = note.str();
  }
  return k.out;
}

Outcome trefoil() {
  Checker k;
  auto points = sample_trefoil(200, 0.0, 2024);
  PipelineConfig config;
  auto [complex, diagram] = rips_with_diagram(points, config);
  const auto& h1 = diagram.in_dim(1);
  k.expect(!h1.empty(), "no H1 interval");
  if (h1.empty()) return k.out;
  const double second = h1.size() > 1 ? h1[1].persistence() : 0.0;
  k.expect(h1[0].persistence() >= 2.0 * second, "top H1 interval is not dominant");
  auto lifted = lift_class(complex, config, diagram);
  auto coords = coordinates(lifted.working, lifted.cocycle.working_lift, lifted.cycle.working_lift, config);
  const auto& w = coords.winding;
  for (std::uint64_t q : w.candidate_primes)
    k.expect(!class_vanishes_mod(lifted.working, w.reduced_cocycle, Prime(q)),
             "final class vanishes mod " + std::to_string(q));
  auto again = reduce_winding(lifted.working, w.reduced_cocycle, lifted.cycle.working_lift);
  k.expect(again.winding_number == 1, "final cocycle still has winding " + to_decimal(again.winding_number));
  if (k.out.ok) {
    std::ostringstream note;
    note << "interval [" << h1[0].birth << ", " << h1[0].death << "), next persistence " << second << ", pairing "
         << to_decimal(w.pairing) << ", divided by " << to_decimal(w.winding_number) << ", final Omega 1";
    k.out.detail = note.str();
  }
  return k.out;
}

Outcome norm_preservation() {
  Checker k;
  std::size_t checked = 0;
  for (std::uint64_t p = 3; p <= 101; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint64_t x = 0; x < p; ++x, ++checked) {
      std::int64_t z = lift_coeff(x, p);
      k.expect(static_cast<std::uint64_t>(z < 0 ? -z : z) == abs_p(x, p),
               "p=" + std::to_string(p) + ", x=" + std::to_string(x));
    }
  }
  if (k.out.ok) k.out.detail = std::to_string(checked) + " residues";
  return k.out;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "fig1 triangle regression", 1, fig1_triangle},
      {2, "ex47 square regression", 1, ex47_square},
      {3, "pigeonhole exhaustiveness", 120, pigeonhole},
      {4, "sparsity sweep trend", 300, sparsity},
      {5, "winding divisibility and reduction", 10, winding_reduction},
      {6, "division route oracle equivalence", 120, division_oracle},
      {7, "smoothing characterization", 60, smoothing},
      {8, "end-to-end circle", 60, circle_end_to_end},
      {9, "trefoil winding postcondition", 120, trefoil},
      {10, "norm preservation", 1, norm_preservation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_seconds) o = {false, "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds)};
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << timing << "): " << o.detail
              << std::endl;
    failures += o.ok ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
