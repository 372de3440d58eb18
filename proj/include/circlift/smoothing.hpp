#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "circlift/chain.hpp"
#include "circlift/complex.hpp"
#include "circlift/error.hpp"

namespace circlift {

struct SmoothedCocycle {
  RealCochain alpha_tilde;  // iota(alpha) + delta_0 f
  RealCochain potential;    // f, indexed by vertex position
  double residual_norm = 0.0;           // ||delta_0^* alpha_tilde||
  double relative_residual = 0.0;       // divided by ||delta_0^* iota(alpha)||
};

/// Vertex id -> angle as a fraction of a full turn, in [0, 1).
struct CircularCoords {
  std::map<Vertex, double> theta;
};

struct SmoothingOptions {
  double tolerance = 1e-9;
  /// Below this many unknowns the Laplacian is factored densely.
  std::size_t dense_limit = 500;
};

namespace detail {

inline double frac(double x) { return x - std::floor(x); }
inline double circular_distance(double x) {
  double f = frac(x);
  return std::min(f, 1.0 - f);
}

// Union-find over vertex positions following the edges.
inline std::vector<Index> component_roots(const FilteredComplex& complex) {
  std::vector<Index> parent(complex.size(0));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Index e = 0; e < complex.size(1); ++e) {
    Index a = find(complex.face(1, e, 1)), b = find(complex.face(1, e, 0));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  for (Index v = 0; v < parent.size(); ++v) parent[v] = find(v);
  return parent;
}

// delta_0^* c: (delta_0^* c)(v) = sum of +c(e) over edges ending at v, -c(e)
// over edges starting at v.
inline std::vector<double> codifferential(const FilteredComplex& complex, const RealCochain& c) {
  std::vector<double> out(complex.size(0), 0.0);
  for (const auto& [e, v] : c.entries) {
    out[complex.face(1, e, 0)] += v;
    out[complex.face(1, e, 1)] -= v;
  }
  return out;
}

}  // namespace detail

/// Least-squares smoothing: the real representative of [alpha] with minimal
/// norm, found from the graph Laplacian system L f = -delta_0^* alpha with one
/// vertex per component anchored at zero.
inline SmoothedCocycle harmonic_smooth(const FilteredComplex& complex, const IntCochain& alpha,
                                       SmoothingOptions options = {}) {
  if (alpha.dim != 1) throw Error(ErrorCode::DimensionMismatch, "smoothing needs a 1-cocycle");
  detail::check_support(complex, alpha);
  if (!apply_coboundary(complex, IntegerRing{}, alpha).empty())
    throw Error(ErrorCode::NotACocycle, "integer cochain is not a cocycle");

  const std::size_t n = complex.size(0);
  const RealCochain real_alpha = to_real(alpha);
  const auto roots = detail::component_roots(complex);
  std::vector<std::ptrdiff_t> unknown(n, -1);
  std::ptrdiff_t count = 0;
  for (Index v = 0; v < n; ++v)
    if (roots[v] != v) unknown[v] = count++;

  auto rhs_full = detail::codifferential(complex, real_alpha);
  Eigen::VectorXd rhs(count);
  for (Index v = 0; v < n; ++v)
    if (unknown[v] >= 0) rhs[unknown[v]] = -rhs_full[v];

  std::vector<Eigen::Triplet<double>> triplets;
  for (Index e = 0; e < complex.size(1); ++e) {
    std::ptrdiff_t a = unknown[complex.face(1, e, 1)], b = unknown[complex.face(1, e, 0)];
    if (a >= 0) triplets.emplace_back(a, a, 1.0);
    if (b >= 0) triplets.emplace_back(b, b, 1.0);
    if (a >= 0 && b >= 0) {
      triplets.emplace_back(a, b, -1.0);
      triplets.emplace_back(b, a, -1.0);
    }
  }
  Eigen::SparseMatrix<double> laplacian(count, count);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::VectorXd solution = Eigen::VectorXd::Zero(count);
  if (count > 0) {
    if (static_cast<std::size_t>(count) < options.dense_limit) {
      Eigen::MatrixXd dense(laplacian);
      Eigen::LLT<Eigen::MatrixXd> llt(dense);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::SolverDiverged, "Laplacian factorization failed");
      solution = llt.solve(rhs);
    } else {
      Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                               Eigen::DiagonalPreconditioner<double>>
          cg;
      cg.setTolerance(options.tolerance * 1e-3);
      cg.setMaxIterations(static_cast<Eigen::Index>(10 * count + 100));
      cg.compute(laplacian);
      solution = cg.solve(rhs);
      if (cg.info() != Eigen::Success) throw Error(ErrorCode::SolverDiverged, "conjugate gradient did not converge");
    }
  }

  SmoothedCocycle out;
  out.potential = RealCochain(0);
  for (Index v = 0; v < n; ++v)
    if (unknown[v] >= 0) out.potential.set(v, solution[unknown[v]]);
  out.alpha_tilde = real_alpha;
  for (Index e = 0; e < complex.size(1); ++e) {
    double df = out.potential.at(complex.face(1, e, 0)) - out.potential.at(complex.face(1, e, 1));
    if (df != 0.0) detail::accumulate(RealRing{}, out.alpha_tilde, e, df);
  }

  auto residual = detail::codifferential(complex, out.alpha_tilde);
  double rnorm = 0.0, bnorm = 0.0;
  for (double r : residual) rnorm += r * r;
  for (double b : rhs_full) bnorm += b * b;
  out.residual_norm = std::sqrt(rnorm);
  out.relative_residual = bnorm > 0.0 ? out.residual_norm / std::sqrt(bnorm) : out.residual_norm;
  if (out.relative_residual > options.tolerance)
    throw Error(ErrorCode::SolverDiverged, "normal-equation residual above tolerance");
  return out;
}

/// Every vertex to 0; the winding data stays on the edges.
inline CircularCoords naive_circular_map(const FilteredComplex& complex, const IntCochain& /*alpha*/) {
  CircularCoords coords;
  for (Index v = 0; v < complex.size(0); ++v) coords.theta[complex.vertices(0, v)[0]] = 0.0;
  return coords;
}

/// Propagates theta(b) = theta(a) + alpha_tilde(ab) mod 1 along a BFS tree
/// from each component's base vertex, then checks every edge.
inline CircularCoords circular_map(const SmoothedCocycle& s, const FilteredComplex& complex,
                                   std::optional<Vertex> base_vertex = std::nullopt, double tolerance = 1e-6) {
  const std::size_t n = complex.size(0);
  std::vector<std::vector<std::pair<Index, Index>>> adjacent(n);  // (neighbour, edge)
  for (Index e = 0; e < complex.size(1); ++e) {
    Index a = complex.face(1, e, 1), b = complex.face(1, e, 0);
    adjacent[a].emplace_back(b, e);
    adjacent[b].emplace_back(a, e);
  }
  std::vector<double> theta(n, 0.0);
  std::vector<bool> seen(n, false);
  auto bfs = [&](Index start) {
    std::queue<Index> queue;
    queue.push(start);
    seen[start] = true;
    while (!queue.empty()) {
      Index a = queue.front();
      queue.pop();
      for (auto [b, e] : adjacent[a]) {
        if (seen[b]) continue;
        double step = s.alpha_tilde.at(e);
        // Edge e runs from its lower vertex (face 1) to its upper (face 0).
        theta[b] = detail::frac(theta[a] + (complex.face(1, e, 0) == b ? step : -step));
        seen[b] = true;
        queue.push(b);
      }
    }
  };
  if (base_vertex) {
    Index start = 0;
    bool found = false;
    for (Index v = 0; v < n && !found; ++v)
      if (complex.vertices(0, v)[0] == *base_vertex) start = v, found = true;
    if (!found) throw Error(ErrorCode::VertexSetMismatch, "base vertex not in complex");
    bfs(start);
  }
  for (Index v = 0; v < n; ++v)
    if (!seen[v]) bfs(v);

  for (Index e = 0; e < complex.size(1); ++e) {
    double d = theta[complex.face(1, e, 0)] - theta[complex.face(1, e, 1)] - s.alpha_tilde.at(e);
    if (detail::circular_distance(d) > tolerance)
      throw Error(ErrorCode::InconsistentCocycle, "edge " + std::to_string(e) + " violates the circular map");
  }
  CircularCoords coords;
  for (Index v = 0; v < n; ++v) coords.theta[complex.vertices(0, v)[0]] = theta[v];
  return coords;
}

/// 1 - 2 * mean circular distance after the best rotation and reflection.
/// The mean distance is piecewise linear in the rotation with kinks where
/// some difference is 0 or 1/2 mod 1, so those candidates are exhaustive.
inline double circular_correlation(const CircularCoords& computed, const std::map<Vertex, double>& truth) {
  if (computed.theta.size() != truth.size())
    throw Error(ErrorCode::VertexSetMismatch, "vertex sets differ in size");
  std::vector<double> c, t;
  for (const auto& [v, x] : computed.theta) {
    auto it = truth.find(v);
    if (it == truth.end()) throw Error(ErrorCode::VertexSetMismatch, "vertex " + std::to_string(v) + " lacks truth");
    c.push_back(x);
    t.push_back(it->second);
  }
  if (c.empty()) return 1.0;
  double best = 0.0;
  for (double orientation : {1.0, -1.0}) {
    std::vector<double> diff(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) diff[i] = detail::frac(c[i] - orientation * t[i]);
    for (std::size_t k = 0; k < diff.size(); ++k)
      for (double shift : {0.0, 0.5}) {
        double phi = diff[k] + shift, total = 0.0;
        for (double d : diff) total += detail::circular_distance(d - phi);
        best = std::max(best, 1.0 - 2.0 * total / static_cast<double>(diff.size()));
      }
  }
  return best;
}

}  // namespace circlift
