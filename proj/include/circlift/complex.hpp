#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circlift/error.hpp"

namespace circlift {

using Vertex = std::uint32_t;
/// Position of a simplex within its dimension (dense, filtration order).
using Index = std::uint32_t;

/// A simplex with strictly ascending vertex ids. The i-th face omits the i-th
/// vertex and carries the sign (-1)^i.
class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error(ErrorCode::InvalidSimplex, "simplex without vertices");
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
      throw Error(ErrorCode::InvalidSimplex, "repeated vertex in simplex");
  }

  int dim() const { return static_cast<int>(vertices_.size()) - 1; }
  std::span<const Vertex> vertices() const { return vertices_; }
  Vertex operator[](std::size_t i) const { return vertices_[i]; }

  Simplex face(std::size_t omit) const {
    Simplex f;
    f.vertices_.reserve(vertices_.size() - 1);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (i != omit) f.vertices_.push_back(vertices_[i]);
    return f;
  }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex& a, const Simplex& b) { return a.vertices_ <=> b.vertices_; }

 private:
  std::vector<Vertex> vertices_;
};

/// A simplex with its filtration value, used as construction input.
struct FilteredSimplex {
  Simplex simplex;
  double filtration = 0.0;
};

/// Finite filtered simplicial complex. Within every dimension simplices are
/// sorted by (filtration, lexicographic vertices) and indexed densely, so each
/// sublevel complex is a prefix of every dimension.
class FilteredComplex {
 public:
  FilteredComplex() = default;

  /// Builds a complex from simplices, adding every missing face. A missing
  /// face gets the smallest filtration value among the simplices containing it.
  static FilteredComplex from_simplices(std::vector<FilteredSimplex> simplices, int max_dim = -1);

  std::size_t vertex_count() const { return size(0); }
  /// Declared top dimension (there may be no simplices of this dimension).
  int max_dim() const { return static_cast<int>(verts_.size()) - 1; }
  std::size_t size(int dim) const {
    if (dim < 0 || dim > max_dim()) return 0;
    return filt_[dim].size();
  }
  std::size_t total_size() const {
    std::size_t n = 0;
    for (int d = 0; d <= max_dim(); ++d) n += size(d);
    return n;
  }

  std::span<const Vertex> vertices(int dim, Index i) const {
    check_dim(dim);
    return std::span<const Vertex>(verts_[dim].data() + static_cast<std::size_t>(i) * (dim + 1), dim + 1);
  }
  Simplex simplex(int dim, Index i) const {
    auto v = vertices(dim, i);
    return Simplex(std::vector<Vertex>(v.begin(), v.end()));
  }
  double filtration(int dim, Index i) const { return filt_[dim][i]; }
  std::span<const double> filtrations(int dim) const { return filt_[dim]; }

  /// Index of the k-th face (sign (-1)^k) of simplex i of dimension dim >= 1.
  Index face(int dim, Index i, int k) const {
    return faces_[dim][static_cast<std::size_t>(i) * (dim + 1) + k];
  }

  struct Coface {
    Index index;   // (dim+1)-simplex
    int position;  // this simplex is its position-th face
  };
  std::span<const Coface> cofaces(int dim, Index i) const {
    if (dim >= max_dim()) return {};
    const auto& off = coface_offsets_[dim];
    return std::span<const Coface>(cofaces_[dim].data() + off[i], off[i + 1] - off[i]);
  }

  std::optional<Index> find(const Simplex& s) const;
  std::optional<Index> find(std::span<const Vertex> vertices) const;

  /// Number of simplices of a dimension with filtration value <= scale.
  std::size_t sublevel_size(int dim, double scale) const {
    auto f = filtrations(dim);
    return static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), scale) - f.begin());
  }
  /// The subcomplex of simplices with filtration <= scale. Indices are kept.
  FilteredComplex sublevel(double scale) const;

  double max_filtration() const {
    double m = 0.0;
    for (int d = 0; d <= max_dim(); ++d)
      if (!filt_[d].empty()) m = std::max(m, filt_[d].back());
    return m;
  }

 private:
  void check_dim(int dim) const {
    if (dim < 0 || dim > max_dim())
      throw Error(ErrorCode::DimensionOutOfRange, "dimension " + std::to_string(dim) + " out of range");
  }
  std::uint64_t key(std::span<const Vertex> v) const {
    std::uint64_t k = 0;
    for (Vertex x : v) k = k * key_base_ + x;
    return k;
  }
  void build_indices();

  std::vector<std::vector<Vertex>> verts_;
  std::vector<std::vector<double>> filt_;
  std::vector<std::vector<Index>> faces_;
  std::vector<std::vector<std::size_t>> coface_offsets_;
  std::vector<std::vector<Coface>> cofaces_;
  std::vector<std::unordered_map<std::uint64_t, Index>> lookup_;
  std::uint64_t key_base_ = 1;
};

inline std::optional<Index> FilteredComplex::find(std::span<const Vertex> v) const {
  int dim = static_cast<int>(v.size()) - 1;
  if (dim < 0 || dim > max_dim()) return std::nullopt;
  for (Vertex x : v)
    if (x >= key_base_) return std::nullopt;
  auto it = lookup_[dim].find(key(v));
  if (it == lookup_[dim].end()) return std::nullopt;
  return it->second;
}

inline std::optional<Index> FilteredComplex::find(const Simplex& s) const { return find(s.vertices()); }

inline FilteredComplex FilteredComplex::from_simplices(std::vector<FilteredSimplex> input, int max_dim) {
  if (input.empty()) throw Error(ErrorCode::EmptyInput, "complex without simplices");
  int top = 0;
  for (const auto& s : input) top = std::max(top, s.simplex.dim());
  if (max_dim < 0) max_dim = top;
  if (top > max_dim) throw Error(ErrorCode::DimensionOutOfRange, "simplex above declared max dimension");

  std::map<Simplex, double> given;
  for (const auto& s : input) {
    auto [it, fresh] = given.emplace(s.simplex, s.filtration);
    if (!fresh) it->second = std::min(it->second, s.filtration);
  }
  // Close under faces, top dimension downwards.
  std::vector<std::vector<FilteredSimplex>> by_dim(max_dim + 1);
  for (auto& s : input) by_dim[s.simplex.dim()].push_back(std::move(s));
  for (int d = max_dim; d >= 0; --d) {
    auto& level = by_dim[d];
    std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) {
      return a.simplex < b.simplex || (a.simplex == b.simplex && a.filtration < b.filtration);
    });
    // Duplicates keep their smallest filtration value.
    level.erase(std::unique(level.begin(), level.end(),
                            [](const auto& a, const auto& b) { return a.simplex == b.simplex; }),
                level.end());
    for (const auto& s : level) {
      auto it = given.find(s.simplex);
      if (it != given.end() && s.filtration < it->second)
        throw Error(ErrorCode::InvalidSimplex, "filtration not monotone at a face of a listed simplex");
    }
    if (d == 0) break;
    std::vector<FilteredSimplex> faces;
    for (const auto& s : level)
      for (int k = 0; k <= d; ++k) faces.push_back({s.simplex.face(k), s.filtration});
    auto& below = by_dim[d - 1];
    below.insert(below.end(), std::make_move_iterator(faces.begin()), std::make_move_iterator(faces.end()));
  }

  FilteredComplex c;
  Vertex max_vertex = 0;
  for (const auto& s : by_dim[0]) max_vertex = std::max(max_vertex, s.simplex[0]);
  c.key_base_ = static_cast<std::uint64_t>(max_vertex) + 1;
  {
    double bits = (max_dim + 1) * std::log2(static_cast<double>(c.key_base_));
    if (bits > 63.0) throw Error(ErrorCode::DimensionOutOfRange, "complex too large for simplex keys");
  }
  c.verts_.resize(max_dim + 1);
  c.filt_.resize(max_dim + 1);
  for (int d = 0; d <= max_dim; ++d) {
    auto& level = by_dim[d];
    std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) {
      return a.filtration < b.filtration || (a.filtration == b.filtration && a.simplex < b.simplex);
    });
    c.verts_[d].reserve(level.size() * (d + 1));
    c.filt_[d].reserve(level.size());
    for (const auto& s : level) {
      auto v = s.simplex.vertices();
      c.verts_[d].insert(c.verts_[d].end(), v.begin(), v.end());
      c.filt_[d].push_back(s.filtration);
    }
  }
  c.build_indices();
  return c;
}

inline void FilteredComplex::build_indices() {
  const int top = max_dim();
  lookup_.assign(top + 1, {});
  faces_.assign(top + 1, {});
  cofaces_.assign(top + 1, {});
  coface_offsets_.assign(top + 1, {});
  for (int d = 0; d <= top; ++d) {
    lookup_[d].reserve(size(d));
    for (Index i = 0; i < size(d); ++i) lookup_[d].emplace(key(vertices(d, i)), i);
  }
  std::vector<Vertex> buf;
  for (int d = 1; d <= top; ++d) {
    faces_[d].resize(size(d) * (d + 1));
    for (Index i = 0; i < size(d); ++i) {
      auto v = vertices(d, i);
      for (int k = 0; k <= d; ++k) {
        buf.clear();
        for (int j = 0; j <= d; ++j)
          if (j != k) buf.push_back(v[j]);
        auto f = find(buf);
        if (!f) throw Error(ErrorCode::InvalidSimplex, "complex is not closed under faces");
        if (filt_[d - 1][*f] > filt_[d][i])
          throw Error(ErrorCode::InvalidSimplex, "filtration is not monotone on faces");
        faces_[d][static_cast<std::size_t>(i) * (d + 1) + k] = *f;
      }
    }
  }
  for (int d = 0; d < top; ++d) {
    auto& off = coface_offsets_[d];
    off.assign(size(d) + 1, 0);
    for (Index i = 0; i < size(d + 1); ++i)
      for (int k = 0; k <= d + 1; ++k) ++off[face(d + 1, i, k) + 1];
    std::partial_sum(off.begin(), off.end(), off.begin());
    cofaces_[d].resize(off.back());
    std::vector<std::size_t> fill(off.begin(), off.end() - 1);
    for (Index i = 0; i < size(d + 1); ++i)
      for (int k = 0; k <= d + 1; ++k) cofaces_[d][fill[face(d + 1, i, k)]++] = Coface{i, k};
  }
}

inline FilteredComplex FilteredComplex::sublevel(double scale) const {
  FilteredComplex c;
  c.key_base_ = key_base_;
  c.verts_.resize(verts_.size());
  c.filt_.resize(filt_.size());
  for (int d = 0; d <= max_dim(); ++d) {
    std::size_t n = sublevel_size(d, scale);
    c.verts_[d].assign(verts_[d].begin(), verts_[d].begin() + static_cast<std::ptrdiff_t>(n * (d + 1)));
    c.filt_[d].assign(filt_[d].begin(), filt_[d].begin() + static_cast<std::ptrdiff_t>(n));
  }
  c.build_indices();
  return c;
}

/// Vietoris-Rips complex under the Euclidean metric: every simplex on at most
/// max_dim+1 points with all pairwise distances <= threshold, filtered by its
/// diameter.
inline FilteredComplex build_rips(const std::vector<std::vector<double>>& points, double threshold, int max_dim) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points");
  if (threshold < 0) throw Error(ErrorCode::DimensionOutOfRange, "negative Rips threshold");
  if (max_dim < 1) throw Error(ErrorCode::DimensionOutOfRange, "Rips max_dim must be >= 1");
  const std::size_t n = points.size();
  const std::size_t dim = points[0].size();
  for (const auto& p : points)
    if (p.size() != dim) throw Error(ErrorCode::DimensionMismatch, "points of different dimension");

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        double t = points[i][k] - points[j][k];
        s += t * t;
      }
      dist[i * n + j] = dist[j * n + i] = std::sqrt(s);
    }

  // Upper neighbours only, so each clique is enumerated once in ascending order.
  std::vector<std::vector<Vertex>> upper(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist[i * n + j] <= threshold) upper[i].push_back(static_cast<Vertex>(j));

  std::vector<FilteredSimplex> out;
  std::vector<Vertex> clique;
  auto expand = [&](auto&& self, const std::vector<Vertex>& candidates, double diam) -> void {
    out.push_back({Simplex(clique), diam});
    if (static_cast<int>(clique.size()) > max_dim) return;
    for (std::size_t a = 0; a < candidates.size(); ++a) {
      Vertex v = candidates[a];
      double d = diam;
      for (Vertex u : clique) d = std::max(d, dist[static_cast<std::size_t>(u) * n + v]);
      std::vector<Vertex> next;
      for (std::size_t b = a + 1; b < candidates.size(); ++b) {
        Vertex w = candidates[b];
        if (dist[static_cast<std::size_t>(v) * n + w] <= threshold) next.push_back(w);
      }
      clique.push_back(v);
      self(self, next, d);
      clique.pop_back();
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    clique.assign(1, static_cast<Vertex>(i));
    expand(expand, upper[i], 0.0);
  }
  return FilteredComplex::from_simplices(std::move(out), max_dim);
}

/// Smallest r such that some point lies within r of every other point. Above
/// this scale the Rips complex is a cone.
inline double enclosing_radius(const std::vector<std::vector<double>>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k) {
        double t = points[i][k] - points[j][k];
        s += t * t;
      }
      m = std::max(m, std::sqrt(s));
    }
    best = std::min(best, m);
  }
  return points.empty() ? 0.0 : best;
}

}  // namespace circlift
