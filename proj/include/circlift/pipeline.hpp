#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "circlift/complex.hpp"
#include "circlift/io.hpp"
#include "circlift/lifting.hpp"
#include "circlift/pca.hpp"
#include "circlift/persistence.hpp"
#include "circlift/smoothing.hpp"
#include "circlift/winding.hpp"

namespace circlift {

struct PipelineConfig {
  std::string input;
  std::uint64_t prime = 47;
  /// Top simplex dimension of the Rips complex.
  int max_dim = 2;
  /// Rips threshold; empty means "auto" (see rips_with_diagram). Either way
  /// the working complex is the sublevel at the class's representative scale.
  std::optional<double> threshold;
  ClassSelection selection;
  ScalePolicy scale;
  std::size_t snf_cap = 1500;
  std::uint64_t seed = 0;
  std::string out = ".";
  bool reduce_winding = true;

  /// Checks everything that can be checked before computing.
  void validate() const {
    OddPrime{prime};
    if (max_dim < 2) throw Error(ErrorCode::DimensionOutOfRange, "max_dim must be at least 2 for degree-1 classes");
    if (threshold && !(*threshold >= 0.0)) throw Error(ErrorCode::DimensionOutOfRange, "negative Rips threshold");
    if (scale.kind == ScalePolicy::Kind::Fraction && !(scale.value >= 0.0 && scale.value < 1.0))
      throw Error(ErrorCode::DimensionOutOfRange, "scale fraction must lie in [0, 1)");
  }
};

/// Degree-1 class with both representatives lifted to Z on the working complex.
struct LiftedClass {
  Diagram diagram;
  PersistencePair pair;
  FilteredComplex working;
  CocycleLift cocycle;
  CycleLift cycle;
  Integer pairing;
};

struct CoordinateResult {
  WindingReport winding;
  SmoothedCocycle smoothed;
  CircularCoords coords;
};

struct PipelineResult {
  LiftedClass lifted;
  CoordinateResult coords;
};

/// Rips complex for the configured threshold. For "auto" the threshold grows
/// geometrically from a quarter of the enclosing radius until no degree-1
/// class is essential, so every degree-1 death of the full filtration is
/// already present; the diagram of the last pass is returned with it.
inline std::pair<FilteredComplex, Diagram> rips_with_diagram(const PointCloud& points, const PipelineConfig& config) {
  config.validate();
  const OddPrime p(config.prime);
  if (config.threshold) {
    auto complex = build_rips(points, *config.threshold, config.max_dim);
    auto diagram = persistent_cohomology(complex, p, 1, config.scale);
    return {std::move(complex), std::move(diagram)};
  }
  const double radius = enclosing_radius(points);
  for (double t = radius / 4;; t *= 1.25) {
    const bool last = t >= radius;
    auto complex = build_rips(points, last ? radius : t, config.max_dim);
    auto diagram = persistent_cohomology(complex, p, 1, config.scale);
    bool open = false;
    for (const auto& pair : diagram.in_dim(1)) open = open || pair.essential();
    if (!open || last) return {std::move(complex), std::move(diagram)};
  }
}

inline FilteredComplex rips_for(const PointCloud& points, const PipelineConfig& config) {
  return rips_with_diagram(points, config).first;
}

/// Persistence, class selection, dual cycle, and both lifts. Candidate cycles
/// whose integer pairing with the cocycle vanishes are skipped.
inline LiftedClass lift_class(const FilteredComplex& complex, const PipelineConfig& config,
                              std::optional<Diagram> diagram = std::nullopt) {
  config.validate();
  const OddPrime p(config.prime);
  LiftedClass out;
  out.diagram = diagram ? std::move(*diagram) : persistent_cohomology(complex, p, 1, config.scale);
  try {
    out.pair = select_class(out.diagram, 1, config.selection);
  } catch (const Error& e) {
    throw Error(ErrorCode::EmptyDiagram, std::string("no significant H1 class: ") + e.what());
  }
  out.working = complex.sublevel(out.pair.scale);
  const LiftOptions options{config.snf_cap};
  out.cocycle = lift_closed(out.working, out.pair.cocycle, p, options);

  PrimeField field(p);
  bool nonzero_mod_p = false;
  for (auto& candidate : cycle_candidates(out.working, 1, p.value())) {
    if (pairing(field, out.pair.cocycle, candidate) == 0) continue;
    nonzero_mod_p = true;
    auto cycle = lift_closed(out.working, candidate, p, options);
    Integer value = kronecker_pairing(out.cocycle.working_lift, cycle.working_lift);
    if (value.is_zero()) continue;
    out.pair.cycle = std::move(candidate);
    out.cycle = std::move(cycle);
    out.pairing = value;
    return out;
  }
  if (!nonzero_mod_p) throw Error(ErrorCode::NoDualCycle, "no cycle pairs nonzero with the representative cocycle");
  throw Error(ErrorCode::ZeroPairing, "every candidate cycle pairs to zero over Z");
}

/// Winding reduction (optional), smoothing, and the circular map.
inline CoordinateResult coordinates(const FilteredComplex& working, const IntCochain& alpha, const IntChain& beta,
                                    const PipelineConfig& config) {
  CoordinateResult out;
  if (config.reduce_winding) {
    WindingOptions options;
    options.snf_cap = config.snf_cap;
    out.winding = reduce_winding(working, alpha, beta, options);
  } else {
    out.winding.pairing = kronecker_pairing(alpha, beta);
    out.winding.reduced_cocycle = alpha;
  }
  out.smoothed = harmonic_smooth(working, out.winding.reduced_cocycle);
  out.coords = circular_map(out.smoothed, working);
  return out;
}

inline PipelineResult run_pipeline(const FilteredComplex& complex, const PipelineConfig& config) {
  PipelineResult r;
  r.lifted = lift_class(complex, config);
  r.coords = coordinates(r.lifted.working, r.lifted.cocycle.working_lift, r.lifted.cycle.working_lift, config);
  return r;
}

/// Writes diagram.json, lift_report.json, winding_report.json, smoothed.json,
/// coords.csv and coords.svg. Without points the scatter places each vertex
/// at its angle on the unit circle.
inline void write_artifacts(const PipelineResult& r, const FilteredComplex& complex, const PointCloud* points,
                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
  const auto& w = r.lifted.working;
  io::write_file(path("diagram.json"), io::dump(io::diagram_to_json(complex, r.lifted.diagram)));
  io::Json lift{{"cocycle", io::lift_report_to_json(w, r.lifted.cocycle)},
                {"cycle", io::lift_report_to_json(w, r.lifted.cycle)},
                {"scale", r.lifted.pair.scale},
                {"birth", r.lifted.pair.birth},
                {"death", r.lifted.pair.essential() ? io::Json(nullptr) : io::Json(r.lifted.pair.death)}};
  io::write_file(path("lift_report.json"), io::dump(lift));
  io::write_file(path("winding_report.json"), io::dump(io::winding_report_to_json(w, r.coords.winding)));
  io::write_file(path("smoothed.json"), io::dump(io::smoothed_to_json(w, r.coords.smoothed)));
  io::write_file(path("coords.csv"), io::coords_csv(r.coords.coords));

  std::vector<std::vector<double>> xy;
  std::vector<double> hue;
  if (points) {
    xy = pca_project(*points, 2);
    for (std::size_t i = 0; i < xy.size(); ++i) hue.push_back(r.coords.coords.theta.at(static_cast<Vertex>(i)));
  } else {
    for (const auto& [v, t] : r.coords.coords.theta) {
      xy.push_back({std::cos(2 * std::numbers::pi * t), std::sin(2 * std::numbers::pi * t)});
      hue.push_back(t);
    }
  }
  io::write_file(path("coords.svg"), io::scatter_svg(xy, hue, "circular coordinates"));
}

}  // namespace circlift
