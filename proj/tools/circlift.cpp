#include <filesystem>
#include <iostream>
#include <string>
#include <tuple>

#include <CLI11.hpp>

#include "circlift/circlift.hpp"

using namespace circlift;
namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unliftable: return 2;
    case ErrorCode::ZeroPairing: return 3;
    case ErrorCode::TorsionObstruction: return 4;
    case ErrorCode::EmptyDiagram: return 5;
    case ErrorCode::NotPrime:
    case ErrorCode::NotOddPrime:
    case ErrorCode::FormatError: return 1;
    default: return 10;
  }
}

int fail(const std::string& out_dir, const std::string& operation, const Error& e) {
  auto j = io::error_to_json(operation, e);
  std::cerr << j.dump() << "\n";
  if (!out_dir.empty()) {
    try {
      fs::create_directories(out_dir);
      io::write_file((fs::path(out_dir) / "error.json").string(), io::dump(j));
    } catch (const std::exception&) {
    }
  }
  if (e.code() == ErrorCode::EmptyDiagram) std::cerr << "no significant H1 class\n";
  return exit_code_for(e.code());
}

ClassSelection parse_class(const std::string& s) {
  if (s == "max-persistence") return ClassSelection::max_persistence();
  if (s.rfind("index:", 0) == 0) {
    try {
      return ClassSelection::at(std::stoul(s.substr(6)));
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::FormatError, "--class expects max-persistence or index:k, got '" + s + "'");
}

ScalePolicy parse_scale(const std::string& s) {
  if (s == "midpoint") return ScalePolicy::midpoint();
  try {
    if (s.rfind("fraction:", 0) == 0) return ScalePolicy::fraction(std::stod(s.substr(9)));
    if (s.rfind("absolute:", 0) == 0) return ScalePolicy::absolute(std::stod(s.substr(9)));
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::FormatError, "--scale expects midpoint, fraction:t or absolute:eps, got '" + s + "'");
}

std::optional<double> parse_threshold(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    double t = std::stod(s, &used);
    if (used == s.size()) return t;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::FormatError, "--threshold expects auto or a number, got '" + s + "'");
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

FilteredComplex load_complex(const std::string& path) {
  return io::complex_from_json(io::parse_json(io::read_file(path), path));
}

std::string out_path(const std::string& dir, const char* name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular coordinates with validated integer lifts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // run
  PipelineConfig config;
  std::string threshold = "auto", klass = "max-persistence", scale = "midpoint";
  bool skip_winding = false;
  auto* run = app.add_subcommand("run", "full pipeline on a point cloud (CSV) or an explicit complex (JSON)");
  run->add_option("--input", config.input, "points CSV or complex JSON")->required();
  run->add_option("--prime", config.prime, "odd prime for persistence")->capture_default_str();
  run->add_option("--max-dim", config.max_dim, "top Rips simplex dimension")->capture_default_str();
  run->add_option("--threshold", threshold, "Rips threshold or auto")->capture_default_str();
  run->add_option("--class", klass, "max-persistence or index:k")->capture_default_str();
  run->add_option("--scale", scale, "midpoint, fraction:t or absolute:eps")->capture_default_str();
  run->add_option("--snf-cap", config.snf_cap, "largest system for Smith form routes")->capture_default_str();
  run->add_option("--seed", config.seed, "recorded seed")->capture_default_str();
  run->add_option("--out", config.out, "output directory")->capture_default_str();
  run->add_flag("--no-winding", skip_winding, "skip winding reduction");

  // lift
  std::string complex_path, chain_path, lift_out = ".";
  std::uint64_t lift_prime = 0;
  std::size_t lift_cap = 1500;
  auto* lift = app.add_subcommand("lift", "lift a mod-p cocycle or cycle to a closed integer one");
  lift->add_option("--complex", complex_path, "complex JSON")->required();
  lift->add_option("--input", chain_path, "chain JSON with \"prime\" and \"kind\" (cocycle|cycle)")->required();
  lift->add_option("--prime", lift_prime, "overrides the chain's prime");
  lift->add_option("--snf-cap", lift_cap)->capture_default_str();
  lift->add_option("--out", lift_out)->capture_default_str();

  // reduce-winding
  std::string cocycle_path, cycle_path, wind_out = ".";
  std::size_t wind_cap = 1500;
  bool force_snf = false;
  auto* wind = app.add_subcommand("reduce-winding", "divide an integer cocycle down to winding one");
  wind->add_option("--complex", complex_path, "complex JSON")->required();
  wind->add_option("--cocycle", cocycle_path, "integer cocycle JSON")->required();
  wind->add_option("--cycle", cycle_path, "integer cycle JSON")->required();
  wind->add_option("--snf-cap", wind_cap)->capture_default_str();
  wind->add_flag("--force-snf", force_snf, "use the integer route for every division");
  wind->add_option("--out", wind_out)->capture_default_str();

  // experiment
  std::uint64_t n = 6, k = 3, pmin = 3, pmax = 300, samples = 10000, exp_seed = 0;
  std::string exp_out = ".";
  auto* experiment = app.add_subcommand("experiment", "seeded experiments");
  auto* sparsity = experiment->add_subcommand("sparsity", "proportion of non-liftable lines per prime");
  experiment->require_subcommand(1);
  sparsity->add_option("--n", n)->capture_default_str();
  sparsity->add_option("--k", k)->capture_default_str();
  sparsity->add_option("--pmin", pmin)->capture_default_str();
  sparsity->add_option("--pmax", pmax)->capture_default_str();
  sparsity->add_option("--samples", samples, "lines per prime")->capture_default_str();
  sparsity->add_option("--seed", exp_seed)->capture_default_str();
  sparsity->add_option("--out", exp_out)->capture_default_str();

  // coords
  std::string coords_out = ".";
  auto* coords = app.add_subcommand("coords", "smooth an integer cocycle and write circular coordinates");
  coords->add_option("--complex", complex_path, "complex JSON")->required();
  coords->add_option("--cocycle", cocycle_path, "integer cocycle JSON")->required();
  coords->add_option("--out", coords_out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    try {
      config.selection = parse_class(klass);
      config.scale = parse_scale(scale);
      config.threshold = parse_threshold(threshold);
      config.reduce_winding = !skip_winding;
      config.validate();
    } catch (const Error& e) {
      return fail(config.out, "run.config", e);
    }
    std::string stage = "run.load";
    try {
      FilteredComplex complex;
      std::optional<Diagram> diagram;
      std::optional<PointCloud> points;
      if (is_json_path(config.input)) {
        complex = load_complex(config.input);
      } else {
        points = io::parse_points_csv(io::read_file(config.input));
        stage = "run.rips";
        std::tie(complex, diagram) = rips_with_diagram(*points, config);
      }
      stage = "run.lift_class";
      PipelineResult r;
      r.lifted = lift_class(complex, config, std::move(diagram));
      stage = "run.coordinates";
      r.coords = coordinates(r.lifted.working, r.lifted.cocycle.working_lift, r.lifted.cycle.working_lift, config);
      stage = "run.write";
      write_artifacts(r, complex, points ? &*points : nullptr, config.out);
      std::cout << "class [" << r.lifted.pair.birth << ", " << r.lifted.pair.death << ") at scale " << r.lifted.pair.scale
                << ", winding " << to_decimal(r.coords.winding.winding_number) << ", wrote " << config.out << "\n";
      return 0;
    } catch (const Error& e) {
      return fail(config.out, stage, e);
    }
  }

  if (lift->parsed()) {
    try {
      auto complex = load_complex(complex_path);
      auto j = io::parse_json(io::read_file(chain_path), chain_path);
      std::uint64_t p = lift_prime ? lift_prime : j.value("prime", std::uint64_t{0});
      OddPrime prime(p);
      std::string kind = j.value("kind", std::string("cocycle"));
      io::Json report;
      if (kind == "cocycle") {
        auto c = io::chain_from_json<std::uint64_t, CochainTag>(complex, j, p);
        report = io::lift_report_to_json(complex, lift_closed(complex, c, prime, {lift_cap}));
      } else if (kind == "cycle") {
        auto c = io::chain_from_json<std::uint64_t, ChainTag>(complex, j, p);
        report = io::lift_report_to_json(complex, lift_closed(complex, c, prime, {lift_cap}));
      } else {
        throw Error(ErrorCode::FormatError, "kind must be cocycle or cycle");
      }
      io::write_file(out_path(lift_out, "lift_report.json"), io::dump(report));
      std::cout << report.dump() << "\n";
      return 0;
    } catch (const Error& e) {
      return fail(lift_out, "lifting.lift_closed", e);
    }
  }

  if (wind->parsed()) {
    try {
      auto complex = load_complex(complex_path);
      auto alpha = io::chain_from_json<Integer, CochainTag>(complex, io::parse_json(io::read_file(cocycle_path), cocycle_path));
      auto beta = io::chain_from_json<Integer, ChainTag>(complex, io::parse_json(io::read_file(cycle_path), cycle_path));
      WindingOptions options;
      options.snf_cap = wind_cap;
      options.force_snf = force_snf;
      auto report = io::winding_report_to_json(complex, reduce_winding(complex, alpha, beta, options));
      io::write_file(out_path(wind_out, "winding_report.json"), io::dump(report));
      std::cout << report.dump() << "\n";
      return 0;
    } catch (const Error& e) {
      return fail(wind_out, "winding.reduce_winding", e);
    }
  }

  if (sparsity->parsed()) {
    try {
      auto rows = sparsity_sweep(n, pmin, pmax, samples, k, exp_seed);
      io::write_file(out_path(exp_out, "sparsity.csv"), io::sparsity_csv(rows));
      io::write_file(out_path(exp_out, "sparsity.svg"), io::sparsity_svg(rows, n, k));
      io::Json meta{{"seed", exp_seed},
                    {"generator", std::string(kGeneratorName)},
                    {"version", std::string(kVersion)},
                    {"n", n},
                    {"k", k},
                    {"pmin", pmin},
                    {"pmax", pmax},
                    {"samples", samples},
                    {"slope", trend_slope(rows)}};
      io::write_file(out_path(exp_out, "sparsity_meta.json"), io::dump(meta));
      std::cout << io::sparsity_csv(rows);
      return 0;
    } catch (const Error& e) {
      return fail(exp_out, "experiments.sparsity_sweep", e);
    }
  }

  if (coords->parsed()) {
    try {
      auto complex = load_complex(complex_path);
      auto alpha = io::chain_from_json<Integer, CochainTag>(complex, io::parse_json(io::read_file(cocycle_path), cocycle_path));
      auto smoothed = harmonic_smooth(complex, alpha);
      auto map = circular_map(smoothed, complex);
      io::write_file(out_path(coords_out, "smoothed.json"), io::dump(io::smoothed_to_json(complex, smoothed)));
      io::write_file(out_path(coords_out, "coords.csv"), io::coords_csv(map));
      std::cout << io::coords_csv(map);
      return 0;
    } catch (const Error& e) {
      return fail(coords_out, "smoothing.circular_map", e);
    }
  }
  return 0;
}
