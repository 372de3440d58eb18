#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circlift/chain.hpp"
#include "circlift/complex.hpp"
#include "circlift/experiments.hpp"
#include "circlift/lifting.hpp"
#include "circlift/persistence.hpp"
#include "circlift/smoothing.hpp"
#include "circlift/winding.hpp"

namespace circlift::io {

using Json = nlohmann::ordered_json;

// ---- files -----------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FormatError, "cannot write " + path);
  out << text;
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::FormatError, what + ": " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Rows of decimal floats separated by commas, no header.
inline PointCloud parse_points_csv(const std::string& text) {
  PointCloud points;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(fields, field, ',')) {
      ++col;
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || field.find_first_not_of(" \t", used) != std::string::npos)
        throw Error(ErrorCode::FormatError,
                    "line " + std::to_string(line_no) + ", column " + std::to_string(col) + ": bad number '" + field + "'");
      row.push_back(x);
    }
    if (!points.empty() && row.size() != points.front().size())
      throw Error(ErrorCode::FormatError, "line " + std::to_string(line_no) + ": expected " +
                                              std::to_string(points.front().size()) + " columns");
    points.push_back(std::move(row));
  }
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points in input");
  return points;
}

// ---- complexes ---------------------------------------------------------------

inline std::vector<Vertex> parse_vertices(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::FormatError, where + ": vertex list must be an array");
  std::vector<Vertex> v;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw Error(ErrorCode::FormatError, where + ": vertices must be nonnegative integers");
    v.push_back(x.get<Vertex>());
  }
  return v;
}

/// {"max_dim": d, "simplices": [[[v0, v1, ...], filtration], ...]}, or the
/// bare list. Filtration defaults to 0.
namespace detail {
/// Runs f, reporting JSON shape errors as FormatError.
template <class F>
auto json_guard(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, what + ": " + e.what());
  }
}
}  // namespace detail

inline FilteredComplex complex_from_json(const Json& j) {
  return detail::json_guard("complex", [&] {
    const Json& list = j.is_object() ? j.at("simplices") : j;
    if (!list.is_array()) throw Error(ErrorCode::FormatError, "simplices must be an array");
    std::vector<FilteredSimplex> simplices;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "simplices[" + std::to_string(i) + "]";
      const Json& s = list[i];
      if (s.is_array() && !s.empty() && s[0].is_array()) {
        double f = s.size() > 1 ? s[1].get<double>() : 0.0;
        simplices.push_back({Simplex(parse_vertices(s[0], where)), f});
      } else if (s.is_object()) {
        simplices.push_back({Simplex(parse_vertices(s.at("vertices"), where)), s.value("filtration", 0.0)});
      } else {
        simplices.push_back({Simplex(parse_vertices(s, where)), 0.0});
      }
    }
    int max_dim = j.is_object() ? j.value("max_dim", -1) : -1;
    return FilteredComplex::from_simplices(std::move(simplices), max_dim);
  });
}

/// Every simplex with its filtration, dimension by dimension.
inline Json complex_to_json(const FilteredComplex& complex) {
  Json list = Json::array();
  for (int d = 0; d <= complex.max_dim(); ++d)
    for (Index i = 0; i < complex.size(d); ++i) {
      auto v = complex.vertices(d, i);
      list.push_back(Json::array({Json(std::vector<Vertex>(v.begin(), v.end())), complex.filtration(d, i)}));
    }
  return Json{{"max_dim", complex.max_dim()}, {"simplices", list}};
}

// ---- chains ------------------------------------------------------------------

namespace detail {
inline Json coefficient(const Integer& z) { return to_decimal(z); }
inline Json coefficient(std::uint64_t x) { return std::to_string(x); }
inline Json coefficient(double x) { return x; }

template <class T>
T parse_coefficient(const Json& j, const std::string& where) {
  if constexpr (std::is_same_v<T, double>) {
    if (!j.is_number()) throw Error(ErrorCode::FormatError, where + ": expected a number");
    return j.get<double>();
  } else {
    Integer z;
    if (j.is_string()) z = parse_integer(j.get<std::string>());
    else if (j.is_number_integer()) z = Integer(j.get<std::int64_t>());
    else throw Error(ErrorCode::FormatError, where + ": coefficient must be a decimal string");
    if constexpr (std::is_same_v<T, Integer>) return z;
    else {
      if (z < 0) throw Error(ErrorCode::FormatError, where + ": field coefficients are nonnegative");
      return static_cast<std::uint64_t>(z);
    }
  }
}
}  // namespace detail

/// {"dim": m, "entries": [[[vertices], "coefficient"], ...]} in simplex order.
template <class T, class K>
Json chain_to_json(const FilteredComplex& complex, const SparseChain<T, K>& c) {
  Json entries = Json::array();
  for (const auto& [i, v] : c.entries) {
    auto verts = complex.vertices(c.dim, i);
    entries.push_back(Json::array({Json(std::vector<Vertex>(verts.begin(), verts.end())), detail::coefficient(v)}));
  }
  return Json{{"dim", c.dim}, {"entries", entries}};
}

/// Field chains also carry the prime and reject out-of-range coefficients.
template <class T, class K>
SparseChain<T, K> chain_from_json(const FilteredComplex& complex, const Json& j,
                                  std::optional<std::uint64_t> prime = std::nullopt) {
  return detail::json_guard("chain", [&] {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
      throw Error(ErrorCode::FormatError, "chain needs \"dim\" and \"entries\"");
    SparseChain<T, K> c(j.at("dim").get<int>());
    const Json& entries = j.at("entries");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string where = "entries[" + std::to_string(k) + "]";
      const Json& e = entries[k];
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::FormatError, where + ": expected [vertices, coefficient]");
      Simplex s(parse_vertices(e[0], where));
      if (s.dim() != c.dim) throw Error(ErrorCode::FormatError, where + ": simplex dimension differs from \"dim\"");
      auto idx = complex.find(s);
      if (!idx) throw Error(ErrorCode::FormatError, where + ": simplex not in complex");
      T v = detail::parse_coefficient<T>(e[1], where);
      if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (prime && v >= *prime) throw Error(ErrorCode::FormatError, where + ": coefficient not reduced mod p");
      }
      c.set(*idx, v);
    }
    return c;
  });
}

// ---- reports -----------------------------------------------------------------

template <class K>
Json lift_report_to_json(const FilteredComplex& complex, const LiftReport<K>& r) {
  return Json{{"prime", r.r.modulus},
              {"r", r.r.value},
              {"certificate", std::string(to_string(r.certificate))},
              {"is_closed", r.is_closed},
              {"input", chain_to_json(complex, r.input)},
              {"working_lift", chain_to_json(complex, r.working_lift)},
              {"exact_preimage", chain_to_json(complex, r.exact_preimage)}};
}

inline Json winding_report_to_json(const FilteredComplex& complex, const WindingReport& w) {
  Json trace = Json::array();
  for (const auto& e : w.division_trace)
    trace.push_back({{"prime", e.prime}, {"times_divided", e.times_divided}, {"route", std::string(to_string(e.route))}});
  return Json{{"pairing", to_decimal(w.pairing)},
              {"candidate_primes", w.candidate_primes},
              {"division_trace", trace},
              {"winding_number", to_decimal(w.winding_number)},
              {"reduced_cocycle", chain_to_json(complex, w.reduced_cocycle)}};
}

inline Json smoothed_to_json(const FilteredComplex& complex, const SmoothedCocycle& s) {
  return Json{{"alpha_tilde", chain_to_json(complex, s.alpha_tilde)},
              {"potential", chain_to_json(complex, s.potential)},
              {"residual_norm", s.residual_norm},
              {"relative_residual", s.relative_residual}};
}

inline Json diagram_to_json(const FilteredComplex& complex, const Diagram& d) {
  Json pairs = Json::array();
  for (const auto& level : d.pairs)
    for (const auto& pr : level) {
      Json p{{"dim", pr.dim},
             {"birth", pr.birth},
             {"death", pr.essential() ? Json(nullptr) : Json(pr.death)},
             {"essential", pr.essential()},
             {"scale", pr.scale},
             {"cocycle", chain_to_json(complex, pr.cocycle)}};
      if (pr.cycle) p["cycle"] = chain_to_json(complex, *pr.cycle);
      pairs.push_back(std::move(p));
    }
  return Json{{"prime", d.prime}, {"pairs", pairs}};
}

inline Json error_to_json(const std::string& operation, const Error& e) {
  return Json{{"error", std::string(to_string(e.code()))}, {"operation", operation}, {"message", e.what()}};
}

// ---- CSV ---------------------------------------------------------------------

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

inline std::string intervals_csv(const std::vector<Interval>& intervals) {
  std::string out = "dim,birth,death\n";
  for (const auto& i : intervals)
    out += std::to_string(i.dim) + "," + format_double(i.birth) + "," + format_double(i.death) + "\n";
  return out;
}

inline std::string coords_csv(const CircularCoords& coords) {
  std::string out = "vertex_id,theta\n";
  for (const auto& [v, t] : coords.theta) out += std::to_string(v) + "," + format_double(t) + "\n";
  return out;
}

inline std::string sparsity_csv(const std::vector<SparsityRow>& rows) {
  std::string out = "p,samples,non_liftable,proportion\n";
  for (const auto& r : rows)
    out += std::to_string(r.p) + "," + std::to_string(r.samples) + "," + std::to_string(r.non_liftable) + "," +
           format_double(r.proportion) + "\n";
  return out;
}

// ---- SVG ---------------------------------------------------------------------

namespace detail {

struct Frame {
  double x0, x1, y0, y1;
  static constexpr double width = 640, height = 480, margin = 60;
  double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
  double sy(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

inline Frame frame_for(const std::vector<double>& xs, const std::vector<double>& ys) {
  Frame f{0, 1, 0, 1};
  if (!xs.empty()) {
    f.x0 = *std::min_element(xs.begin(), xs.end());
    f.x1 = *std::max_element(xs.begin(), xs.end());
    f.y0 = *std::min_element(ys.begin(), ys.end());
    f.y1 = *std::max_element(ys.begin(), ys.end());
  }
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1;
  if (f.y1 <= f.y0) f.y1 = f.y0 + 1;
  return f;
}

inline std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << x;
  return ss.str();
}

inline std::string svg_open(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n"
         "<!-- circlift " + std::string(kVersion) + " -->\n"
         "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
         "<text x=\"320\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" + title +
         "</text>\n";
}

inline std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<line x1=\"60\" y1=\"420\" x2=\"580\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<line x1=\"60\" y1=\"60\" x2=\"60\" y2=\"420\" stroke=\"black\"/>\n";
  s += "<text x=\"320\" y=\"460\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + xlabel + "</text>\n";
  s += "<text x=\"18\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 18 240)\">" + ylabel + "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    double x = f.x0 + (f.x1 - f.x0) * k / 4.0, y = f.y0 + (f.y1 - f.y0) * k / 4.0;
    s += "<text x=\"" + fmt(f.sx(x)) + "\" y=\"436\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
         format_double(std::round(x * 1000) / 1000) + "</text>\n";
    s += "<text x=\"54\" y=\"" + fmt(f.sy(y) + 3) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" +
         format_double(std::round(y * 1000) / 1000) + "</text>\n";
  }
  return s;
}

}  // namespace detail

/// Scatter of 2-D points colored by a circular value in [0, 1) as hue.
inline std::string scatter_svg(const std::vector<std::vector<double>>& xy, const std::vector<double>& hue,
                               const std::string& title) {
  std::vector<double> xs, ys;
  for (const auto& p : xy) {
    xs.push_back(p.at(0));
    ys.push_back(p.size() > 1 ? p[1] : 0.0);
  }
  auto f = detail::frame_for(xs, ys);
  std::string s = detail::svg_open(title) + detail::axes(f, "PC1", "PC2");
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += "<circle cx=\"" + detail::fmt(f.sx(xs[i])) + "\" cy=\"" + detail::fmt(f.sy(ys[i])) +
         "\" r=\"4\" fill=\"hsl(" + detail::fmt(360.0 * hue.at(i)) + ",80%,45%)\"/>\n";
  return s + "</svg>\n";
}

/// Polyline with point markers.
inline std::string line_chart_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& title,
                                  const std::string& xlabel, const std::string& ylabel) {
  auto f = detail::frame_for(xs, ys);
  std::string s = detail::svg_open(title) + detail::axes(f, xlabel, ylabel);
  std::string pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts += detail::fmt(f.sx(xs[i])) + "," + detail::fmt(f.sy(ys[i])) + " ";
  s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    s += "<circle cx=\"" + detail::fmt(f.sx(xs[i])) + "\" cy=\"" + detail::fmt(f.sy(ys[i])) +
         "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  return s + "</svg>\n";
}

inline std::string sparsity_svg(const std::vector<SparsityRow>& rows, std::uint64_t n, std::uint64_t k) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.p));
    ys.push_back(r.proportion);
  }
  return line_chart_svg(xs, ys, "non-liftable lines, n=" + std::to_string(n) + ", k=" + std::to_string(k), "p",
                        "proportion non-liftable");
}

}  // namespace circlift::io
