/**
 * @file io.hpp
 * @brief Parsing of complex numbers, points and domain files, and JSON/CSV
 * serialization of bound records.
 *
 * Domain files are JSON with a "type" tag; complex numbers in files are
 * [re, im] pairs (a bare number is read as real). On the command line a
 * complex number is written "re+imi" and points are comma-separated tuples.
 */
#pragma once

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pluri/bound_engine.hpp"
#include "pluri/bounds.hpp"
#include "pluri/config.hpp"
#include "pluri/geometry.hpp"

namespace pluri {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Command-line complex numbers
// ---------------------------------------------------------------------------

/// Accepts "a", "bi", "a+bi", "a-bi", "i", "-i" with optional spaces.
inline cplx parse_complex(const std::string &text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s += ch;
  static const std::string num = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
  static const std::regex real_only("^" + num + "$");
  static const std::regex imag_only(R"(^([+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
  static const std::regex both("^" + num +
                               R"(([+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i$)");
  auto coef = [](const std::string &c) {
    if (c.empty() || c == "+")
      return 1.0;
    if (c == "-")
      return -1.0;
    return std::stod(c);
  };
  std::smatch m;
  if (std::regex_match(s, m, real_only))
    return {std::stod(m[1].str()), 0.0};
  if (std::regex_match(s, m, imag_only))
    return {0.0, coef(m[1].str())};
  if (std::regex_match(s, m, both))
    return {std::stod(m[1].str()), coef(m[2].str())};
  throw InputError("cannot parse complex number '" + text + "'");
}

inline Point parse_point(const std::string &text) {
  std::vector<cplx> cs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    cs.push_back(parse_complex(item));
  if (cs.size() == 1)
    return Point(cs[0]);
  if (cs.size() == 2)
    return Point(cs[0], cs[1]);
  throw DimensionError("points need 1 or 2 coordinates, got " + std::to_string(cs.size()));
}

inline std::string format_complex(cplx z) {
  const double im = z.imag();
  return json(z.real()).dump() + (std::signbit(im) ? "-" : "+") + json(std::abs(im)).dump() + "i";
}

inline std::string format_point(const Point &p) {
  std::string s;
  for (int i = 0; i < p.dim(); ++i)
    s += (i ? "," : "") + format_complex(p[i]);
  return s;
}

// ---------------------------------------------------------------------------
// JSON values
// ---------------------------------------------------------------------------

/// Finite numbers as numbers; infinities and NaN as strings.
inline json num(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return x;
}

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const Point &p) {
  json a = json::array();
  for (int i = 0; i < p.dim(); ++i)
    a.push_back(to_json(p[i]));
  return a;
}

inline json to_json(const BoundInterval &b) {
  return {{"lo", num(b.lo)},
          {"hi", num(b.hi)},
          {"width", num(b.width())},
          {"lo_witness", b.lo_witness},
          {"hi_witness", b.hi_witness},
          {"lo_provenance", to_string(b.lo_provenance)},
          {"hi_provenance", to_string(b.hi_provenance)}};
}

inline cplx complex_from_json(const json &j) {
  if (j.is_number())
    return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string())
    return parse_complex(j.get<std::string>());
  throw InputError("complex numbers are [re, im] pairs");
}

inline Point point_from_json(const json &j) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw InputError("points are arrays of one or two complex numbers");
  if (j.size() == 1)
    return Point(complex_from_json(j[0]));
  // A bare [re, im] pair of numbers is ambiguous; it is read as a point of C^2
  // with real coordinates only when both entries are numbers.
  return Point(complex_from_json(j[0]), complex_from_json(j[1]));
}

// ---------------------------------------------------------------------------
// Domain files
// ---------------------------------------------------------------------------

namespace detail {

template <class T> T field(const json &j, const char *key, T fallback) {
  if (!j.contains(key))
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

inline const json &required(const json &j, const char *key) {
  if (!j.contains(key))
    throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

} // namespace detail

inline HoloMap map_from_json(const json &j, const DomainPtr &domain);

inline DomainPtr domain_from_json(const json &j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InputError("domain specs are objects with a string 'type'");
  const std::string type = j["type"];
  if (type == "ball") {
    return make_ball(point_from_json(detail::required(j, "center")),
                     detail::field<double>(j, "radius", 1.0));
  }
  if (type == "polydisk") {
    Point c = point_from_json(detail::required(j, "center"));
    auto radii = detail::field<std::vector<double>>(
        j, "radii", std::vector<double>(static_cast<std::size_t>(c.dim()), 1.0));
    return make_polydisk(c, radii);
  }
  if (type == "planar_complement") {
    if (detail::field<bool>(j, "default", false))
      return make_default_planar_complement();
    std::vector<std::pair<cplx, double>> holes;
    for (const auto &h : detail::field<json>(j, "holes", json::array()))
      holes.emplace_back(complex_from_json(detail::required(h, "center")),
                         detail::field<double>(h, "radius", 0.0));
    return make_planar_complement(detail::field<double>(j, "outer_radius", 2.0), holes);
  }
  if (type == "sublevel_dcg") {
    return make_sublevel_dcg(detail::field<int>(j, "terms", 8),
                             detail::field<double>(j, "free_mass", 0.2),
                             detail::field<double>(j, "outer_radius", 8.0));
  }
  if (type == "hartogs_pgvlu") {
    return make_hartogs_pgvlu(detail::field<int>(j, "terms", 6),
                              detail::field<double>(j, "slack", 0.1),
                              detail::field<int>(j, "grid", 400));
  }
  if (type == "pushforward") {
    DomainPtr src = domain_from_json(detail::required(j, "source"));
    return make_pushforward(src, map_from_json(detail::required(j, "map"), src));
  }
  throw InputError("unknown domain type '" + type + "'");
}

/// Maps are automorphisms of `domain` (or compositions of them).
inline HoloMap map_from_json(const json &j, const DomainPtr &domain) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw InputError("map specs are objects with a string 'type'");
  const std::string type = j["type"];
  if (type == "identity")
    return identity_map(domain);
  if (type == "mobius")
    return coordinate_mobius(domain, detail::field<int>(j, "coordinate", 0),
                             complex_from_json(detail::required(j, "a")),
                             detail::field<double>(j, "theta", 0.0));
  if (type == "swap")
    return swap_map(domain);
  if (type == "ball_automorphism")
    return ball_automorphism(domain, point_from_json(detail::required(j, "a")));
  if (type == "composition") {
    std::vector<HoloMap> chain;
    for (const auto &m : detail::required(j, "chain"))
      chain.push_back(map_from_json(m, domain));
    return compose(std::move(chain));
  }
  throw InputError("unknown map type '" + type + "'");
}

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

/// Built-in names for the shipped models.
inline std::optional<DomainPtr> builtin_domain(const std::string &name) {
  if (name == "disk")
    return make_unit_disk();
  if (name == "ball2" || name == "ball")
    return make_unit_ball(2);
  if (name == "bidisk" || name == "polydisk")
    return make_unit_polydisk(2);
  if (name == "sublevel_dcg" || name == "sublevel")
    return make_sublevel_dcg();
  if (name == "hartogs_pgvlu" || name == "hartogs")
    return make_hartogs_pgvlu();
  if (name == "planar_complement" || name == "planar")
    return make_default_planar_complement();
  return std::nullopt;
}

inline DomainPtr load_domain(const std::string &arg) {
  if (std::ifstream(arg).good())
    return domain_from_json(read_json_file(arg));
  if (auto d = builtin_domain(arg))
    return *d;
  throw InputError("'" + arg + "' is neither a domain file nor a built-in domain name");
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

inline json to_json(const RunConfig &c) {
  const auto &b = c.budget;
  const auto &t = c.tol;
  return {{"seed", c.seed},
          {"format", c.format},
          {"workers", c.workers},
          {"budget",
           {{"restarts", b.restarts},
            {"degree", b.degree},
            {"max_hits", b.max_hits},
            {"search_samples", b.search_samples},
            {"boundary_samples", b.boundary_samples},
            {"max_boundary_samples", b.max_boundary_samples},
            {"grid_radii", b.grid_radii},
            {"grid_angles", b.grid_angles},
            {"simplex_evaluations", b.simplex_evaluations},
            {"annuli", b.annuli},
            {"angles", b.angles},
            {"directions", b.directions}}},
          {"tolerances",
           {{"pinch", t.pinch},
            {"soundness", t.soundness},
            {"root_match", t.root_match},
            {"feasibility", t.feasibility},
            {"spread_bound", t.spread_bound},
            {"eps", t.eps}}}};
}

/// Overrides entries of `c` with those present in a config document.
inline void apply_config(RunConfig &c, const json &j) {
  c.seed = detail::field<std::uint64_t>(j, "seed", c.seed);
  c.format = detail::field<std::string>(j, "format", c.format);
  c.workers = detail::field<int>(j, "workers", c.workers);
  if (j.contains("budget")) {
    const json &b = j["budget"];
    auto &s = c.budget;
    s.restarts = detail::field<int>(b, "restarts", s.restarts);
    s.degree = detail::field<int>(b, "degree", s.degree);
    s.max_hits = detail::field<int>(b, "max_hits", s.max_hits);
    s.search_samples = detail::field<int>(b, "search_samples", s.search_samples);
    s.boundary_samples = detail::field<int>(b, "boundary_samples", s.boundary_samples);
    s.max_boundary_samples = detail::field<int>(b, "max_boundary_samples", s.max_boundary_samples);
    s.grid_radii = detail::field<int>(b, "grid_radii", s.grid_radii);
    s.grid_angles = detail::field<int>(b, "grid_angles", s.grid_angles);
    s.simplex_evaluations = detail::field<int>(b, "simplex_evaluations", s.simplex_evaluations);
    s.annuli = detail::field<int>(b, "annuli", s.annuli);
    s.angles = detail::field<int>(b, "angles", s.angles);
    s.directions = detail::field<int>(b, "directions", s.directions);
  }
  if (j.contains("tolerances")) {
    const json &t = j["tolerances"];
    auto &s = c.tol;
    s.pinch = detail::field<double>(t, "pinch", s.pinch);
    s.soundness = detail::field<double>(t, "soundness", s.soundness);
    s.root_match = detail::field<double>(t, "root_match", s.root_match);
    s.feasibility = detail::field<double>(t, "feasibility", s.feasibility);
    s.spread_bound = detail::field<double>(t, "spread_bound", s.spread_bound);
    s.eps = detail::field<double>(t, "eps", s.eps);
  }
  c.budget.validate();
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Shortest round-trip text for a double; infinities as -inf / inf.
inline std::string csv_number(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  return json(x).dump();
}
/**
 * Green intervals on a grid x 0 grid square of half-width `extent` (the
 * bounding radius when <= 0) about the bounding-ball centre; two-dimensional
 * domains vary the first coordinate with the second held at `fixed`.
 */
inline std::string scan_csv(const DomainPtr &dp, const Point &w, int grid, double extent,
                            cplx fixed, const RunConfig &cfg) {
  if (grid < 0)
    throw InputError("grid size must be non-negative");
  const int n = dim(*dp);
  auto bb = bounding_ball(*dp);
  const double L = extent > 0 ? extent : bb.radius;
  std::ostringstream os;
  os << "x,y,lo,hi,lo_provenance,hi_provenance,status\n";
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      double x = grid == 1 ? 0.0 : -L + 2 * L * a / (grid - 1);
      double y = grid == 1 ? 0.0 : -L + 2 * L * b / (grid - 1);
      cplx c = bb.center[0] + cplx(x, y);
      Point z = n == 1 ? Point(c) : Point(c, fixed);
      os << csv_number(x) << ',' << csv_number(y) << ',';
      if (!(margin_unchecked(*dp, z) > 0)) {
        os << ",,,,outside\n";
        continue;
      }
      auto iv = green_interval(dp, z, w, cfg);
      os << csv_number(iv.lo) << ',' << csv_number(iv.hi) << ','
         << to_string(iv.lo_provenance) << ',' << to_string(iv.hi_provenance) << ','
         << (z == w ? "pole" : "inside") << '\n';
    }
  return os.str();
}

} // namespace pluri
