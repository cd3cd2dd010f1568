/**
 * @file verify.hpp
 * @brief Reproducible verification suites. Each suite runs a fixed set of
 * checks from the seed in the run configuration and returns named pass/fail
 * records plus a machine-readable summary.
 */
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pluri/compactify.hpp"
#include "pluri/hyperconvex.hpp"
#include "pluri/io.hpp"
#include "pluri/metrics.hpp"

namespace pluri {

struct Check {
  std::string name;
  bool passed = false;
  json data;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    for (const auto &c : checks)
      if (!c.passed)
        return false;
    return !checks.empty();
  }

  void add(std::string name, bool ok, json data = json::object()) {
    checks.push_back({std::move(name), ok, std::move(data)});
  }

  json summary() const {
    json cs = json::array();
    for (const auto &c : checks)
      cs.push_back({{"name", c.name}, {"passed", c.passed}, {"data", c.data}});
    return {{"suite", suite}, {"passed", passed()}, {"checks", cs}};
  }
};

namespace detail {

/// Points of `d` with margin at least `min_margin`, drawn deterministically.
inline std::vector<Point> interior_sample(const Domain &d, int count, std::uint64_t seed,
                                          double min_margin) {
  std::vector<Point> out;
  for (std::uint64_t round = 0; static_cast<int>(out.size()) < count; ++round) {
    for (const auto &p : sample_points(d, 4 * count, stream_seed(seed, round)))
      if (margin_unchecked(d, p) >= min_margin && static_cast<int>(out.size()) < count)
        out.push_back(p);
    if (round > 64)
      throw InfeasibleError("could not draw interior points");
  }
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// c lo <= g lo <= g hi <= k hi on the bidisk, each computed independently.
inline SuiteResult verify_chain(const RunConfig &cfg, int pairs = 100) {
  SuiteResult r{"chain", {}};
  auto P = make_unit_polydisk(2);
  auto pts = detail::interior_sample(*P, 2 * pairs, stream_seed(cfg.seed, 0xC4A1ULL), 0.02);
  const double slack = cfg.tol.soundness;
  double worst = kInf;
  int bad = 0;
  for (int i = 0; i < pairs; ++i) {
    const Point &z = pts[static_cast<std::size_t>(2 * i)];
    const Point &w = pts[static_cast<std::size_t>(2 * i + 1)];
    auto c = caratheodory_bound(P, z, w, cfg);
    auto g = green_interval(P, z, w, cfg);
    auto k = kobayashi_bound(P, z, w, cfg);
    double s = std::min({g.lo - c.lo, g.hi - g.lo, k.hi - g.hi});
    worst = std::min(worst, s);
    if (!(s >= -slack))
      ++bad;
  }
  r.add("bidisk_chain", bad == 0,
        {{"pairs", pairs}, {"violations", bad}, {"min_slack", num(worst)}});
  return r;
}

/// Ball{0,1/2} sits inside Ball{0,1}, so its Green function is larger.
inline SuiteResult verify_monotone(const RunConfig &cfg, int pairs = 200) {
  SuiteResult r{"monotone", {}};
  auto small = make_ball(Point::zeros(2), 0.5);
  auto big = make_unit_ball(2);
  auto pts = detail::interior_sample(*small, 2 * pairs, stream_seed(cfg.seed, 0x3030ULL), 1e-3);
  int exact_bad = 0, interval_bad = 0;
  double worst_exact = kInf, worst_interval = kInf;
  for (int i = 0; i < pairs; ++i) {
    const Point &z = pts[static_cast<std::size_t>(2 * i)];
    const Point &w = pts[static_cast<std::size_t>(2 * i + 1)];
    double gs = *closed_form_green(*small, z, w);
    double gb = *closed_form_green(*big, z, w);
    worst_exact = std::min(worst_exact, gs - gb);
    if (!(gs >= gb))
      ++exact_bad;
    auto is = green_interval(small, z, w, cfg);
    auto ib = green_interval(big, z, w, cfg);
    // Within combined widths, and the lower ends ordered as the true values are.
    double s = is.lo - ib.hi + is.width() + ib.width();
    worst_interval = std::min(worst_interval, s);
    if (!(s >= 0) || !(is.lo >= ib.lo - cfg.tol.soundness))
      ++interval_bad;
  }
  r.add("closed_form_monotone", exact_bad == 0,
        {{"pairs", pairs}, {"violations", exact_bad}, {"min_difference", num(worst_exact)}});
  r.add("interval_monotone", interval_bad == 0,
        {{"pairs", pairs}, {"violations", interval_bad}, {"min_slack", num(worst_interval)}});
  return r;
}

inline json pole_fit_json(const PoleFit &f) {
  return {{"w", to_json(f.w)},
          {"class", to_string(f.classification)},
          {"c1", num(f.c1)},
          {"c2", num(f.c2)}};
}

inline SuiteResult verify_pole(const RunConfig &cfg) {
  SuiteResult r{"pole", {}};
  auto ball = classify_pole(make_unit_ball(2), Point(0.0, 0.0), cfg);
  r.add("ball_strict", ball.classification == PoleClass::Strict, pole_fit_json(ball));
  r.add("ball_constants", std::abs(ball.c1) <= 0.02 && std::abs(ball.c2) <= 0.02,
        pole_fit_json(ball));
  auto poly = classify_pole(make_unit_polydisk(2), Point(0.2, cplx(0.0, 0.1)), cfg);
  r.add("polydisk_strict", poly.classification == PoleClass::Strict, pole_fit_json(poly));
  auto sub = classify_pole(make_sublevel_dcg(), Point(0.0, 0.0), cfg);
  r.add("sublevel_strict", sub.classification == PoleClass::Strict, pole_fit_json(sub));
  return r;
}

inline SuiteResult verify_ratio(const RunConfig &cfg) {
  SuiteResult r{"ratio", {}};
  RunConfig c = cfg;
  c.tol.eps = 0.1;
  auto res = ratio_test(make_unit_ball(2), Point(0.0, 0.0), 0.3, c);
  json devs = json::array();
  for (double d : res.deviations)
    devs.push_back(num(d));
  r.add("ball_delta_found", res.delta_found >= 0.01,
        {{"delta", res.delta_found}, {"deviations", devs}});
  return r;
}

/// A(0, v) on the ball, homogeneity, and R >= A on the ball and the bidisk.
inline SuiteResult verify_azukawa(const RunConfig &cfg) {
  SuiteResult r{"azukawa", {}};
  auto B = make_unit_ball(2);
  const Point origin(0.0, 0.0);
  auto dirs = sphere_directions(2, 16);
  int bad = 0, hom_bad = 0;
  double max_width = 0, max_hom = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    Point v = dirs[k] * (0.5 + 0.1 * static_cast<double>(k));
    auto a = azukawa(B, origin, v, cfg);
    double exact = std::log(v.norm());
    max_width = std::max(max_width, a.width());
    if (!(a.width() <= 0.1 && a.lo <= exact + 1e-12 && exact <= a.hi + 1e-12))
      ++bad;
    cplx lam(0.0, 2.5);
    auto b = azukawa(B, origin, v * lam, cfg);
    double dev = std::max(std::abs(b.lo - a.lo - std::log(std::abs(lam))),
                          std::abs(b.hi - a.hi - std::log(std::abs(lam))));
    max_hom = std::max(max_hom, dev);
    if (!(dev <= 1e-9))
      ++hom_bad;
  }
  r.add("ball_origin", bad == 0,
        {{"directions", dirs.size()}, {"failures", bad}, {"max_width", num(max_width)}});
  r.add("homogeneity", hom_bad == 0, {{"max_deviation", num(max_hom)}});

  std::mt19937_64 rng(stream_seed(cfg.seed, 0xA2ULL));
  for (const auto &[name, dp] : std::vector<std::pair<std::string, DomainPtr>>{
           {"ball", B}, {"bidisk", make_unit_polydisk(2)}}) {
    auto ws = detail::interior_sample(*dp, 32, stream_seed(cfg.seed, name == "ball" ? 1 : 2), 0.1);
    int fails = 0;
    double worst = kInf;
    for (const auto &w : ws) {
      Point v = detail::random_unit_sphere(2, rng);
      auto s = directional_sample(dp, w, v, cfg);
      worst = std::min(worst, s.r_hi - s.a_hi);
      if (!(s.r_hi >= s.a_hi - 0.02))
        ++fails;
    }
    r.add("royden_dominates_" + name, fails == 0,
          {{"samples", ws.size()}, {"failures", fails}, {"min_r_minus_a", num(worst)}});
  }
  return r;
}

inline SuiteResult verify_sigma(const RunConfig &cfg) {
  SuiteResult r{"sigma", {}};
  const int m = 2;
  auto bc = bergman_constants("ball", m);
  auto pc = bergman_constants("polydisk", m);
  const double ball_exact = -std::log(std::sqrt(m + 1.0));
  const double poly_s = -std::log(std::sqrt(2.0)), poly_i = -std::log(static_cast<double>(m));
  r.add("ball_constants", bc.sigma_s == ball_exact && bc.sigma_i == ball_exact,
        {{"sigma_s", bc.sigma_s}, {"sigma_i", bc.sigma_i}});
  r.add("polydisk_constants", pc.sigma_s == poly_s && pc.sigma_i == poly_i,
        {{"sigma_s", pc.sigma_s}, {"sigma_i", pc.sigma_i}});

  auto within = [](const SigmaEstimate &e, double si, double ss) {
    return std::abs(e.inf_lo - si) <= 0.1 && std::abs(e.inf_hi - si) <= 0.1 &&
           std::abs(e.sup_lo - ss) <= 0.1 && std::abs(e.sup_hi - ss) <= 0.1;
  };
  auto est_json = [](const SigmaEstimate &e) {
    return json{{"inf", {num(e.inf_lo), num(e.inf_hi)}},
                {"sup", {num(e.sup_lo), num(e.sup_hi)}},
                {"directions", e.directions}};
  };
  auto eb = sigma_estimates(make_unit_ball(2), Point(0.0, 0.0), bergman_ball_metric(m), cfg);
  r.add("ball_numeric", within(eb, bc.sigma_i, bc.sigma_s), est_json(eb));
  auto ep = sigma_estimates(make_unit_polydisk(2), Point(0.0, 0.0), bergman_polydisk_metric(m), cfg);
  r.add("polydisk_numeric", within(ep, pc.sigma_i, pc.sigma_s), est_json(ep));
  return r;
}

inline SuiteResult verify_suita(const RunConfig &cfg) {
  SuiteResult r{"suita", {}};
  auto D = make_unit_disk();
  for (double w : {0.0, 0.3, 0.6}) {
    auto s = suita_check(D, w, euclidean_metric(), cfg);
    bool ok = s.lhs <= s.rhs + 0.05 && std::abs(s.lhs - s.rhs) <= 0.05;
    r.add("disk_w" + json(w).dump(), ok, {{"lhs", num(s.lhs)}, {"rhs", num(s.rhs)}});
  }
  return r;
}

inline SuiteResult verify_jensen(const RunConfig &) {
  SuiteResult r{"jensen", {}};
  auto D = make_unit_disk();
  std::vector<std::pair<std::string, ScalarField>> us{
      {"re_z", real_part_field()}, {"abs_z_sq", norm_sq_field()}, {"abs_z_4", norm_pow4_field()}};
  for (const auto &[name, u] : us)
    for (double w : {0.0, 0.5}) {
      auto t = lelong_jensen(D, u, Point(w));
      r.add("disk_" + name + "_w" + json(w).dump(), t.residual <= 1e-3,
            {{"u_w", num(t.value_at_pole)},
             {"boundary", num(t.boundary)},
             {"interior", num(t.interior)},
             {"residual", num(t.residual)}});
    }
  auto B = make_unit_ball(2);
  for (const auto &[name, u] : us) {
    auto t = lelong_jensen(B, u, Point(0.0, 0.0));
    r.add("ball_" + name, t.residual <= 1e-3, {{"residual", num(t.residual)}});
  }
  return r;
}

inline SuiteResult verify_discontinuity(const RunConfig &cfg) {
  SuiteResult r{"discontinuity", {}};
  auto S = make_sublevel_dcg();
  const auto &m = *S->as<SublevelDcg>();
  const Point z0(0.5, 0.0), w0(0.0, 0.0);
  const double target = -1.5 * std::log(2.0);
  double u_direct = m.u(z0);
  auto lo = psh_lower_bound(S, z0, w0);
  r.add("limit_lower_bound", lo.lo >= target - 1e-12 && u_direct >= target - 1e-12,
        {{"psh_lo", num(lo.lo)}, {"u", num(u_direct)}, {"witness", lo.lo_witness}});

  const double c = m.slopes.back();
  const Point zj(0.5, 0.5 * c);
  double hi = kInf;
  std::string witness = "none";
  if (auto sl = line_slice_map(S, zj, w0, cfg.budget)) {
    auto b = pushforward_upper_bound(*sl, zj, w0, cfg.budget);
    hi = b.hi;
    witness = b.hi_witness;
  }
  r.add("path_upper_bound", hi <= -2 * std::log(2.0) + 0.1,
        {{"c_j", c}, {"hi", num(hi)}, {"witness", witness}});

  auto scan = continuity_scan(S, sublevel_discontinuity_path(S), z0, w0, cfg);
  r.add("scan_verdict", scan.verdict == ContinuityVerdict::DiscontinuityWitness,
        {{"verdict", to_string(scan.verdict)},
         {"gap", num(scan.gap)},
         {"widths", num(scan.widths)},
         {"limit", to_json(scan.limit)}});
  return r;
}

inline SuiteResult verify_compactify(const RunConfig &) {
  SuiteResult r{"compactify", {}};
  auto D = make_unit_disk();
  auto V = norming_form(D, 128);
  const std::vector<double> angles{0.0, kPi / 2, kPi};

  std::vector<Point> tail;
  std::vector<int> truth;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    auto tr = boundary_trace(D, radial_sequence(angles[a], 1, 10), V);
    r.add("cauchy_angle_" + std::to_string(a), tr.successive.back() <= 0.05,
          {{"last_successive", num(tr.successive.back())},
           {"profile_distance", num(tr.profile_distance.value_or(kInf))}});
    for (const auto &p : radial_sequence(angles[a], 6, 10)) {
      tail.push_back(p);
      truth.push_back(static_cast<int>(a));
    }
  }

  std::vector<GridFunction> fs;
  for (const auto &p : tail)
    fs.push_back(phi_V(D, p, V));
  auto dm = distance_matrix(fs);
  double sep = kInf;
  for (std::size_t i = 0; i < tail.size(); ++i)
    for (std::size_t j = 0; j < tail.size(); ++j)
      if (truth[i] != truth[j])
        sep = std::min(sep, dm[i][j]);
  r.add("separation", sep >= 0.5, {{"min_inter_cluster", num(sep)}});
  int worst_edit = 0;
  for (double eps : cluster_scales())
    worst_edit = std::max(worst_edit, partition_edit_distance(single_linkage(dm, eps), truth));
  r.add("three_clusters", worst_edit == 0, {{"edit_distance_to_angles", worst_edit}});

  auto inv = invariance_test(D, coordinate_mobius(D, 0, 0.5), tail, V, V);
  r.add("mobius_invariance", inv.max_edit_distance == 0,
        {{"edit_distance", inv.max_edit_distance}, {"max_distortion", num(inv.max_distortion)}});
  return r;
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

using SuiteFn = std::function<SuiteResult(const RunConfig &)>;

inline const std::map<std::string, SuiteFn> &suites() {
  static const std::map<std::string, SuiteFn> s{
      {"chain", [](const RunConfig &c) { return verify_chain(c); }},
      {"monotone", [](const RunConfig &c) { return verify_monotone(c); }},
      {"pole", verify_pole},
      {"ratio", verify_ratio},
      {"azukawa", verify_azukawa},
      {"sigma", verify_sigma},
      {"suita", verify_suita},
      {"jensen", verify_jensen},
      {"discontinuity", verify_discontinuity},
      {"compactify", verify_compactify},
  };
  return s;
}

inline SuiteResult run_suite(const std::string &name, const RunConfig &cfg) {
  auto it = suites().find(name);
  if (it == suites().end())
    throw InputError("unknown suite '" + name + "'");
  return it->second(cfg);
}

} // namespace pluri
