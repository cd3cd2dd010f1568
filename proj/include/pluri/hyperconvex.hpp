/**
 * @file hyperconvex.hpp
 * @brief Strict-pole classification, the glued competitor with a strict
 * pole, the ratio test for moving poles, exhaustion diagnostics, and
 * continuity scans of the Green function.
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pluri/bound_engine.hpp"
#include "pluri/metrics.hpp"

namespace pluri {

// ---------------------------------------------------------------------------
// Pole classification
// ---------------------------------------------------------------------------

enum class PoleClass { Strict, LogarithmicOnly, NoPole, Inconclusive };

inline const char *to_string(PoleClass c) {
  switch (c) {
  case PoleClass::Strict: return "Strict";
  case PoleClass::LogarithmicOnly: return "LogarithmicOnly";
  case PoleClass::NoPole: return "NoPole";
  case PoleClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct PoleFit {
  Point w;
  std::vector<double> radii;
  std::vector<double> lo_min, lo_max; ///< per annulus, of lo - log t
  std::vector<double> hi_min, hi_max; ///< per annulus, of hi - log t
  PoleClass classification = PoleClass::Inconclusive;
  double c1 = -kInf, c2 = kInf;
};

using GreenOracle = std::function<BoundInterval(const Point &z)>;

/// Test points on the sphere of radius t about w.
inline std::vector<Point> annulus_points(const Point &w, double t, int angles) {
  std::vector<Point> out;
  const int ndir = w.dim() == 1 ? 1 : 6;
  const int nph = w.dim() == 1 ? std::max(angles, 1) : std::max(angles / 2, 1);
  for (const auto &e : sphere_directions(w.dim(), ndir))
    for (int a = 0; a < nph; ++a)
      out.push_back(w + e * std::polar(t, 2 * kPi * (a + 0.25) / nph));
  return out;
}

/**
 * @brief Classifies the pole from interval envelopes on the annuli ||z - w|| = t_k.
 *
 * Strict: the lower envelope min(lo - log t) and the upper envelope
 * max(hi - log t) are finite with spread at most `spread_bound` over the
 * last four annuli. LogarithmicOnly: the upper envelope is bounded but the
 * lower one diverges. NoPole: the upper envelope grows without bound.
 */
inline PoleFit classify_pole(const Point &w, const std::vector<double> &radii,
                             const GreenOracle &green, int angles, double spread_bound) {
  PoleFit fit;
  fit.w = w;
  fit.radii = radii;
  for (double t : radii) {
    double lmin = kInf, lmax = -kInf, hmin = kInf, hmax = -kInf;
    for (const auto &z : annulus_points(w, t, angles)) {
      auto b = green(z);
      double lt = std::log(t);
      lmin = std::min(lmin, b.lo - lt);
      lmax = std::max(lmax, b.lo - lt);
      hmin = std::min(hmin, b.hi - lt);
      hmax = std::max(hmax, b.hi - lt);
    }
    fit.lo_min.push_back(lmin);
    fit.lo_max.push_back(lmax);
    fit.hi_min.push_back(hmin);
    fit.hi_max.push_back(hmax);
  }
  const std::size_t K = radii.size();
  const std::size_t first = K > 4 ? K - 4 : 0;
  double lo_a = kInf, lo_b = -kInf, hi_a = kInf, hi_b = -kInf;
  for (std::size_t k = first; k < K; ++k) {
    lo_a = std::min(lo_a, fit.lo_min[k]);
    lo_b = std::max(lo_b, fit.lo_min[k]);
    hi_a = std::min(hi_a, fit.hi_max[k]);
    hi_b = std::max(hi_b, fit.hi_max[k]);
  }
  fit.c1 = lo_a;
  fit.c2 = hi_b;
  bool hi_ok = std::isfinite(hi_a) && std::isfinite(hi_b) && hi_b - hi_a <= spread_bound;
  bool lo_ok = std::isfinite(lo_a) && std::isfinite(lo_b) && lo_b - lo_a <= spread_bound;
  // Radii decrease, so growth of hi - log t towards the pole shows as the
  // last annulus holding the maximum.
  bool hi_grows = !std::isfinite(hi_b) ||
                  (hi_b - hi_a > spread_bound && fit.hi_max[K - 1] >= hi_b);
  if (hi_ok && lo_ok)
    fit.classification = PoleClass::Strict;
  else if (hi_ok)
    fit.classification = PoleClass::LogarithmicOnly;
  else if (hi_grows)
    fit.classification = PoleClass::NoPole;
  else
    fit.classification = PoleClass::Inconclusive;
  return fit;
}

/// Radii t_k = 10^(-1 - k/2), scaled down when the largest sphere does not
/// fit in the domain.
inline std::vector<double> pole_radii(const DomainPtr &dp, const Point &w, int annuli) {
  double reach = kInf;
  for (const auto &e : sphere_directions(w.dim(), w.dim() == 1 ? 1 : 16))
    for (int a = 0; a < 4; ++a)
      reach = std::min(reach, max_slice_radius(*dp, w, e * std::polar(1.0, kPi * a / 2), 0.0));
  if (!(reach > 0))
    throw InfeasibleError("no annuli fit around the pole");
  double t0 = std::min(0.1, 0.5 * reach);
  std::vector<double> r;
  for (int k = 0; k < annuli; ++k)
    r.push_back(t0 * std::pow(10.0, -k / 2.0));
  return r;
}

inline PoleFit classify_pole(const DomainPtr &dp, const Point &w, const RunConfig &cfg) {
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  auto radii = pole_radii(dp, w, cfg.budget.annuli);
  return classify_pole(
      w, radii, [&](const Point &z) { return green_interval(dp, z, w, cfg); },
      cfg.budget.angles, cfg.tol.spread_bound);
}

// ---------------------------------------------------------------------------
// Glued competitor
// ---------------------------------------------------------------------------

/**
 * Pieces: with u = ||z - c||^2 - R^2 (c, R from the bounding ball), h the
 * affine part of the Taylor expansion of u at w raised by a0 = r^2 / 2, and
 * B = B(w, r), U = B(w, s):
 *   v = g_B + h/d on U,  max{g_B + h/d, u/d} on B \ U,  u/d outside B.
 * Since u - h = ||z - w||^2 - a0, u > h on the sphere of B and u < h on U;
 * d log(s/r) > a/4 with a = -a0 keeps the first term dominant near the
 * sphere of U, so the pieces glue continuously.
 */
struct GluedCompetitor {
  Point w;
  Point ball_center;
  double r = 0, s = 0, d = 0, a = 0;
  ScalarField u, h, field;
  double seam_jump = 0;
  bool negative_on_sample = false;
  double pole_spread = kInf; ///< spread of v - log||z - w|| on small annuli
};

inline GluedCompetitor glue_competitor(const DomainPtr &dp, const Point &w,
                                       const RunConfig &cfg) {
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  GluedCompetitor gc;
  gc.w = w;
  auto bb = bounding_ball(*dp);
  Point c = bb.center;
  double R2 = bb.radius * bb.radius;
  gc.u = ScalarField::leaf("bounded_strictly_psh", FieldKind::StrictlyPsh,
                           [c, R2](const Point &z) { return (z - c).norm_sq() - R2; });
  gc.u.levi = [](const Point &, const Point &e) { return e.norm_sq(); };

  double reach = kInf;
  for (const auto &e : sphere_directions(w.dim(), w.dim() == 1 ? 1 : 32))
    for (int a = 0; a < 4; ++a)
      reach = std::min(reach, max_slice_radius(*dp, w, e * std::polar(1.0, kPi * a / 2), 0.0));
  if (!(reach > 0))
    throw InfeasibleError("no admissible ball around the pole");
  const double r = 0.9 * reach;
  const double a0 = r * r / 2;
  const double s = 0.4 * r;
  const double a = -a0;
  const double d = 0.9 * a / (4 * std::log(s / r));
  if (!(d * std::log(s / r) > a / 4) || !(d > 0))
    throw InfeasibleError("no admissible scale for the gluing");
  gc.r = r;
  gc.s = s;
  gc.d = d;
  gc.a = a;
  gc.ball_center = w;
  const double uw = gc.u(w);
  Point grad = w - c;
  gc.h = ScalarField::leaf("affine_taylor_part", FieldKind::Pluriharmonic,
                           [uw, grad, w, a0](const Point &z) {
                             return uw + a0 + 2 * inner(z - w, grad).real();
                           });
  gc.h.levi = [](const Point &, const Point &) { return 0.0; };
  auto gB = ball_green_field(w, r, w, "coordinate_ball_green");

  auto inner_piece = [gB, h = gc.h, d](const Point &z) { return gB(z) + h(z) / d; };
  auto outer_piece = [u = gc.u, d](const Point &z) { return u(z) / d; };
  auto eval = [inner_piece, outer_piece, w, r, s](const Point &z) {
    double t = distance(z, w);
    if (t < s)
      return inner_piece(z);
    if (t < r)
      return std::max(inner_piece(z), outer_piece(z));
    return outer_piece(z);
  };
  ScalarField v;
  v.name = "glued_competitor";
  v.kind = FieldKind::Glued;
  v.parts = {gB, gc.h, ScalarField::scaled("u_over_d", 1.0 / d, gc.u)};
  v.pole = w;
  v.eval = eval;
  gc.field = v;

  // Seams: compare the formulas on either side at points of both spheres.
  std::mt19937_64 rng(stream_seed(cfg.seed, 0x61ULL));
  double jump = 0;
  for (int k = 0; k < 1000; ++k) {
    Point e = detail::random_unit_sphere(w.dim(), rng);
    Point p = w + e * s, q = w + e * r;
    jump = std::max(jump, std::abs(inner_piece(p) - std::max(inner_piece(p), outer_piece(p))));
    jump = std::max(jump, std::abs(std::max(inner_piece(q), outer_piece(q)) - outer_piece(q)));
  }
  gc.seam_jump = jump;
  gc.negative_on_sample = check_competitor(dp, v, w, stream_seed(cfg.seed, 0x62ULL)).accepted;
  double lo = kInf, hi = -kInf;
  for (int k = 3; k <= 6; ++k) {
    double t = s * std::pow(10.0, -k);
    for (const auto &z : annulus_points(w, t, 8)) {
      double x = v(z) - std::log(t);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  gc.pole_spread = hi - lo;
  return gc;
}

// ---------------------------------------------------------------------------
// Ratio test
// ---------------------------------------------------------------------------

struct RatioResult {
  double delta_found = 0;  ///< largest scheduled delta with deviation <= eps; 0 if none
  double max_deviation = kInf;
  std::vector<double> deltas;
  std::vector<double> deviations;
};

/// Fixed test points: a sample of the domain at distance >= x_radius from w0.
inline std::vector<Point> ratio_sample(const DomainPtr &dp, const Point &w0, double x_radius,
                                       std::uint64_t seed, int count = 200) {
  std::vector<Point> out;
  for (const auto &p : sample_points(*dp, count, seed))
    if (distance(p, w0) >= x_radius)
      out.push_back(p);
  return out;
}

/**
 * @brief max over z in the sample and w on the sphere ||w - w0|| = delta of
 * |g(z, w0)/g(z, w) - 1|, for delta = 0.2 * 2^-k.
 *
 * Closed forms are used where available; otherwise interval midpoints, with
 * half the interval widths propagated into the deviation.
 */
inline RatioResult ratio_test(const DomainPtr &dp, const Point &w0, double x_radius,
                              const RunConfig &cfg) {
  if (!(contains(*dp, w0) > 0))
    throw InputError("base pole outside the domain");
  auto zs = ratio_sample(dp, w0, x_radius, stream_seed(cfg.seed, 0x7A7ULL));
  auto value = [&](const Point &z, const Point &w) -> std::pair<double, double> {
    if (auto cf = closed_form_green(*dp, z, w))
      return {*cf, 0.0};
    auto b = green_interval(dp, z, w, cfg);
    return {0.5 * (b.lo + b.hi), 0.5 * b.width()};
  };
  RatioResult res;
  std::vector<std::pair<double, double>> base;
  for (const auto &z : zs)
    base.push_back(value(z, w0));
  for (int k = 0; k <= 10; ++k) {
    double delta = 0.2 * std::ldexp(1.0, -k);
    double dev = 0;
    for (const auto &pw : annulus_points(w0, delta, 8)) {
      if (!(margin_unchecked(*dp, pw) > 0))
        continue;
      for (std::size_t i = 0; i < zs.size(); ++i) {
        auto [g0, e0] = base[i];
        auto [g1, e1] = value(zs[i], pw);
        double ratio = g0 / g1;
        // |d(g0/g1)| <= e0/|g1| + |g0| e1 / g1^2
        double err = e0 / std::abs(g1) + std::abs(g0) * e1 / (g1 * g1);
        dev = std::max(dev, std::abs(ratio - 1) + err);
      }
    }
    res.deltas.push_back(delta);
    res.deviations.push_back(dev);
    if (dev <= cfg.tol.eps && delta > res.delta_found) {
      res.delta_found = delta;
      res.max_deviation = dev;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustion
// ---------------------------------------------------------------------------

struct ExhaustionLevel {
  double level = 0;
  double min_margin = kInf; ///< smallest domain margin on the sampled level set
};

struct ExhaustionReport {
  std::vector<ExhaustionLevel> levels;
  double b = 0;             ///< g >= b u recipe constant
  double alpha = 0;         ///< min of the lower bound on the small sphere
  double u_max = 0;         ///< max of u on the small sphere
  int comparisons = 0;
  double worst_gap = kInf;  ///< min over samples of g_lo - b u
};

/**
 * For each level a and each ray w + rho e, the slice disk of radius R_e
 * centred at w (certified) gives g(w + rho e, w) <= log(rho / R_e), so the
 * point rho = R_e e^a lies in {g < a} (closed forms locate the level set
 * exactly instead); the smallest domain margin among
 * these points is reported. Then b = 1.01 alpha / m from the small sphere
 * about w, and g_lo >= b u is checked on a sample, g_lo from the competitor
 * and Carathéodory routes.
 */
inline ExhaustionReport exhaustion_check(const DomainPtr &dp, const Point &w,
                                         const std::vector<double> &levels,
                                         const RunConfig &cfg, int rays = 16) {
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  auto lo_of = [&](const Point &z) {
    if (auto cf = closed_form_green(*dp, z, w))
      return *cf;
    double lo = psh_lower_bound(dp, z, w, {}, true, stream_seed(cfg.seed, 0x95ULL)).lo;
    return std::max(lo, caratheodory_bound(dp, z, w, cfg).lo);
  };
  ExhaustionReport rep;
  const int nph = w.dim() == 1 ? 8 : 2;
  std::vector<Point> dirs;
  for (const auto &d : sphere_directions(w.dim(), w.dim() == 1 ? 1 : rays))
    for (int ph = 0; ph < nph; ++ph)
      dirs.push_back(d * std::polar(1.0, 2 * kPi * ph / nph));
  std::vector<double> reach;
  for (const auto &e : dirs) {
    double R = max_slice_radius(*dp, w, e, 0.0);
    for (int attempt = 0; attempt < 40 && R > 0; ++attempt) {
      auto cert = certify_curve(
          *dp, [&](cplx t) { return w + e * t; }, R, 1.0, cfg.budget);
      if (cert.valid())
        break;
      R *= 1 - std::ldexp(1.0, -20 + attempt / 2);
    }
    reach.push_back(R);
  }
  for (double a : levels) {
    if (!(a < 0))
      throw InputError("exhaustion levels must be negative");
    ExhaustionLevel L{a, kInf};
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      double rho = reach[i] * std::exp(a);
      if (closed_form_green(*dp, w + dirs[i] * rho, w)) {
        // Exact level set by bisection on the closed form.
        double lo = 0, hi = reach[i];
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (lo + hi);
          (*closed_form_green(*dp, w + dirs[i] * mid, w) < a ? lo : hi) = mid;
        }
        rho = lo;
      }
      L.min_margin = std::min(L.min_margin, margin_unchecked(*dp, w + dirs[i] * rho));
    }
    rep.levels.push_back(L);
  }
  auto ex = defining_psh(dp);
  if (ex.empty())
    return rep;
  const ScalarField &u = ex.front();
  double rho = 0.1 * *std::min_element(reach.begin(), reach.end());
  double alpha = kInf, m = -kInf;
  for (const auto &z : annulus_points(w, rho, 8)) {
    alpha = std::min(alpha, lo_of(z));
    m = std::max(m, u(z));
  }
  rep.alpha = alpha;
  rep.u_max = m;
  if (!(m < 0) || !std::isfinite(alpha))
    return rep;
  rep.b = 1.01 * alpha / m;
  for (const auto &p : sample_points(*dp, 64, stream_seed(cfg.seed, 0xE7ULL))) {
    if (distance(p, w) <= rho)
      continue;
    rep.worst_gap = std::min(rep.worst_gap, lo_of(p) - rep.b * u(p));
    ++rep.comparisons;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Continuity scan
// ---------------------------------------------------------------------------

enum class ContinuityVerdict { Converges, DiscontinuityWitness, Inconclusive };

inline const char *to_string(ContinuityVerdict v) {
  switch (v) {
  case ContinuityVerdict::Converges: return "CONVERGES";
  case ContinuityVerdict::DiscontinuityWitness: return "DISCONTINUITY WITNESS";
  case ContinuityVerdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

struct ContinuityReport {
  std::vector<BoundInterval> path;
  BoundInterval limit;
  double limsup_hi = -kInf;
  double gap = 0;         ///< limit lo minus limsup of hi along the tail
  double widths = 0;      ///< limit width plus the largest tail width
  ContinuityVerdict verdict = ContinuityVerdict::Inconclusive;
};

/**
 * Tail = last half of the path (at least one point). A witness needs a
 * positive gap with widths summing to less than a quarter of log 2.
 */
inline ContinuityReport continuity_scan(const DomainPtr &dp,
                                        const std::vector<std::pair<Point, Point>> &path,
                                        const Point &z0, const Point &w0,
                                        const RunConfig &cfg, double window = 0.05) {
  if (path.empty())
    throw InputError("empty path");
  ContinuityReport rep;
  for (const auto &[z, w] : path)
    rep.path.push_back(green_interval(dp, z, w, cfg));
  rep.limit = green_interval(dp, z0, w0, cfg);
  const std::size_t n = rep.path.size();
  const std::size_t first = n / 2;
  double max_w = 0;
  bool inside = true;
  for (std::size_t j = first; j < n; ++j) {
    const auto &b = rep.path[j];
    rep.limsup_hi = std::max(rep.limsup_hi, b.hi);
    max_w = std::max(max_w, b.width());
    inside = inside && b.lo >= rep.limit.lo - window && b.hi <= rep.limit.hi + window;
  }
  rep.gap = rep.limit.lo - rep.limsup_hi;
  rep.widths = rep.limit.width() + max_w;
  bool both_pole = rep.limit.hi == -kInf && rep.limsup_hi == -kInf;
  if (both_pole || inside)
    rep.verdict = ContinuityVerdict::Converges;
  else if (rep.gap > 0 && rep.widths < 0.25 * std::log(2.0))
    rep.verdict = ContinuityVerdict::DiscontinuityWitness;
  return rep;
}

/// The path z_j = (1/2, c_j/2) towards (1/2, 0) with pole 0 on the sublevel model.
inline std::vector<std::pair<Point, Point>> sublevel_discontinuity_path(const DomainPtr &dp) {
  const auto *s = dp->as<SublevelDcg>();
  if (!s)
    throw InputError("the discontinuity path is defined on the sublevel model");
  std::vector<std::pair<Point, Point>> path;
  for (double c : s->slopes)
    path.emplace_back(Point(0.5, 0.5 * c), Point(0.0, 0.0));
  return path;
}

} // namespace pluri
