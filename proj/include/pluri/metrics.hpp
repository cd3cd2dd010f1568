/**
 * @file metrics.hpp
 * @brief Azukawa function, directional capacities against a Hermitian
 * metric, Bergman constants of the ball and polydisk, the Suita check on the
 * disk, and the derivative bound for analytic disks.
 */
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pluri/bound_engine.hpp"

namespace pluri {

// ---------------------------------------------------------------------------
// Hermitian metrics
// ---------------------------------------------------------------------------

enum class MetricTag { Euclidean, BergmanBall, BergmanPolydisk };

inline const char *to_string(MetricTag t) {
  switch (t) {
  case MetricTag::Euclidean: return "euclidean";
  case MetricTag::BergmanBall: return "bergman_ball";
  case MetricTag::BergmanPolydisk: return "bergman_polydisk";
  }
  return "unknown";
}

/**
 * Bergman metrics are those of the unit ball and unit polydisk of C^m; `scale`
 * multiplies the quadratic form H, so norms scale by its square root.
 */
struct HermitianMetric {
  MetricTag tag = MetricTag::Euclidean;
  int m = 1;
  double scale = 1.0;

  double quadratic(const Point &w, const Point &v) const {
    w.require_same(v);
    double h = 0;
    switch (tag) {
    case MetricTag::Euclidean:
      h = v.norm_sq();
      break;
    case MetricTag::BergmanBall: {
      double d = 1 - w.norm_sq();
      h = (m + 1) * (v.norm_sq() * d + std::norm(inner(v, w))) / (d * d);
      break;
    }
    case MetricTag::BergmanPolydisk:
      for (int j = 0; j < v.dim(); ++j)
        h += 2 * std::norm(v[j]) / std::pow(1 - std::norm(w[j]), 2);
      break;
    }
    return scale * h;
  }
  double norm(const Point &w, const Point &v) const { return std::sqrt(quadratic(w, v)); }

  std::string name() const {
    std::ostringstream os;
    os << to_string(tag);
    if (tag != MetricTag::Euclidean)
      os << "{" << m << "}";
    if (scale != 1.0)
      os << "*" << scale;
    return os.str();
  }
};

inline HermitianMetric euclidean_metric(double scale = 1.0) {
  return {MetricTag::Euclidean, 1, scale};
}
inline HermitianMetric bergman_ball_metric(int m) { return {MetricTag::BergmanBall, m, 1.0}; }
inline HermitianMetric bergman_polydisk_metric(int m) {
  return {MetricTag::BergmanPolydisk, m, 1.0};
}

// ---------------------------------------------------------------------------
// Azukawa function
// ---------------------------------------------------------------------------

struct AzukawaResult {
  double lo = -kInf;       ///< min over the tail radii of the per-radius max of lo - log t
  double hi = kInf;        ///< max over the tail radii of the per-radius max of hi - log t
  double estimate = 0;     ///< intercept at t = 0 of a linear fit of the tail midpoints
  std::vector<double> radii;
  std::vector<double> lo_by_radius, hi_by_radius;
  Provenance provenance = Provenance::Estimate;
  double width() const { return hi - lo; }
};

/// Unit vector with the largest coordinate real and positive, so that v and
/// alpha v share their representative and homogeneity holds exactly.
inline Point canonical_direction(const Point &v) {
  double n = v.norm();
  if (!(n > 0))
    throw InputError("direction vector must be nonzero");
  int k = 0;
  for (int i = 1; i < v.dim(); ++i)
    if (std::abs(v[i]) > std::abs(v[k]) * (1 + 1e-12))
      k = i;
  cplx phase = std::abs(v[k]) > 0 ? std::conj(v[k]) / std::abs(v[k]) : cplx(1.0);
  return v * (phase / n);
}

/**
 * @brief Interval for A(w, v) along the linear jet z = w + t e^{i theta} v.
 *
 * Radii t_k = t0 2^-k, k < annuli, and `angles` equispaced angles. The tail
 * is the last four radii (or all when fewer).
 */
inline AzukawaResult azukawa(const DomainPtr &dp, const Point &w, const Point &v,
                             const RunConfig &cfg) {
  require_inside(*dp, w);
  Point e = canonical_direction(v);
  double reach = max_slice_radius(*dp, w, e, 0.0);
  if (!(reach > 0))
    throw InfeasibleError("no disk around the base point along v");
  double t0 = 0.25 * std::min(reach, 1.0);
  const int K = cfg.budget.annuli, na = cfg.budget.angles;
  AzukawaResult out;
  bool all_closed = true;
  for (int k = 0; k < K; ++k) {
    double t = std::ldexp(t0, -k);
    double lo_k = -kInf, hi_k = -kInf;
    for (int a = 0; a < na; ++a) {
      Point z = w + e * std::polar(t, 2 * kPi * a / na);
      if (!(margin_unchecked(*dp, z) > 0))
        throw InfeasibleError("Azukawa radii leave the domain");
      auto b = green_interval(dp, z, w, cfg);
      all_closed = all_closed && b.lo_provenance == Provenance::ClosedForm &&
                   b.hi_provenance == Provenance::ClosedForm;
      lo_k = std::max(lo_k, b.lo - std::log(t));
      hi_k = std::max(hi_k, b.hi - std::log(t));
    }
    out.radii.push_back(t);
    out.lo_by_radius.push_back(lo_k);
    out.hi_by_radius.push_back(hi_k);
  }
  const int tail = std::min(4, K);
  double lo = kInf, hi = -kInf;
  double st = 0, sv = 0, stt = 0, stv = 0;
  for (int k = K - tail; k < K; ++k) {
    auto ku = static_cast<std::size_t>(k);
    lo = std::min(lo, out.lo_by_radius[ku]);
    hi = std::max(hi, out.hi_by_radius[ku]);
    double mid = std::isfinite(out.lo_by_radius[ku])
                     ? 0.5 * (out.lo_by_radius[ku] + out.hi_by_radius[ku])
                     : out.hi_by_radius[ku];
    double t = out.radii[ku];
    st += t;
    sv += mid;
    stt += t * t;
    stv += t * mid;
  }
  double den = tail * stt - st * st;
  out.estimate = tail > 1 && den > 0 ? (stt * sv - st * stv) / den : sv / tail;
  double lv = std::log(v.norm());
  out.lo = lo + lv;
  out.hi = hi + lv;
  out.estimate += lv;
  out.provenance = all_closed ? Provenance::ClosedForm : Provenance::Estimate;
  return out;
}

// ---------------------------------------------------------------------------
// Directional capacities
// ---------------------------------------------------------------------------

/// Deterministic low-discrepancy directions: |v1|^2 uniform in (0, 1) and a
/// golden-ratio relative phase, which samples the projective line uniformly.
inline std::vector<Point> sphere_directions(int n, int count) {
  if (n == 1)
    return {Point(1.0)};
  std::vector<Point> out;
  const double golden = (1 + std::sqrt(5.0)) / 2;
  for (int k = 0; k < count; ++k) {
    double x = (k + 0.5) / count;
    double phi = 2 * kPi * std::fmod(k / golden, 1.0);
    out.emplace_back(std::sqrt(x), std::polar(std::sqrt(1 - x), phi));
  }
  return out;
}

struct SigmaEstimate {
  double inf_lo = kInf, inf_hi = kInf;   ///< sigma_i enclosure as sampled
  double sup_lo = -kInf, sup_hi = -kInf; ///< sigma_s enclosure as sampled
  int directions = 0;
  std::string metric;
  std::vector<double> per_direction_lo, per_direction_hi;
};

inline SigmaEstimate sigma_estimates(const DomainPtr &dp, const Point &w,
                                     const HermitianMetric &H, const RunConfig &cfg) {
  SigmaEstimate s;
  s.metric = H.name();
  for (const auto &d : sphere_directions(w.dim(), cfg.budget.directions)) {
    Point v = d / H.norm(w, d);
    auto a = azukawa(dp, w, v, cfg);
    double lh = std::log(H.norm(w, v));
    s.per_direction_lo.push_back(a.lo - lh);
    s.per_direction_hi.push_back(a.hi - lh);
    s.inf_lo = std::min(s.inf_lo, a.lo - lh);
    s.inf_hi = std::min(s.inf_hi, a.hi - lh);
    s.sup_lo = std::max(s.sup_lo, a.lo - lh);
    s.sup_hi = std::max(s.sup_hi, a.hi - lh);
    ++s.directions;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Bergman constants
// ---------------------------------------------------------------------------

struct BergmanConstants {
  std::string domain;
  int m = 1;
  double coefficient = 0;  ///< B(0, v) = coefficient * ||v||_E^2 (ball)
  double norm_factor = 0;  ///< ||v||_B = norm_factor * ||v||_E at 0 (ball; coordinate vectors for the polydisk)
  double sigma_s = 0;
  double sigma_i = 0;
  /// Infimum obtained from the metric 2 sum |v_j|^2 and A(0, v) = log max|v_j|;
  /// agrees with sigma_i at m = 2 only.
  double sigma_i_derived = 0;
  /// Bergman distance from the origin in the closed form norm_factor * log((1 + r) / (1 - r)).
  std::function<double(const Point &)> distance_from_origin;
  /// The same distance integrated from the metric; on the ball it is half of the closed form above.
  std::function<double(const Point &)> distance_from_origin_derived;
};

inline BergmanConstants bergman_constants(const std::string &domain, int m) {
  if (m < 1)
    throw InputError("dimension must be positive");
  BergmanConstants c;
  c.domain = domain;
  c.m = m;
  if (domain == "ball") {
    c.coefficient = m + 1;
    c.norm_factor = std::sqrt(m + 1.0);
    c.sigma_s = c.sigma_i = c.sigma_i_derived = -std::log(std::sqrt(m + 1.0));
    double f = c.norm_factor;
    c.distance_from_origin = [f](const Point &z) {
      double r = z.norm();
      return f * std::log((1 + r) / (1 - r));
    };
    c.distance_from_origin_derived = [f](const Point &z) {
      double r = z.norm();
      return 0.5 * f * std::log((1 + r) / (1 - r));
    };
  } else if (domain == "polydisk") {
    c.coefficient = 2;
    c.norm_factor = std::sqrt(2.0);
    c.sigma_s = -std::log(std::sqrt(2.0));
    c.sigma_i = -std::log(static_cast<double>(m));
    c.sigma_i_derived = -std::log(std::sqrt(2.0 * m));
    auto dist = [](const Point &z) {
      double s = 0;
      for (int j = 0; j < z.dim(); ++j) {
        double r = std::abs(z[j]);
        double dj = std::sqrt(2.0) * 0.5 * std::log((1 + r) / (1 - r));
        s += dj * dj;
      }
      return std::sqrt(s);
    };
    c.distance_from_origin = dist;
    c.distance_from_origin_derived = dist;
  } else {
    throw InputError("Bergman constants are available for 'ball' and 'polydisk'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Suita inequality on the disk
// ---------------------------------------------------------------------------

/// Bergman kernel density of the unit disk on the diagonal from the
/// orthonormal basis sqrt((k+1)/pi) z^k.
inline double disk_bergman_density(cplx w) {
  double r2 = std::norm(w);
  if (!(r2 < 1))
    throw InputError("point outside the unit disk");
  double s = 0, term = 1;
  for (int k = 0; k < 100000; ++k) {
    double add = (k + 1) * term;
    s += add;
    if (add < 1e-17 * s)
      break;
    term *= r2;
  }
  return s / kPi;
}

struct SuitaResult {
  double lhs = 0;  ///< sigma_s hi
  double rhs = 0;  ///< log sqrt(pi alpha)
  bool holds = false;
};

inline SuitaResult suita_check(const DomainPtr &dp, cplx w, const HermitianMetric &H,
                               const RunConfig &cfg, double tol = 0.05) {
  const auto *b = dp->as<Ball>();
  if (!b || b->center.dim() != 1 || b->center[0] != 0.0 || b->radius != 1.0)
    throw InputError("the Suita check runs on the unit disk");
  Point wp(w);
  SuitaResult r;
  r.lhs = sigma_estimates(dp, wp, H, cfg).sup_hi;
  double alpha = disk_bergman_density(w) / H.quadratic(wp, Point(1.0));
  r.rhs = std::log(std::sqrt(kPi * alpha));
  r.holds = r.lhs <= r.rhs + tol;
  return r;
}

// ---------------------------------------------------------------------------
// Derivative bound
// ---------------------------------------------------------------------------

struct DerivativeCheck {
  double max_violation = -kInf; ///< max of ||f'(0)||_H - exp(-sigma_i lo)
  double bound = 0;             ///< exp(-sigma_i lo)
  double max_derivative = 0;
  int trials = 0;
};

/**
 * Random cubic disks f(t) = w + lambda (v t + a t^2 + b t^3), with lambda the
 * largest value (by bisection) for which containment certifies.
 */
inline DerivativeCheck derivative_bound_check(const DomainPtr &dp, const Point &w,
                                              const HermitianMetric &H, int trials,
                                              const RunConfig &cfg) {
  DerivativeCheck out;
  auto sig = sigma_estimates(dp, w, H, cfg);
  out.bound = std::exp(-sig.inf_lo);
  const int n = w.dim();
  std::mt19937_64 rng(stream_seed(cfg.seed, 0xDE12ULL));
  std::normal_distribution<double> g(0.0, 1.0);
  auto rand_point = [&] {
    Point p = Point::zeros(n);
    for (int i = 0; i < n; ++i)
      p[i] = cplx(g(rng), g(rng));
    return p;
  };
  for (int k = 0; k < trials; ++k) {
    Point v = rand_point();
    v = v / v.norm();
    Point a = rand_point() * 0.3, c = rand_point() * 0.1;
    auto curve_at = [&](double lam) {
      return [&, lam](cplx t) { return w + (v * t + a * (t * t) + c * (t * t * t)) * lam; };
    };
    auto ok = [&](double lam) {
      double deriv = lam * (1 + 2 * a.norm() + 3 * c.norm());
      return certify_curve(*dp, curve_at(lam), 1.0, deriv, cfg.budget).valid();
    };
    double lo = 0, hi = 2 * bounding_ball(*dp).radius + 1;
    for (int it = 0; it < 30; ++it) {
      double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    if (!(lo > 0))
      continue;
    double d = H.norm(w, v * lo);
    out.max_derivative = std::max(out.max_derivative, d);
    out.max_violation = std::max(out.max_violation, d - out.bound);
    ++out.trials;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Directional samples
// ---------------------------------------------------------------------------

struct DirectionalSample {
  Point w, v;
  double a_lo = 0, a_hi = 0, r_hi = 0;
};

inline DirectionalSample directional_sample(const DomainPtr &dp, const Point &w,
                                            const Point &v, const RunConfig &cfg) {
  DirectionalSample s{w, v, 0, 0, 0};
  auto a = azukawa(dp, w, v, cfg);
  s.a_lo = a.lo;
  s.a_hi = a.hi;
  s.r_hi = royden_bound(dp, Direction(w, v), cfg).hi;
  return s;
}

inline std::string csv_header_directional() { return "w,v,A_lo,A_hi,R_hi"; }

} // namespace pluri
