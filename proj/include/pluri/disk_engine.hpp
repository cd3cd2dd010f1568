/**
 * @file disk_engine.hpp
 * @brief Analytic disks into a domain: interpolating polynomial disks, image
 * containment certificates, the disk functional H_w, and searches producing
 * upper bounds for the Green, Kobayashi and Royden functions.
 *
 * A disk f with f(0) = z and f(t_j) = w for distinct t_j in the unit disk
 * gives g(z, w) <= sum_j log|t_j| as soon as f maps the closed disk into the
 * domain. Any subset of the preimages may be used, so undeclared preimages
 * found by root search only sharpen the bound.
 */
#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pluri/bounds.hpp"
#include "pluri/config.hpp"
#include "pluri/geometry.hpp"
#include "pluri/optimize.hpp"
#include "pluri/polynomial.hpp"

namespace pluri {

// ---------------------------------------------------------------------------
// Disks and certificates
// ---------------------------------------------------------------------------

enum class DiskMode { Green, Royden };

struct AnalyticDisk {
  std::vector<Poly> coords; ///< one polynomial per coordinate
  double radius = 1.0;
  std::vector<cplx> hits;   ///< declared preimages of `target`
  Point target;
  DiskMode mode = DiskMode::Green;

  int dim() const { return static_cast<int>(coords.size()); }
  int degree() const {
    int d = 0;
    for (const auto &c : coords)
      d = std::max(d, effective_degree(c));
    return d;
  }
  Point operator()(cplx t) const {
    Point p = Point::zeros(dim());
    for (int i = 0; i < dim(); ++i)
      p[i] = horner(coords[static_cast<std::size_t>(i)], t);
    return p;
  }
  Point derivative(cplx t) const {
    Point p = Point::zeros(dim());
    for (int i = 0; i < dim(); ++i)
      p[i] = horner_derivative(coords[static_cast<std::size_t>(i)], t);
    return p;
  }
  /// Bound on ||f'|| over the closed disk.
  double derivative_bound() const {
    double s = 0;
    for (const auto &c : coords) {
      double b = pluri::derivative_bound(c, radius);
      s += b * b;
    }
    return std::sqrt(s);
  }
};

/// Checked evaluation on the closed disk of the nominal radius.
inline Point evaluate_disk(const AnalyticDisk &f, cplx t) {
  if (std::abs(t) > f.radius * (1 + 1e-12))
    throw InputError("evaluation point lies outside the disk");
  return f(t);
}

inline AnalyticDisk constant_disk(const Point &z) {
  AnalyticDisk f;
  for (int i = 0; i < z.dim(); ++i)
    f.coords.push_back(Poly{z[i]});
  f.target = z;
  return f;
}

/**
 * @brief f = w + (z - w) l(t) + t prod_j (t - t_j) q(t), with l the Lagrange
 * basis polynomial equal to 1 at 0 and 0 at every t_j. Then f(0) = z and
 * f(t_j) = w exactly.
 */
inline AnalyticDisk interpolating_disk(const Point &z, const Point &w,
                                       const std::vector<cplx> &hits,
                                       const std::vector<Poly> &q = {}) {
  z.require_same(w);
  Poly ell = poly_from_roots(hits);
  cplx denom = 1.0;
  for (cplx h : hits)
    denom *= -h;
  for (auto &c : ell)
    c /= denom;
  Poly pi = poly_mul(Poly{0.0, 1.0}, poly_from_roots(hits));
  AnalyticDisk f;
  f.hits = hits;
  f.target = w;
  for (int i = 0; i < z.dim(); ++i) {
    Poly c = Poly{w[i]};
    Poly lin = ell;
    for (auto &x : lin)
      x *= (z[i] - w[i]);
    c = poly_add(c, lin);
    if (static_cast<std::size_t>(i) < q.size() && !q[static_cast<std::size_t>(i)].empty())
      c = poly_add(c, poly_mul(pi, q[static_cast<std::size_t>(i)]));
    f.coords.push_back(std::move(c));
  }
  return f;
}

/// f = w + lambda v t + t^2 q(t): a disk with prescribed 1-jet.
inline AnalyticDisk jet_disk(const Point &w, const Point &lambda_v,
                             const std::vector<Poly> &q = {}) {
  w.require_same(lambda_v);
  AnalyticDisk f;
  f.mode = DiskMode::Royden;
  f.target = w;
  for (int i = 0; i < w.dim(); ++i) {
    Poly c{w[i], lambda_v[i]};
    if (static_cast<std::size_t>(i) < q.size() && !q[static_cast<std::size_t>(i)].empty())
      c = poly_add(c, poly_mul(Poly{0.0, 0.0, 1.0}, q[static_cast<std::size_t>(i)]));
    f.coords.push_back(std::move(c));
  }
  return f;
}

struct ContainmentCertificate {
  int samples = 0;
  double min_slack = -kInf;
  std::string method = "none"; ///< boundary-only | full-disk grid
  bool lipschitz_corrected = false;
  bool valid() const { return min_slack > 0; }
};

namespace detail {
inline double clamp_margin(double m) {
  if (std::isnan(m))
    return -10.0;
  return std::clamp(m, -10.0, 10.0);
}
} // namespace detail

/**
 * @brief Certifies that a holomorphic curve maps the closed disk of radius r
 * into the domain.
 *
 * With plurisubharmonic defining functions only the boundary circle is
 * sampled (maximum principle). Otherwise a polar grid covers the whole disk.
 * When the margin has a Lipschitz constant L and ||f'|| <= D, the sampled
 * minimum is lowered by L D times the largest distance to a sample, so the
 * certificate covers every point; the sample count doubles until this
 * succeeds or the budget is spent.
 */
template <class Curve>
ContainmentCertificate certify_curve(const Domain &d, const Curve &f, double r,
                                     double deriv_bound, const SearchBudget &b) {
  ContainmentCertificate cert;
  const auto lip = margin_lipschitz(d);
  const bool use_lip = lip.has_value() && std::isfinite(deriv_bound);
  if (all_defining_psh(d)) {
    cert.method = "boundary-only";
    double prev = kInf;
    for (int m = b.boundary_samples; m <= b.max_boundary_samples; m *= 2) {
      double delta = kInf;
      for (int k = 0; k < m; ++k) {
        double th = 2 * kPi * k / m;
        delta = std::min(delta, margin_unchecked(d, f(std::polar(r, th))));
      }
      if (std::isnan(delta))
        delta = -kInf;
      cert.samples = m;
      if (use_lip) {
        double slack = delta - *lip * deriv_bound * (kPi * r / m);
        cert.min_slack = slack;
        cert.lipschitz_corrected = true;
        if (slack > 0 || delta <= 0)
          return cert;
      } else {
        // No Lipschitz control: require positivity at two resolutions.
        cert.min_slack = std::min(prev, delta);
        if (prev != kInf || delta <= 0)
          return cert;
        prev = delta;
      }
    }
    return cert;
  }
  cert.method = "full-disk grid";
  for (int scale = 1; scale <= 4; scale *= 2) {
    int nr = b.grid_radii * scale, na = b.grid_angles * scale;
    double delta = margin_unchecked(d, f(cplx(0.0)));
    for (int i = 1; i <= nr; ++i)
      for (int k = 0; k < na; ++k)
        delta = std::min(delta, margin_unchecked(
                                    d, f(std::polar(r * i / nr, 2 * kPi * k / na))));
    if (std::isnan(delta))
      delta = -kInf;
    cert.samples = (nr * na) + 1;
    if (!use_lip) {
      cert.min_slack = delta;
      return cert;
    }
    double h = r / (2.0 * nr) + kPi * r / na;
    cert.min_slack = delta - *lip * deriv_bound * h;
    cert.lipschitz_corrected = true;
    if (cert.min_slack > 0 || delta <= 0)
      return cert;
  }
  return cert;
}

inline ContainmentCertificate certify_containment(const Domain &d,
                                                  const AnalyticDisk &f,
                                                  const SearchBudget &b) {
  if (f.dim() != dim(d))
    throw DimensionError("disk and domain dimensions differ");
  return certify_curve(
      d, [&f](cplx t) { return f(t); }, f.radius, f.derivative_bound(), b);
}

// ---------------------------------------------------------------------------
// The disk functional
// ---------------------------------------------------------------------------

struct PoletskyValue {
  double value = kInf;
  bool certified = false;
  std::vector<cplx> preimages; ///< distinct preimages counted
  int undeclared = 0;
  std::string note;
};

/**
 * @brief H_w(f) = sum log(|t_j| / r) over distinct preimages of w.
 *
 * Declared hits are checked, then the coordinate of f - w of least positive
 * degree is factored through its companion matrix and each root inside the
 * disk at which every coordinate vanishes within `tol` is counted as well.
 */
inline PoletskyValue poletsky_functional(const AnalyticDisk &f, const Point &w,
                                         double tol = 1e-9) {
  f.target.require_same(w);
  PoletskyValue out;
  if (distance(f(0.0), w) < 1e-14)
    throw InputError("disk centre coincides with the pole");
  double scale = 1.0;
  for (const auto &c : f.coords)
    for (cplx a : c)
      scale = std::max(scale, std::abs(a));

  auto residual = [&](cplx t) { return distance(f(t), w); };

  for (cplx h : f.hits) {
    if (std::abs(h) >= f.radius)
      throw InputError("declared hit lies outside the open disk");
    if (residual(h) > 1e-12 * scale) {
      out.note = "declared hit does not map to w";
      return out;
    }
    bool dup = false;
    for (cplx p : out.preimages)
      dup = dup || std::abs(p - h) < 1e-9;
    if (!dup)
      out.preimages.push_back(h);
  }

  std::vector<Poly> diff = f.coords;
  int best = -1, best_deg = 1 << 30;
  for (int i = 0; i < f.dim(); ++i) {
    auto &p = diff[static_cast<std::size_t>(i)];
    if (p.empty())
      p.push_back(0.0);
    p[0] -= w[i];
    int deg = effective_degree(p, 1e-15);
    if (deg == 0) {
      // A nonzero constant coordinate: w is never attained.
      out.value = kInf;
      out.note = "no preimages";
      out.certified = out.preimages.empty();
      return out;
    }
    if (deg > 0 && deg < best_deg) {
      best_deg = deg;
      best = i;
    }
  }
  bool ambiguous = false;
  if (best >= 0) {
    std::vector<cplx> roots = poly_roots(diff[static_cast<std::size_t>(best)], 1e-15);
    for (cplx t : roots) {
      if (std::abs(t) >= f.radius * (1 - 1e-12))
        continue;
      double res = residual(t);
      if (res > tol * scale) {
        if (res < 1e-6 * scale)
          ambiguous = true;
        continue;
      }
      bool known = false;
      for (cplx p : out.preimages)
        known = known || std::abs(p - t) < 1e-6;
      if (!known) {
        out.preimages.push_back(t);
        ++out.undeclared;
      }
    }
  }
  double s = 0;
  for (cplx p : out.preimages)
    s += safe_log(std::abs(p) / f.radius);
  out.value = out.preimages.empty() ? kInf : s;
  out.certified = !ambiguous;
  if (ambiguous)
    out.note = "root localization inconclusive";
  return out;
}

// ---------------------------------------------------------------------------
// Line slices
// ---------------------------------------------------------------------------

namespace detail {

/// Disk {base + (c + rho e^{i th}) dir} contained in the domain, tested on
/// `samples` boundary points (PSH domains) or a coarse polar grid.
inline bool slice_disk_inside(const Domain &d, const Point &base,
                              const Point &dir, cplx c, double rho, int samples) {
  auto at = [&](cplx t) { return base + dir * t; };
  if (all_defining_psh(d)) {
    for (int k = 0; k < samples; ++k)
      if (!(margin_unchecked(d, at(c + std::polar(rho, 2 * kPi * k / samples))) > 0))
        return false;
    return true;
  }
  if (!(margin_unchecked(d, at(c)) > 0))
    return false;
  const int nr = 16;
  for (int i = 1; i <= nr; ++i)
    for (int k = 0; k < samples / 4; ++k)
      if (!(margin_unchecked(d, at(c + std::polar(rho * i / nr, 8 * kPi * k / samples))) > 0))
        return false;
  return true;
}

} // namespace detail

/// Largest rho (by bisection) with the disk of radius rho about c in the
/// slice t -> base + t dir inside the domain; 0 if c itself is outside.
inline double max_slice_radius(const Domain &d, const Point &base,
                               const Point &dir, cplx c, int samples = 256) {
  Point pc = base + dir * c;
  if (!(margin_unchecked(d, pc) > 0))
    return 0.0;
  BoundingBall bb = bounding_ball(d);
  double hi = (bb.radius + distance(pc, bb.center)) / dir.norm() * 1.01;
  double lo = 0;
  for (int it = 0; it < 60 && hi - lo > 1e-13 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (detail::slice_disk_inside(d, base, dir, c, mid, samples))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

struct SliceBound {
  double value = kInf;   ///< log of the pseudo-hyperbolic distance in the slice
  cplx center = 0;
  double radius = 0;
  Point origin, direction;
  ContainmentCertificate cert;
};

/// Pseudo-hyperbolic distance between a and b in the disk D(c, rho).
inline double disk_pseudo_distance(cplx a, cplx b, cplx c, double rho) {
  cplx x = (a - c) / rho, y = (b - c) / rho;
  return std::abs((x - y) / (1.0 - std::conj(y) * x));
}

/**
 * @brief Best disk inside the complex line through z and w.
 *
 * The line is t -> w + t (z - w). For a disk D(c, rho) of the line inside M
 * that contains t = 0 and t = 1, holomorphic decrease along the slice gives
 * g(z, w) <= k(z, w) <= log of the pseudo-hyperbolic distance of 1 and 0 in
 * D(c, rho). The centre is searched on a grid and refined by the simplex.
 */
inline SliceBound best_line_slice(const DomainPtr &dp, const Point &z,
                                  const Point &w, const SearchBudget &b) {
  const Domain &d = *dp;
  SliceBound best;
  Point dir = z - w;
  if (!(dir.norm() > 0))
    return best;
  auto value_at = [&](cplx c, double *rho_out) {
    double rho = max_slice_radius(d, w, dir, c);
    if (rho_out)
      *rho_out = rho;
    if (!(rho > std::max(std::abs(c), std::abs(1.0 - c))))
      return kInf;
    return safe_log(disk_pseudo_distance(1.0, 0.0, c, rho));
  };
  cplx best_c = 0;
  double best_v = kInf;
  for (double re : {-0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5})
    for (double im : {-0.5, 0.0, 0.5}) {
      double v = value_at(cplx(re, im), nullptr);
      if (v < best_v) {
        best_v = v;
        best_c = cplx(re, im);
      }
    }
  if (!std::isfinite(best_v))
    return best;
  auto obj = [&](const std::vector<double> &x) {
    return value_at(cplx(x[0], x[1]), nullptr);
  };
  auto res = nelder_mead(obj, {best_c.real(), best_c.imag()}, 0.1, 40, 1e-6);
  if (res.value < best_v)
    best_c = cplx(res.x[0], res.x[1]);

  double rho = 0;
  value_at(best_c, &rho);
  // Shrink until the certificate holds; the loss is logged in the value.
  for (int attempt = 0; attempt < 40; ++attempt) {
    if (!(rho > std::max(std::abs(best_c), std::abs(1.0 - best_c))))
      return best;
    Point origin = w + dir * best_c;
    auto curve = [&](cplx t) { return origin + dir * t; };
    auto cert = certify_curve(d, curve, rho, dir.norm(), b);
    if (cert.valid()) {
      best.value = safe_log(disk_pseudo_distance(1.0, 0.0, best_c, rho));
      best.center = best_c;
      best.radius = rho;
      best.origin = origin;
      best.direction = dir;
      best.cert = cert;
      return best;
    }
    rho *= 1 - std::ldexp(1.0, -20 + attempt / 2);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exact extremal disks of the model domains
// ---------------------------------------------------------------------------

struct ExtremalDisk {
  double value;                          ///< log |t| for the hit t
  cplx hit;
  std::function<Point(cplx)> map;        ///< holomorphic on a neighbourhood of the open disk
  std::string name;
};

/// Complex geodesics of balls and polydisks through z and w: disks f with
/// f(0) = z, f(t) = w and log t equal to the Green function, so the bound
/// they give is exact. Their boundary circle lies on the boundary of the
/// domain, so they certify the value as a limit of the dilates f(r t).
inline std::optional<ExtremalDisk> exact_geodesic(const Domain &d, const Point &z,
                                                  const Point &w) {
  if (const auto *b = d.as<Ball>()) {
    Point c = b->center;
    double r = b->radius;
    Point x = (z - c) / r, y = (w - c) / r;
    Point p = unit_ball_involution(y, x);
    double t = p.norm();
    if (!(t > 0) || !(t < 1))
      return std::nullopt;
    auto map = [c, r, p, t, y](cplx s) {
      Point a = p * (-(s - t) / (t * (1.0 - t * s)));
      return c + unit_ball_involution(y, a) * r;
    };
    return ExtremalDisk{std::log(t), cplx(t), map, "ball_geodesic"};
  }
  if (const auto *pd = d.as<Polydisk>()) {
    Polydisk m = *pd;
    const int n = z.dim();
    Point a = Point::zeros(n), y = Point::zeros(n);
    double t = 0;
    for (int j = 0; j < n; ++j) {
      double rj = m.radii[static_cast<std::size_t>(j)];
      cplx xj = (z[j] - m.center[j]) / rj;
      y[j] = (w[j] - m.center[j]) / rj;
      a[j] = (xj - y[j]) / (1.0 - std::conj(y[j]) * xj);
      t = std::max(t, std::abs(a[j]));
    }
    if (!(t > 0) || !(t < 1))
      return std::nullopt;
    auto map = [m, a, y, t, n](cplx s) {
      Point out = Point::zeros(n);
      for (int j = 0; j < n; ++j) {
        cplx h = -(a[j] / t) * (s - t) / (1.0 - t * s);
        cplx x = (h + y[j]) / (1.0 + std::conj(y[j]) * h);
        out[j] = m.center[j] + m.radii[static_cast<std::size_t>(j)] * x;
      }
      return out;
    };
    return ExtremalDisk{std::log(t), cplx(t), map, "polydisk_geodesic"};
  }
  return std::nullopt;
}

struct ExtremalJet {
  double lambda;                   ///< f'(0) = lambda v
  std::function<Point(cplx)> map;
  std::string name;
};

/// Extremal disks for the Royden function on balls and polydisks.
inline std::optional<ExtremalJet> exact_royden_disk(const Domain &d, const Point &w,
                                                    const Point &v) {
  if (const auto *b = d.as<Ball>()) {
    Point c = b->center;
    double r = b->radius;
    Point y = (w - c) / r, u = v / r;
    double y2 = y.norm_sq();
    double s = std::sqrt(1 - y2);
    Point pu = y2 > 0 ? y * (inner(u, y) / y2) : Point::zeros(u.dim());
    Point qu = u - pu;
    double lam = 1.0 / std::sqrt(pu.norm_sq() / std::pow(s, 4) + qu.norm_sq() / (s * s));
    // The differential of the involution at 0 is -(s^2 P + s Q).
    Point a = (pu / (s * s) + qu / s) * (-lam);
    auto map = [c, r, y, a](cplx t) { return c + unit_ball_involution(y, a * t) * r; };
    return ExtremalJet{lam, map, "ball_royden_disk"};
  }
  if (const auto *pd = d.as<Polydisk>()) {
    Polydisk m = *pd;
    const int n = w.dim();
    double lam = kInf;
    Point y = Point::zeros(n), u = Point::zeros(n);
    for (int j = 0; j < n; ++j) {
      double rj = m.radii[static_cast<std::size_t>(j)];
      y[j] = (w[j] - m.center[j]) / rj;
      u[j] = v[j] / rj;
      if (std::abs(u[j]) > 0)
        lam = std::min(lam, (1 - std::norm(y[j])) / std::abs(u[j]));
    }
    auto map = [m, y, u, lam, n](cplx t) {
      Point out = Point::zeros(n);
      for (int j = 0; j < n; ++j) {
        cplx bj = lam * u[j] / (1 - std::norm(y[j]));
        cplx h = bj * t;
        cplx x = (h + y[j]) / (1.0 + std::conj(y[j]) * h);
        out[j] = m.center[j] + m.radii[static_cast<std::size_t>(j)] * x;
      }
      return out;
    };
    return ExtremalJet{lam, map, "polydisk_royden_disk"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Polynomial disk search
// ---------------------------------------------------------------------------

struct DiskSearchResult {
  double value = kInf; ///< +inf: no certified disk within budget
  std::optional<AnalyticDisk> disk;
  ContainmentCertificate cert;
  std::string witness = "none";
  int certified_candidates = 0;
};

namespace detail {

inline constexpr double kHitRadius = 0.999;

inline cplx hit_from_param(double a, double b) {
  cplx p(a, b);
  double m = std::abs(p);
  return m > 0 ? p * (kHitRadius / (1 + m)) : cplx(0.0);
}
inline std::pair<double, double> param_from_hit(cplx t) {
  double m = std::abs(t);
  if (m <= 0)
    return {0.0, 0.0};
  m = std::min(m, kHitRadius * (1 - 1e-9));
  double pm = m / (kHitRadius - m);
  cplx p = t / std::abs(t) * pm;
  return {p.real(), p.imag()};
}

/// Points where the penalty inspects margins.
inline std::vector<cplx> penalty_nodes(const Domain &d, const SearchBudget &b) {
  std::vector<cplx> out;
  for (int k = 0; k < b.search_samples; ++k)
    out.push_back(std::polar(1.0, 2 * kPi * k / b.search_samples));
  if (!all_defining_psh(d))
    for (double r : {0.25, 0.5, 0.75, 0.9})
      for (int k = 0; k < 32; ++k)
        out.push_back(std::polar(r, 2 * kPi * (k + 0.5) / 32));
  return out;
}

inline std::vector<Poly> unpack_q(const std::vector<double> &x, std::size_t offset,
                                  int n, int len) {
  std::vector<Poly> q(static_cast<std::size_t>(n), Poly(static_cast<std::size_t>(std::max(len, 0)), 0.0));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < len; ++k) {
      std::size_t idx = offset + 2 * static_cast<std::size_t>(i * len + k);
      q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = cplx(x[idx], x[idx + 1]);
    }
  return q;
}

struct PenaltyEval {
  double penalty;
  bool feasible;
};

template <class Curve>
PenaltyEval penalty(const Domain &d, const Curve &f, const std::vector<cplx> &nodes,
                    double feas) {
  double pen = 0;
  bool ok = true;
  for (cplx t : nodes) {
    double m = clamp_margin(margin_unchecked(d, f(t)));
    if (m < feas) {
      ok = false;
      pen += feas - m;
    }
  }
  return {50.0 * pen, ok};
}

} // namespace detail

/**
 * @brief Multi-start simplex search over interpolating disks with `hits`
 * declared preimages of w and f(0) = z.
 *
 * Restart i draws its starting point from the stream (seed, i); the result is
 * the minimum over restarts, so more restarts never give a larger value.
 */
inline DiskSearchResult search_green_disks(const DomainPtr &dp, const Point &z,
                                           const Point &w, int hits,
                                           const RunConfig &cfg,
                                           std::uint64_t stream = 0,
                                           const std::optional<SliceBound> &slice = std::nullopt) {
  const Domain &d = *dp;
  const SearchBudget &b = cfg.budget;
  DiskSearchResult out;
  const int n = z.dim();
  const int qlen = std::max(0, b.degree - hits);
  const auto nodes = detail::penalty_nodes(d, b);

  const std::size_t nvar = 2 * static_cast<std::size_t>(hits) +
                           2 * static_cast<std::size_t>(n * qlen);
  const double qscale = distance(z, w);
  auto build = [&](const std::vector<double> &x) {
    std::vector<cplx> hs;
    for (int j = 0; j < hits; ++j)
      hs.push_back(detail::hit_from_param(x[2 * static_cast<std::size_t>(j)],
                                          x[2 * static_cast<std::size_t>(j) + 1]));
    auto q = detail::unpack_q(x, 2 * static_cast<std::size_t>(hits), n, qlen);
    return interpolating_disk(z, w, hs, q);
  };
  auto declared_value = [&](const AnalyticDisk &f) {
    double v = 0;
    std::vector<cplx> seen;
    for (cplx h : f.hits) {
      bool dup = false;
      for (cplx p : seen)
        dup = dup || std::abs(p - h) < 1e-6;
      if (dup)
        continue;
      seen.push_back(h);
      v += safe_log(std::abs(h));
    }
    return v;
  };

  auto pack = [&](const std::vector<cplx> &hs, const std::vector<Poly> &q) {
    std::vector<double> x(nvar, 0.0);
    for (int j = 0; j < hits; ++j) {
      auto [a, bb] = detail::param_from_hit(hs[static_cast<std::size_t>(j)]);
      x[2 * static_cast<std::size_t>(j)] = a;
      x[2 * static_cast<std::size_t>(j) + 1] = bb;
    }
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < qlen && k < static_cast<int>(q[static_cast<std::size_t>(i)].size()); ++k) {
        std::size_t idx = 2 * static_cast<std::size_t>(hits) + 2 * static_cast<std::size_t>(i * qlen + k);
        x[idx] = q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].real();
        x[idx + 1] = q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].imag();
      }
    return x;
  };

  std::vector<std::vector<double>> seeds;
  // Truncated Taylor polynomials of the best slice disk composed with a
  // Blaschke factor, dilated until the truncation stays feasible.
  SliceBound sl = slice ? *slice : best_line_slice(dp, z, w, b);
  if (std::isfinite(sl.value)) {
    const cplx xz = (1.0 - sl.center) / sl.radius, xw = -sl.center / sl.radius;
    const cplx lam = (xz - xw) / (1.0 - std::conj(xw) * xz);
    const double al = std::abs(lam);
    std::vector<double> psis = hits == 1 ? std::vector<double>{0.0}
                                         : std::vector<double>{kPi / 2, kPi / 4};
    for (double psi : psis) {
      std::vector<double> best_seed;
      double best_seed_v = kInf;
      for (double rr : {0.995, 0.98, 0.95, 0.9, 0.8}) {
        std::vector<cplx> hs;
        std::function<cplx(cplx)> u;
        if (hits == 1) {
          hs = {cplx(al / rr)};
          u = [lam, al](cplx t) { return -(lam / al) * (t - al) / (1.0 - al * t); };
        } else {
          cplx a = std::sqrt(al) * std::polar(1.0, psi), bb = std::sqrt(al) * std::polar(1.0, -psi);
          hs = {a / rr, bb / rr};
          u = [lam, al, a, bb](cplx t) {
            return (lam / al) * (t - a) * (t - bb) /
                   ((1.0 - std::conj(a) * t) * (1.0 - std::conj(bb) * t));
          };
        }
        bool ok = true;
        for (cplx h : hs)
          ok = ok && std::abs(h) < detail::kHitRadius;
        if (!ok)
          continue;
        auto G = [&](cplx t) {
          cplx y = u(rr * t);
          cplx x = (y + xw) / (1.0 + std::conj(xw) * y);
          return sl.origin + sl.direction * (sl.radius * x);
        };
        AnalyticDisk base = interpolating_disk(z, w, hs);
        Poly pi = poly_mul(Poly{0.0, 1.0}, poly_from_roots(hs));
        std::vector<Poly> q(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          Poly P = taylor_from_circle([&](cplx t) { return G(t)[i]; }, b.degree);
          Poly neg = base.coords[static_cast<std::size_t>(i)];
          for (auto &c : neg)
            c = -c;
          Poly diff = poly_add(P, neg);
          q[static_cast<std::size_t>(i)] = poly_div(diff, pi);
          q[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(qlen), 0.0);
        }
        auto x = pack(hs, q);
        AnalyticDisk f = build(x);
        auto pe = detail::penalty(d, f, nodes, cfg.tol.feasibility);
        double v = declared_value(f) + (pe.feasible ? 0.0 : 1e3 + pe.penalty);
        if (v < best_seed_v) {
          best_seed_v = v;
          best_seed = x;
        }
      }
      if (!best_seed.empty())
        seeds.push_back(best_seed);
    }
  }
  {
    // The linear disk t -> z + (w - z) t / s with the smallest s whose image
    // fits in the slice centred at z.
    double rho = max_slice_radius(d, z, w - z, 0.0);
    double s = rho > 1 ? std::min(0.95, 1.0 / rho * 1.001) : 0.9;
    std::vector<cplx> hs = hits == 1 ? std::vector<cplx>{cplx(s)}
                                     : std::vector<cplx>{cplx(std::sqrt(s)), cplx(-std::sqrt(s))};
    seeds.push_back(pack(hs, std::vector<Poly>(static_cast<std::size_t>(n))));
  }
  const int nseeds = static_cast<int>(seeds.size());

  for (int r = 0; r < b.restarts; ++r) {
    std::mt19937_64 rng(stream_seed(cfg.seed, stream * 1000003ULL + 17ULL * static_cast<std::uint64_t>(hits) + static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> start = seeds[static_cast<std::size_t>(r % nseeds)];
    if (r >= nseeds) {
      double amp = 0.05 * (1 + r % 4);
      for (std::size_t i = 0; i < start.size(); ++i)
        start[i] += (i < 2 * static_cast<std::size_t>(hits) ? amp : amp * qscale) * g(rng);
    }
    // When the certificate fails between penalty nodes, tighten the demanded
    // margin and continue from the last feasible point.
    std::vector<double> best_x;
    std::optional<AnalyticDisk> accepted;
    ContainmentCertificate cert;
    double feas = cfg.tol.feasibility;
    for (int attempt = 0; attempt < 4; ++attempt, feas *= 4) {
      best_x.clear();
      double best_v = kInf;
      auto obj = [&](const std::vector<double> &x) {
        AnalyticDisk f = build(x);
        double v = declared_value(f);
        auto pe = detail::penalty(d, f, nodes, feas);
        if (pe.feasible && v < best_v) {
          best_v = v;
          best_x = x;
        }
        return v + pe.penalty;
      };
      nelder_mead(obj, start, attempt == 0 ? 0.1 : 0.02,
                  attempt == 0 ? b.simplex_evaluations : b.simplex_evaluations / 4);
      if (best_x.empty())
        break;
      AnalyticDisk f = build(best_x);
      cert = certify_containment(d, f, b);
      if (cert.valid()) {
        accepted = f;
        break;
      }
      start = best_x;
    }
    if (!accepted)
      continue;
    AnalyticDisk f = *accepted;
    auto H = poletsky_functional(f, w, cfg.tol.root_match);
    if (!H.certified)
      continue;
    ++out.certified_candidates;
    if (H.value < out.value) {
      out.value = H.value;
      f.hits = H.preimages;
      out.disk = f;
      out.cert = cert;
      out.witness = "polynomial_disk(hits=" + std::to_string(hits) +
                    ",restart=" + std::to_string(r) + ")";
    }
  }
  return out;
}

/// Polynomial-disk upper bound for g(z, w): searches with one and with two
/// declared preimages.
inline BoundInterval upper_bound_green(const DomainPtr &dp, const Point &z,
                                       const Point &w, const RunConfig &cfg) {
  require_inside(*dp, z);
  require_inside(*dp, w);
  BoundInterval out;
  if (z == w)
    return BoundInterval::pole();
  for (int h = 1; h <= cfg.budget.max_hits; ++h) {
    auto r = search_green_disks(dp, z, w, h, cfg);
    if (r.disk)
      out.lower_hi(r.value, r.witness, Provenance::CertifiedHi);
  }
  return out;
}

/**
 * @brief Upper bound for the Kobayashi function from single-preimage disks:
 * exact geodesics where known, slices of the complex line through z and w,
 * and polynomial disks in both orientations (k is symmetric).
 */
inline BoundInterval kobayashi_bound(const DomainPtr &dp, const Point &z,
                                     const Point &w, const RunConfig &cfg) {
  require_inside(*dp, z);
  require_inside(*dp, w);
  if (z == w)
    return BoundInterval::pole();
  BoundInterval out;
  if (auto geo = exact_geodesic(*dp, z, w)) {
    out.lower_hi(geo->value, geo->name, Provenance::ClosedForm);
    return out;
  }
  auto sl = best_line_slice(dp, z, w, cfg.budget);
  if (std::isfinite(sl.value))
    out.lower_hi(sl.value, "line_slice", Provenance::CertifiedHi);
  for (int orient = 0; orient < 2; ++orient) {
    const Point &a = orient == 0 ? z : w;
    const Point &c = orient == 0 ? w : z;
    auto r = search_green_disks(dp, a, c, 1, cfg, 7 + static_cast<std::uint64_t>(orient));
    if (r.disk) {
      double v = kInf;
      for (cplx t : r.disk->hits)
        v = std::min(v, safe_log(std::abs(t)));
      out.lower_hi(v, r.witness + (orient ? "[reversed]" : ""), Provenance::CertifiedHi);
    }
  }
  return out;
}

/**
 * @brief Upper bound for the Royden function R(w, v) = inf -log lambda over
 * disks f(0) = w, f'(0) = lambda v into the domain.
 */
inline BoundInterval royden_bound(const DomainPtr &dp, const Direction &dv,
                                  const RunConfig &cfg) {
  const Domain &d = *dp;
  const Point &w = dv.base;
  const Point &v = dv.vector;
  require_inside(d, w);
  BoundInterval out;
  if (auto ex = exact_royden_disk(d, w, v)) {
    out.lower_hi(-std::log(ex->lambda), ex->name, Provenance::ClosedForm);
    return out;
  }
  const SearchBudget &b = cfg.budget;
  double lam0 = max_slice_radius(d, w, v, 0.0);
  if (lam0 > 0) {
    double lam = lam0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      auto cert = certify_curve(
          d, [&](cplx t) { return w + v * (lam * t); }, 1.0, lam * v.norm(), b);
      if (cert.valid()) {
        out.lower_hi(-std::log(lam), "linear_jet_disk", Provenance::CertifiedHi);
        break;
      }
      lam *= 1 - std::ldexp(1.0, -20 + attempt / 2);
    }
  }
  const int n = w.dim();
  const int qlen = std::max(0, b.degree - 1);
  const auto nodes = detail::penalty_nodes(d, b);
  const std::size_t nvar = 1 + 2 * static_cast<std::size_t>(n * qlen);
  auto build = [&](const std::vector<double> &x) {
    auto q = detail::unpack_q(x, 1, n, qlen);
    return jet_disk(w, v * std::exp(x[0]), q);
  };
  double best_lam = 0;
  for (int r = 0; r < b.restarts; ++r) {
    std::mt19937_64 rng(stream_seed(cfg.seed, 0x70ULL * 1000003ULL + static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> start(nvar, 0.0);
    start[0] = std::log(std::max(lam0, 1e-6) * 0.999);
    if (r > 0)
      for (std::size_t i = 0; i < nvar; ++i)
        start[i] += 0.05 * (1 + r % 4) * g(rng) * (i == 0 ? 1.0 : lam0 * v.norm());
    std::vector<double> best_x;
    bool accepted = false;
    double feas = cfg.tol.feasibility;
    for (int attempt = 0; attempt < 4; ++attempt, feas *= 4) {
      best_x.clear();
      double best_v = kInf;
      auto obj = [&](const std::vector<double> &x) {
        AnalyticDisk f = build(x);
        auto pe = detail::penalty(d, f, nodes, feas);
        double val = -x[0];
        if (pe.feasible && val < best_v) {
          best_v = val;
          best_x = x;
        }
        return val + pe.penalty;
      };
      nelder_mead(obj, start, attempt == 0 ? 0.1 : 0.02,
                  attempt == 0 ? b.simplex_evaluations : b.simplex_evaluations / 4);
      if (best_x.empty())
        break;
      if (certify_containment(d, build(best_x), b).valid()) {
        accepted = true;
        break;
      }
      start = best_x;
    }
    if (!accepted)
      continue;
    double lam = std::exp(best_x[0]);
    if (lam > best_lam) {
      best_lam = lam;
      out.lower_hi(-std::log(lam), "polynomial_jet_disk(restart=" + std::to_string(r) + ")",
                   Provenance::CertifiedHi);
    }
  }
  return out;
}

} // namespace pluri
