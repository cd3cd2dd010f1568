/**
 * @file bound_engine.hpp
 * @brief Lower bounds for the Green function (Carathéodory candidates and
 * plurisubharmonic competitors), closed forms, slice upper bounds, the
 * combined interval, and the Lelong-Jensen residual on the disk and ball.
 *
 * Lower bounds only come from functions that are plurisubharmonic by
 * construction; sampling is used to validate negativity and never to decide
 * plurisubharmonicity.
 */
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pluri/bounds.hpp"
#include "pluri/config.hpp"
#include "pluri/disk_engine.hpp"
#include "pluri/geometry.hpp"
#include "pluri/quadrature.hpp"
#include "pluri/scalar_field.hpp"

namespace pluri {

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// log|(z - w) / (1 - conj(w) z)| for the unit disk.
inline double disk_green(cplx z, cplx w) {
  return safe_log(std::abs((z - w) / (1.0 - std::conj(w) * z)));
}

/**
 * Balls (any pole, through the automorphism exchanging w and the centre),
 * disks and polydisks (any pole), and pushforwards of these by their
 * invertible maps. Absent otherwise.
 */
inline std::optional<double> closed_form_green(const Domain &d, const Point &z,
                                               const Point &w) {
  if (const auto *b = d.as<Ball>()) {
    Point x = (z - b->center) / b->radius, y = (w - b->center) / b->radius;
    return safe_log(unit_ball_involution(y, x).norm());
  }
  if (const auto *pd = d.as<Polydisk>()) {
    double s = -kInf;
    for (int j = 0; j < z.dim(); ++j) {
      double r = pd->radii[static_cast<std::size_t>(j)];
      s = std::max(s, disk_green((z[j] - pd->center[j]) / r, (w[j] - pd->center[j]) / r));
    }
    return s;
  }
  if (const auto *pf = d.as<Pushforward>())
    return closed_form_green(*pf->source, evaluate(*pf->inverse, z),
                             evaluate(*pf->inverse, w));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Carathéodory candidate families
// ---------------------------------------------------------------------------

/// Parametric maps M -> unit disk vanishing at w.
struct CandidateMapFamily {
  std::string name;
  int parameters = 0;
  std::function<cplx(const std::vector<double> &, const Point &)> eval;
  std::vector<std::vector<double>> seeds;
};

namespace detail {

inline CandidateMapFamily ball_family(const Point &c, double r, const Point &w,
                                      const Point &z) {
  const int n = c.dim();
  Point y = (w - c) / r;
  CandidateMapFamily fam;
  fam.name = "ball_automorphism_functional";
  fam.parameters = 2 * n;
  fam.eval = [c, r, y, n](const std::vector<double> &p, const Point &x) {
    Point u = Point::zeros(n);
    for (int i = 0; i < n; ++i)
      u[i] = cplx(p[2 * static_cast<std::size_t>(i)], p[2 * static_cast<std::size_t>(i) + 1]);
    double un = u.norm();
    if (!(un > 0))
      return cplx(0.0);
    return inner(unit_ball_involution(y, (x - c) / r), u / un);
  };
  Point a = unit_ball_involution(y, (z - c) / r);
  std::vector<double> s;
  for (int i = 0; i < n; ++i) {
    s.push_back(a[i].real());
    s.push_back(a[i].imag());
  }
  fam.seeds.push_back(s);
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(2 * static_cast<std::size_t>(n), 0.0);
    e[2 * static_cast<std::size_t>(i)] = 1.0;
    fam.seeds.push_back(e);
  }
  return fam;
}

inline CandidateMapFamily polydisk_family(const Polydisk &m, const Point &w,
                                          const Point &z) {
  const int n = w.dim();
  CandidateMapFamily fam;
  fam.name = "coordinate_mobius_combination";
  fam.parameters = 2 * n;
  fam.eval = [m, w, n](const std::vector<double> &p, const Point &x) {
    cplx s = 0;
    double l1 = 0;
    for (int j = 0; j < n; ++j) {
      cplx a(p[2 * static_cast<std::size_t>(j)], p[2 * static_cast<std::size_t>(j) + 1]);
      double r = m.radii[static_cast<std::size_t>(j)];
      cplx xj = (x[j] - m.center[j]) / r, wj = (w[j] - m.center[j]) / r;
      s += a * (xj - wj) / (1.0 - std::conj(wj) * xj);
      l1 += std::abs(a);
    }
    return l1 > 0 ? s / l1 : cplx(0.0);
  };
  int best = 0;
  double bv = -1;
  for (int j = 0; j < n; ++j) {
    double r = m.radii[static_cast<std::size_t>(j)];
    cplx xj = (z[j] - m.center[j]) / r, wj = (w[j] - m.center[j]) / r;
    double v = std::abs((xj - wj) / (1.0 - std::conj(wj) * xj));
    if (v > bv) {
      bv = v;
      best = j;
    }
    std::vector<double> e(2 * static_cast<std::size_t>(n), 0.0);
    e[2 * static_cast<std::size_t>(j)] = 1.0;
    fam.seeds.push_back(e);
  }
  std::rotate(fam.seeds.begin(), fam.seeds.begin() + best, fam.seeds.begin() + best + 1);
  return fam;
}

} // namespace detail

/// The shipped candidate family for (domain, w); absent for the planar
/// complement, whose bounded holomorphic functions the model does not use.
inline std::optional<CandidateMapFamily> caratheodory_family(const DomainPtr &dp,
                                                             const Point &w,
                                                             const Point &z) {
  const Domain &d = *dp;
  if (const auto *b = d.as<Ball>())
    return detail::ball_family(b->center, b->radius, w, z);
  if (const auto *pd = d.as<Polydisk>())
    return detail::polydisk_family(*pd, w, z);
  if (const auto *s = d.as<SublevelDcg>()) {
    auto fam = detail::ball_family(Point::zeros(2), s->outer_radius, w, z);
    fam.name = "containing_ball_" + fam.name;
    return fam;
  }
  if (d.is<HartogsPgvlu>()) {
    Polydisk bi{Point::zeros(2), {1.0, 1.0}};
    auto fold = [](const Point &x) { return Point(x[0], x[0] * x[1]); };
    auto inner_fam = detail::polydisk_family(bi, fold(w), fold(z));
    CandidateMapFamily fam = inner_fam;
    fam.name = "fold_then_" + inner_fam.name;
    auto ev = inner_fam.eval;
    fam.eval = [ev, fold](const std::vector<double> &p, const Point &x) {
      return ev(p, fold(x));
    };
    return fam;
  }
  if (const auto *pf = d.as<Pushforward>()) {
    auto inv = pf->inverse;
    auto src = caratheodory_family(pf->source, evaluate(*inv, w), evaluate(*inv, z));
    if (!src)
      return std::nullopt;
    auto ev = src->eval;
    src->name = "pullback_" + src->name;
    src->eval = [ev, inv](const std::vector<double> &p, const Point &x) {
      return ev(p, evaluate(*inv, x));
    };
    return src;
  }
  return std::nullopt;
}

/// lo side for c(z, w) and hence g(z, w): max of log|f(z)| over the family.
inline BoundInterval caratheodory_bound(const DomainPtr &dp, const Point &z,
                                        const Point &w, const RunConfig &cfg) {
  require_inside(*dp, z);
  require_inside(*dp, w);
  if (z == w)
    return BoundInterval::pole();
  BoundInterval out;
  auto fam = caratheodory_family(dp, w, z);
  if (!fam) {
    out.lo_witness = "no candidates";
    return out;
  }
  auto obj = [&](const std::vector<double> &p) {
    double v = std::abs(fam->eval(p, z));
    return v > 0 ? -std::log(v) : 1e300;
  };
  std::vector<double> best;
  double bv = kInf;
  std::vector<std::vector<double>> starts = fam->seeds;
  std::mt19937_64 rng(stream_seed(cfg.seed, 0xCA5ULL));
  std::normal_distribution<double> g(0.0, 1.0);
  const int extra = std::max(1, cfg.budget.restarts / 8);
  for (int r = 0; r < extra; ++r) {
    std::vector<double> s(static_cast<std::size_t>(fam->parameters));
    for (auto &x : s)
      x = g(rng);
    starts.push_back(s);
  }
  for (const auto &s : starts) {
    double v0 = obj(s);
    if (v0 < bv) {
      bv = v0;
      best = s;
    }
    auto res = nelder_mead(obj, s, 0.2, 300, 1e-12);
    if (res.value < bv) {
      bv = res.value;
      best = res.x;
    }
  }
  // Every member maps into the unit disk by construction; confirm on a sample
  // and confirm the zero at w.
  if (std::abs(fam->eval(best, w)) > 1e-12)
    throw SoundnessError("Carathéodory candidate does not vanish at the pole");
  for (const auto &p : sample_points(*dp, 256, stream_seed(cfg.seed, 0xCA6ULL)))
    if (!(std::abs(fam->eval(best, p)) < 1.0))
      throw SoundnessError("Carathéodory candidate leaves the unit disk");
  out.raise_lo(std::log(std::abs(fam->eval(best, z))), fam->name, Provenance::CertifiedLo);
  return out;
}

// ---------------------------------------------------------------------------
// Plurisubharmonic competitors
// ---------------------------------------------------------------------------

/// Green function of B(c, r) with pole w, valid for any domain inside the ball.
inline ScalarField ball_green_field(const Point &c, double r, const Point &w,
                                    std::string name = "ball_green") {
  Point y = (w - c) / r;
  return ScalarField::leaf(std::move(name), FieldKind::ClosedFormGreen,
                           [c, r, y](const Point &z) {
                             return safe_log(unit_ball_involution(y, (z - c) / r).norm());
                           },
                           w);
}

/// Built-in negative competitors with a logarithmic pole at w.
inline std::vector<ScalarField> builtin_competitors(const DomainPtr &dp, const Point &w) {
  const Domain &d = *dp;
  std::vector<ScalarField> out;
  if (const auto *b = d.as<Ball>()) {
    out.push_back(ball_green_field(b->center, b->radius, w, "closed_form_ball_green"));
  } else if (const auto *pd = d.as<Polydisk>()) {
    Polydisk m = *pd;
    out.push_back(ScalarField::leaf(
        "closed_form_polydisk_green", FieldKind::ClosedFormGreen,
        [m, w](const Point &z) {
          double s = -kInf;
          for (int j = 0; j < z.dim(); ++j) {
            double r = m.radii[static_cast<std::size_t>(j)];
            s = std::max(s, disk_green((z[j] - m.center[j]) / r, (w[j] - m.center[j]) / r));
          }
          return s;
        },
        w));
  } else if (const auto *s = d.as<SublevelDcg>()) {
    out.push_back(ball_green_field(Point::zeros(2), s->outer_radius, w, "containing_ball_green"));
    if (w.norm() == 0) {
      SublevelDcg m = *s;
      out.push_back(ScalarField::leaf(
          "u", FieldKind::Explicit, [m](const Point &z) { return m.u(z); }, w));
    }
  } else if (const auto *h = d.as<HartogsPgvlu>()) {
    // max of log-moduli of the two fold coordinates after Mobius maps
    Point fw(w[0], w[0] * w[1]);
    auto a = ScalarField::leaf("log_mobius_z1", FieldKind::LogModulus,
                               [fw](const Point &z) { return disk_green(z[0], fw[0]); });
    auto b = ScalarField::leaf("log_mobius_z1z2", FieldKind::LogModulus,
                               [fw](const Point &z) { return disk_green(z[0] * z[1], fw[1]); });
    out.push_back(ScalarField::max_of("fold_pullback_bidisk_green", {a, b}));
    out.back().pole = w;
    if (w[0] == 0.0) {
      HartogsPgvlu m = *h;
      cplx w2 = w[1];
      out.push_back(ScalarField::leaf(
          "axis_competitor_h", FieldKind::Explicit,
          [m, w2](const Point &z) { return m.axis_competitor(z, w2); }, w));
    }
  } else if (const auto *pc = d.as<PlanarComplement>()) {
    out.push_back(ball_green_field(Point(0.0), pc->outer_radius, w, "outer_disk_green"));
  } else if (const auto *pf = d.as<Pushforward>()) {
    auto inv = pf->inverse;
    for (auto f : builtin_competitors(pf->source, evaluate(*inv, w))) {
      ScalarField g;
      g.name = "pullback_" + f.name;
      g.kind = FieldKind::Pullback;
      g.parts = {f};
      g.pole = w;
      g.eval = [f, inv](const Point &z) { return f(evaluate(*inv, z)); };
      out.push_back(std::move(g));
    }
  }
  return out;
}

struct CompetitorCheck {
  bool accepted = false;
  std::string reason;
};

/// Accepts a competitor when it is PSH by construction, records its pole at
/// w, and is negative on a validation sample.
inline CompetitorCheck check_competitor(const DomainPtr &dp, const ScalarField &f,
                                        const Point &w, std::uint64_t seed,
                                        int samples = 512) {
  if (!f.psh_by_construction())
    return {false, "not plurisubharmonic by construction"};
  if (!f.pole || f.pole->dim() != w.dim() || distance(*f.pole, w) > 1e-12)
    return {false, "no logarithmic pole recorded at w"};
  for (const auto &p : sample_points(*dp, samples, seed))
    if (!(f(p) < 0))
      return {false, "positive value on the validation sample"};
  return {true, ""};
}

/// lo side for g(z, w) from competitors; `extra` holds e.g. glued competitors.
inline BoundInterval psh_lower_bound(const DomainPtr &dp, const Point &z, const Point &w,
                                     const std::vector<ScalarField> &extra = {},
                                     bool builtin = true, std::uint64_t seed = 0x9e3779b9ULL) {
  require_inside(*dp, z);
  require_inside(*dp, w);
  if (z == w)
    return BoundInterval::pole();
  BoundInterval out;
  std::vector<ScalarField> fields;
  if (builtin)
    fields = builtin_competitors(dp, w);
  fields.insert(fields.end(), extra.begin(), extra.end());
  for (const auto &f : fields) {
    if (!check_competitor(dp, f, w, seed).accepted)
      continue;
    bool exact = f.kind == FieldKind::ClosedFormGreen && f.name.rfind("closed_form", 0) == 0;
    out.raise_lo(f(z), f.name, exact ? Provenance::ClosedForm : Provenance::CertifiedLo);
  }
  if (out.lo_provenance == Provenance::None)
    out.lo_witness = "no competitor";
  return out;
}

// ---------------------------------------------------------------------------
// Slice upper bounds
// ---------------------------------------------------------------------------

/// AffineSlice map on D(0, rho) through z and w, from the best line slice.
inline std::optional<HoloMap> line_slice_map(const DomainPtr &dp, const Point &z,
                                             const Point &w, const SearchBudget &b) {
  auto sl = best_line_slice(dp, z, w, b);
  if (!std::isfinite(sl.value))
    return std::nullopt;
  return affine_slice(dp, sl.origin, sl.direction, sl.radius, false);
}

/**
 * @brief g_M(F(s), F(t)) <= g_D(s, t) for a map F from a planar disk into M.
 *
 * The map's image containment is certified here; z and w must lie on the
 * slice.
 */
inline BoundInterval pushforward_upper_bound(const HoloMap &slice, const Point &z,
                                             const Point &w, const SearchBudget &b) {
  const auto *src = slice.source->as<Ball>();
  if (!src || src->center.dim() != 1)
    throw InputError("pushforward bounds need a map from a planar disk");
  if (z == w)
    return BoundInterval::pole();
  std::function<std::optional<cplx>(const Point &)> pre;
  double deriv = kInf;
  if (const auto *a = std::get_if<AffineSliceMap>(&slice.kind)) {
    AffineSliceMap m = *a;
    deriv = m.direction.norm();
    pre = [m](const Point &p) -> std::optional<cplx> {
      cplx t = inner(p - m.origin, m.direction) / m.direction.norm_sq();
      if (distance(m.origin + m.direction * t, p) > 1e-9 * (1 + p.norm()))
        return std::nullopt;
      return t;
    };
  } else if (auto inv = inverse(slice)) {
    HoloMap g = *inv;
    pre = [g](const Point &p) -> std::optional<cplx> { return evaluate(g, p)[0]; };
  } else {
    throw InputError("pushforward bounds need an affine slice or an invertible map");
  }
  auto tz = pre(z), tw = pre(w);
  if (!tz || !tw)
    throw InputError("points do not lie on the slice");
  BoundInterval out;
  auto cert = certify_curve(
      *slice.target, [&](cplx t) { return evaluate(slice, Point(t)); },
      src->radius * (1 - 1e-12), deriv, b);
  if (!cert.valid())
    return out;
  double v = safe_log(disk_pseudo_distance(*tz, *tw, src->center[0], src->radius));
  if (std::abs(*tz - src->center[0]) >= src->radius || std::abs(*tw - src->center[0]) >= src->radius)
    throw InputError("points lie outside the source disk of the slice");
  out.lower_hi(v, "slice:" + slice.name, Provenance::CertifiedHi);
  return out;
}

// ---------------------------------------------------------------------------
// The combined interval
// ---------------------------------------------------------------------------

/// Throws when lo exceeds hi by more than `tol`; a smaller excess is rounding
/// and is settled by lowering lo to hi, which keeps lo a valid lower bound.
inline void enforce_soundness(BoundInterval &b, double tol, const std::string &what) {
  if (b.lo > b.hi + tol) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": lower bound " << b.lo << " (" << b.lo_witness << ") exceeds upper bound "
       << b.hi << " (" << b.hi_witness << ")";
    throw SoundnessError(os.str());
  }
  if (b.lo > b.hi)
    b.lo = b.hi;
}

/**
 * @brief [lo, hi] for g(z, w).
 *
 * lo is the best of the Carathéodory family and the competitors; hi the best
 * of the closed form, exact geodesics, line slices and polynomial disks. The
 * polynomial search only runs while hi - lo exceeds the pinch tolerance.
 */
inline BoundInterval green_interval(const DomainPtr &dp, const Point &z, const Point &w,
                                    const RunConfig &cfg,
                                    const std::vector<ScalarField> &extra = {}) {
  require_inside(*dp, z);
  require_inside(*dp, w);
  if (z == w)
    return BoundInterval::pole();
  BoundInterval out;
  auto merge_lo = [&](const BoundInterval &b) {
    if (b.lo_provenance != Provenance::None)
      out.raise_lo(b.lo, b.lo_witness, b.lo_provenance);
  };
  auto merge_hi = [&](const BoundInterval &b) {
    if (b.hi_provenance != Provenance::None)
      out.lower_hi(b.hi, b.hi_witness, b.hi_provenance);
  };
  merge_lo(psh_lower_bound(dp, z, w, extra, true, stream_seed(cfg.seed, 0x95ULL)));
  merge_lo(caratheodory_bound(dp, z, w, cfg));
  if (auto cf = closed_form_green(*dp, z, w))
    out.lower_hi(*cf, "closed_form", Provenance::ClosedForm);
  if (auto geo = exact_geodesic(*dp, z, w))
    out.lower_hi(geo->value, geo->name, Provenance::ClosedForm);
  auto open = [&] { return !(out.hi - out.lo <= cfg.tol.pinch); };
  if (open()) {
    if (auto sm = line_slice_map(dp, z, w, cfg.budget))
      merge_hi(pushforward_upper_bound(*sm, z, w, cfg.budget));
  }
  if (open()) {
    merge_hi(kobayashi_bound(dp, z, w, cfg));
    merge_hi(upper_bound_green(dp, z, w, cfg));
  }
  enforce_soundness(out, cfg.tol.soundness, "green_interval");
  return out;
}

/// Carathéodory lo, Green interval and Kobayashi hi computed together so
/// that the chain c <= g <= k holds between the reported numbers.
struct ChainReport {
  BoundInterval caratheodory;
  BoundInterval green;
  BoundInterval kobayashi;
};

inline ChainReport chain_report(const DomainPtr &dp, const Point &z, const Point &w,
                                const RunConfig &cfg) {
  ChainReport r;
  r.caratheodory = caratheodory_bound(dp, z, w, cfg);
  r.kobayashi = kobayashi_bound(dp, z, w, cfg);
  r.green = green_interval(dp, z, w, cfg);
  if (r.kobayashi.hi < r.green.hi)
    r.green.lower_hi(r.kobayashi.hi, "kobayashi:" + r.kobayashi.hi_witness,
                     r.kobayashi.hi_provenance);
  if (r.caratheodory.lo > r.green.lo)
    r.green.raise_lo(r.caratheodory.lo, r.caratheodory.lo_witness, r.caratheodory.lo_provenance);
  enforce_soundness(r.green, cfg.tol.soundness, "chain_report");
  if (r.caratheodory.lo > r.kobayashi.hi + cfg.tol.soundness)
    throw SoundnessError("Carathéodory lower bound exceeds Kobayashi upper bound");
  return r;
}

// ---------------------------------------------------------------------------
// Lelong-Jensen formula
// ---------------------------------------------------------------------------

/// Smooth test functions with analytic Levi forms.
inline ScalarField real_part_field() {
  ScalarField f = ScalarField::leaf("re_z", FieldKind::Pluriharmonic,
                                    [](const Point &z) { return z[0].real(); });
  f.levi = [](const Point &, const Point &) { return 0.0; };
  return f;
}

inline ScalarField norm_sq_field() {
  ScalarField f = ScalarField::leaf("norm_sq", FieldKind::StrictlyPsh,
                                    [](const Point &z) { return z.norm_sq(); });
  f.levi = [](const Point &, const Point &e) { return e.norm_sq(); };
  return f;
}

inline ScalarField norm_pow4_field() {
  ScalarField f = ScalarField::leaf("norm_pow4", FieldKind::StrictlyPsh,
                                    [](const Point &z) { return z.norm_sq() * z.norm_sq(); });
  f.levi = [](const Point &z, const Point &e) {
    return 2 * z.norm_sq() * e.norm_sq() + 2 * std::norm(inner(e, z));
  };
  return f;
}

struct JensenTerms {
  double value_at_pole = 0;
  double boundary = 0;  ///< integral of u against the harmonic measure at w
  double interior = 0;  ///< (2 pi)^-1 integral of g(., w) Delta u
  double residual = 0;
};

namespace detail {

/// Both terms of the disk formula for u restricted to the slice t -> c + t e.
inline std::pair<double, double> disk_jensen_terms(const ScalarField &u, const Point &c,
                                                   const Point &e, cplx w, int nr, int nt) {
  // Boundary: Poisson integral, trapezoid in angle.
  double bsum = 0;
  for (int k = 0; k < nt; ++k) {
    cplx xi = std::polar(1.0, 2 * kPi * k / nt);
    double P = (1 - std::norm(w)) / std::norm(xi - w);
    bsum += u(c + e * xi) * P;
  }
  double boundary = bsum / nt;
  // Interior, in coordinates s with z = (s + w) / (1 + conj(w) s), so that
  // g(z, w) = log|s|; radius substitution t = |s|^2.
  Rule rule = gauss_legendre(nr, 0.0, 1.0);
  double isum = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double t = rule.nodes[i];
    double rho = std::sqrt(t);
    double ring = 0;
    for (int k = 0; k < nt; ++k) {
      cplx s = std::polar(rho, 2 * kPi * (k + 0.5) / nt);
      cplx den = 1.0 + std::conj(w) * s;
      cplx zz = (s + w) / den;
      double jac = std::pow((1 - std::norm(w)) / std::norm(den), 2);
      double lap = 4 * u.levi(c + e * zz, e);
      ring += lap * jac;
    }
    ring *= 2 * kPi / nt;
    // log|s| * rho d rho = (1/4) log t dt
    isum += rule.weights[i] * 0.25 * std::log(t) * ring;
  }
  return {boundary, isum / (2 * kPi)};
}

} // namespace detail

/**
 * @brief u(w) = int u dmu_w + (2 pi)^-n int g(., w) (dd^c u)^... evaluated by
 * quadrature, on the unit disk (any w) or the unit ball of C^2 (w = 0, by
 * averaging the disk formula over the complex lines through the origin).
 */
inline JensenTerms lelong_jensen(const DomainPtr &dp, const ScalarField &u, const Point &w,
                                 int radial = 128, int angular = 256) {
  if (!u.levi)
    throw InputError("the test function needs an analytic Levi form");
  const auto *b = dp->as<Ball>();
  if (!b || b->radius != 1.0 || b->center.norm() != 0)
    throw InputError("Lelong-Jensen check supports the unit disk and unit ball");
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  JensenTerms out;
  out.value_at_pole = u(w);
  if (w.dim() == 1) {
    auto [bd, in] = detail::disk_jensen_terms(u, Point(0.0), Point(1.0), w[0], radial, angular);
    out.boundary = bd;
    out.interior = in;
  } else {
    if (w.norm() != 0)
      throw InputError("the ball version is implemented at the centre only");
    // Lines through 0 are parametrized by x = |e1|^2 (uniform under the
    // invariant measure) and the relative phase.
    Rule xr = gauss_legendre(16, 0.0, 1.0);
    const int nphi = 16;
    for (std::size_t i = 0; i < xr.nodes.size(); ++i)
      for (int k = 0; k < nphi; ++k) {
        double x = xr.nodes[i];
        Point e(std::sqrt(x), std::polar(std::sqrt(1 - x), 2 * kPi * k / nphi));
        auto [bd, in] = detail::disk_jensen_terms(u, Point::zeros(2), e, 0.0,
                                                  radial / 2, angular / 2);
        double wt = xr.weights[i] / nphi;
        out.boundary += wt * bd;
        out.interior += wt * in;
      }
  }
  out.residual = std::abs(out.value_at_pole - out.boundary - out.interior);
  if (!std::isfinite(out.residual))
    throw InfeasibleError("quadrature did not converge");
  return out;
}

inline double lelong_jensen_residual(const DomainPtr &dp, const ScalarField &u, const Point &w,
                                     int radial = 128, int angular = 256) {
  return lelong_jensen(dp, u, w, radial, angular).residual;
}

} // namespace pluri
