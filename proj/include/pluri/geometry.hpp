/**
 * @file geometry.hpp
 * @brief Model domains in C^n, their defining functions and membership
 * margins, and the holomorphic maps between them.
 *
 * Every shipped domain is bounded. The membership margin of a point is the
 * minimum over the defining inequalities of their signed slack, so it is
 * positive exactly on the domain.
 */
#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pluri/core.hpp"
#include "pluri/scalar_field.hpp"

namespace pluri {

struct Domain;
struct HoloMap;
using DomainPtr = std::shared_ptr<const Domain>;

// ---------------------------------------------------------------------------
// Domain models
// ---------------------------------------------------------------------------

struct Ball {
  Point center;
  double radius = 1.0;
};

struct Polydisk {
  Point center;
  std::vector<double> radii;
};

/// {|z| < outer_radius} minus a finite union of closed disks.
struct PlanarComplement {
  double outer_radius = 2.0;
  std::vector<std::pair<cplx, double>> holes;
};

/**
 * @brief {|z1| < 1, log|z2| + v(z1) < 0, |z1 z2| < 1} with
 * v(t) = sum_j k_j log|(t - c_j) / (1 - conj(c_j) t)|, truncated at J terms.
 */
struct HartogsPgvlu {
  std::vector<cplx> centers;
  std::vector<double> radii;
  std::vector<double> weights;
  /// sum_j k_j log|c_j|; required > -1.
  double weighted_log_centers = 0;
  /// Grid side used to verify {v < -2} lies in the union of the disks.
  int verified_grid = 0;
  /// Weight mass a geometric continuation of the sequence would add.
  double truncation_tail_bound = 0;

  double v(cplx t) const {
    double s = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      cplx c = centers[j];
      s += weights[j] * safe_log(std::abs((t - c) / (1.0 - std::conj(c) * t)));
    }
    return s;
  }

  /// max{log|z2 - w2| + v(z1) - log(2e), log|z1|}, the competitor for poles
  /// on the axis z1 = 0.
  double axis_competitor(const Point &z, cplx w2) const {
    double a = safe_log(std::abs(z[1] - w2)) + v(z[0]) - std::log(2.0) - 1.0;
    double b = safe_log(std::abs(z[0]));
    return std::max(a, b);
  }

  /// Largest |z2| allowed above z1.
  double fiber_radius(cplx z1) const {
    double r = std::exp(-v(z1));
    double a = std::abs(z1);
    if (a > 0)
      r = std::min(r, 1.0 / a);
    return r;
  }
};

/**
 * @brief {||z|| < R, u(z) < 0} with u = (log||z|| + v)/2 and
 * v(z) = sum_j k_j log|z2 - c_j z1|, sum k_j = 1, sum k_j log c_j = -log 2.
 */
struct SublevelDcg {
  std::vector<double> slopes;  ///< c_j
  std::vector<double> weights; ///< k_j
  double outer_radius = 8.0;
  double free_mass = 0.2;
  double truncation_tail_bound = 0;

  double v(const Point &z) const {
    double s = 0;
    for (std::size_t j = 0; j < slopes.size(); ++j)
      s += weights[j] * safe_log(std::abs(z[1] - slopes[j] * z[0]));
    return s;
  }
  double u(const Point &z) const { return 0.5 * (safe_log(z.norm()) + v(z)); }

  /// The domain is balanced (u(tz) = u(z) + log|t|); this is its gauge.
  double gauge(const Point &z) const {
    return std::max(z.norm() / outer_radius, std::exp(u(z)));
  }
};

struct Pushforward {
  DomainPtr source;
  std::shared_ptr<const HoloMap> map;
  std::shared_ptr<const HoloMap> inverse;
};

struct Domain {
  std::variant<Ball, Polydisk, PlanarComplement, HartogsPgvlu, SublevelDcg,
               Pushforward>
      model;
  std::string name;

  template <class T> const T *as() const { return std::get_if<T>(&model); }
  template <class T> bool is() const { return std::holds_alternative<T>(model); }
};

// ---------------------------------------------------------------------------
// Holomorphic maps
// ---------------------------------------------------------------------------

/// t -> dst_center + dst_radius * e^{i theta} (x - a) / (1 - conj(a) x),
/// x = (t - src_center) / src_radius. Maps the source disk onto the target.
struct Mobius1D {
  cplx src_center = 0;
  double src_radius = 1;
  cplx a = 0;
  double theta = 0;
  cplx dst_center = 0;
  double dst_radius = 1;

  cplx operator()(cplx t) const {
    cplx x = (t - src_center) / src_radius;
    cplx y = std::polar(1.0, theta) * (x - a) / (1.0 - std::conj(a) * x);
    return dst_center + dst_radius * y;
  }
  cplx derivative(cplx t) const {
    cplx x = (t - src_center) / src_radius;
    cplx d = 1.0 - std::conj(a) * x;
    return std::polar(1.0, theta) * (1.0 - std::norm(a)) / (d * d) *
           (dst_radius / src_radius);
  }
  Mobius1D inverse() const {
    Mobius1D m;
    m.src_center = dst_center;
    m.src_radius = dst_radius;
    m.a = -a * std::polar(1.0, theta);
    m.theta = -theta;
    m.dst_center = src_center;
    m.dst_radius = src_radius;
    return m;
  }
};

struct IdentityMap {};
struct ProjectionMap {
  int index = 0;
};
/// Mobius transformation of one coordinate, identity on the others.
struct CoordinateMobiusMap {
  int coordinate = 0;
  Mobius1D m;
};
struct ProductMap {
  std::vector<Mobius1D> factors;
};
struct SwapMap {};
/// F(z) = (z1, z1 z2).
struct HartogsFoldMap {};
/// Involutive automorphism of B(center, radius) exchanging a and center.
struct BallAutomorphismMap {
  Point center;
  double radius = 1;
  Point a;
};
/// t -> origin + t * direction, from a planar disk into C^n.
struct AffineSliceMap {
  Point origin;
  Point direction;
};
struct CompositionMap {
  std::vector<HoloMap> chain;
};

struct HoloMap {
  std::variant<IdentityMap, ProjectionMap, CoordinateMobiusMap, ProductMap,
               SwapMap, HartogsFoldMap, BallAutomorphismMap, AffineSliceMap,
               CompositionMap>
      kind;
  DomainPtr source;
  DomainPtr target;
  std::string name;
};

// ---------------------------------------------------------------------------
// Dimension, margins, defining functions
// ---------------------------------------------------------------------------

int dim(const Domain &d);
Point evaluate(const HoloMap &f, const Point &p);
std::optional<HoloMap> inverse(const HoloMap &f);

/// Unit-ball automorphism phi_a(x) = (a - P x - s Q x) / (1 - <x, a>).
inline Point unit_ball_involution(const Point &a, const Point &x) {
  double a2 = a.norm_sq();
  if (a2 < 1e-300)
    return -x;
  cplx ax = inner(x, a);
  Point px = a * (ax / a2);
  Point qx = x - px;
  double s = std::sqrt(1.0 - a2);
  Point num = a - px - qx * s;
  return num / (1.0 - ax);
}

inline int dim(const Domain &d) {
  return std::visit(
      [](const auto &m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Ball>)
          return m.center.dim();
        else if constexpr (std::is_same_v<T, Polydisk>)
          return m.center.dim();
        else if constexpr (std::is_same_v<T, PlanarComplement>)
          return 1;
        else if constexpr (std::is_same_v<T, HartogsPgvlu>)
          return 2;
        else if constexpr (std::is_same_v<T, SublevelDcg>)
          return 2;
        else
          return dim(*m.map->target);
      },
      d.model);
}

/// Margin without dimension checks; used in inner loops.
inline double margin_unchecked(const Domain &d, const Point &p) {
  return std::visit(
      [&](const auto &m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return m.radius - distance(p, m.center);
        } else if constexpr (std::is_same_v<T, Polydisk>) {
          double s = kInf;
          for (int i = 0; i < p.dim(); ++i)
            s = std::min(s, m.radii[static_cast<std::size_t>(i)] -
                                std::abs(p[i] - m.center[i]));
          return s;
        } else if constexpr (std::is_same_v<T, PlanarComplement>) {
          double s = m.outer_radius - std::abs(p[0]);
          for (const auto &[c, r] : m.holes)
            s = std::min(s, std::abs(p[0] - c) - r);
          return s;
        } else if constexpr (std::is_same_v<T, HartogsPgvlu>) {
          double s1 = 1.0 - std::abs(p[0]);
          double lv = safe_log(std::abs(p[1])) + m.v(p[0]);
          double s2 = std::isnan(lv) ? kInf : -lv;
          double s3 = 1.0 - std::abs(p[0] * p[1]);
          return std::min({s1, s2, s3});
        } else if constexpr (std::is_same_v<T, SublevelDcg>) {
          double s1 = m.outer_radius - p.norm();
          double s2 = -m.u(p);
          return std::min(s1, std::isnan(s2) ? kInf : s2);
        } else {
          return margin_unchecked(*m.source, evaluate(*m.inverse, p));
        }
      },
      d.model);
}

/// Signed membership margin: positive iff p lies in the domain.
inline double contains(const Domain &d, const Point &p) {
  if (p.dim() != dim(d))
    throw DimensionError("point of dimension " + std::to_string(p.dim()) +
                         " used with a domain of dimension " +
                         std::to_string(dim(d)));
  if (!p.is_finite())
    throw InputError("point has non-finite coordinates");
  return margin_unchecked(d, p);
}

/// Throws InputError unless p lies strictly inside the domain.
inline void require_inside(const Domain &d, const Point &p) {
  if (!(contains(d, p) > 0))
    throw InputError("point outside the domain");
}

/// True when every defining function is plurisubharmonic, so the maximum of
/// each along an analytic disk is attained on the boundary circle.
inline bool all_defining_psh(const Domain &d) {
  if (d.is<PlanarComplement>())
    return d.as<PlanarComplement>()->holes.empty();
  if (const auto *pf = d.as<Pushforward>())
    return all_defining_psh(*pf->source);
  return true;
}

/// Lipschitz constant of the margin in the Euclidean metric, when finite.
inline std::optional<double> margin_lipschitz(const Domain &d) {
  if (d.is<Ball>() || d.is<Polydisk>() || d.is<PlanarComplement>())
    return 1.0;
  return std::nullopt;
}

struct BoundingBall {
  Point center;
  double radius;
};

inline BoundingBall bounding_ball(const Domain &d) {
  return std::visit(
      [&](const auto &m) -> BoundingBall {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {m.center, m.radius};
        } else if constexpr (std::is_same_v<T, Polydisk>) {
          double s = 0;
          for (double r : m.radii)
            s += r * r;
          return {m.center, std::sqrt(s)};
        } else if constexpr (std::is_same_v<T, PlanarComplement>) {
          return {Point(0.0), m.outer_radius};
        } else if constexpr (std::is_same_v<T, HartogsPgvlu>) {
          // Outside the disks D_j, v >= -2 bounds |z2| by e^2; inside D_j the
          // constraint |z1 z2| < 1 bounds it by 1/(|c_j| - r_j).
          double z2 = std::exp(2.0);
          for (std::size_t j = 0; j < m.centers.size(); ++j)
            z2 = std::max(z2, 1.0 / (std::abs(m.centers[j]) - m.radii[j]));
          return {Point::zeros(2), std::sqrt(1.0 + z2 * z2)};
        } else if constexpr (std::is_same_v<T, SublevelDcg>) {
          return {Point::zeros(2), m.outer_radius};
        } else {
          return bounding_ball(*m.map->target);
        }
      },
      d.model);
}

namespace detail {

inline Point random_unit_sphere(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    Point p = Point::zeros(n);
    for (int i = 0; i < n; ++i)
      p[i] = cplx(g(rng), g(rng));
    double r = p.norm();
    if (r > 1e-12)
      return p / r;
  }
}

inline cplx random_in_disk(double radius, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = radius * std::sqrt(u(rng));
  return std::polar(r, 2 * kPi * u(rng));
}

} // namespace detail

/// Random points of the domain with strictly positive margin.
inline std::vector<Point> sample_points(const Domain &d, int count,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  const int n = dim(d);
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > 1000 * count + 10000)
      throw InfeasibleError("sampling the domain failed");
    Point p;
    if (const auto *b = d.as<Ball>()) {
      Point e = detail::random_unit_sphere(n, rng);
      p = b->center + e * (b->radius * std::pow(unif(rng), 1.0 / (2 * n)));
    } else if (const auto *pd = d.as<Polydisk>()) {
      p = pd->center;
      for (int i = 0; i < n; ++i)
        p[i] += detail::random_in_disk(pd->radii[static_cast<std::size_t>(i)], rng);
    } else if (const auto *pc = d.as<PlanarComplement>()) {
      p = Point(detail::random_in_disk(pc->outer_radius, rng));
    } else if (const auto *h = d.as<HartogsPgvlu>()) {
      cplx z1 = detail::random_in_disk(0.999, rng);
      cplx z2 = detail::random_in_disk(0.999 * h->fiber_radius(z1), rng);
      p = Point(z1, z2);
    } else if (const auto *s = d.as<SublevelDcg>()) {
      Point e = detail::random_unit_sphere(2, rng);
      double t = 0.999 / s->gauge(e) * std::pow(unif(rng), 0.25);
      p = e * t;
    } else if (const auto *pf = d.as<Pushforward>()) {
      Point q = sample_points(*pf->source, 1, rng())[0];
      p = evaluate(*pf->map, q);
    }
    if (p.is_finite() && margin_unchecked(d, p) > 0)
      out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Map evaluation
// ---------------------------------------------------------------------------

inline Point evaluate(const HoloMap &f, const Point &p) {
  return std::visit(
      [&](const auto &k) -> Point {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, IdentityMap>) {
          return p;
        } else if constexpr (std::is_same_v<T, ProjectionMap>) {
          return Point(p[k.index]);
        } else if constexpr (std::is_same_v<T, CoordinateMobiusMap>) {
          Point q = p;
          q[k.coordinate] = k.m(p[k.coordinate]);
          return q;
        } else if constexpr (std::is_same_v<T, ProductMap>) {
          Point q = p;
          for (int i = 0; i < p.dim(); ++i)
            q[i] = k.factors[static_cast<std::size_t>(i)](p[i]);
          return q;
        } else if constexpr (std::is_same_v<T, SwapMap>) {
          return Point(p[1], p[0]);
        } else if constexpr (std::is_same_v<T, HartogsFoldMap>) {
          return Point(p[0], p[0] * p[1]);
        } else if constexpr (std::is_same_v<T, BallAutomorphismMap>) {
          Point x = (p - k.center) / k.radius;
          Point a = (k.a - k.center) / k.radius;
          return k.center + unit_ball_involution(a, x) * k.radius;
        } else if constexpr (std::is_same_v<T, AffineSliceMap>) {
          return k.origin + k.direction * p[0];
        } else {
          Point q = p;
          for (const auto &g : k.chain)
            q = evaluate(g, q);
          return q;
        }
      },
      f.kind);
}

/// Checked application: p must lie in the source domain.
inline Point apply_map(const HoloMap &f, const Point &p) {
  double m = contains(*f.source, p);
  if (!(m > 0))
    throw InputError("point lies outside the source domain of map '" + f.name +
                     "'");
  return evaluate(f, p);
}

inline std::optional<HoloMap> inverse(const HoloMap &f) {
  HoloMap g;
  g.source = f.target;
  g.target = f.source;
  g.name = f.name + "^-1";
  bool ok = std::visit(
      [&](const auto &k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, IdentityMap> ||
                      std::is_same_v<T, SwapMap> ||
                      std::is_same_v<T, BallAutomorphismMap>) {
          g.kind = k;
          return true;
        } else if constexpr (std::is_same_v<T, CoordinateMobiusMap>) {
          g.kind = CoordinateMobiusMap{k.coordinate, k.m.inverse()};
          return true;
        } else if constexpr (std::is_same_v<T, ProductMap>) {
          ProductMap pm;
          for (const auto &m : k.factors)
            pm.factors.push_back(m.inverse());
          g.kind = pm;
          return true;
        } else if constexpr (std::is_same_v<T, CompositionMap>) {
          CompositionMap cm;
          for (auto it = k.chain.rbegin(); it != k.chain.rend(); ++it) {
            auto inv = inverse(*it);
            if (!inv)
              return false;
            cm.chain.push_back(*inv);
          }
          g.kind = cm;
          return true;
        } else {
          return false;
        }
      },
      f.kind);
  if (!ok)
    return std::nullopt;
  return g;
}

/// Throws unless every sampled source point lands inside the target.
inline void validate_map(const HoloMap &f, int samples = 64,
                         std::uint64_t seed = 0x5eed) {
  if (!f.source || !f.target)
    throw InputError("map '" + f.name + "' lacks a declared source or target");
  for (const auto &p : sample_points(*f.source, samples, seed)) {
    Point q = evaluate(f, p);
    if (!q.is_finite() || q.dim() != dim(*f.target) ||
        !(margin_unchecked(*f.target, q) > 0))
      throw InputError("map '" + f.name +
                       "' sends a sampled source point outside its target");
  }
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

inline DomainPtr make_domain(Domain d) {
  return std::make_shared<const Domain>(std::move(d));
}

inline DomainPtr make_ball(const Point &center, double radius) {
  if (!(radius > 0) || !center.is_finite())
    throw InputError("ball needs a finite center and a positive radius");
  return make_domain({Ball{center, radius}, "ball"});
}

inline DomainPtr make_unit_ball(int n) { return make_ball(Point::zeros(n), 1.0); }
inline DomainPtr make_unit_disk() { return make_ball(Point(0.0), 1.0); }

inline DomainPtr make_polydisk(const Point &center, std::vector<double> radii) {
  if (static_cast<int>(radii.size()) != center.dim())
    throw DimensionError("polydisk needs one radius per coordinate");
  for (double r : radii)
    if (!(r > 0))
      throw InputError("polydisk radii must be positive");
  return make_domain({Polydisk{center, std::move(radii)}, "polydisk"});
}

inline DomainPtr make_unit_polydisk(int n) {
  return make_polydisk(Point::zeros(n), std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

inline DomainPtr make_planar_complement(double outer_radius,
                                        std::vector<std::pair<cplx, double>> holes) {
  if (!(outer_radius > 0))
    throw InputError("outer radius must be positive");
  for (const auto &[c, r] : holes)
    if (!(r > 0) || std::abs(c) + r >= outer_radius)
      throw InputError("holes must be disks of positive radius inside the outer disk");
  return make_domain({PlanarComplement{outer_radius, std::move(holes)}, "planar_complement"});
}

/// Eight small disks on a Cantor-like pattern along the real axis.
inline DomainPtr make_default_planar_complement() {
  std::vector<std::pair<cplx, double>> holes;
  for (double x : {-0.9, -0.7, -0.3, -0.1, 0.1, 0.3, 0.7, 0.9})
    holes.emplace_back(cplx(0.5 * x, 0.0), 0.01);
  return make_planar_complement(2.0, std::move(holes));
}

/**
 * @brief Reproducible instance of the sublevel domain.
 *
 * Tail c_j = 2^-j, k_j = s 2^-(j-1) / (1 - 2^-(J-1)) for j = 2..J, k_1 = 1 - s,
 * and c_1 in (1/2, 1) solved from sum k_j log c_j = -log 2.
 */
inline DomainPtr make_sublevel_dcg(int terms = 8, double free_mass = 0.2,
                                   double outer_radius = 8.0) {
  if (terms < 2)
    throw InputError("sublevel domain needs at least two terms");
  if (!(free_mass > 0 && free_mass < 0.25))
    throw InputError("free mass must lie in (0, 1/4)");
  SublevelDcg s;
  s.outer_radius = outer_radius;
  s.free_mass = free_mass;
  const double norm = 1.0 - std::ldexp(1.0, -(terms - 1));
  double tail_log = 0;
  s.slopes.assign(static_cast<std::size_t>(terms), 0.0);
  s.weights.assign(static_cast<std::size_t>(terms), 0.0);
  for (int j = 2; j <= terms; ++j) {
    auto idx = static_cast<std::size_t>(j - 1);
    s.slopes[idx] = std::ldexp(1.0, -j);
    s.weights[idx] = free_mass * std::ldexp(1.0, -(j - 1)) / norm;
    tail_log += s.weights[idx] * std::log(s.slopes[idx]);
  }
  s.weights[0] = 1.0 - free_mass;
  s.slopes[0] = std::exp((-std::log(2.0) - tail_log) / s.weights[0]);
  if (!(s.slopes[0] > 0.5 && s.slopes[0] < 1.0))
    throw InputError("no admissible c_1 in (1/2, 1) for these parameters");
  s.truncation_tail_bound = free_mass * std::ldexp(1.0, -(terms - 1));

  double mass = 0, lg = 0;
  for (std::size_t j = 0; j < s.slopes.size(); ++j) {
    mass += s.weights[j];
    lg += s.weights[j] * std::log(s.slopes[j]);
  }
  if (std::abs(mass - 1.0) > 1e-12 || std::abs(lg + std::log(2.0)) > 1e-12)
    throw InputError("sublevel parameters violate their constraints");
  return make_domain({std::move(s), "sublevel_dcg"});
}

/**
 * @brief Reproducible Hartogs-type instance: c_j = 3^-j, r_j = c_j / 4, and
 * weights k_j chosen so that sum k_j log|c_j| = -1 + slack; weights whose
 * sublevel {v < -2} leaks outside the disks on the verification grid are
 * halved until the grid check passes.
 */
inline DomainPtr make_hartogs_pgvlu(int terms = 6, double slack = 0.1,
                                    int grid = 400) {
  if (terms < 1 || !(slack > 0 && slack < 1))
    throw InputError("invalid Hartogs parameters");
  HartogsPgvlu h;
  const double budget = 1.0 - slack;
  const double geo = 1.0 - std::ldexp(1.0, -terms);
  for (int j = 1; j <= terms; ++j) {
    double c = std::pow(3.0, -j);
    h.centers.emplace_back(c, 0.0);
    h.radii.push_back(c / 4.0);
    h.weights.push_back(budget * std::ldexp(1.0, -j) / (j * std::log(3.0) * geo));
  }
  for (std::size_t i = 0; i < h.centers.size(); ++i)
    for (std::size_t j = i + 1; j < h.centers.size(); ++j)
      if (std::abs(h.centers[i] - h.centers[j]) <= h.radii[i] + h.radii[j])
        throw InputError("Hartogs disks overlap");

  for (int round = 0; round < 40; ++round) {
    std::optional<std::size_t> offender;
    for (int a = 0; a < grid && !offender; ++a)
      for (int b = 0; b < grid && !offender; ++b) {
        cplx t(-1.0 + (2.0 * a + 1.0) / grid, -1.0 + (2.0 * b + 1.0) / grid);
        if (std::abs(t) >= 1.0 || !(h.v(t) < -2.0))
          continue;
        bool covered = false;
        std::size_t nearest = 0;
        double best = kInf;
        for (std::size_t j = 0; j < h.centers.size(); ++j) {
          double d = std::abs(t - h.centers[j]);
          if (d < h.radii[j])
            covered = true;
          if (d < best) {
            best = d;
            nearest = j;
          }
        }
        if (!covered)
          offender = nearest;
      }
    if (!offender)
      break;
    h.weights[*offender] *= 0.5;
    if (round == 39)
      throw InputError("could not satisfy the Hartogs sublevel constraint");
  }
  h.verified_grid = grid;
  h.weighted_log_centers = 0;
  for (std::size_t j = 0; j < h.centers.size(); ++j)
    h.weighted_log_centers += h.weights[j] * std::log(std::abs(h.centers[j]));
  if (!(h.weighted_log_centers > -1.0))
    throw InputError("Hartogs weights violate sum k_j log|c_j| > -1");
  h.truncation_tail_bound = h.weights.back();
  return make_domain({std::move(h), "hartogs_pgvlu"});
}

inline HoloMap make_map(decltype(HoloMap::kind) kind, DomainPtr source,
                        DomainPtr target, std::string name, bool validate = true) {
  HoloMap f{std::move(kind), std::move(source), std::move(target), std::move(name)};
  if (validate)
    validate_map(f);
  return f;
}

inline HoloMap identity_map(const DomainPtr &d) {
  return make_map(IdentityMap{}, d, d, "identity");
}

inline HoloMap projection_map(const DomainPtr &source, int index,
                              const DomainPtr &target) {
  return make_map(ProjectionMap{index}, source, target,
                  "projection_" + std::to_string(index));
}

/// Mobius automorphism of coordinate `coordinate` of a polydisk (or a disk)
/// moving `a` to the coordinate center, followed by rotation by theta.
inline HoloMap coordinate_mobius(const DomainPtr &d, int coordinate, cplx a,
                                 double theta = 0.0) {
  Mobius1D m;
  if (const auto *pd = d->as<Polydisk>()) {
    m.src_center = m.dst_center = pd->center[coordinate];
    m.src_radius = m.dst_radius = pd->radii[static_cast<std::size_t>(coordinate)];
  } else if (const auto *b = d->as<Ball>(); b && b->center.dim() == 1) {
    m.src_center = m.dst_center = b->center[0];
    m.src_radius = m.dst_radius = b->radius;
  } else {
    throw InputError("coordinate Mobius maps need a disk or polydisk");
  }
  m.a = (a - m.src_center) / m.src_radius;
  if (std::abs(m.a) >= 1)
    throw InputError("Mobius parameter must lie inside the disk");
  m.theta = theta;
  return make_map(CoordinateMobiusMap{coordinate, m}, d, d, "mobius");
}

inline HoloMap swap_map(const DomainPtr &d) {
  return make_map(SwapMap{}, d, d, "swap");
}

inline HoloMap hartogs_fold_map(const DomainPtr &hartogs) {
  if (!hartogs->is<HartogsPgvlu>())
    throw InputError("the fold map is declared on the Hartogs domain");
  return make_map(HartogsFoldMap{}, hartogs, make_unit_polydisk(2), "fold");
}

/// Automorphism of a ball moving `a` to the center (and back).
inline HoloMap ball_automorphism(const DomainPtr &d, const Point &a) {
  const auto *b = d->as<Ball>();
  if (!b)
    throw InputError("ball automorphisms need a ball");
  if (!(margin_unchecked(*d, a) > 0))
    throw InputError("automorphism parameter must lie inside the ball");
  return make_map(BallAutomorphismMap{b->center, b->radius, a}, d, d,
                  "ball_automorphism");
}

/// Affine slice t -> origin + t * direction on the planar disk |t| < rho.
inline HoloMap affine_slice(const DomainPtr &target, const Point &origin,
                            const Point &direction, double rho,
                            bool validate = true) {
  return make_map(AffineSliceMap{origin, direction}, make_ball(Point(0.0), rho),
                  target, "affine_slice", validate);
}

inline HoloMap compose(std::vector<HoloMap> chain, bool validate = true) {
  if (chain.empty())
    throw InputError("empty composition");
  for (std::size_t i = 1; i < chain.size(); ++i)
    if (dim(*chain[i - 1].target) != dim(*chain[i].source))
      throw DimensionError("composition chain has mismatched dimensions");
  DomainPtr s = chain.front().source, t = chain.back().target;
  return make_map(CompositionMap{std::move(chain)}, s, t, "composition", validate);
}

/// Image of a domain under a biholomorphic map, handled through the inverse.
inline DomainPtr make_pushforward(const DomainPtr &source, const HoloMap &f) {
  if (f.source.get() != source.get() && dim(*f.source) != dim(*source))
    throw DimensionError("map source does not match the domain");
  auto inv = inverse(f);
  if (!inv)
    throw InputError("pushforward models need an invertible map");
  Pushforward pf{source, std::make_shared<const HoloMap>(f),
                 std::make_shared<const HoloMap>(*inv)};
  return make_domain({std::move(pf), "pushforward"});
}

// ---------------------------------------------------------------------------
// Defining plurisubharmonic functions
// ---------------------------------------------------------------------------

/// Negative PSH functions built from the defining inequalities; for the
/// hyperconvex models the first entry is a negative exhaustion.
inline std::vector<ScalarField> defining_psh(const DomainPtr &dp) {
  const Domain &d = *dp;
  std::vector<ScalarField> out;
  if (const auto *b = d.as<Ball>()) {
    Point c = b->center;
    double r = b->radius;
    out.push_back(ScalarField::leaf(
        "log_norm_ratio", FieldKind::LogModulus,
        [c, r](const Point &z) { return safe_log(distance(z, c) / r); }, c));
  } else if (const auto *pd = d.as<Polydisk>()) {
    Polydisk m = *pd;
    out.push_back(ScalarField::leaf(
        "max_log_coordinate", FieldKind::LogModulus,
        [m](const Point &z) {
          double s = -kInf;
          for (int i = 0; i < z.dim(); ++i)
            s = std::max(s, safe_log(std::abs(z[i] - m.center[i]) /
                                     m.radii[static_cast<std::size_t>(i)]));
          return s;
        },
        m.center));
  } else if (const auto *s = d.as<SublevelDcg>()) {
    SublevelDcg m = *s;
    out.push_back(ScalarField::leaf(
        "u", FieldKind::Explicit, [m](const Point &z) { return m.u(z); },
        Point::zeros(2)));
  } else if (const auto *h = d.as<HartogsPgvlu>()) {
    HartogsPgvlu m = *h;
    out.push_back(ScalarField::leaf(
        "max_defining_logs", FieldKind::Explicit, [m](const Point &z) {
          double a = safe_log(std::abs(z[0]));
          double b = safe_log(std::abs(z[1])) + m.v(z[0]);
          double c = safe_log(std::abs(z[0] * z[1]));
          return std::max({a, std::isnan(b) ? -kInf : b, c});
        }));
  } else if (const auto *pc = d.as<PlanarComplement>()) {
    double R = pc->outer_radius;
    out.push_back(ScalarField::leaf(
        "log_outer_ratio", FieldKind::LogModulus,
        [R](const Point &z) { return safe_log(std::abs(z[0]) / R); }, Point(0.0)));
  } else if (const auto *pf = d.as<Pushforward>()) {
    auto inv = pf->inverse;
    for (auto f : defining_psh(pf->source)) {
      ScalarField g;
      g.name = f.name + "_pullback";
      g.kind = FieldKind::Pullback;
      g.parts = {f};
      g.eval = [f, inv](const Point &z) { return f(evaluate(*inv, z)); };
      if (f.pole)
        g.pole = evaluate(*pf->map, *f.pole);
      out.push_back(std::move(g));
    }
  }
  return out;
}

} // namespace pluri
