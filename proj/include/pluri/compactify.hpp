/**
 * @file compactify.hpp
 * @brief Normalized Green embeddings w -> g(., w) / ||g(., w)||_V of the disk
 * and bidisk into L^1(V), boundary traces, single-linkage clustering and the
 * invariance test under automorphisms.
 */
#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pluri/bound_engine.hpp"
#include "pluri/quadrature.hpp"

namespace pluri {

enum class ModelKind { Disk, Bidisk };

/// Lebesgue measure on the unit disk or bidisk with a shared polar
/// Gauss-Legendre x trapezoid grid.
struct VolumeForm {
  ModelKind kind = ModelKind::Disk;
  int resolution = 0;
  std::function<double(const Point &)> weight; ///< density against Lebesgue measure
  std::vector<Point> nodes;
  std::vector<double> weights; ///< quadrature weight times density
  double mass = 0;
  int angular = 0; ///< angular nodes per factor (rotations by 2 pi / angular permute nodes)
  int radial = 0;
  double c_F = 0;                ///< empirical constant on F = {||z||_inf <= 1/2}
  std::vector<double> eps_j;     ///< tail fractions outside {||z||_inf < 1 - 2^-j}
};

struct GridFunction {
  std::vector<double> values;
  std::shared_ptr<const VolumeForm> form;

  double norm() const {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += form->weights[i] * std::abs(values[i]);
    return s;
  }
};

inline double l1_distance(const GridFunction &a, const GridFunction &b) {
  if (a.form != b.form)
    throw InputError("grid functions live on different grids");
  double s = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s += a.form->weights[i] * std::abs(a.values[i] - b.values[i]);
  return s;
}

inline ModelKind model_kind(const Domain &d) {
  if (const auto *b = d.as<Ball>(); b && b->center.dim() == 1 && b->center[0] == 0.0 &&
                                    b->radius == 1.0)
    return ModelKind::Disk;
  if (const auto *p = d.as<Polydisk>(); p && p->center.dim() == 2 && p->center.norm() == 0 &&
                                        p->radii[0] == 1.0 && p->radii[1] == 1.0)
    return ModelKind::Bidisk;
  throw InputError("the compactification pipeline supports the unit disk and unit bidisk");
}

// ---------------------------------------------------------------------------
// c_V by adaptive quadrature in Mobius coordinates
// ---------------------------------------------------------------------------

namespace detail {

/// Angular integral of the Jacobian of s -> (s + w)/(1 + conj(w) s) over |s| = rho.
inline double mobius_ring(double a2, double rho) {
  double q = a2 * rho * rho;
  return 2 * kPi * (1 - a2) * (1 - a2) * (1 + q) / std::pow(1 - q, 3);
}

inline double checked(const IntegralResult &r) {
  if (!r.converged)
    throw InfeasibleError("quadrature of the Green function did not converge");
  return r.value;
}

} // namespace detail

/// ||g(., w)||_{L^1} against Lebesgue measure.
inline double c_V(const DomainPtr &dp, const Point &w) {
  ModelKind kind = model_kind(*dp);
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  if (kind == ModelKind::Disk) {
    double a2 = std::norm(w[0]);
    return detail::checked(integrate(
        [a2](double r) { return -std::log(r) * detail::mobius_ring(a2, r) * r; }, 0.0, 1.0));
  }
  double a1 = std::norm(w[0]), a2 = std::norm(w[1]);
  // |g| = -log max(|s1|, |s2|); split the inner integral at rho2 = rho1.
  auto outer = [a1, a2](double r1) {
    double k2 = detail::checked(integrate(
        [a2](double r) { return detail::mobius_ring(a2, r) * r; }, 0.0, r1));
    double tail = r1 < 1 ? detail::checked(integrate(
                               [a2](double r) { return -std::log(r) * detail::mobius_ring(a2, r) * r; },
                               r1, 1.0))
                         : 0.0;
    return (-std::log(r1) * k2 + tail) * detail::mobius_ring(a1, r1) * r1;
  };
  return detail::checked(integrate(outer, 0.0, 1.0, 1e-9, 1e-8));
}

// ---------------------------------------------------------------------------
// Norming form, embeddings
// ---------------------------------------------------------------------------

inline double model_green(ModelKind kind, const Point &z, const Point &w) {
  if (kind == ModelKind::Disk)
    return disk_green(z[0], w[0]);
  return std::max(disk_green(z[0], w[0]), disk_green(z[1], w[1]));
}

/**
 * @brief Constant-weight volume form with its grid.
 *
 * Disk: resolution/2 radial Gauss nodes (in r^2) by `resolution` angles
 * (at half steps).
 * Bidisk: the product of two disk grids with resolution/4 radial and
 * resolution/2 angular nodes each. Also records C(F) and the tail fractions
 * eps_j for the family g(., w), w on a fixed sample.
 */
inline std::shared_ptr<const VolumeForm> norming_form(const DomainPtr &dp, int resolution) {
  if (resolution < 8)
    throw InputError("resolution must be at least 8");
  auto V = std::make_shared<VolumeForm>();
  V->kind = model_kind(*dp);
  V->resolution = resolution;
  V->weight = [](const Point &) { return 1.0; };
  const bool disk = V->kind == ModelKind::Disk;
  V->radial = disk ? resolution / 2 : resolution / 4;
  V->angular = disk ? resolution : resolution / 2;
  // Substituting t = r^2 turns r dr into dt / 2 and keeps the rule exact for
  // polynomial densities in r^2. Angles sit at half steps so that no node
  // lies on the rays to the multiples of pi/2 where the test sequences exit.
  Rule rr = gauss_legendre(V->radial, 0.0, 1.0);
  std::vector<cplx> pts;
  std::vector<double> wts;
  for (std::size_t i = 0; i < rr.nodes.size(); ++i)
    for (int k = 0; k < V->angular; ++k) {
      pts.push_back(std::polar(std::sqrt(rr.nodes[i]), 2 * kPi * (k + 0.5) / V->angular));
      wts.push_back(0.5 * rr.weights[i] * 2 * kPi / V->angular);
    }
  if (disk) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      V->nodes.emplace_back(pts[i]);
      V->weights.push_back(wts[i] * V->weight(V->nodes.back()));
    }
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        V->nodes.emplace_back(pts[i], pts[j]);
        V->weights.push_back(wts[i] * wts[j] * V->weight(V->nodes.back()));
      }
  }
  V->mass = std::accumulate(V->weights.begin(), V->weights.end(), 0.0);

  // Empirical norming constants for the Green family.
  std::vector<Point> family;
  for (double r : {0.0, 0.3, 0.6, 0.9})
    for (int k = 0; k < 4; ++k) {
      cplx a = std::polar(r, kPi * k / 2 + 0.3);
      family.push_back(disk ? Point(a) : Point(a, 0.5 * a));
    }
  auto inf_norm = [](const Point &z) {
    double m = 0;
    for (int i = 0; i < z.dim(); ++i)
      m = std::max(m, std::abs(z[i]));
    return m;
  };
  V->c_F = kInf;
  V->eps_j.assign(6, 0.0);
  for (const auto &w : family) {
    double total = 0;
    std::vector<double> tail(6, 0.0);
    for (std::size_t i = 0; i < V->nodes.size(); ++i) {
      double g = -model_green(V->kind, V->nodes[i], w);
      total += V->weights[i] * g;
      double m = inf_norm(V->nodes[i]);
      for (int j = 1; j <= 6; ++j)
        if (m >= 1 - std::ldexp(1.0, -j))
          tail[static_cast<std::size_t>(j - 1)] += V->weights[i] * g;
    }
    for (std::size_t j = 0; j < 6; ++j)
      V->eps_j[j] = std::max(V->eps_j[j], tail[j] / total);
    double cv = c_V(dp, w);
    // sup of g over F is attained on its distinguished boundary for these
    // maximal functions; sample the torus/circle of radius 1/2.
    for (int k = 0; k < 64; ++k) {
      cplx e = std::polar(0.5, 2 * kPi * k / 64);
      for (int l = 0; l < (disk ? 1 : 64); ++l) {
        Point z = disk ? Point(e) : Point(e, std::polar(0.5, 2 * kPi * l / 64));
        V->c_F = std::min(V->c_F, -model_green(V->kind, z, w) / cv);
      }
    }
  }
  return V;
}

enum class Normalization { CV, Martin };

/// Phi_V(w) on the grid. CV: divided by the grid L^1 norm, so the vector
/// has norm one. Martin: divided by |g(z0, w)|.
inline GridFunction phi_V(const DomainPtr &dp, const Point &w,
                          const std::shared_ptr<const VolumeForm> &V,
                          Normalization mode = Normalization::CV,
                          const std::optional<Point> &z0 = std::nullopt) {
  if (model_kind(*dp) != V->kind)
    throw InputError("volume form built for a different domain");
  if (!(contains(*dp, w) > 0))
    throw InputError("pole outside the domain");
  GridFunction f{std::vector<double>(V->nodes.size()), V};
  for (std::size_t i = 0; i < V->nodes.size(); ++i)
    f.values[i] = model_green(V->kind, V->nodes[i], w);
  double scale;
  if (mode == Normalization::CV) {
    scale = f.norm();
  } else {
    Point base = z0 ? *z0 : Point::zeros(w.dim());
    scale = std::abs(model_green(V->kind, base, w));
  }
  if (!(scale > 0) || !std::isfinite(scale))
    throw InfeasibleError("normalization constant vanished");
  for (auto &x : f.values)
    x /= scale;
  return f;
}

/// -P(z, e^{i alpha}) / pi, the expected limit of Phi_V(w) as w -> e^{i alpha}
/// in the disk, normalized on the same grid.
inline GridFunction poisson_profile(const std::shared_ptr<const VolumeForm> &V, double alpha) {
  if (V->kind != ModelKind::Disk)
    throw InputError("Poisson profiles are defined for the disk");
  GridFunction f{std::vector<double>(V->nodes.size()), V};
  cplx e = std::polar(1.0, alpha);
  for (std::size_t i = 0; i < V->nodes.size(); ++i) {
    cplx z = V->nodes[i][0];
    f.values[i] = -(1 - std::norm(z)) / std::norm(e - z);
  }
  double n = f.norm();
  for (auto &x : f.values)
    x /= n;
  return f;
}

// ---------------------------------------------------------------------------
// Boundary traces and clustering
// ---------------------------------------------------------------------------

struct TraceReport {
  std::vector<std::vector<double>> distances; ///< pairwise L^1 distances
  std::vector<double> successive;             ///< d(Phi_j, Phi_{j+1})
  bool cauchy = false;                        ///< last successive distance <= tol
  std::optional<double> limit_angle;
  std::optional<double> profile_distance;     ///< tail vs Poisson profile (disk)
};

inline std::vector<std::vector<double>> distance_matrix(const std::vector<GridFunction> &fs) {
  std::vector<std::vector<double>> d(fs.size(), std::vector<double>(fs.size(), 0.0));
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      d[i][j] = d[j][i] = l1_distance(fs[i], fs[j]);
  return d;
}

inline TraceReport boundary_trace(const DomainPtr &dp, const std::vector<Point> &seq,
                                  const std::shared_ptr<const VolumeForm> &V,
                                  double cauchy_tol = 0.05) {
  if (seq.empty())
    throw InputError("empty sequence");
  std::vector<GridFunction> fs;
  for (const auto &w : seq)
    fs.push_back(phi_V(dp, w, V));
  TraceReport rep;
  rep.distances = distance_matrix(fs);
  for (std::size_t j = 0; j + 1 < fs.size(); ++j)
    rep.successive.push_back(rep.distances[j][j + 1]);
  rep.cauchy = rep.successive.empty() || rep.successive.back() <= cauchy_tol;
  if (V->kind == ModelKind::Disk && std::abs(seq.back()[0]) > 0) {
    double alpha = std::arg(seq.back()[0]);
    rep.limit_angle = alpha;
    rep.profile_distance = l1_distance(fs.back(), poisson_profile(V, alpha));
  }
  return rep;
}

/// Cluster labels, 0-based in order of first appearance, of single-linkage
/// clustering at scale eps (components of the graph d < eps).
inline std::vector<int> single_linkage(const std::vector<std::vector<double>> &d, double eps) {
  const std::size_t n = d.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[i][j] < eps)
        parent[find(i)] = find(j);
  std::vector<int> label(n, -1);
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    label[i] = static_cast<int>(it - roots.begin());
    if (it == roots.end())
      roots.push_back(r);
  }
  return label;
}

/// Minimum number of elements to relabel to turn one partition into the
/// other: N minus a maximum-weight matching of the contingency table
/// (Hungarian method on the negated table).
inline int partition_edit_distance(const std::vector<int> &a, const std::vector<int> &b) {
  if (a.size() != b.size())
    throw InputError("partitions of different sets");
  if (a.empty())
    return 0;
  int na = *std::max_element(a.begin(), a.end()) + 1;
  int nb = *std::max_element(b.begin(), b.end()) + 1;
  int n = std::max(na, nb);
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(n + 1),
                                        std::vector<double>(static_cast<std::size_t>(n + 1), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    cost[static_cast<std::size_t>(a[i] + 1)][static_cast<std::size_t>(b[i] + 1)] -= 1;
  // Hungarian algorithm (potentials), 1-based.
  std::vector<double> u(static_cast<std::size_t>(n + 1)), v(static_cast<std::size_t>(n + 1));
  std::vector<int> p(static_cast<std::size_t>(n + 1)), way(static_cast<std::size_t>(n + 1));
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        auto ju = static_cast<std::size_t>(j);
        if (used[ju])
          continue;
        double cur = cost[static_cast<std::size_t>(i0)][ju] - u[static_cast<std::size_t>(i0)] - v[ju];
        if (cur < minv[ju]) {
          minv[ju] = cur;
          way[ju] = j0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(p[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  int matched = 0;
  for (int j = 1; j <= n; ++j)
    matched += static_cast<int>(-cost[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])]
                                     [static_cast<std::size_t>(j)]);
  return static_cast<int>(a.size()) - matched;
}

inline const std::vector<double> &cluster_scales() {
  static const std::vector<double> s{0.5, 0.2, 0.1};
  return s;
}

struct InvarianceReport {
  std::vector<double> scales;
  std::vector<std::vector<int>> before, after;
  std::vector<int> edit_distance;
  int max_edit_distance = 0;
  double max_distortion = 0; ///< max |d(Phi(w_i), Phi(w_j)) - d(Phi'(F w_i), Phi'(F w_j))|
};

/// Compares the cluster structure of Phi_V(w_k) with that of Phi_V'(F(w_k)).
inline InvarianceReport invariance_test(const DomainPtr &dp, const HoloMap &F,
                                        const std::vector<Point> &sample,
                                        const std::shared_ptr<const VolumeForm> &V,
                                        const std::shared_ptr<const VolumeForm> &Vp) {
  std::vector<GridFunction> a, b;
  for (const auto &w : sample) {
    a.push_back(phi_V(dp, w, V));
    b.push_back(phi_V(F.target, apply_map(F, w), Vp));
  }
  auto da = distance_matrix(a), db = distance_matrix(b);
  InvarianceReport rep;
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < da.size(); ++j)
      rep.max_distortion = std::max(rep.max_distortion, std::abs(da[i][j] - db[i][j]));
  for (double eps : cluster_scales()) {
    auto la = single_linkage(da, eps), lb = single_linkage(db, eps);
    int e = partition_edit_distance(la, lb);
    rep.scales.push_back(eps);
    rep.before.push_back(la);
    rep.after.push_back(lb);
    rep.edit_distance.push_back(e);
    rep.max_edit_distance = std::max(rep.max_edit_distance, e);
  }
  return rep;
}

/// w_j = (1 - 2^-j) e^{i alpha}, j = first..last.
inline std::vector<Point> radial_sequence(double alpha, int first, int last) {
  std::vector<Point> out;
  for (int j = first; j <= last; ++j)
    out.emplace_back(std::polar(1 - std::ldexp(1.0, -j), alpha));
  return out;
}

} // namespace pluri
