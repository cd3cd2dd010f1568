/**
 * @file polynomial.hpp
 * @brief Complex polynomials in one variable: Horner evaluation, products,
 * and roots through the companion matrix.
 */
#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pluri/core.hpp"

namespace pluri {

/// Coefficients in increasing degree.
using Poly = std::vector<cplx>;

inline cplx horner(const Poly &p, cplx t) {
  cplx s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    s = s * t + *it;
  return s;
}

inline cplx horner_derivative(const Poly &p, cplx t) {
  cplx s = 0;
  for (std::size_t k = p.size(); k-- > 1;)
    s = s * t + static_cast<double>(k) * p[k];
  return s;
}

inline Poly poly_mul(const Poly &a, const Poly &b) {
  if (a.empty() || b.empty())
    return {};
  Poly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  return c;
}

inline Poly poly_add(Poly a, const Poly &b) {
  if (a.size() < b.size())
    a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] += b[i];
  return a;
}

/// prod_j (t - r_j)
inline Poly poly_from_roots(const std::vector<cplx> &roots) {
  Poly p{1.0};
  for (cplx r : roots)
    p = poly_mul(p, Poly{-r, 1.0});
  return p;
}

/// Degree after dropping trailing coefficients below tol * max|coef|;
/// -1 for the zero polynomial.
inline int effective_degree(const Poly &p, double tol = 1e-14) {
  double scale = 0;
  for (cplx c : p)
    scale = std::max(scale, std::abs(c));
  if (scale == 0)
    return -1;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
    if (std::abs(p[static_cast<std::size_t>(k)]) > tol * scale)
      return k;
  return -1;
}

/// Sum over k >= 1 of k |a_k| r^(k-1), a bound for |p'| on |t| <= r.
inline double derivative_bound(const Poly &p, double r) {
  double s = 0, rk = 1;
  for (std::size_t k = 1; k < p.size(); ++k) {
    s += static_cast<double>(k) * std::abs(p[k]) * rk;
    rk *= r;
  }
  return s;
}

/// Quotient of a by b (remainder discarded).
inline Poly poly_div(Poly a, const Poly &b) {
  int db = effective_degree(b, 0.0);
  if (db < 0)
    throw InputError("division by the zero polynomial");
  int da = static_cast<int>(a.size()) - 1;
  if (da < db)
    return Poly{0.0};
  Poly q(static_cast<std::size_t>(da - db + 1), 0.0);
  cplx lead = b[static_cast<std::size_t>(db)];
  for (int k = da - db; k >= 0; --k) {
    cplx c = a[static_cast<std::size_t>(k + db)] / lead;
    q[static_cast<std::size_t>(k)] = c;
    for (int j = 0; j <= db; ++j)
      a[static_cast<std::size_t>(k + j)] -= c * b[static_cast<std::size_t>(j)];
  }
  return q;
}

/// Taylor coefficients up to `degree` of a function holomorphic beyond the
/// unit circle, from N equispaced samples on it.
template <class F> Poly taylor_from_circle(const F &g, int degree, int samples = 64) {
  Poly a(static_cast<std::size_t>(degree + 1), 0.0);
  for (int j = 0; j < samples; ++j) {
    double th = 2 * kPi * j / samples;
    cplx v = g(std::polar(1.0, th));
    for (int k = 0; k <= degree; ++k)
      a[static_cast<std::size_t>(k)] += v * std::polar(1.0, -k * th);
  }
  for (auto &c : a)
    c /= static_cast<double>(samples);
  return a;
}

/// All roots, eigenvalues of the companion matrix, each polished by a few
/// Newton steps.
inline std::vector<cplx> poly_roots(const Poly &p, double tol = 1e-14) {
  int d = effective_degree(p, tol);
  if (d <= 0)
    return {};
  cplx lead = p[static_cast<std::size_t>(d)];
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i)
    c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i)
    c(i, d - 1) = -p[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(c, false);
  std::vector<cplx> out;
  Poly q(p.begin(), p.begin() + d + 1);
  for (int i = 0; i < d; ++i) {
    cplx t = es.eigenvalues()[i];
    for (int it = 0; it < 4; ++it) {
      cplx dp = horner_derivative(q, t);
      if (std::abs(dp) < 1e-300)
        break;
      cplx step = horner(q, t) / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
        break;
      t -= step;
      if (std::abs(step) < 1e-16 * (1 + std::abs(t)))
        break;
    }
    out.push_back(t);
  }
  return out;
}

} // namespace pluri
