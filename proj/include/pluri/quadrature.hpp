/**
 * @file quadrature.hpp
 * @brief Gauss-Legendre rules and adaptive one-dimensional integration
 * (both from GSL).
 */
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "pluri/core.hpp"

namespace pluri {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
inline Rule gauss_legendre(int n, double a, double b) {
  if (n < 1)
    throw InputError("quadrature order must be positive");
  std::unique_ptr<gsl_integration_glfixed_table,
                  decltype(&gsl_integration_glfixed_table_free)>
      t(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n)),
        &gsl_integration_glfixed_table_free);
  Rule r;
  for (int i = 0; i < n; ++i) {
    double x, w;
    gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, t.get());
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return r;
}

namespace detail {
inline double gsl_trampoline(double x, void *p) {
  return (*static_cast<const std::function<double(double)> *>(p))(x);
}
} // namespace detail

struct IntegralResult {
  double value;
  double abs_error;
  bool converged;
};

/// Adaptive integration tolerant of integrable endpoint singularities (QAGS).
inline IntegralResult integrate(const std::function<double(double)> &f, double a,
                                double b, double abs_tol = 1e-11,
                                double rel_tol = 1e-10) {
  gsl_set_error_handler_off();
  constexpr std::size_t limit = 2000;
  std::unique_ptr<gsl_integration_workspace,
                  decltype(&gsl_integration_workspace_free)>
      ws(gsl_integration_workspace_alloc(limit), &gsl_integration_workspace_free);
  gsl_function fn{&detail::gsl_trampoline,
                  const_cast<std::function<double(double)> *>(&f)};
  double v = 0, e = 0;
  int st = gsl_integration_qags(&fn, a, b, abs_tol, rel_tol, limit, ws.get(), &v, &e);
  return {v, e, st == GSL_SUCCESS};
}

} // namespace pluri
