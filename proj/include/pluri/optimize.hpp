/**
 * @file optimize.hpp
 * @brief Derivative-free simplex minimization (GSL nmsimplex2) with an
 * evaluation cap.
 */
#pragma once

#include <functional>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "pluri/core.hpp"

namespace pluri {

struct SimplexResult {
  std::vector<double> x;
  double value = kInf;
  int evaluations = 0;
};

namespace detail {
struct SimplexContext {
  const std::function<double(const std::vector<double> &)> *f;
  std::vector<double> buffer;
  int evaluations = 0;
};

inline double simplex_trampoline(const gsl_vector *v, void *params) {
  auto *ctx = static_cast<SimplexContext *>(params);
  for (std::size_t i = 0; i < ctx->buffer.size(); ++i)
    ctx->buffer[i] = gsl_vector_get(v, i);
  ++ctx->evaluations;
  double y = (*ctx->f)(ctx->buffer);
  return std::isfinite(y) ? y : 1e300;
}
} // namespace detail

/// Minimizes f from x0 with initial simplex steps `step`. Deterministic.
inline SimplexResult nelder_mead(
    const std::function<double(const std::vector<double> &)> &f,
    const std::vector<double> &x0, double step, int max_evaluations,
    double size_tol = 1e-10) {
  SimplexResult res;
  res.x = x0;
  if (x0.empty()) {
    res.value = f(x0);
    res.evaluations = 1;
    return res;
  }
  gsl_set_error_handler_off();
  const std::size_t n = x0.size();
  detail::SimplexContext ctx{&f, std::vector<double>(n), 0};
  gsl_multimin_function fn{&detail::simplex_trampoline, n, &ctx};
  gsl_vector *x = gsl_vector_alloc(n);
  gsl_vector *ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(ss, i, step);
  }
  gsl_multimin_fminimizer *s =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  while (ctx.evaluations < max_evaluations) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS)
      break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) ==
        GSL_SUCCESS)
      break;
  }
  for (std::size_t i = 0; i < n; ++i)
    res.x[i] = gsl_vector_get(s->x, i);
  res.value = s->fval;
  res.evaluations = ctx.evaluations;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return res;
}

} // namespace pluri
