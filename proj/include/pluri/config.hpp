/**
 * @file config.hpp
 * @brief Search budgets, tolerances and run configuration.
 */
#pragma once

#include <cstdint>
#include <string>

#include "pluri/core.hpp"

namespace pluri {

struct SearchBudget {
  int restarts = 32;          ///< multi-start count per hit count
  int degree = 6;             ///< polynomial degree of searched disks
  int max_hits = 2;           ///< declared preimages of w per disk
  int search_samples = 128;   ///< boundary samples used inside the penalty
  int boundary_samples = 512; ///< first certification pass
  int max_boundary_samples = 8192;
  int grid_radii = 64;        ///< full-disk grid for non-PSH domains
  int grid_angles = 128;
  int simplex_evaluations = 1500;
  int annuli = 7;
  int angles = 8;             ///< angular grid for directional limits
  int directions = 64;        ///< H-unit sphere sample size for n = 2

  void validate() const {
    if (restarts < 1 || degree < 1 || max_hits < 1 || max_hits > 2 ||
        search_samples < 8 || boundary_samples < 8 ||
        max_boundary_samples < boundary_samples || grid_radii < 2 ||
        grid_angles < 8 || simplex_evaluations < 10 || annuli < 1 ||
        angles < 1 || directions < 1)
      throw InputError("search budget entries must be positive and consistent");
  }
};

struct Tolerances {
  double pinch = 1e-3;      ///< skip polynomial search once hi - lo is below
  double soundness = 1e-9;  ///< allowed lo - hi before a hard failure
  double root_match = 1e-9; ///< common-root residual
  double feasibility = 1e-3; ///< margin demanded of search candidates
  double spread_bound = 0.5;
  double eps = 0.1;         ///< ratio test target
};

struct RunConfig {
  std::uint64_t seed = 20240917;
  SearchBudget budget;
  Tolerances tol;
  std::string format = "json";
  std::string output;
  int workers = 1;
};

} // namespace pluri
