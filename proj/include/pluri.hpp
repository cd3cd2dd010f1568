/**
 * @file pluri.hpp
 * @brief Umbrella header: geometry, disk engine, bound engine, invariant
 * metrics, hyperconvexity checks, compactification and verification suites.
 */
#pragma once

#include "pluri/bound_engine.hpp"
#include "pluri/compactify.hpp"
#include "pluri/disk_engine.hpp"
#include "pluri/geometry.hpp"
#include "pluri/hyperconvex.hpp"
#include "pluri/io.hpp"
#include "pluri/metrics.hpp"
#include "pluri/verify.hpp"
