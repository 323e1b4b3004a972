#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "perimere/pgraph.hpp"

namespace perimere {

/// Grid graph on the d-torus with `sides[i]` vertices along axis i, one edge
/// to the next vertex along every axis, and shift e_i on wrapping edges.
/// Vertex values are uniform in [0, 1); an edge gets the max of its
/// endpoints plus a uniform offset in [0, 1).
PeriodicGraph make_torus_grid(const std::vector<std::size_t>& sides, std::uint64_t seed);

struct RandomGraphOptions {
  std::size_t dim = 3;
  std::size_t vertices = 10;
  std::size_t edges = 30;
  std::int64_t max_shift = 1;
  /// When positive, values are drawn from {0, ..., levels - 1} so that ties
  /// are common.
  int levels = 0;
};

PeriodicGraph make_random_graph(const RandomGraphOptions& opt, std::uint64_t seed);

}  // namespace perimere
