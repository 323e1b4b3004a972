#include "perimere/generators.hpp"

#include <algorithm>
#include <random>

#include "perimere/error.hpp"

namespace perimere {

PeriodicGraph make_torus_grid(const std::vector<std::size_t>& sides, std::uint64_t seed) {
  const std::size_t d = sides.size();
  if (d == 0 || std::any_of(sides.begin(), sides.end(), [](std::size_t s) { return s == 0; })) {
    throw InputError("torus grid needs at least one axis and positive sides");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t n = 1;
  for (std::size_t s : sides) {
    n *= s;
  }
  std::vector<Vertex> vertices(n);
  for (std::size_t i = 0; i < n; ++i) {
    vertices[i] = Vertex{static_cast<std::int64_t>(i), unit(rng), {}};
  }
  std::vector<Edge> edges;
  edges.reserve(n * d);
  std::vector<std::size_t> coord(d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t stride = 1;
    for (std::size_t a = 0; a < d; ++a) {
      std::vector<std::int64_t> shift(d, 0);
      std::size_t j = i + stride;
      if (coord[a] + 1 == sides[a]) {
        j = i - coord[a] * stride;
        shift[a] = 1;
      }
      const double value = std::max(vertices[i].value, vertices[j].value) + unit(rng);
      edges.push_back(Edge{static_cast<std::int64_t>(n + edges.size()), vertices[i].id,
                           vertices[j].id, value, std::move(shift), {}});
      stride *= sides[a];
    }
    for (std::size_t a = 0; a < d && ++coord[a] == sides[a]; ++a) {
      coord[a] = 0;
    }
  }
  return PeriodicGraph(RealBasis::identity(d), std::move(vertices), std::move(edges));
}

PeriodicGraph make_random_graph(const RandomGraphOptions& opt, std::uint64_t seed) {
  if (opt.dim == 0 || (opt.vertices == 0 && opt.edges > 0)) {
    throw InputError("random graph needs a positive dimension and vertices for its edges");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, opt.vertices == 0 ? 0 : opt.vertices - 1);
  std::uniform_int_distribution<std::int64_t> shift_entry(-opt.max_shift, opt.max_shift);
  std::uniform_int_distribution<int> level(0, std::max(opt.levels, 1) - 1);
  auto draw = [&] { return opt.levels > 0 ? static_cast<double>(level(rng)) : unit(rng); };

  std::vector<Vertex> vertices(opt.vertices);
  for (std::size_t i = 0; i < opt.vertices; ++i) {
    vertices[i] = Vertex{static_cast<std::int64_t>(i), draw(), {}};
  }
  std::vector<Edge> edges;
  edges.reserve(opt.edges);
  for (std::size_t k = 0; k < opt.edges; ++k) {
    const std::size_t u = pick(rng);
    const std::size_t v = pick(rng);
    std::vector<std::int64_t> shift(opt.dim);
    for (auto& s : shift) {
      s = shift_entry(rng);
    }
    const double value = std::max(vertices[u].value, vertices[v].value) + draw();
    edges.push_back(Edge{static_cast<std::int64_t>(opt.vertices + k), vertices[u].id,
                         vertices[v].id, value, std::move(shift), {}});
  }
  return PeriodicGraph(RealBasis::identity(opt.dim), std::move(vertices), std::move(edges));
}

}  // namespace perimere
