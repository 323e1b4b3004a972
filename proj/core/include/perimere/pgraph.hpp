#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "perimere/lattice.hpp"
#include "perimere/real_basis.hpp"

namespace perimere {

struct Vertex {
  std::int64_t id = 0;
  double value = 0.0;
  /// Decimal text the value was read from, kept for lossless output.
  std::optional<std::string> literal;
};

/// Undirected edge. `shift` belongs to the u -> v direction; v -> u uses the
/// negation.
struct Edge {
  std::int64_t id = 0;
  std::int64_t u = 0;
  std::int64_t v = 0;
  double value = 0.0;
  std::vector<std::int64_t> shift;
  std::optional<std::string> literal;
};

/// Finite quotient graph K / Lambda of a periodic filtered graph.
class PeriodicGraph {
 public:
  /// Validates the filter property, id uniqueness, endpoints and shift
  /// lengths; throws InputError naming the offending cell.
  PeriodicGraph(RealBasis basis, std::vector<Vertex> vertices, std::vector<Edge> edges);

  std::size_t dim() const { return basis_.dim(); }
  const RealBasis& basis() const { return basis_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Position of a vertex id in vertices(); throws for unknown ids.
  std::size_t vertex_index(std::int64_t id) const;

  /// Copy with new filter values (same combinatorics). Literals are dropped.
  PeriodicGraph with_values(const std::vector<double>& vertex_values,
                            const std::vector<double>& edge_values) const;

 private:
  RealBasis basis_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<std::int64_t, std::size_t> index_;
};

PeriodicGraph parse_graph(std::istream& in);
PeriodicGraph parse_graph(const std::string& text);
PeriodicGraph load_graph(const std::string& path);
/// JSON text; values read from decimal strings are written back verbatim,
/// numeric values with round-trip precision.
std::string serialize_graph(const PeriodicGraph& g);

/// Max absolute shift entry over all edges; 0 without edges.
std::int64_t max_shift_magnitude(const PeriodicGraph& g);

/// Number of connected components of the quotient graph.
std::size_t component_count(const PeriodicGraph& g);

/// Sum over all cells of |f - g|; throws unless both graphs share ids,
/// endpoints and shifts.
double cellular_l1(const PeriodicGraph& f, const PeriodicGraph& g);

/// Quotient of the same periodic graph by the sublattice S * Lambda: one
/// copy of every cell per coset of Z^d / S Z^d, with real basis U * S.
PeriodicGraph unroll(const PeriodicGraph& g, const IntMatrix& s);

/// Parses "r1;r2;..." with comma-separated integer entries per row. Throws
/// unless the matrix is square and nonsingular.
IntMatrix parse_sublattice(const std::string& text);

}  // namespace perimere
