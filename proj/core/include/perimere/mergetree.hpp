#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perimere/lattice.hpp"
#include "perimere/pgraph.hpp"

namespace perimere {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// coeff * nu_exponent * R^exponent with coeff = vol_p(Lambda_C) / vol_d(Lambda)
/// and exponent = d - p. The unit-ball factor is applied only on display.
struct ShadowMonomial {
  double coeff = 1.0;
  int exponent = 0;

  /// coeff * nu_exponent, the leading factor of the displayed monomial.
  double display_coeff() const;
  std::string to_string() const;
};

/// Coefficient tolerance used when ordering monomials.
inline constexpr double kMonomialTolerance = 1e-9;

/// Strict order on monomials: lower exponent first, then smaller coefficient
/// (coefficients within `tol` compare equal).
bool monomial_less(const ShadowMonomial& a, const ShadowMonomial& b,
                   double tol = kMonomialTolerance);
bool monomial_equal(const ShadowMonomial& a, const ShadowMonomial& b,
                    double tol = kMonomialTolerance);

ShadowMonomial shadow_monomial(const RealBasis& basis, const SublatticeBasis& lattice);

struct Epoch {
  double start = 0.0;
  ShadowMonomial monomial;
  SublatticeBasis lattice;
};

struct Beam {
  std::size_t id = 0;
  double birth = 0.0;
  std::int64_t birth_vertex = 0;
  std::vector<Epoch> epochs;
  /// Merge height, or +inf for a beam that survives to the end.
  double death = kInfinity;
  /// Beam this one was absorbed into.
  std::optional<std::size_t> parent;

  /// Epoch active at height t (last epoch with start <= t).
  const Epoch& epoch_at(double t) const;
};

enum class EventKind { appearance, merger, catenation };

const char* to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::appearance;
  double time = 0.0;
  /// Vertex id for appearances, edge id otherwise.
  std::int64_t cell = 0;
  /// Appearance: the new beam. Merger: survivor then absorbed beam.
  /// Catenation: the beam that gets a new epoch.
  std::vector<std::size_t> beams;
  /// New monomial, for catenations.
  std::optional<ShadowMonomial> monomial;
  /// Catenation caused by a merger whose combined lattice outgrows the
  /// survivor's; it shares the merger's edge and height.
  bool via_merger = false;
};

struct EventLog {
  std::vector<Event> events;
  /// Loop edges whose drift already lies in the component lattice.
  std::size_t silent_loops = 0;

  std::size_t count(EventKind kind, bool include_via_merger = true) const;
};

struct PeriodicMergeTree {
  std::size_t dim = 0;
  std::vector<Beam> beams;
  EventLog log;
  /// Components that survive to +inf.
  std::size_t components = 0;

  std::vector<std::size_t> roots() const;
};

/// Union-find over vertex positions with single-level root links, linked
/// component lists and drift vectors. find is one array read; union relabels
/// the smaller component.
class DriftUnionFind {
 public:
  DriftUnionFind(std::size_t vertex_count, std::size_t dim);

  void add(std::size_t x);
  bool contains(std::size_t x) const { return root_[x] != kAbsent; }
  /// Throws InputError for a vertex that was not added.
  std::size_t find(std::size_t x) const;
  std::span<const std::int64_t> drift(std::size_t x) const {
    return {drift_.data() + x * dim_, dim_};
  }
  std::size_t size(std::size_t root) const { return size_[root]; }

  /// Merges the components of x and y along an arc x -> y with the given
  /// shift. Returns the root that survives (the larger component's root).
  std::size_t unite(std::size_t x, std::size_t y, std::span<const std::int64_t> shift);

  /// Drift(x) + shift - Drift(y).
  std::vector<std::int64_t> loop_drift(std::size_t x, std::size_t y,
                                       std::span<const std::int64_t> shift) const;

  /// Times each vertex received a new root.
  std::span<const std::size_t> relabel_counts() const { return relabels_; }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::size_t dim_;
  std::vector<std::size_t> root_;
  std::vector<std::size_t> next_;
  std::vector<std::size_t> size_;
  std::vector<std::int64_t> drift_;
  std::vector<std::size_t> relabels_;
};

/// Builds the periodic merge tree by processing cells in the order
/// (value, vertices before edges, id).
PeriodicMergeTree build_merge_tree(const PeriodicGraph& g);

/// Deterministic serialization of the tree shape (bifurcation structure,
/// heights, monomials) that ignores child order and the elder-rule choice
/// at ties.
std::string canonical_form(const PeriodicMergeTree& t);

/// True iff `fine` splinters `coarse`: a height-preserving surjection that
/// splits subtrees evenly and divides monomials by the preimage count.
bool splinters(const PeriodicMergeTree& fine, const PeriodicMergeTree& coarse,
               double tol = kMonomialTolerance);

std::string tree_to_json(const PeriodicMergeTree& t);
std::string tree_to_dot(const PeriodicMergeTree& t);

}  // namespace perimere
