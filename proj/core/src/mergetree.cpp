#include "perimere/mergetree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "perimere/error.hpp"

namespace perimere {

double ShadowMonomial::display_coeff() const { return coeff * unit_ball_volume(exponent); }

std::string ShadowMonomial::to_string() const {
  char buf[64];
  const double c = display_coeff();
  if (exponent == 0) {
    std::snprintf(buf, sizeof buf, "%.6g", c);
  } else if (exponent == 1) {
    std::snprintf(buf, sizeof buf, "%.6g R", c);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g R^%d", c, exponent);
  }
  return buf;
}

bool monomial_equal(const ShadowMonomial& a, const ShadowMonomial& b, double tol) {
  return a.exponent == b.exponent && std::abs(a.coeff - b.coeff) <= tol;
}

bool monomial_less(const ShadowMonomial& a, const ShadowMonomial& b, double tol) {
  if (a.exponent != b.exponent) {
    return a.exponent < b.exponent;
  }
  return a.coeff < b.coeff - tol;
}

ShadowMonomial shadow_monomial(const RealBasis& basis, const SublatticeBasis& lattice) {
  return ShadowMonomial{volume(basis, lattice) / basis.cell_volume(),
                        static_cast<int>(lattice.ambient_dim() - lattice.rank())};
}

const Epoch& Beam::epoch_at(double t) const {
  if (epochs.empty() || t < epochs.front().start) {
    throw InputError("beam " + std::to_string(id) + " does not exist at the requested height");
  }
  auto it = std::upper_bound(epochs.begin(), epochs.end(), t,
                             [](double x, const Epoch& e) { return x < e.start; });
  return *std::prev(it);
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::appearance:
      return "appearance";
    case EventKind::merger:
      return "merger";
    case EventKind::catenation:
      return "catenation";
  }
  return "unknown";
}

std::size_t EventLog::count(EventKind kind, bool include_via_merger) const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const Event& e) {
    return e.kind == kind && (include_via_merger || !e.via_merger);
  }));
}

std::vector<std::size_t> PeriodicMergeTree::roots() const {
  std::vector<std::size_t> out;
  for (const auto& b : beams) {
    if (!b.parent) {
      out.push_back(b.id);
    }
  }
  return out;
}

DriftUnionFind::DriftUnionFind(std::size_t vertex_count, std::size_t dim)
    : dim_(dim),
      root_(vertex_count, kAbsent),
      next_(vertex_count, kAbsent),
      size_(vertex_count, 0),
      drift_(vertex_count * dim, 0),
      relabels_(vertex_count, 0) {}

void DriftUnionFind::add(std::size_t x) {
  if (contains(x)) {
    throw InputError("vertex added twice");
  }
  root_[x] = x;
  next_[x] = kAbsent;
  size_[x] = 1;
}

std::size_t DriftUnionFind::find(std::size_t x) const {
  if (x >= root_.size() || root_[x] == kAbsent) {
    throw InputError("find: vertex has not been added");
  }
  return root_[x];
}

std::vector<std::int64_t> DriftUnionFind::loop_drift(std::size_t x, std::size_t y,
                                                     std::span<const std::int64_t> shift) const {
  std::vector<std::int64_t> v(dim_);
  const auto dx = drift(x);
  const auto dy = drift(y);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::int64_t t = 0;
    if (__builtin_add_overflow(dx[i], shift[i], &t) || __builtin_sub_overflow(t, dy[i], &v[i])) {
      throw InputError("drift vector overflows 64 bits");
    }
  }
  return v;
}

std::size_t DriftUnionFind::unite(std::size_t x, std::size_t y,
                                  std::span<const std::int64_t> shift) {
  std::size_t r = find(x);
  std::size_t s = find(y);
  if (r == s) {
    throw InputError("unite: vertices are already connected");
  }
  std::vector<std::int64_t> v;
  if (size_[s] > size_[r]) {
    // Walk the arc backwards: y -> x with the negated shift.
    std::vector<std::int64_t> back(shift.begin(), shift.end());
    for (auto& c : back) {
      c = -c;
    }
    v = loop_drift(y, x, back);
    std::swap(r, s);
  } else {
    v = loop_drift(x, y, shift);
  }
  std::size_t last = s;
  for (std::size_t z = s; z != kAbsent; z = next_[z]) {
    root_[z] = r;
    ++relabels_[z];
    for (std::size_t i = 0; i < dim_; ++i) {
      auto& dz = drift_[z * dim_ + i];
      if (__builtin_add_overflow(dz, v[i], &dz)) {
        throw InputError("drift vector overflows 64 bits");
      }
    }
    last = z;
  }
  size_[r] += size_[s];
  next_[last] = next_[r];
  next_[r] = s;
  return r;
}

namespace {

struct Cell {
  double value;
  int dimension;
  std::int64_t id;
  std::size_t index;
};

SublatticeBasis single_vector_lattice(std::span<const std::int64_t> v) {
  IntMatrix m(v.size(), 0);
  m.append_column(v);
  return hnf_reduce(std::move(m));
}

}  // namespace

PeriodicMergeTree build_merge_tree(const PeriodicGraph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t d = g.dim();
  const RealBasis& basis = g.basis();

  std::vector<Cell> cells;
  cells.reserve(n + g.edge_count());
  for (std::size_t i = 0; i < n; ++i) {
    cells.push_back(Cell{g.vertices()[i].value, 0, g.vertices()[i].id, i});
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    cells.push_back(Cell{g.edges()[i].value, 1, g.edges()[i].id, i});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) {
      return a.value < b.value;
    }
    if (a.dimension != b.dimension) {
      return a.dimension < b.dimension;
    }
    return a.id < b.id;
  });

  PeriodicMergeTree tree;
  tree.dim = d;
  tree.beams.reserve(n);
  DriftUnionFind uf(n, d);

  // Per-root component data.
  std::vector<double> oldest_value(n);
  std::vector<std::int64_t> oldest_id(n);
  std::vector<SublatticeBasis> lattice(n, SublatticeBasis(d));
  std::vector<std::size_t> beam_of(n);

  const SublatticeBasis zero(d);
  const ShadowMonomial initial = shadow_monomial(basis, zero);

  for (const Cell& cell : cells) {
    const double t = cell.value;
    if (cell.dimension == 0) {
      const std::size_t x = cell.index;
      uf.add(x);
      oldest_value[x] = t;
      oldest_id[x] = cell.id;
      lattice[x] = zero;
      Beam beam;
      beam.id = tree.beams.size();
      beam.birth = t;
      beam.birth_vertex = cell.id;
      beam.epochs.push_back(Epoch{t, initial, zero});
      beam_of[x] = beam.id;
      tree.log.events.push_back(Event{EventKind::appearance, t, cell.id, {beam.id}, {}, false});
      tree.beams.push_back(std::move(beam));
      continue;
    }

    const Edge& e = g.edges()[cell.index];
    const std::size_t x = g.vertex_index(e.u);
    const std::size_t y = g.vertex_index(e.v);
    const std::size_t r = uf.find(x);
    const std::size_t s = uf.find(y);

    if (r == s) {
      const auto v = uf.loop_drift(x, y, e.shift);
      if (member(lattice[r], std::span<const std::int64_t>(v))) {
        ++tree.log.silent_loops;
        continue;
      }
      lattice[r] = lattice_sum(lattice[r], single_vector_lattice(v));
      const ShadowMonomial m = shadow_monomial(basis, lattice[r]);
      Beam& beam = tree.beams[beam_of[r]];
      beam.epochs.push_back(Epoch{t, m, lattice[r]});
      tree.log.events.push_back(Event{EventKind::catenation, t, e.id, {beam.id}, m, false});
      continue;
    }

    // Elder rule on (oldest value, oldest vertex id).
    const bool r_elder = std::pair(oldest_value[r], oldest_id[r]) <= std::pair(oldest_value[s], oldest_id[s]);
    const std::size_t elder_root = r_elder ? r : s;
    const std::size_t survivor = beam_of[elder_root];
    const std::size_t absorbed = beam_of[r_elder ? s : r];
    SublatticeBasis merged = lattice_sum(lattice[r], lattice[s]);
    const bool grew = !(merged == lattice[elder_root]);
    const double merged_value = oldest_value[elder_root];
    const std::int64_t merged_id = oldest_id[elder_root];

    const std::size_t root = uf.unite(x, y, e.shift);
    const std::size_t gone = root == r ? s : r;
    oldest_value[root] = merged_value;
    oldest_id[root] = merged_id;
    beam_of[root] = survivor;
    lattice[gone] = SublatticeBasis(d);
    lattice[root] = std::move(merged);

    tree.beams[absorbed].death = t;
    tree.beams[absorbed].parent = survivor;
    tree.log.events.push_back(Event{EventKind::merger, t, e.id, {survivor, absorbed}, {}, false});
    if (grew) {
      const ShadowMonomial m = shadow_monomial(basis, lattice[root]);
      tree.beams[survivor].epochs.push_back(Epoch{t, m, lattice[root]});
      tree.log.events.push_back(Event{EventKind::catenation, t, e.id, {survivor}, m, true});
    }
  }

  tree.components = static_cast<std::size_t>(
      std::count_if(tree.beams.begin(), tree.beams.end(), [](const Beam& b) { return !b.parent; }));
  return tree;
}

}  // namespace perimere
