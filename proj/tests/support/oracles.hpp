#pragma once

// Independent reference implementations used to check the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "perimere/pgraph.hpp"
#include "perimere/transport.hpp"

namespace oracle {

inline std::string fixture(const std::string& name) {
  return std::string(PERIMERE_FIXTURE_DIR) + "/" + name;
}

/// Lattice points of Z^3 with coordinates in [-box, box] reachable from 0 by
/// steps of +-columns that never leave the box. By the Steinitz lemma every
/// lattice point v with |v|_inf <= r is reached once box >= r + 3 * max|c|.
class BoxClosure3 {
 public:
  BoxClosure3(const std::vector<std::array<int, 3>>& columns, int box)
      : box_(box), side_(2 * box + 1), seen_(static_cast<std::size_t>(side_) * side_ * side_) {
    std::queue<std::array<int, 3>> q;
    seen_[index({0, 0, 0})] = true;
    q.push({0, 0, 0});
    while (!q.empty()) {
      const auto p = q.front();
      q.pop();
      for (const auto& c : columns) {
        for (int sign : {1, -1}) {
          std::array<int, 3> n{p[0] + sign * c[0], p[1] + sign * c[1], p[2] + sign * c[2]};
          if (!inside(n)) {
            continue;
          }
          const std::size_t i = index(n);
          if (!seen_[i]) {
            seen_[i] = true;
            q.push(n);
          }
        }
      }
    }
  }

  bool contains(const std::array<int, 3>& v) const { return inside(v) && seen_[index(v)]; }

 private:
  bool inside(const std::array<int, 3>& v) const {
    return std::all_of(v.begin(), v.end(), [&](int x) { return x >= -box_ && x <= box_; });
  }
  std::size_t index(const std::array<int, 3>& v) const {
    return (static_cast<std::size_t>(v[0] + box_) * side_ + (v[1] + box_)) * side_ + (v[2] + box_);
  }

  int box_;
  int side_;
  std::vector<bool> seen_;
};

/// Integer combinations of 2D columns with coefficients in [-range, range].
inline bool member2_by_combination(const std::vector<std::array<int, 2>>& columns,
                                   std::array<int, 2> v, int range) {
  std::vector<int> coef(columns.size(), -range);
  if (columns.empty()) {
    return v[0] == 0 && v[1] == 0;
  }
  for (;;) {
    int x = 0;
    int y = 0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      x += coef[i] * columns[i][0];
      y += coef[i] * columns[i][1];
    }
    if (x == v[0] && y == v[1]) {
      return true;
    }
    std::size_t i = 0;
    while (i < coef.size() && coef[i] == range) {
      coef[i++] = -range;
    }
    if (i == coef.size()) {
      return false;
    }
    ++coef[i];
  }
}

/// Exact minimum-cost perfect assignment on a square cost matrix
/// (Hungarian method with potentials, O(n^3)).
inline double assignment_cost(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) {
    return 0.0;
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    total += cost[p[j] - 1][j - 1];
  }
  return total;
}

struct UnitPoint {
  double birth;
  double death;
};

/// W1 between finite integer-mass functions by splitting every unit of mass
/// into its own point and adding one diagonal copy per unit on the other side.
inline double w1_unit_split(const std::vector<std::pair<UnitPoint, int>>& xi,
                            const std::vector<std::pair<UnitPoint, int>>& eta) {
  std::vector<UnitPoint> rows;
  std::vector<UnitPoint> cols;
  for (const auto& [p, m] : xi) {
    rows.insert(rows.end(), static_cast<std::size_t>(m), p);
  }
  for (const auto& [p, m] : eta) {
    cols.insert(cols.end(), static_cast<std::size_t>(m), p);
  }
  const std::size_t a = rows.size();
  const std::size_t b = cols.size();
  const std::size_t n = a + b;
  auto delta = [](const UnitPoint& p) { return std::abs(p.death - p.birth); };
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i < a && j < b) {
        cost[i][j] = std::abs(rows[i].birth - cols[j].birth) + std::abs(rows[i].death - cols[j].death);
      } else if (i < a) {
        cost[i][j] = delta(rows[i]);
      } else if (j < b) {
        cost[i][j] = delta(cols[j]);
      }
    }
  }
  return assignment_cost(cost);
}

/// Connected components of the quotient graph by breadth-first search.
/// Returns a label per vertex position.
inline std::vector<std::size_t> bfs_components(const perimere::PeriodicGraph& g,
                                               double up_to = std::numeric_limits<double>::infinity()) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    if (e.value <= up_to) {
      adj[g.vertex_index(e.u)].push_back(g.vertex_index(e.v));
      adj[g.vertex_index(e.v)].push_back(g.vertex_index(e.u));
    }
  }
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(n, none);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != none) {
      continue;
    }
    std::queue<std::size_t> q;
    label[s] = next;
    q.push(s);
    while (!q.empty()) {
      const std::size_t x = q.front();
      q.pop();
      for (std::size_t y : adj[x]) {
        if (label[y] == none) {
          label[y] = next;
          q.push(y);
        }
      }
    }
    ++next;
  }
  return label;
}

/// Random perturbation of all filter values, repaired so that every edge
/// stays at or above its endpoints.
inline perimere::PeriodicGraph perturb(const perimere::PeriodicGraph& g, double amplitude,
                                       std::mt19937_64& rng) {
  std::uniform_real_distribution<double> noise(-amplitude, amplitude);
  std::vector<double> vv;
  for (const auto& v : g.vertices()) {
    vv.push_back(v.value + noise(rng));
  }
  std::vector<double> ev;
  for (const auto& e : g.edges()) {
    const double lo = std::max(vv[g.vertex_index(e.u)], vv[g.vertex_index(e.v)]);
    ev.push_back(std::max(lo, e.value + noise(rng)));
  }
  return g.with_values(vv, ev);
}

/// Relabels cells so that ids are permuted at random within groups of equal
/// value (vertices and edges separately), keeping the complex unchanged.
inline perimere::PeriodicGraph permute_tied_ids(const perimere::PeriodicGraph& g,
                                                std::mt19937_64& rng) {
  auto shuffle_groups = [&](auto values, auto ids) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values[a] < values[b];
    });
    std::vector<std::int64_t> out = ids;
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && values[order[j]] == values[order[i]]) {
        ++j;
      }
      std::vector<std::int64_t> group;
      for (std::size_t k = i; k < j; ++k) {
        group.push_back(ids[order[k]]);
      }
      std::shuffle(group.begin(), group.end(), rng);
      for (std::size_t k = i; k < j; ++k) {
        out[order[k]] = group[k - i];
      }
      i = j;
    }
    return out;
  };
  std::vector<double> vvals;
  std::vector<std::int64_t> vids;
  for (const auto& v : g.vertices()) {
    vvals.push_back(v.value);
    vids.push_back(v.id);
  }
  std::vector<double> evals;
  std::vector<std::int64_t> eids;
  for (const auto& e : g.edges()) {
    evals.push_back(e.value);
    eids.push_back(e.id);
  }
  const auto new_vids = shuffle_groups(vvals, vids);
  const auto new_eids = shuffle_groups(evals, eids);
  std::vector<perimere::Vertex> vs = g.vertices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vs[i].id = new_vids[i];
  }
  std::vector<perimere::Edge> es = g.edges();
  for (std::size_t i = 0; i < es.size(); ++i) {
    es[i].id = new_eids[i];
    es[i].u = new_vids[g.vertex_index(es[i].u)];
    es[i].v = new_vids[g.vertex_index(es[i].v)];
  }
  return perimere::PeriodicGraph(g.basis(), std::move(vs), std::move(es));
}

}  // namespace oracle
