#include "perimere/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include <json.hpp>

#include "perimere/error.hpp"

namespace perimere {

void MultiplicityFunction::add(double birth, double death, double mult) {
  if (birth == death || mult == 0.0) {
    return;
  }
  auto [it, inserted] = points_.try_emplace(Point{birth, death}, mult);
  if (!inserted) {
    it->second += mult;
    if (it->second == 0.0) {
      points_.erase(it);
    }
  }
}

double MultiplicityFunction::at(double birth, double death) const {
  auto it = points_.find(Point{birth, death});
  return it == points_.end() ? 0.0 : it->second;
}

MultiplicityFunction MultiplicityFunction::positive_part() const {
  MultiplicityFunction out;
  for (const auto& [p, m] : points_) {
    if (m > 0) {
      out.points_.emplace(p, m);
    }
  }
  return out;
}

MultiplicityFunction MultiplicityFunction::negative_part() const {
  MultiplicityFunction out;
  for (const auto& [p, m] : points_) {
    if (m < 0) {
      out.points_.emplace(p, -m);
    }
  }
  return out;
}

MultiplicityFunction operator+(MultiplicityFunction a, const MultiplicityFunction& b) {
  for (const auto& [p, m] : b.points_) {
    a.add(p.first, p.second, m);
  }
  return a;
}

double diagonal_cost(const MultiplicityFunction::Point& x) {
  return std::abs(x.second - x.first);
}

double ground_cost(const MultiplicityFunction::Point& x, const MultiplicityFunction::Point& y) {
  const bool xi = std::isinf(x.second);
  const bool yi = std::isinf(y.second);
  if (xi != yi) {
    return kInfinity;
  }
  if (xi) {
    return std::abs(x.first - y.first);
  }
  return std::abs(x.first - y.first) + std::abs(x.second - y.second);
}

namespace {

std::int64_t quantize(double m) {
  if (m < 0) {
    throw InputError("w1: negative mass");
  }
  const double q = std::round(m / kMassQuantum);
  if (q > 9e18) {
    throw InputError("w1: mass too large to quantize");
  }
  return static_cast<std::int64_t>(q);
}

// Successive shortest paths with Dijkstra on reduced costs.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t n) : graph_(n) {}

  std::size_t add_edge(std::size_t u, std::size_t v, std::int64_t cap, double cost) {
    graph_[u].push_back(edges_.size());
    edges_.push_back(Arc{v, cap, cost});
    graph_[v].push_back(edges_.size());
    edges_.push_back(Arc{u, 0, -cost});
    return edges_.size() - 2;
  }

  std::int64_t flow_on(std::size_t e) const { return edges_[e ^ 1].cap; }

  void run(std::size_t s, std::size_t t) {
    const std::size_t n = graph_.size();
    std::vector<double> potential(n, 0.0);
    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    using Item = std::pair<double, std::size_t>;
    for (;;) {
      std::fill(dist.begin(), dist.end(), kInfinity);
      std::fill(via.begin(), via.end(), kNone);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[s] = 0.0;
      pq.emplace(0.0, s);
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) {
          continue;
        }
        for (std::size_t e : graph_[u]) {
          const Arc& a = edges_[e];
          if (a.cap <= 0) {
            continue;
          }
          const double nd = d + std::max(0.0, a.cost + potential[u] - potential[a.to]);
          if (nd < dist[a.to]) {
            dist[a.to] = nd;
            via[a.to] = e;
            pq.emplace(nd, a.to);
          }
        }
      }
      if (via[t] == kNone) {
        return;
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (dist[v] < kInfinity) {
          potential[v] += dist[v];
        }
      }
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (std::size_t v = t; v != s; v = edges_[via[v] ^ 1].to) {
        push = std::min(push, edges_[via[v]].cap);
      }
      for (std::size_t v = t; v != s; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
    }
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
  };
  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Arc> edges_;
};

using Point = MultiplicityFunction::Point;

struct Side {
  std::vector<Point> points;
  std::vector<std::int64_t> mass;
};

void solve_finite(const Side& src, const Side& dst, std::size_t src_offset, std::size_t dst_offset,
                  TransportPlan& plan) {
  const std::size_t a = src.points.size();
  const std::size_t b = dst.points.size();
  if (a == 0 && b == 0) {
    return;
  }
  const std::int64_t total_src = std::accumulate(src.mass.begin(), src.mass.end(), std::int64_t{0});
  const std::int64_t total_dst = std::accumulate(dst.mass.begin(), dst.mass.end(), std::int64_t{0});
  // Nodes: s, sources, diagonal source, sinks, diagonal sink, t.
  const std::size_t s = 0;
  const std::size_t diag_src = a + 1;
  const std::size_t sink0 = a + 2;
  const std::size_t diag_dst = sink0 + b;
  const std::size_t t = diag_dst + 1;
  MinCostFlow net(t + 1);
  std::vector<std::vector<std::size_t>> pair_edge(a, std::vector<std::size_t>(b));
  std::vector<std::size_t> chi_edge(a);
  std::vector<std::size_t> ups_edge(b);
  for (std::size_t i = 0; i < a; ++i) {
    net.add_edge(s, 1 + i, src.mass[i], 0.0);
    for (std::size_t j = 0; j < b; ++j) {
      pair_edge[i][j] = net.add_edge(1 + i, sink0 + j, total_src, ground_cost(src.points[i], dst.points[j]));
    }
    chi_edge[i] = net.add_edge(1 + i, diag_dst, total_src, diagonal_cost(src.points[i]));
  }
  net.add_edge(s, diag_src, total_dst, 0.0);
  for (std::size_t j = 0; j < b; ++j) {
    ups_edge[j] = net.add_edge(diag_src, sink0 + j, total_dst, diagonal_cost(dst.points[j]));
    net.add_edge(sink0 + j, t, dst.mass[j], 0.0);
  }
  net.add_edge(diag_src, diag_dst, total_dst, 0.0);
  net.add_edge(diag_dst, t, total_src, 0.0);
  net.run(s, t);

  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (const std::int64_t f = net.flow_on(pair_edge[i][j]); f > 0) {
        plan.flows.push_back(Flow{src_offset + i, dst_offset + j, static_cast<double>(f) * kMassQuantum});
      }
    }
    plan.chi[src_offset + i] = static_cast<double>(net.flow_on(chi_edge[i])) * kMassQuantum;
  }
  for (std::size_t j = 0; j < b; ++j) {
    plan.upsilon[dst_offset + j] = static_cast<double>(net.flow_on(ups_edge[j])) * kMassQuantum;
  }
}

// Infinite points live on a line; the monotone matching is optimal.
void solve_infinite(const Side& src, const Side& dst, std::size_t src_offset,
                    std::size_t dst_offset, TransportPlan& plan) {
  std::vector<std::int64_t> left = src.mass;
  std::vector<std::int64_t> right = dst.mass;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < left.size() && j < right.size()) {
    const std::int64_t f = std::min(left[i], right[j]);
    if (f > 0) {
      plan.flows.push_back(Flow{src_offset + i, dst_offset + j, static_cast<double>(f) * kMassQuantum});
    }
    left[i] -= f;
    right[j] -= f;
    if (left[i] == 0) {
      ++i;
    }
    if (right[j] == 0) {
      ++j;
    }
  }
}

}  // namespace

TransportPlan w1_plan(const MultiplicityFunction& xi, const MultiplicityFunction& eta) {
  Side xf, xinf, ef, einf;
  auto split = [](const MultiplicityFunction& f, Side& fin, Side& inf) {
    for (const auto& [p, m] : f.points()) {
      const std::int64_t q = quantize(m);
      if (q == 0) {
        continue;
      }
      Side& side = std::isinf(p.second) ? inf : fin;
      side.points.push_back(p);
      side.mass.push_back(q);
    }
  };
  split(xi, xf, xinf);
  split(eta, ef, einf);

  TransportPlan plan;
  for (const Side* s : {&xf, &xinf}) {
    plan.sources.insert(plan.sources.end(), s->points.begin(), s->points.end());
  }
  for (const Side* s : {&ef, &einf}) {
    plan.sinks.insert(plan.sinks.end(), s->points.begin(), s->points.end());
  }
  plan.chi.assign(plan.sources.size(), 0.0);
  plan.upsilon.assign(plan.sinks.size(), 0.0);

  const auto sum = [](const Side& s) {
    return std::accumulate(s.mass.begin(), s.mass.end(), std::int64_t{0});
  };
  if (sum(xinf) != sum(einf)) {
    plan.cost = kInfinity;
    return plan;
  }
  solve_finite(xf, ef, 0, 0, plan);
  solve_infinite(xinf, einf, xf.points.size(), ef.points.size(), plan);

  double cost = 0.0;
  for (const Flow& f : plan.flows) {
    cost += f.mass * ground_cost(plan.sources[f.source], plan.sinks[f.sink]);
  }
  for (std::size_t i = 0; i < plan.chi.size(); ++i) {
    if (plan.chi[i] > 0) {
      cost += plan.chi[i] * diagonal_cost(plan.sources[i]);
    }
  }
  for (std::size_t j = 0; j < plan.upsilon.size(); ++j) {
    if (plan.upsilon[j] > 0) {
      cost += plan.upsilon[j] * diagonal_cost(plan.sinks[j]);
    }
  }
  plan.cost = cost;
  return plan;
}

double w1(const MultiplicityFunction& xi, const MultiplicityFunction& eta) {
  return w1_plan(xi, eta).cost;
}

double w1_alt(const MultiplicityFunction& xi, const MultiplicityFunction& eta) {
  const MultiplicityFunction lhs = xi.positive_part() + eta.negative_part();
  const MultiplicityFunction rhs = xi.negative_part() + eta.positive_part();
  // Mass present on both sides costs nothing to keep in place.
  MultiplicityFunction a;
  MultiplicityFunction b;
  for (const auto& [p, m] : lhs.points()) {
    const double common = std::min(m, rhs.at(p.first, p.second));
    a.add(p.first, p.second, m - common);
  }
  for (const auto& [p, m] : rhs.points()) {
    const double common = std::min(m, lhs.at(p.first, p.second));
    b.add(p.first, p.second, m - common);
  }
  return w1(a, b);
}

MultiplicityFunction era_function(const PeriodicBarcode& b, std::size_t exponent) {
  if (exponent >= b.eras.size()) {
    throw InputError("era " + std::to_string(exponent) + " out of range");
  }
  MultiplicityFunction f;
  for (const Bar& bar : b.eras[exponent]) {
    f.add(bar.birth, bar.death, bar.mult);
  }
  return f;
}

BarcodeDistance barcode_distance(const PeriodicBarcode& a, const PeriodicBarcode& b) {
  if (a.dim != b.dim) {
    throw InputError("barcode dimensions differ: " + std::to_string(a.dim) + " vs " +
                     std::to_string(b.dim));
  }
  BarcodeDistance out;
  for (std::size_t k = 0; k <= a.dim; ++k) {
    out.per_era.push_back(w1_alt(era_function(a, k), era_function(b, k)));
    out.total += out.per_era.back();
  }
  return out;
}

double multiplicity_bound(const PeriodicGraph& g) {
  const double d = static_cast<double>(g.dim());
  const double base = std::pow(d, 2.5) * static_cast<double>(max_shift_magnitude(g)) *
                      static_cast<double>(g.edge_count()) * g.basis().inverse_norm();
  return std::pow(base, d);
}

std::string plan_to_json(const TransportPlan& plan) {
  using json = nlohmann::ordered_json;
  auto point = [](const Point& p) {
    return json::array({p.first, std::isinf(p.second) ? json(nullptr) : json(p.second)});
  };
  json sources = json::array();
  for (const auto& p : plan.sources) {
    sources.push_back(point(p));
  }
  json sinks = json::array();
  for (const auto& p : plan.sinks) {
    sinks.push_back(point(p));
  }
  json flows = json::array();
  for (const Flow& f : plan.flows) {
    flows.push_back(json{{"source", f.source}, {"sink", f.sink}, {"mass", f.mass}});
  }
  json doc;
  doc["sources"] = std::move(sources);
  doc["sinks"] = std::move(sinks);
  doc["flows"] = std::move(flows);
  doc["chi"] = plan.chi;
  doc["upsilon"] = plan.upsilon;
  doc["cost"] = std::isinf(plan.cost) ? json(nullptr) : json(plan.cost);
  return doc.dump(2) + "\n";
}

}  // namespace perimere
