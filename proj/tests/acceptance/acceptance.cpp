// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "perimere/barcode.hpp"
#include "perimere/generators.hpp"
#include "perimere/lattice.hpp"
#include "perimere/mergetree.hpp"
#include "perimere/pgraph.hpp"
#include "perimere/transport.hpp"

using namespace perimere;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) {
      detail = why;
    }
    pass = false;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

PeriodicGraph fixture(const std::string& name) { return load_graph(oracle::fixture(name)); }

PeriodicBarcode barcode_of(const PeriodicGraph& g) { return extract(build_merge_tree(g)); }

double mult_at(const std::vector<Bar>& bars, double birth, double death) {
  for (const auto& b : bars) {
    if (b.birth == birth && b.death == death) {
      return b.mult;
    }
  }
  return 0.0;
}

Outcome golden_fixture() {
  Outcome o;
  const auto start = Clock::now();
  const auto t = build_merge_tree(fixture("working_example.json"));
  const double took = seconds_since(start);

  struct Want {
    double time;
    double display;
    int exponent;
  };
  const double pi = std::numbers::pi;
  const std::vector<Want> want{
      {6.0, std::sqrt(2.0) * pi, 2}, {9.0, 2.0 * pi, 2}, {10.0, 4.0, 1},
      {11.0, 2.0, 0},                {12.0, 2.0, 0},     {13.0, 1.0, 0},
  };
  std::vector<const Event*> cats;
  for (const auto& e : t.log.events) {
    if (e.kind == EventKind::catenation) {
      cats.push_back(&e);
    }
  }
  if (cats.size() != want.size()) {
    o.fail("expected 6 catenations, got " + std::to_string(cats.size()));
    return o;
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    const ShadowMonomial& m = *cats[i]->monomial;
    if (cats[i]->time != want[i].time || m.exponent != want[i].exponent ||
        std::abs(m.display_coeff() - want[i].display) > 1e-9) {
      o.fail("catenation at " + fmt("%g", cats[i]->time) + " shows " + m.to_string());
    }
  }
  const auto& birth = t.beams[0].epochs[0].monomial;
  if (birth.exponent != 3 || std::abs(birth.display_coeff() - 4.0 * pi / 3.0) > 1e-9) {
    o.fail("birth monomial " + birth.to_string());
  }
  if (t.log.count(EventKind::merger) != 4 || t.log.count(EventKind::appearance) != 5) {
    o.fail("wrong merger or appearance count");
  }
  if (took >= 0.010) {
    o.fail("build took " + fmt("%.4f", took) + " s");
  }
  if (o.pass) {
    o.detail = "6 catenations match, build " + fmt("%.2e", took) + " s";
  }
  return o;
}

Outcome barcode_remark() {
  Outcome o;
  const auto b = barcode_of(fixture("working_example.json"));
  const double plus = mult_at(b.eras[0], 2.0, 12.0);
  const double minus = mult_at(b.eras[0], 1.0, 12.0);
  if (std::abs(plus - 2.0) > 1e-9 || std::abs(minus + 2.0) > 1e-9) {
    o.fail("(2,12) has " + fmt("%g", plus) + ", (1,12) has " + fmt("%g", minus));
  }
  const auto s = barcode_of(fixture("working_example_shifted.json"));
  for (const auto& bar : s.eras[0]) {
    if (bar.death == 12.0 && (bar.birth == 2.0 || bar.birth == 1.0 || bar.birth == 0.99)) {
      o.fail("shifted variant still has a bar ending at 12");
    }
  }
  if (o.pass) {
    o.detail = "(2,12)+2 and (1,12)-2 present, absent after vertex 2 -> 0.99";
  }
  return o;
}

Outcome invariance() {
  Outcome o;
  const auto g = fixture("two_vertex.json");
  const auto base_tree = build_merge_tree(g);
  const auto base = extract(base_tree);
  std::vector<IntMatrix> subs{IntMatrix::from_rows({{2, 0}, {0, 1}})};
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> entry(-2, 2);
  while (subs.size() < 21) {
    const int a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    const int det = std::abs(a * d - b * c);
    if (det >= 1 && det <= 4) {
      subs.push_back(IntMatrix::from_rows({{a, b}, {c, d}}));
    }
  }
  double worst = 0.0;
  for (const auto& s : subs) {
    const auto u = unroll(g, s);
    const auto b = barcode_of(u);
    if (!equals(b, base, 1e-9)) {
      o.fail("barcode differs after unrolling");
    }
    worst = std::max(worst, barcode_distance(b, base).total);
  }
  if (worst > 1e-9) {
    o.fail("distance " + fmt("%.3e", worst));
  }
  if (!splinters(build_merge_tree(unroll(g, subs[0])), base_tree)) {
    o.fail("diag(2,1) tree does not splinter the base tree");
  }
  if (o.pass) {
    o.detail = "21 sublattices, max distance " + fmt("%.1e", worst) + ", splinters(diag(2,1))";
  }
  return o;
}

Outcome shadow_count() {
  Outcome o;
  const RealBasis id = RealBasis::identity(2);
  const auto lattice = hnf_reduce(IntMatrix::from_columns(2, {{1, 1}}));
  std::string detail;
  double took = 0.0;
  std::vector<double> devs;
  for (double r : {25.0, 50.0, 100.0}) {
    const auto start = Clock::now();
    const auto c = static_cast<double>(count_cosets_in_ball(id, lattice, r, 10'000'000));
    took = seconds_since(start);
    const double dev = std::abs(c - 2.0 * std::sqrt(2.0) * r);
    devs.push_back(dev);
    detail += "R=" + fmt("%g", r) + ":" + fmt("%g", c) + " ";
    if (dev > 5.0) {
      o.fail("deviation " + fmt("%g", dev) + " at R=" + fmt("%g", r));
    }
  }
  if (took >= 5.0) {
    o.fail("R=100 took " + fmt("%.2f", took) + " s");
  }
  if (o.pass) {
    o.detail = detail + "max deviation " + fmt("%.3f", *std::max_element(devs.begin(), devs.end()));
  }
  return o;
}

Outcome hnf_oracle() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::uniform_int_distribution<int> ncols(1, 6);
  std::uniform_int_distribution<int> mult(-3, 3);
  for (int trial = 0; trial < 200 && o.pass; ++trial) {
    const std::size_t c = static_cast<std::size_t>(ncols(rng));
    std::vector<std::vector<std::int64_t>> cols(c, std::vector<std::int64_t>(3));
    std::vector<std::array<int, 3>> small;
    for (auto& col : cols) {
      for (auto& x : col) {
        x = entry(rng);
      }
      small.push_back({static_cast<int>(col[0]), static_cast<int>(col[1]), static_cast<int>(col[2])});
    }
    IntMatrix m = IntMatrix::from_columns(3, cols);
    const auto l = hnf_reduce(m);
    const oracle::BoxClosure3 closure(small, 40);
    for (int x = -12; x <= 12 && o.pass; ++x) {
      for (int y = -12; y <= 12; ++y) {
        for (int z = -12; z <= 12; ++z) {
          const std::vector<std::int64_t> v{x, y, z};
          if (member(l, std::span<const std::int64_t>(v)) != closure.contains({x, y, z})) {
            o.fail("membership mismatch in trial " + std::to_string(trial));
          }
        }
      }
    }
    if (!(hnf_reduce(l.columns()) == l)) {
      o.fail("not idempotent in trial " + std::to_string(trial));
    }
    std::uniform_int_distribution<std::size_t> pick(0, c - 1);
    for (int op = 0; op < 12; ++op) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      if (a == b) {
        for (std::size_t i = 0; i < 3; ++i) {
          m(i, a) = -m(i, a);
        }
      } else {
        const int k = mult(rng);
        for (std::size_t i = 0; i < 3; ++i) {
          m(i, a) += k * m(i, b);
        }
        if (op % 3 == 0) {
          m.swap_columns(a, b);
        }
      }
    }
    if (!(hnf_reduce(m) == l)) {
      o.fail("unimodular change alters the result in trial " + std::to_string(trial));
    }
  }

  // Output magnitude against (sqrt(d) D m)^d on every epoch lattice.
  std::vector<PeriodicGraph> graphs{fixture("working_example.json"), fixture("two_vertex.json"),
                                    fixture("ties.json"), fixture("diagonal_loop.json")};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomGraphOptions opt;
    opt.vertices = 12;
    opt.edges = 40;
    graphs.push_back(make_random_graph(opt, seed));
  }
  std::size_t lattices = 0;
  for (const auto& g : graphs) {
    const double d = static_cast<double>(g.dim());
    const double dm = static_cast<double>(max_shift_magnitude(g)) * static_cast<double>(g.edge_count());
    const double bound = std::pow(std::sqrt(d) * dm, d);
    for (const auto& beam : build_merge_tree(g).beams) {
      for (const auto& e : beam.epochs) {
        ++lattices;
        if (e.lattice.columns().magnitude().get_d() > bound) {
          o.fail("magnitude bound violated by " + e.lattice.to_string());
        }
      }
    }
  }
  if (o.pass) {
    o.detail = "200 matrices exact; magnitude bound holds on " + std::to_string(lattices) +
               " epoch lattices";
  }
  return o;
}

MultiplicityFunction random_function(std::mt19937_64& rng, bool signed_masses) {
  std::uniform_int_distribution<int> count(0, 6);
  std::uniform_int_distribution<int> coord(0, 8);
  std::uniform_int_distribution<int> mass(signed_masses ? -4 : 1, 4);
  MultiplicityFunction f;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const double b = coord(rng);
    f.add(b, b + 1 + coord(rng), mass(rng));
  }
  return f;
}

Outcome transport_correctness() {
  Outcome o;
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto xi = random_function(rng, false);
    const auto eta = random_function(rng, false);
    auto units = [](const MultiplicityFunction& f) {
      std::vector<std::pair<oracle::UnitPoint, int>> out;
      for (const auto& [p, m] : f.points()) {
        out.push_back({{p.first, p.second}, static_cast<int>(std::lround(m))});
      }
      return out;
    };
    const double got = w1(xi, eta);
    const double want = oracle::w1_unit_split(units(xi), units(eta));
    worst = std::max(worst, std::abs(got - want));
  }
  if (worst > 1e-7) {
    o.fail("oracle mismatch " + fmt("%.3e", worst));
  }
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_function(rng, true);
    const auto b = random_function(rng, true);
    const auto c = random_function(rng, true);
    const double ab = w1_alt(a, b);
    const double ba = w1_alt(b, a);
    const double bc = w1_alt(b, c);
    const double ac = w1_alt(a, c);
    if (std::abs(ab - ba) > 1e-7) {
      o.fail("asymmetric: " + fmt("%g", ab) + " vs " + fmt("%g", ba));
    }
    if (ac > ab + bc + 1e-7) {
      o.fail("triangle inequality fails");
    }
    if (w1_alt(a, a) != 0.0) {
      o.fail("w1_alt(a, a) != 0");
    }
    const bool same = a.points() == b.points();
    if (!same && ab <= 1e-7) {
      o.fail("distinct functions at distance zero");
    }
    const auto x = random_function(rng, false);
    const auto y = random_function(rng, false);
    const auto z = random_function(rng, false);
    if (std::abs(w1(x + z, y + z) - w1(x, y)) > 1e-7) {
      o.fail("mass-shift invariance fails");
    }
  }
  if (o.pass) {
    o.detail = "100 oracle instances (max error " + fmt("%.1e", worst) +
               "), 500 triples satisfy the metric axioms and shift invariance";
  }
  return o;
}

Outcome stability() {
  Outcome o;
  const auto g = fixture("working_example.json");
  const auto base = barcode_of(g);
  const double mu0 = multiplicity_bound(g);
  const double constant = 2.0 * static_cast<double>(g.dim() + 1) * mu0;
  std::mt19937_64 rng(55);
  double ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = oracle::perturb(g, 0.5, rng);
    const double l1 = cellular_l1(g, h);
    const double dist = barcode_distance(base, barcode_of(h)).total;
    if (dist > constant * l1 + 1e-9) {
      o.fail("distance " + fmt("%g", dist) + " exceeds bound " + fmt("%g", constant * l1));
    }
    if (l1 > 0) {
      ratio = std::max(ratio, dist / l1);
    }
  }
  if (o.pass) {
    o.detail = "max distance/l1 = " + fmt("%.3g", ratio) + " <= 2(d+1)mu0 = " + fmt("%.3g", constant);
  }
  return o;
}

Outcome tie_invariance() {
  Outcome o;
  std::vector<PeriodicGraph> graphs{fixture("ties.json")};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    RandomGraphOptions opt;
    opt.dim = 2;
    opt.vertices = 10;
    opt.edges = 24;
    opt.levels = 3;
    graphs.push_back(make_random_graph(opt, 100 + seed));
  }
  std::mt19937_64 rng(8);
  std::size_t runs = 0;
  for (const auto& g : graphs) {
    const std::string want = barcode_to_csv(barcode_of(g));
    for (int trial = 0; trial < 50; ++trial) {
      ++runs;
      if (barcode_to_csv(barcode_of(oracle::permute_tied_ids(g, rng))) != want) {
        o.fail("barcode changed under an id permutation");
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(runs) + " permutations over " + std::to_string(graphs.size()) +
               " tied graphs, byte-identical";
  }
  return o;
}

Outcome monotonicity() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> nv(2, 50);
  std::size_t steps = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomGraphOptions opt;
    opt.dim = 3;
    opt.vertices = nv(rng);
    opt.edges = std::uniform_int_distribution<std::size_t>(opt.vertices, 150)(rng);
    const auto t = build_merge_tree(make_random_graph(opt, rng()));
    for (const auto& b : t.beams) {
      for (std::size_t i = 1; i < b.epochs.size(); ++i) {
        ++steps;
        const auto& prev = b.epochs[i - 1].monomial;
        const auto& next = b.epochs[i].monomial;
        if (!monomial_less(next, prev)) {
          o.fail("epoch monomials do not decrease on beam " + std::to_string(b.id));
        }
        if (prev.exponent == next.exponent) {
          const double r = prev.coeff / next.coeff;
          if (r < 2.0 - 1e-9 || std::abs(r - std::round(r)) > 1e-9) {
            o.fail("coefficient ratio " + fmt("%.12g", r));
          }
        }
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(steps) + " epoch steps on 100 graphs decrease strictly";
  }
  return o;
}

double best_build_time(const PeriodicGraph& g, int repeats) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto start = Clock::now();
    const auto t = build_merge_tree(g);
    best = std::min(best, seconds_since(start));
    if (t.beams.size() != g.vertex_count()) {
      return 1e300;
    }
  }
  return best;
}

Outcome performance() {
  Outcome o;
  const auto small = make_torus_grid({47, 47, 47}, 1);
  const auto large = make_torus_grid({59, 59, 59}, 1);
  const double t1 = best_build_time(small, 3);
  const double t2 = best_build_time(large, 3);
  const double n_ratio = static_cast<double>(large.vertex_count()) / static_cast<double>(small.vertex_count());
  const double ratio = t2 / t1;
  if (t1 >= 5.0) {
    o.fail("n=" + std::to_string(small.vertex_count()) + " took " + fmt("%.2f", t1) + " s");
  }
  if (ratio >= 2.6) {
    o.fail("time ratio " + fmt("%.2f", ratio) + " for n ratio " + fmt("%.2f", n_ratio));
  }
  if (o.pass) {
    o.detail = "n=" + std::to_string(small.vertex_count()) + " m=" + std::to_string(small.edge_count()) +
               " in " + fmt("%.3f", t1) + " s; n x" + fmt("%.2f", n_ratio) + " -> time x" +
               fmt("%.2f", ratio);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden fixture events and monomials", golden_fixture},
      {"barcode remark points", barcode_remark},
      {"invariance under sublattice unrolling", invariance},
      {"shadow counting against 2 sqrt(2) R", shadow_count},
      {"HNF oracle suite", hnf_oracle},
      {"transport correctness and metric axioms", transport_correctness},
      {"stability inequality", stability},
      {"tie-break invariance", tie_invariance},
      {"epoch monotonicity", monotonicity},
      {"build performance", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
