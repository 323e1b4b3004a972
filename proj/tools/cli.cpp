#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "perimere/barcode.hpp"
#include "perimere/error.hpp"
#include "perimere/generators.hpp"
#include "perimere/mergetree.hpp"
#include "perimere/pgraph.hpp"
#include "perimere/transport.hpp"

namespace perimere::cli {
namespace {

constexpr std::uint64_t kDefaultBudget = 10'000'000;
constexpr std::uint64_t kBudgetCeiling = 100'000'000;

struct RunConfig {
  double tol = 1e-9;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  std::string out_path;
};

std::string num(double x) {
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::uint64_t env_budget() {
  const char* text = std::getenv("PERIMERE_BUDGET");
  if (text == nullptr || *text == '\0') {
    return kDefaultBudget;
  }
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text, &end, 10);
  if (*end != '\0' || v == 0) {
    throw InputError(std::string("PERIMERE_BUDGET: '") + text + "' is not a positive integer");
  }
  return v;
}

PeriodicGraph load_maybe_unrolled(const std::string& path, const std::string& sublattice) {
  PeriodicGraph g = load_graph(path);
  if (!sublattice.empty()) {
    return unroll(g, parse_sublattice(sublattice));
  }
  return g;
}

std::string validate_report(const PeriodicGraph& g) {
  std::ostringstream s;
  const std::size_t c = component_count(g);
  s << "n=" << g.vertex_count() << " m=" << g.edge_count() << " D=" << max_shift_magnitude(g)
    << ' ';
  if (c <= 1) {
    s << "connected";
  } else {
    s << "disconnected components=" << c;
  }
  s << '\n';
  return s.str();
}

// Lattice of the component containing `vertex` in the sublevel graph at t.
SublatticeBasis component_lattice(const PeriodicGraph& g, double t,
                                  std::optional<std::int64_t> vertex) {
  std::vector<Vertex> vs;
  for (const Vertex& v : g.vertices()) {
    if (v.value <= t) {
      vs.push_back(v);
    }
  }
  if (vs.empty()) {
    throw InputError("no vertex has value <= " + num(t));
  }
  std::vector<Edge> es;
  for (const Edge& e : g.edges()) {
    if (e.value <= t) {
      es.push_back(e);
    }
  }
  const PeriodicGraph sub(g.basis(), std::move(vs), std::move(es));
  std::int64_t pick = 0;
  if (vertex) {
    sub.vertex_index(*vertex);
    pick = *vertex;
  } else {
    const auto it = std::min_element(
        sub.vertices().begin(), sub.vertices().end(), [](const Vertex& a, const Vertex& b) {
          return std::pair(a.value, a.id) < std::pair(b.value, b.id);
        });
    pick = it->id;
  }
  const PeriodicMergeTree tree = build_merge_tree(sub);
  const Beam* beam = nullptr;
  for (const Beam& b : tree.beams) {
    if (b.birth_vertex == pick) {
      beam = &b;
    }
  }
  while (beam->parent) {
    beam = &tree.beams[*beam->parent];
  }
  return beam->epochs.back().lattice;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Periodic merge trees, barcodes and Wasserstein distances"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::optional<std::uint64_t> budget_flag;
  app.add_option("--tol", cfg.tol, "Tolerance for reporting zero distances")
      ->check(CLI::PositiveNumber);
  app.add_option("--budget", budget_flag, "Point budget for count-shadows");
  app.add_option("--seed", cfg.seed, "Seed for generated inputs");
  app.add_option("--out", cfg.out_path, "Write output to this file");

  std::string input;
  std::string input_b;
  std::string sublattice;
  bool as_json = false;
  bool as_dot = false;
  bool as_csv = false;
  bool with_plan = false;
  double component_at = 0.0;
  double radius = 0.0;
  std::optional<std::int64_t> vertex;
  std::size_t bench_n = 100'000;
  std::size_t bench_dim = 3;

  auto* validate = app.add_subcommand("validate", "Check a graph and report n, m, D");
  validate->add_option("input", input)->required();

  auto* tree = app.add_subcommand("tree", "Build the periodic merge tree");
  tree->add_option("input", input)->required();
  tree->add_option("--sublattice", sublattice, "Unroll first, rows as \"1,0;0,2\"");
  auto* tree_fmt = tree->add_option_group("format");
  tree_fmt->add_flag("--json", as_json);
  tree_fmt->add_flag("--dot", as_dot);
  tree_fmt->require_option(0, 1);

  auto* barcode = app.add_subcommand("barcode", "Extract the periodic barcode");
  barcode->add_option("input", input)->required();
  barcode->add_option("--sublattice", sublattice, "Unroll first, rows as \"1,0;0,2\"");
  auto* barcode_fmt = barcode->add_option_group("format");
  barcode_fmt->add_flag("--json", as_json);
  barcode_fmt->add_flag("--csv", as_csv);
  barcode_fmt->require_option(0, 1);

  auto* distance = app.add_subcommand("distance", "Alternating W1 distance between barcodes");
  distance->add_option("a", input)->required();
  distance->add_option("b", input_b)->required();
  distance->add_option("--sublattice", sublattice, "Unroll the second graph first");
  distance->add_flag("--plan", with_plan, "Dump the optimal plan of every era as JSON");

  auto* unroll_cmd = app.add_subcommand("unroll", "Quotient by a sublattice");
  unroll_cmd->add_option("input", input)->required();
  unroll_cmd->add_option("--sublattice", sublattice, "Rows as \"1,0;0,2\"")->required();

  auto* count = app.add_subcommand("count-shadows", "Count shadows meeting a ball");
  count->add_option("input", input)->required();
  count->add_option("--component-at", component_at, "Filter value")->required();
  count->add_option("--radius", radius, "Ball radius")->required()->check(CLI::PositiveNumber);
  count->add_option("--vertex", vertex, "Vertex of the component (default: oldest)");

  auto* bounds = app.add_subcommand("bounds", "Report D, mu0 and the stability constant");
  bounds->add_option("input", input)->required();

  auto* bench = app.add_subcommand("bench", "Time tree construction on a torus grid");
  bench->add_option("--n", bench_n, "Approximate vertex count")->check(CLI::PositiveNumber);
  bench->add_option("--dim", bench_dim, "Grid dimension")->check(CLI::Range(1, 8));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    cfg.budget = budget_flag ? *budget_flag : env_budget();
    if (cfg.budget == 0 || cfg.budget >= kBudgetCeiling) {
      throw InputError("budget must be in [1, " + std::to_string(kBudgetCeiling) + ")");
    }

    std::ostringstream buf;
    if (*validate) {
      buf << validate_report(load_graph(input));
    } else if (*tree) {
      const PeriodicMergeTree t = build_merge_tree(load_maybe_unrolled(input, sublattice));
      buf << (as_dot ? tree_to_dot(t) : tree_to_json(t));
    } else if (*barcode) {
      const PeriodicBarcode b = extract(build_merge_tree(load_maybe_unrolled(input, sublattice)));
      buf << (as_json ? barcode_to_json(b) : barcode_to_csv(b));
    } else if (*distance) {
      const PeriodicBarcode a = extract(build_merge_tree(load_graph(input)));
      const PeriodicBarcode b = extract(build_merge_tree(load_maybe_unrolled(input_b, sublattice)));
      const BarcodeDistance dist = barcode_distance(a, b);
      auto snap = [&](double x) { return std::abs(x) <= cfg.tol ? 0.0 : x; };
      for (std::size_t k = 0; k < dist.per_era.size(); ++k) {
        buf << "era " << k << ": " << num(snap(dist.per_era[k])) << '\n';
      }
      buf << "total: " << num(snap(dist.total)) << '\n';
      if (with_plan) {
        for (std::size_t k = 0; k <= a.dim; ++k) {
          const MultiplicityFunction xi = era_function(a, k);
          const MultiplicityFunction eta = era_function(b, k);
          buf << plan_to_json(w1_plan(xi.positive_part() + eta.negative_part(),
                                      xi.negative_part() + eta.positive_part()));
        }
      }
    } else if (*unroll_cmd) {
      buf << serialize_graph(unroll(load_graph(input), parse_sublattice(sublattice)));
    } else if (*count) {
      const PeriodicGraph g = load_graph(input);
      const SublatticeBasis l = component_lattice(g, component_at, vertex);
      const ShadowMonomial m = shadow_monomial(g.basis(), l);
      const std::uint64_t c = count_cosets_in_ball(g.basis(), l, radius, cfg.budget);
      const double predicted = m.display_coeff() * std::pow(radius, m.exponent);
      buf << "lattice=" << l.to_string() << " monomial=" << m.to_string() << '\n'
          << "count=" << c << " predicted=" << num(predicted) << '\n';
    } else if (*bounds) {
      const PeriodicGraph g = load_graph(input);
      const double mu0 = multiplicity_bound(g);
      buf << "D=" << max_shift_magnitude(g) << '\n'
          << "mu0=" << num(mu0) << '\n'
          << "stability_constant=" << num(2.0 * static_cast<double>(g.dim() + 1) * mu0) << '\n';
    } else if (*bench) {
      const auto side = static_cast<std::size_t>(
          std::llround(std::pow(static_cast<double>(bench_n), 1.0 / static_cast<double>(bench_dim))));
      const PeriodicGraph g =
          make_torus_grid(std::vector<std::size_t>(bench_dim, std::max<std::size_t>(side, 1)), cfg.seed);
      const auto start = std::chrono::steady_clock::now();
      const PeriodicMergeTree t = build_merge_tree(g);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      buf << "n=" << g.vertex_count() << " m=" << g.edge_count()
          << " catenations=" << t.log.count(EventKind::catenation)
          << " seconds=" << num(took.count()) << '\n';
    }

    if (cfg.out_path.empty()) {
      out << buf.str();
    } else {
      std::ofstream file(cfg.out_path, std::ios::binary);
      if (!file || !(file << buf.str())) {
        throw InputError("cannot write '" + cfg.out_path + "'");
      }
    }
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace perimere::cli
