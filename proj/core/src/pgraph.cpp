#include "perimere/pgraph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "perimere/error.hpp"

namespace perimere {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string describe_edge(const Edge& e) {
  std::ostringstream out;
  out << "edge " << e.id << " (" << e.u << " -> " << e.v << ")";
  return out.str();
}

// A filter value given either as a JSON number or as a decimal string.
double read_real(const json& node, std::optional<std::string>* literal, const std::string& where) {
  if (node.is_number()) {
    return node.get<double>();
  }
  if (node.is_string()) {
    const auto& text = node.get_ref<const std::string&>();
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
      throw InputError(where + ": '" + text + "' is not a decimal number");
    }
    if (literal != nullptr) {
      *literal = text;
    }
    return value;
  }
  throw InputError(where + ": expected a number or a decimal string");
}

std::int64_t read_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) {
    throw InputError(where + ": expected an integer");
  }
  return node.get<std::int64_t>();
}

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return *it;
}

std::int64_t checked_id(std::int64_t id, std::uint64_t k, std::uint64_t c) {
  std::int64_t scaled = 0;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(id, static_cast<std::int64_t>(k), &scaled) ||
      __builtin_add_overflow(scaled, static_cast<std::int64_t>(c), &out)) {
    throw InputError("unrolled cell id overflows 64 bits");
  }
  return out;
}

}  // namespace

PeriodicGraph::PeriodicGraph(RealBasis basis, std::vector<Vertex> vertices,
                             std::vector<Edge> edges)
    : basis_(std::move(basis)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
  index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const auto& v = vertices_[i];
    if (!std::isfinite(v.value)) {
      throw InputError("vertex " + std::to_string(v.id) + " has a non-finite value");
    }
    if (!index_.emplace(v.id, i).second) {
      throw InputError("duplicate vertex id " + std::to_string(v.id));
    }
  }
  std::unordered_map<std::int64_t, std::size_t> edge_ids;
  edge_ids.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (!edge_ids.emplace(e.id, i).second) {
      throw InputError("duplicate edge id " + std::to_string(e.id));
    }
    if (!std::isfinite(e.value)) {
      throw InputError(describe_edge(e) + " has a non-finite value");
    }
    const auto iu = index_.find(e.u);
    const auto iv = index_.find(e.v);
    if (iu == index_.end() || iv == index_.end()) {
      throw InputError(describe_edge(e) + " references a missing vertex");
    }
    if (e.shift.size() != dim()) {
      throw InputError(describe_edge(e) + " has a shift of length " +
                       std::to_string(e.shift.size()) + ", expected " + std::to_string(dim()));
    }
    const double floor_value =
        std::max(vertices_[iu->second].value, vertices_[iv->second].value);
    if (e.value < floor_value) {
      std::ostringstream msg;
      msg << "filter violation: " << describe_edge(e) << " has value " << e.value
          << " below its endpoint value " << floor_value;
      throw InputError(msg.str());
    }
  }
}

std::size_t PeriodicGraph::vertex_index(std::int64_t id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw InputError("unknown vertex id " + std::to_string(id));
  }
  return it->second;
}

PeriodicGraph PeriodicGraph::with_values(const std::vector<double>& vertex_values,
                                         const std::vector<double>& edge_values) const {
  if (vertex_values.size() != vertices_.size() || edge_values.size() != edges_.size()) {
    throw InputError("with_values: value counts do not match the graph");
  }
  auto vs = vertices_;
  auto es = edges_;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    vs[i].value = vertex_values[i];
    vs[i].literal.reset();
  }
  for (std::size_t i = 0; i < es.size(); ++i) {
    es[i].value = edge_values[i];
    es[i].literal.reset();
  }
  return PeriodicGraph(basis_, std::move(vs), std::move(es));
}

PeriodicGraph parse_graph(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("malformed document: expected a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "dim" && key != "basis" && key != "vertices" && key != "edges") {
      throw InputError("unsupported field '" + key +
                       "' (only vertices and edges are accepted; higher cells are rejected)");
    }
  }
  const std::int64_t d = read_int(require(doc, "dim"), "dim");
  if (d < 1 || d > 64) {
    throw InputError("dim must be between 1 and 64");
  }
  const auto du = static_cast<std::size_t>(d);

  const json& basis_node = require(doc, "basis");
  if (!basis_node.is_array() || basis_node.size() != du) {
    throw InputError("basis must list " + std::to_string(d) + " columns");
  }
  Eigen::MatrixXd u(d, d);
  for (std::size_t j = 0; j < du; ++j) {
    const json& col = basis_node[j];
    if (!col.is_array() || col.size() != du) {
      throw InputError("basis column " + std::to_string(j) + " must have " +
                       std::to_string(d) + " entries");
    }
    for (std::size_t i = 0; i < du; ++i) {
      u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          read_real(col[i], nullptr, "basis");
    }
  }

  std::vector<Vertex> vertices;
  const json& vnode = require(doc, "vertices");
  if (!vnode.is_array()) {
    throw InputError("vertices must be an array");
  }
  vertices.reserve(vnode.size());
  for (const auto& item : vnode) {
    Vertex v;
    v.id = read_int(require(item, "id"), "vertex id");
    v.value = read_real(require(item, "value"), &v.literal, "vertex " + std::to_string(v.id));
    vertices.push_back(std::move(v));
  }

  std::vector<Edge> edges;
  const json& enode = require(doc, "edges");
  if (!enode.is_array()) {
    throw InputError("edges must be an array");
  }
  edges.reserve(enode.size());
  for (const auto& item : enode) {
    Edge e;
    e.id = read_int(require(item, "id"), "edge id");
    const std::string where = "edge " + std::to_string(e.id);
    e.u = read_int(require(item, "u"), where + " u");
    e.v = read_int(require(item, "v"), where + " v");
    e.value = read_real(require(item, "value"), &e.literal, where);
    const json& shift = require(item, "shift");
    if (!shift.is_array()) {
      throw InputError(where + ": shift must be an array");
    }
    for (const auto& x : shift) {
      e.shift.push_back(read_int(x, where + " shift"));
    }
    edges.push_back(std::move(e));
  }
  return PeriodicGraph(RealBasis(std::move(u)), std::move(vertices), std::move(edges));
}

PeriodicGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

PeriodicGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  return parse_graph(in);
}

std::string serialize_graph(const PeriodicGraph& g) {
  auto value_node = [](double value, const std::optional<std::string>& literal) {
    return literal ? ordered_json(*literal) : ordered_json(value);
  };
  ordered_json doc;
  doc["dim"] = g.dim();
  ordered_json basis = ordered_json::array();
  const auto& u = g.basis().matrix();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    ordered_json col = ordered_json::array();
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      col.push_back(u(i, j));
    }
    basis.push_back(std::move(col));
  }
  doc["basis"] = std::move(basis);
  ordered_json vs = ordered_json::array();
  for (const auto& v : g.vertices()) {
    ordered_json node;
    node["id"] = v.id;
    node["value"] = value_node(v.value, v.literal);
    vs.push_back(std::move(node));
  }
  doc["vertices"] = std::move(vs);
  ordered_json es = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json node;
    node["id"] = e.id;
    node["u"] = e.u;
    node["v"] = e.v;
    node["value"] = value_node(e.value, e.literal);
    node["shift"] = e.shift;
    es.push_back(std::move(node));
  }
  doc["edges"] = std::move(es);
  return doc.dump(2) + "\n";
}

std::int64_t max_shift_magnitude(const PeriodicGraph& g) {
  std::int64_t best = 0;
  for (const auto& e : g.edges()) {
    for (auto x : e.shift) {
      // |INT64_MIN| is not representable; shifts that large are rejected
      // downstream anyway.
      best = std::max(best, x == INT64_MIN ? INT64_MAX : std::abs(x));
    }
  }
  return best;
}

std::size_t component_count(const PeriodicGraph& g) {
  std::vector<std::size_t> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = g.vertex_count();
  for (const auto& e : g.edges()) {
    const auto a = find(g.vertex_index(e.u));
    const auto b = find(g.vertex_index(e.v));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

double cellular_l1(const PeriodicGraph& f, const PeriodicGraph& g) {
  if (f.dim() != g.dim() || f.vertex_count() != g.vertex_count() ||
      f.edge_count() != g.edge_count()) {
    throw InputError("cellular_l1: graphs have different combinatorics");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < f.vertex_count(); ++i) {
    const auto& a = f.vertices()[i];
    const auto& b = g.vertices()[i];
    if (a.id != b.id) {
      throw InputError("cellular_l1: vertex ids differ");
    }
    total += std::abs(a.value - b.value);
  }
  for (std::size_t i = 0; i < f.edge_count(); ++i) {
    const auto& a = f.edges()[i];
    const auto& b = g.edges()[i];
    if (a.id != b.id || a.u != b.u || a.v != b.v || a.shift != b.shift) {
      throw InputError("cellular_l1: edge " + std::to_string(a.id) + " differs in combinatorics");
    }
    total += std::abs(a.value - b.value);
  }
  return total;
}

PeriodicGraph unroll(const PeriodicGraph& g, const IntMatrix& s) {
  const std::size_t d = g.dim();
  if (s.rows() != d || s.cols() != d) {
    throw InputError("unroll: sublattice matrix must be " + std::to_string(d) + "x" +
                     std::to_string(d));
  }
  const CosetReducer reducer(s);
  const auto reps = reducer.representatives();
  const std::uint64_t k = reducer.index();

  std::unordered_map<std::vector<std::int64_t>, std::uint64_t,
                     decltype([](const std::vector<std::int64_t>& v) {
                       std::size_t h = 0;
                       for (auto x : v) {
                         h = h * 1000003u + static_cast<std::size_t>(x);
                       }
                       return h;
                     })>
      rep_index;
  for (std::uint64_t c = 0; c < k; ++c) {
    rep_index.emplace(reps[c], c);
  }

  Eigen::MatrixXd sd(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      sd(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s(i, j).get_d();
    }
  }
  RealBasis basis(g.basis().matrix() * sd);

  std::vector<Vertex> vertices;
  vertices.reserve(g.vertex_count() * k);
  for (const auto& v : g.vertices()) {
    for (std::uint64_t c = 0; c < k; ++c) {
      vertices.push_back(Vertex{checked_id(v.id, k, c), v.value, v.literal});
    }
  }

  std::vector<Edge> edges;
  edges.reserve(g.edge_count() * k);
  std::vector<std::int64_t> target(d);
  std::vector<std::int64_t> residual(d);
  for (const auto& e : g.edges()) {
    for (std::uint64_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < d; ++i) {
        if (__builtin_add_overflow(reps[c][i], e.shift[i], &target[i])) {
          throw InputError("unroll: shift overflows 64 bits");
        }
      }
      const auto landing = reducer.canonical(target);
      for (std::size_t i = 0; i < d; ++i) {
        residual[i] = target[i] - landing[i];
      }
      Edge out;
      out.id = checked_id(e.id, k, c);
      out.u = checked_id(e.u, k, c);
      out.v = checked_id(e.v, k, rep_index.at(landing));
      out.value = e.value;
      out.literal = e.literal;
      out.shift = reducer.solve(residual);
      edges.push_back(std::move(out));
    }
  }
  return PeriodicGraph(std::move(basis), std::move(vertices), std::move(edges));
}

IntMatrix parse_sublattice(const std::string& text) {
  std::vector<std::vector<std::int64_t>> rows;
  std::stringstream rows_in(text);
  std::string row;
  while (std::getline(rows_in, row, ';')) {
    std::vector<std::int64_t> entries;
    std::stringstream cols_in(row);
    std::string cell;
    while (std::getline(cols_in, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw InputError("sublattice: empty entry in '" + text + "'");
      }
      const std::string trimmed = cell.substr(first, last - first + 1);
      std::int64_t x = 0;
      const auto [ptr, ec] =
          std::from_chars(trimmed.data(), trimmed.data() + trimmed.size(), x);
      if (ec != std::errc() || ptr != trimmed.data() + trimmed.size()) {
        throw InputError("sublattice: '" + trimmed + "' is not an integer");
      }
      entries.push_back(x);
    }
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) {
    throw InputError("sublattice: empty matrix");
  }
  for (const auto& r : rows) {
    if (r.size() != rows.size()) {
      throw InputError("sublattice: matrix must be square");
    }
  }
  IntMatrix s = IntMatrix::from_rows(rows);
  CosetReducer check(s);  // throws when singular
  return s;
}

}  // namespace perimere
