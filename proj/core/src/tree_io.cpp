#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "perimere/mergetree.hpp"

namespace perimere {
namespace {

using json = nlohmann::ordered_json;

json height(double h) { return std::isinf(h) ? json(nullptr) : json(h); }

json lattice_json(const SublatticeBasis& l) {
  json cols = json::array();
  for (std::size_t j = 0; j < l.rank(); ++j) {
    json col = json::array();
    for (const BigInt& x : l.column(j)) {
      col.push_back(x.fits_slong_p() ? json(x.get_si()) : json(x.get_str()));
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

json monomial_json(const ShadowMonomial& m) {
  return json{{"coeff", m.coeff}, {"exponent", m.exponent}, {"display", m.to_string()}};
}

std::string fmt(double x) {
  if (std::isinf(x)) {
    return "inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string tree_to_json(const PeriodicMergeTree& t) {
  json beams = json::array();
  for (const Beam& b : t.beams) {
    json epochs = json::array();
    for (const Epoch& e : b.epochs) {
      json je{{"start", e.start}};
      je["monomial"] = monomial_json(e.monomial);
      je["lattice"] = lattice_json(e.lattice);
      epochs.push_back(std::move(je));
    }
    json jb{{"id", b.id}, {"birth", b.birth}, {"birth_vertex", b.birth_vertex},
            {"death", height(b.death)}};
    jb["parent"] = b.parent ? json(*b.parent) : json(nullptr);
    jb["epochs"] = std::move(epochs);
    beams.push_back(std::move(jb));
  }
  json events = json::array();
  for (const Event& e : t.log.events) {
    json je{{"kind", to_string(e.kind)}, {"time", e.time}, {"cell", e.cell}, {"beams", e.beams}};
    if (e.monomial) {
      je["monomial"] = monomial_json(*e.monomial);
    }
    if (e.via_merger) {
      je["via_merger"] = true;
    }
    events.push_back(std::move(je));
  }
  json doc{{"dim", t.dim}, {"components", t.components}};
  doc["beams"] = std::move(beams);
  doc["events"] = std::move(events);
  doc["silent_loops"] = t.log.silent_loops;
  return doc.dump(2) + "\n";
}

std::string tree_to_dot(const PeriodicMergeTree& t) {
  std::ostringstream out;
  out << "digraph merge_tree {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const Beam& b : t.beams) {
    out << "  b" << b.id << " [label=\"beam " << b.id << " [" << fmt(b.birth) << ", "
        << fmt(b.death) << ")";
    for (const Epoch& e : b.epochs) {
      out << "\\n" << fmt(e.start) << ": " << e.monomial.to_string();
    }
    out << "\"];\n";
  }
  for (const Beam& b : t.beams) {
    if (b.parent) {
      out << "  b" << b.id << " -> b" << *b.parent << " [label=\"" << fmt(b.death) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace perimere
