#include "perimere/barcode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "perimere/error.hpp"

namespace perimere {

std::vector<Bar> canonicalize(std::vector<Bar> bars) {
  std::erase_if(bars, [](const Bar& b) { return !(b.birth < b.death) || b.mult == 0.0; });
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  });
  std::vector<Bar> out;
  for (std::size_t i = 0; i < bars.size();) {
    std::size_t j = i;
    double sum = 0.0;
    double scale = 0.0;
    for (; j < bars.size() && bars[j].birth == bars[i].birth && bars[j].death == bars[i].death;
         ++j) {
      sum += bars[j].mult;
      scale = std::max(scale, std::abs(bars[j].mult));
    }
    if (std::abs(sum) > kCancelTolerance * (1.0 + scale)) {
      out.push_back(Bar{bars[i].birth, bars[i].death, sum});
    }
    i = j;
  }
  return out;
}

PeriodicBarcode extract(const PeriodicMergeTree& tree) {
  PeriodicBarcode code(tree.dim);
  std::vector<std::vector<Bar>> raw(tree.dim + 1);
  for (const Beam& beam : tree.beams) {
    const double c = beam.birth;
    for (std::size_t i = 0; i < beam.epochs.size(); ++i) {
      const Epoch& e = beam.epochs[i];
      const double a = e.start;
      const double b = i + 1 < beam.epochs.size() ? beam.epochs[i + 1].start : beam.death;
      const double s = e.monomial.coeff;
      auto& era = raw[static_cast<std::size_t>(e.monomial.exponent)];
      era.push_back(Bar{c, b, s});
      era.push_back(Bar{c, a, -s});
    }
  }
  for (std::size_t k = 0; k <= tree.dim; ++k) {
    code.eras[k] = canonicalize(std::move(raw[k]));
  }
  return code;
}

bool equals(const PeriodicBarcode& a, const PeriodicBarcode& b, double tol) {
  if (a.dim != b.dim) {
    return false;
  }
  for (std::size_t k = 0; k < a.eras.size(); ++k) {
    const auto& x = a.eras[k];
    const auto& y = b.eras[k];
    if (x.size() != y.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].birth != y[i].birth || x[i].death != y[i].death ||
          std::abs(x[i].mult - y[i].mult) > tol) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<DiagramPoint>> to_diagram(const PeriodicBarcode& b) {
  std::vector<std::vector<DiagramPoint>> out(b.eras.size());
  for (std::size_t k = 0; k < b.eras.size(); ++k) {
    for (const Bar& bar : b.eras[k]) {
      out[k].push_back(DiagramPoint{bar.birth, bar.death, bar.mult, std::isinf(bar.death)});
    }
  }
  return out;
}

PeriodicBarcode from_diagram(std::size_t dim, const std::vector<std::vector<DiagramPoint>>& eras) {
  if (eras.size() != dim + 1) {
    throw InputError("diagram has " + std::to_string(eras.size()) + " eras, expected " +
                     std::to_string(dim + 1));
  }
  PeriodicBarcode b(dim);
  for (std::size_t k = 0; k < eras.size(); ++k) {
    std::vector<Bar> bars;
    for (const DiagramPoint& p : eras[k]) {
      bars.push_back(Bar{p.birth, p.infinite ? kInfinity : p.death, p.mult});
    }
    b.eras[k] = canonicalize(std::move(bars));
  }
  return b;
}

std::string barcode_to_json(const PeriodicBarcode& b) {
  using json = nlohmann::ordered_json;
  json eras = json::array();
  for (std::size_t k = 0; k < b.eras.size(); ++k) {
    json bars = json::array();
    for (const Bar& bar : b.eras[k]) {
      bars.push_back(json::array(
          {bar.birth, std::isinf(bar.death) ? json(nullptr) : json(bar.death), bar.mult}));
    }
    eras.push_back(json{{"exponent", k}, {"bars", std::move(bars)}});
  }
  json doc{{"dim", b.dim}};
  doc["eras"] = std::move(eras);
  return doc.dump(2) + "\n";
}

std::string barcode_to_csv(const PeriodicBarcode& b) {
  std::ostringstream out;
  out << "era,birth,death,mult\n";
  // Heights in shortest round-trip form, multiplicities rounded.
  auto height = [](double h) {
    if (std::isinf(h)) {
      return std::string("inf");
    }
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, h).ptr);
  };
  char mult[32];
  for (std::size_t k = 0; k < b.eras.size(); ++k) {
    for (const Bar& bar : b.eras[k]) {
      std::snprintf(mult, sizeof mult, "%.12g", bar.mult);
      out << k << ',' << height(bar.birth) << ',' << height(bar.death) << ',' << mult << '\n';
    }
  }
  return out.str();
}

}  // namespace perimere
