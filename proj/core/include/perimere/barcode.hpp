#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "perimere/mergetree.hpp"

namespace perimere {

struct Bar {
  double birth = 0.0;
  /// +inf for bars that never end.
  double death = kInfinity;
  double mult = 0.0;
};

/// Periodic 0-th barcode: one canonical bar list per era, indexed by the
/// exponent 0..d of the monomials that produced it.
struct PeriodicBarcode {
  std::size_t dim = 0;
  std::vector<std::vector<Bar>> eras;

  explicit PeriodicBarcode(std::size_t d = 0) : dim(d), eras(d + 1) {}
};

/// Multiplicity sums at or below this fraction of the largest summand are
/// treated as cancelled.
inline constexpr double kCancelTolerance = 1e-12;

/// Sorts bars by (birth, death), sums multiplicities of equal bars and drops
/// empty bars and cancelled sums.
std::vector<Bar> canonicalize(std::vector<Bar> bars);

PeriodicBarcode extract(const PeriodicMergeTree& tree);

/// Era-wise equality; births and deaths exact, multiplicities within tol.
bool equals(const PeriodicBarcode& a, const PeriodicBarcode& b, double tol = 1e-9);

struct DiagramPoint {
  double birth = 0.0;
  double death = kInfinity;
  double mult = 0.0;
  bool infinite = false;
};

std::vector<std::vector<DiagramPoint>> to_diagram(const PeriodicBarcode& b);
PeriodicBarcode from_diagram(std::size_t dim, const std::vector<std::vector<DiagramPoint>>& eras);

/// {"dim": d, "eras": [{"exponent": k, "bars": [[birth, death|null, mult]...]}...]}
std::string barcode_to_json(const PeriodicBarcode& b);
/// Header "era,birth,death,mult"; infinite deaths as "inf".
std::string barcode_to_csv(const PeriodicBarcode& b);

}  // namespace perimere
