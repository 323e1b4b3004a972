#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "perimere/barcode.hpp"
#include "perimere/pgraph.hpp"

namespace perimere {

/// Finite signed measure on the birth-death half-plane. Points on the
/// diagonal are dropped on insertion.
class MultiplicityFunction {
 public:
  using Point = std::pair<double, double>;

  void add(double birth, double death, double mult);
  double at(double birth, double death) const;
  const std::map<Point, double>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  /// Positive and negative parts; both nonnegative.
  MultiplicityFunction positive_part() const;
  MultiplicityFunction negative_part() const;

  friend MultiplicityFunction operator+(MultiplicityFunction a, const MultiplicityFunction& b);

 private:
  std::map<Point, double> points_;
};

/// Distance of a point to the diagonal: |death - birth|.
double diagonal_cost(const MultiplicityFunction::Point& x);
/// Cost of moving unit mass from x to y: l1 distance, |b1 - b2| between two
/// infinite points, +inf between a finite and an infinite point.
double ground_cost(const MultiplicityFunction::Point& x, const MultiplicityFunction::Point& y);

struct Flow {
  std::size_t source = 0;
  std::size_t sink = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<MultiplicityFunction::Point> sources;
  std::vector<MultiplicityFunction::Point> sinks;
  std::vector<Flow> flows;
  /// Mass of each source sent to the diagonal.
  std::vector<double> chi;
  /// Mass of each sink drawn from the diagonal.
  std::vector<double> upsilon;
  double cost = 0.0;
};

/// Masses are rounded to multiples of this before the exact integer solve.
inline constexpr double kMassQuantum = 1e-9;

/// Optimal plan between two nonnegative functions. The cost is +inf when the
/// infinite-death masses differ; the plan then carries no flows.
TransportPlan w1_plan(const MultiplicityFunction& xi, const MultiplicityFunction& eta);
double w1(const MultiplicityFunction& xi, const MultiplicityFunction& eta);

/// W1 applied to (xi+ + eta-, xi- + eta+).
double w1_alt(const MultiplicityFunction& xi, const MultiplicityFunction& eta);

MultiplicityFunction era_function(const PeriodicBarcode& b, std::size_t exponent);

struct BarcodeDistance {
  std::vector<double> per_era;
  double total = 0.0;
};

BarcodeDistance barcode_distance(const PeriodicBarcode& a, const PeriodicBarcode& b);

/// (d^2.5 * D * m * |U^-1|)^d.
double multiplicity_bound(const PeriodicGraph& g);

std::string plan_to_json(const TransportPlan& plan);

}  // namespace perimere
