#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perimere/mergetree.hpp"

namespace perimere {
namespace {

// Maximal piece of a beam between bifurcation points, read top-down. The
// monomial on [bottom, top) is given by `epochs` (start heights ascending,
// first start == bottom).
struct Segment {
  double bottom = 0.0;
  std::vector<std::pair<double, ShadowMonomial>> epochs;
  std::vector<std::size_t> children;
};

struct Shape {
  std::vector<Segment> segments;
  std::vector<std::size_t> roots;
  std::vector<std::string> forms;
};

bool zero_length(const Beam& b) { return !(b.birth < b.death); }

std::vector<std::pair<double, ShadowMonomial>> epochs_between(const Beam& b, double bottom,
                                                              double top) {
  std::vector<std::pair<double, ShadowMonomial>> out;
  out.emplace_back(bottom, b.epoch_at(bottom).monomial);
  for (const Epoch& e : b.epochs) {
    if (e.start > bottom && e.start < top) {
      if (out.back().first == e.start) {
        out.back().second = e.monomial;
      } else {
        out.emplace_back(e.start, e.monomial);
      }
    }
  }
  return out;
}

std::string fmt_height(double h) {
  if (std::isinf(h)) {
    return "inf";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", h);
  return buf;
}

std::string fmt_monomial(const ShadowMonomial& m) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g^%d", m.coeff, m.exponent);
  return buf;
}

Shape make_shape(const PeriodicMergeTree& t) {
  const std::size_t n = t.beams.size();
  // Attachment beam of every nonzero beam: the first ancestor still alive
  // strictly above the merge height.
  std::vector<std::vector<std::size_t>> attached(n);
  std::vector<std::size_t> root_beams;
  for (const Beam& b : t.beams) {
    if (zero_length(b)) {
      continue;
    }
    std::optional<std::size_t> p = b.parent;
    while (p && !(t.beams[*p].death > b.death)) {
      p = t.beams[*p].parent;
    }
    if (p) {
      attached[*p].push_back(b.id);
    } else {
      root_beams.push_back(b.id);
    }
  }

  Shape shape;
  // Returns the index of the top segment of beam b.
  std::function<std::size_t(std::size_t)> emit = [&](std::size_t id) {
    const Beam& b = t.beams[id];
    std::map<double, std::vector<std::size_t>, std::greater<>> by_height;
    for (std::size_t c : attached[id]) {
      by_height[t.beams[c].death].push_back(c);
    }
    std::vector<std::size_t> chain;
    double top = b.death;
    for (const auto& [h, kids] : by_height) {
      Segment s;
      s.bottom = h;
      s.epochs = epochs_between(b, h, top);
      for (std::size_t c : kids) {
        s.children.push_back(emit(c));
      }
      chain.push_back(shape.segments.size());
      shape.segments.push_back(std::move(s));
      top = h;
    }
    Segment last;
    last.bottom = b.birth;
    last.epochs = epochs_between(b, b.birth, top);
    chain.push_back(shape.segments.size());
    shape.segments.push_back(std::move(last));
    // Link each segment to the continuation of the same beam below it.
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      shape.segments[chain[i]].children.push_back(chain[i + 1]);
    }
    return chain.front();
  };
  for (std::size_t r : root_beams) {
    shape.roots.push_back(emit(r));
  }

  shape.forms.resize(shape.segments.size());
  std::function<const std::string&(std::size_t)> form = [&](std::size_t i) -> const std::string& {
    if (!shape.forms[i].empty()) {
      return shape.forms[i];
    }
    Segment& s = shape.segments[i];
    std::vector<std::string> kids;
    for (std::size_t c : s.children) {
      kids.push_back(form(c));
    }
    std::sort(kids.begin(), kids.end());
    std::string out = "(";
    for (const auto& [h, m] : s.epochs) {
      out += fmt_height(h) + ":" + fmt_monomial(m) + ",";
    }
    out += "|";
    for (const auto& k : kids) {
      out += k;
    }
    out += ")";
    shape.forms[i] = std::move(out);
    return shape.forms[i];
  };
  for (std::size_t i = 0; i < shape.segments.size(); ++i) {
    form(i);
  }
  for (Segment& s : shape.segments) {
    std::sort(s.children.begin(), s.children.end(),
              [&](std::size_t a, std::size_t b) { return shape.forms[a] < shape.forms[b]; });
  }
  std::sort(shape.roots.begin(), shape.roots.end(),
            [&](std::size_t a, std::size_t b) { return shape.forms[a] < shape.forms[b]; });
  return shape;
}

const ShadowMonomial& monomial_at(const Segment& s, double h) {
  auto it = std::upper_bound(s.epochs.begin(), s.epochs.end(), h,
                             [](double x, const auto& e) { return x < e.first; });
  return std::prev(it)->second;
}

class SplinterCheck {
 public:
  SplinterCheck(const Shape& fine, const Shape& coarse, double tol)
      : fine_(fine), coarse_(coarse), tol_(tol) {}

  bool roots() { return assign(coarse_.roots, fine_.roots, 1.0); }

 private:
  bool same_shape(std::size_t a, std::size_t b) const {
    const Segment& x = fine_.segments[a];
    const Segment& y = fine_.segments[b];
    if (x.bottom != y.bottom || x.epochs.size() != y.epochs.size() ||
        x.children.size() != y.children.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.epochs.size(); ++i) {
      if (x.epochs[i].first != y.epochs[i].first ||
          !monomial_equal(x.epochs[i].second, y.epochs[i].second, tol_)) {
        return false;
      }
    }
    for (std::size_t i = 0; i < x.children.size(); ++i) {
      if (!same_shape(x.children[i], y.children[i])) {
        return false;
      }
    }
    return true;
  }

  bool scaled_match(const ShadowMonomial& f, const ShadowMonomial& c, double k) const {
    return f.exponent == c.exponent &&
           std::abs(f.coeff * k - c.coeff) <= tol_ * std::max(1.0, std::abs(c.coeff));
  }

  // Coarse segment sc against k identical copies of fine segment sf, both
  // restricted to heights below `top`. Segment epochs never reach above the
  // segment itself, so siblings are compared with top = inf.
  bool check(std::size_t sc, std::size_t sf, double top, double k) const {
    const Segment& c = coarse_.segments[sc];
    const Segment& f = fine_.segments[sf];
    const double low = std::max(c.bottom, f.bottom);
    std::vector<double> marks{low};
    for (const auto& e : c.epochs) {
      if (e.first > low && e.first < top) {
        marks.push_back(e.first);
      }
    }
    for (const auto& e : f.epochs) {
      if (e.first > low && e.first < top) {
        marks.push_back(e.first);
      }
    }
    for (double h : marks) {
      if (!scaled_match(monomial_at(f, h), monomial_at(c, h), k)) {
        return false;
      }
    }
    if (c.bottom > f.bottom) {
      return false;
    }
    if (c.bottom < f.bottom) {
      if (f.children.empty()) {
        return false;
      }
      for (std::size_t i = 1; i < f.children.size(); ++i) {
        if (!same_shape(f.children[0], f.children[i])) {
          return false;
        }
      }
      return check(sc, f.children[0], low, k * static_cast<double>(f.children.size()));
    }
    if (c.children.empty() != f.children.empty()) {
      return false;
    }
    return c.children.empty() || assign(c.children, f.children, k);
  }

  // Distributes the fine subtrees over the coarse ones: every coarse subtree
  // receives at least one fine subtree, all of one identity class.
  bool assign(const std::vector<std::size_t>& coarse, const std::vector<std::size_t>& fine,
              double k) const {
    if (fine.size() < coarse.size()) {
      return false;
    }
    std::vector<std::size_t> reps;
    std::vector<std::size_t> counts;
    for (std::size_t f : fine) {
      std::size_t i = 0;
      while (i < reps.size() && !same_shape(reps[i], f)) {
        ++i;
      }
      if (i == reps.size()) {
        reps.push_back(f);
        counts.push_back(0);
      }
      ++counts[i];
    }
    std::function<bool(std::size_t)> place = [&](std::size_t ci) {
      if (ci == coarse.size()) {
        return std::all_of(counts.begin(), counts.end(), [](std::size_t c) { return c == 0; });
      }
      for (std::size_t r = 0; r < reps.size(); ++r) {
        for (std::size_t q = counts[r]; q >= 1; --q) {
          if (!check(coarse[ci], reps[r], kInfinity, k * static_cast<double>(q))) {
            continue;
          }
          counts[r] -= q;
          const bool ok = place(ci + 1);
          counts[r] += q;
          if (ok) {
            return true;
          }
        }
      }
      return false;
    };
    return place(0);
  }

  const Shape& fine_;
  const Shape& coarse_;
  double tol_;
};

}  // namespace

std::string canonical_form(const PeriodicMergeTree& t) {
  const Shape shape = make_shape(t);
  std::string out = "d=" + std::to_string(t.dim) + ";";
  for (std::size_t r : shape.roots) {
    out += shape.forms[r];
  }
  return out;
}

bool splinters(const PeriodicMergeTree& fine, const PeriodicMergeTree& coarse, double tol) {
  if (fine.dim != coarse.dim) {
    return false;
  }
  const Shape f = make_shape(fine);
  const Shape c = make_shape(coarse);
  return SplinterCheck(f, c, tol).roots();
}

}  // namespace perimere
