#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kyot {

/// Concavity exponent of the cost |x - y|^alpha. Solvers accept the full
/// range (0, 1]; the no-crossing guarantees hold strictly for alpha < 1.
class Alpha {
 public:
  explicit Alpha(double v) : value_(v) {
    if (!(v > 0.0) || !(v <= 1.0) || !std::isfinite(v)) {
      throw std::invalid_argument("Alpha: exponent must lie in (0, 1], got " +
                                  std::to_string(v));
    }
  }
  double value() const { return value_; }

 private:
  double value_;
};

struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw std::invalid_argument("Interval: require finite lo < hi");
    }
  }
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

inline Interval unit_interval() { return Interval(0.0, 1.0); }

/// Concave power cost between two coordinates.
inline double power_cost(double a, double b, double alpha) {
  return std::pow(std::abs(a - b), alpha);
}

struct RngSeed {
  std::uint64_t value = 0;
};

/// Two point families on an interval plus the exponent: the input of every
/// combinatorial solver. Coordinates are kept in original input order;
/// x_order / y_order hold stable sort permutations into ascending order.
struct Instance {
  std::vector<double> xs;
  std::vector<double> ys;
  Alpha alpha;
  Interval interval;
  bool strict = false;  // all 2n points pairwise distinct
  std::vector<std::size_t> x_order;
  std::vector<std::size_t> y_order;

  std::size_t n() const { return xs.size(); }
  double cost(std::size_t i, std::size_t j) const {
    return power_cost(xs[i], ys[j], alpha.value());
  }
};

namespace detail {

inline std::vector<std::size_t> stable_sort_order(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return order;
}

}  // namespace detail

inline Instance validate_instance(std::vector<double> raw_xs,
                                  std::vector<double> raw_ys, Alpha alpha,
                                  Interval interval) {
  if (raw_xs.empty() || raw_ys.empty()) {
    throw std::invalid_argument("validate_instance: empty point family");
  }
  if (raw_xs.size() != raw_ys.size()) {
    throw std::invalid_argument(
        "validate_instance: size mismatch, |xs|=" + std::to_string(raw_xs.size()) +
        " |ys|=" + std::to_string(raw_ys.size()));
  }
  for (double t : raw_xs) {
    if (!std::isfinite(t) || !interval.contains(t)) {
      throw std::invalid_argument("validate_instance: x coordinate " +
                                  std::to_string(t) + " outside interval");
    }
  }
  for (double t : raw_ys) {
    if (!std::isfinite(t) || !interval.contains(t)) {
      throw std::invalid_argument("validate_instance: y coordinate " +
                                  std::to_string(t) + " outside interval");
    }
  }
  Instance inst{std::move(raw_xs), std::move(raw_ys), alpha, interval};
  inst.x_order = detail::stable_sort_order(inst.xs);
  inst.y_order = detail::stable_sort_order(inst.ys);

  std::vector<double> all(inst.xs);
  all.insert(all.end(), inst.ys.begin(), inst.ys.end());
  std::sort(all.begin(), all.end());
  inst.strict = std::adjacent_find(all.begin(), all.end()) == all.end();
  return inst;
}

/// A sorted grid with values: carrier for CDFs, bridges, and the argument of
/// the transport norm. Values between grid points are linearly interpolated.
struct GridFunction {
  std::vector<double> grid;
  std::vector<double> values;

  GridFunction(std::vector<double> g, std::vector<double> v)
      : grid(std::move(g)), values(std::move(v)) {
    if (grid.size() != values.size() || grid.size() < 2) {
      throw std::invalid_argument("GridFunction: need |grid| == |values| >= 2");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i - 1] < grid[i])) {
        throw std::invalid_argument("GridFunction: grid must be strictly increasing");
      }
    }
  }

  std::size_t size() const { return grid.size(); }
  double lo() const { return grid.front(); }
  double hi() const { return grid.back(); }

  bool is_bridge(double tol = 1e-12) const {
    return std::abs(values.front() - values.back()) <= tol;
  }

  /// Piecewise-linear evaluation, clamped to the grid range.
  double eval(double t) const {
    if (t <= grid.front()) return values.front();
    if (t >= grid.back()) return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    std::size_t j = static_cast<std::size_t>(it - grid.begin());
    double t0 = grid[j - 1], t1 = grid[j];
    double w = (t - t0) / (t1 - t0);
    return values[j - 1] + w * (values[j] - values[j - 1]);
  }
};

inline std::vector<double> merge_grids(const std::vector<double>& a,
                                       const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Resample onto a (finer) grid by linear interpolation.
inline GridFunction resample(const GridFunction& f, const std::vector<double>& grid) {
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f.eval(grid[i]);
  return GridFunction(grid, std::move(vals));
}

// ---- plain-text instance format: "alpha lo hi" / xs line / ys line ----

inline void write_instance(std::ostream& os, const Instance& inst) {
  os.precision(17);
  os << inst.alpha.value() << ' ' << inst.interval.lo << ' ' << inst.interval.hi
     << '\n';
  for (std::size_t i = 0; i < inst.xs.size(); ++i)
    os << (i ? " " : "") << inst.xs[i];
  os << '\n';
  for (std::size_t i = 0; i < inst.ys.size(); ++i)
    os << (i ? " " : "") << inst.ys[i];
  os << '\n';
}

inline Instance read_instance(std::istream& is) {
  std::string header, xs_line, ys_line;
  if (!std::getline(is, header) || !std::getline(is, xs_line) ||
      !std::getline(is, ys_line)) {
    throw std::invalid_argument("read_instance: expected three lines");
  }
  std::istringstream hs(header);
  double a, lo, hi;
  if (!(hs >> a >> lo >> hi)) {
    throw std::invalid_argument("read_instance: bad header line");
  }
  auto parse_line = [](const std::string& line) {
    std::istringstream ls(line);
    std::vector<double> v;
    double t;
    while (ls >> t) v.push_back(t);
    return v;
  };
  return validate_instance(parse_line(xs_line), parse_line(ys_line), Alpha(a),
                           Interval(lo, hi));
}

/// n * (F_n - F~_n): signed counting discrepancy of the two families as a
/// step function on the merged grid, augmented with the interval endpoints.
inline GridFunction counting_discrepancy(const Instance& inst) {
  struct Ev {
    double t;
    int s;
  };
  std::vector<Ev> evs;
  evs.reserve(2 * inst.n());
  for (double t : inst.xs) evs.push_back({t, +1});
  for (double t : inst.ys) evs.push_back({t, -1});
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) { return a.t < b.t; });

  std::vector<double> grid, vals;
  grid.push_back(inst.interval.lo);
  vals.push_back(0.0);
  double h = 0.0;
  std::size_t i = 0;
  while (i < evs.size()) {
    double t = evs[i].t;
    while (i < evs.size() && evs[i].t == t) h += evs[i++].s;
    if (t == grid.back()) {
      vals.back() = h;
    } else {
      grid.push_back(t);
      vals.push_back(h);
    }
  }
  if (inst.interval.hi > grid.back()) {
    grid.push_back(inst.interval.hi);
    vals.push_back(h);
  }
  return GridFunction(std::move(grid), std::move(vals));
}

}  // namespace kyot
