#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kyot/core.hpp"
#include "kyot/matching.hpp"
#include "kyot/seminorms.hpp"
#include "kyot/tsp.hpp"

namespace kyot {

struct BoundaryPlacement {
  std::size_t x_at_lo = 0;
  std::size_t x_at_hi = 0;
  std::size_t y_at_lo = 0;
  std::size_t y_at_hi = 0;
};

struct BoundaryMatchResult {
  double cost;
  std::size_t m_used;
  BoundaryPlacement placement;
  Instance augmented;
  MatchingResult inner;
};

struct BoundaryTspResult {
  double cost;
  std::size_t m_used;
  BoundaryPlacement placement;
  Instance augmented;
  CycleResult inner;
};

struct BoundaryOptions {
  std::size_t extra_m = 0;        // probe beyond the certified cap
  bool mixed_placements = true;   // enumerate every (a, c) split, not only pure ones
  bool fast_solver = false;       // route augmented assignments through match_fast
};

namespace detail {

inline void require_boundary_instance(const Instance& inst) {
  if (inst.interval.lo != 0.0 || inst.interval.hi != 1.0) {
    throw std::invalid_argument("boundary: instance must live on [0,1]");
  }
  if (!inst.strict) {
    throw std::invalid_argument("boundary: points must be pairwise distinct");
  }
  for (double t : inst.xs) {
    if (t <= 0.0 || t >= 1.0)
      throw std::invalid_argument("boundary: x coordinates must lie in (0,1)");
  }
  for (double t : inst.ys) {
    if (t <= 0.0 || t >= 1.0)
      throw std::invalid_argument("boundary: y coordinates must lie in (0,1)");
  }
}

inline Instance augment_with_boundary(const Instance& inst, const BoundaryPlacement& p) {
  std::vector<double> xs = inst.xs, ys = inst.ys;
  xs.insert(xs.end(), p.x_at_lo, 0.0);
  xs.insert(xs.end(), p.x_at_hi, 1.0);
  ys.insert(ys.end(), p.y_at_lo, 0.0);
  ys.insert(ys.end(), p.y_at_hi, 1.0);
  return validate_instance(std::move(xs), std::move(ys), inst.alpha, inst.interval);
}

}  // namespace detail

/// [F - F~]_{C^0}: the oscillation of the counting discrepancy, an integer.
/// This caps how many boundary pairs an optimal augmentation can need.
inline int discrepancy_sup(const Instance& inst) {
  detail::require_boundary_instance(inst);
  auto g = counting_discrepancy(inst);
  return static_cast<int>(std::lround(oscillation(g)));
}

/// Assignment boundary functional: minimum augmented matching cost over
/// m = 0..cap boundary pairs placed at {0,1}. With mixed_placements every
/// (a, c) placement is enumerated; otherwise only the two pure splits, which
/// dominate all placements after cancelling coincident boundary pairs.
inline BoundaryMatchResult match_boundary(const Instance& inst,
                                          const BoundaryOptions& opt = {}) {
  detail::require_boundary_instance(inst);
  const std::size_t cap =
      static_cast<std::size_t>(discrepancy_sup(inst)) + opt.extra_m;
  std::optional<BoundaryMatchResult> best;
  for (std::size_t m = 0; m <= cap; ++m) {
    std::vector<BoundaryPlacement> placements;
    if (opt.mixed_placements) {
      for (std::size_t a = 0; a <= m; ++a) {
        for (std::size_t c = 0; c <= m; ++c) {
          placements.push_back({a, m - a, c, m - c});
        }
      }
    } else if (m == 0) {
      placements.push_back({0, 0, 0, 0});
    } else {
      placements.push_back({m, 0, 0, m});
      placements.push_back({0, m, m, 0});
    }
    for (const auto& p : placements) {
      Instance aug = detail::augment_with_boundary(inst, p);
      MatchingResult inner = opt.fast_solver ? match_fast(aug) : match_generic(aug);
      if (!best || inner.cost < best->cost) {
        best = BoundaryMatchResult{inner.cost, m, p, std::move(aug), std::move(inner)};
      }
    }
  }
  return std::move(*best);
}

/// TSP boundary functional; the certified cap is discrepancy + 1. Pure
/// endpoint splits are enumerated: any mixed placement contains a coincident
/// boundary pair whose removal never increases the cycle cost, so it is
/// dominated by a smaller pure split.
inline BoundaryTspResult tsp_boundary(const Instance& inst,
                                      const BoundaryOptions& opt = {}) {
  detail::require_boundary_instance(inst);
  const std::size_t cap =
      static_cast<std::size_t>(discrepancy_sup(inst)) + 1 + opt.extra_m;
  const std::size_t n = inst.n();
  std::optional<BoundaryTspResult> best;
  for (std::size_t m = 0; m <= cap; ++m) {
    std::vector<BoundaryPlacement> placements;
    if (m == 0) {
      placements.push_back({0, 0, 0, 0});
    } else {
      placements.push_back({m, 0, 0, m});
      placements.push_back({0, m, m, 0});
    }
    for (const auto& p : placements) {
      Instance aug = detail::augment_with_boundary(inst, p);
      std::vector<detail::PointClass> xc, yc;
      std::vector<std::vector<std::size_t>> xm, ym;
      for (std::size_t i = 0; i < n; ++i) {
        xc.push_back({inst.xs[i], 1});
        xm.push_back({i});
        yc.push_back({inst.ys[i], 1});
        ym.push_back({i});
      }
      auto add_class = [&](std::vector<detail::PointClass>& cls,
                           std::vector<std::vector<std::size_t>>& members, double pos,
                           std::size_t count, std::size_t base) {
        if (count == 0) return;
        cls.push_back({pos, static_cast<int>(count)});
        std::vector<std::size_t> ids(count);
        for (std::size_t k = 0; k < count; ++k) ids[k] = base + k;
        members.push_back(std::move(ids));
      };
      add_class(xc, xm, 0.0, p.x_at_lo, n);
      add_class(xc, xm, 1.0, p.x_at_hi, n + p.x_at_lo);
      add_class(yc, ym, 0.0, p.y_at_lo, n);
      add_class(yc, ym, 1.0, p.y_at_hi, n + p.y_at_lo);

      detail::AlternatingCycleSolver solver(std::move(xc), std::move(yc),
                                            inst.alpha.value());
      std::vector<std::pair<std::size_t, std::size_t>> class_edges;
      double cost = solver.solve(&class_edges);
      if (!best || cost < best->cost) {
        auto edges = detail::assign_class_members(class_edges, xm, ym);
        CycleResult cyc = canonicalize_cycle(aug, std::move(edges));
        best = BoundaryTspResult{cyc.cost, m, p, std::move(aug), std::move(cyc)};
      }
    }
  }
  return std::move(*best);
}

struct RemovalCheck {
  bool match_ok = false;
  bool tsp_ok = false;
  double match_slack = 0.0;  // M(n+m) - (M(n) - m)
  double tsp_slack = 0.0;    // TSP(n+m) - (TSP(n) - 2m)
};

/// Removing m trailing pairs from a [0,1] instance can lower the matching
/// cost by at most m and the TSP cost by at most 2m.
inline RemovalCheck check_removal_bound(const Instance& augmented, std::size_t m,
                                        double tol = 1e-9) {
  const std::size_t total = augmented.n();
  if (m >= total) {
    throw std::invalid_argument("check_removal_bound: need m < n + m");
  }
  if (augmented.interval.lo != 0.0 || augmented.interval.hi != 1.0) {
    throw std::invalid_argument("check_removal_bound: instance must live on [0,1]");
  }
  const std::size_t n = total - m;
  std::vector<double> xs(augmented.xs.begin(), augmented.xs.begin() + n);
  std::vector<double> ys(augmented.ys.begin(), augmented.ys.begin() + n);
  Instance reduced =
      validate_instance(std::move(xs), std::move(ys), augmented.alpha, augmented.interval);

  RemovalCheck out;
  double m_full = match_fast(augmented).cost;
  double m_red = match_fast(reduced).cost;
  out.match_slack = m_full - (m_red - static_cast<double>(m));
  out.match_ok = out.match_slack >= -tol;

  double t_full = tsp_exact(augmented).cost;
  double t_red = tsp_exact(reduced).cost;
  out.tsp_slack = t_full - (t_red - 2.0 * static_cast<double>(m));
  out.tsp_ok = out.tsp_slack >= -tol;
  return out;
}

}  // namespace kyot
