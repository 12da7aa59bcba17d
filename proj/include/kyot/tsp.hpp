#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kyot/core.hpp"
#include "kyot/matching.hpp"

namespace kyot {

/// Closed alternating cycle through both families: 2n edges (x-index,
/// y-index), every vertex of degree exactly two, one connected component.
/// n = 1 is the degenerate double edge.
struct CycleResult {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  double cost = 0.0;
};

namespace detail {

/// True iff the 2n edges form one alternating cycle with all degrees 2.
inline bool forms_single_cycle(std::size_t n,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (edges.size() != 2 * n) return false;
  std::vector<std::array<int, 2>> xinc(n, {-1, -1}), yinc(n, {-1, -1});
  auto attach = [](std::array<int, 2>& slots, int e) {
    if (slots[0] < 0) slots[0] = e;
    else if (slots[1] < 0) slots[1] = e;
    else return false;
    return true;
  };
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [xi, yj] = edges[e];
    if (xi >= n || yj >= n) return false;
    if (!attach(xinc[xi], static_cast<int>(e))) return false;
    if (!attach(yinc[yj], static_cast<int>(e))) return false;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (xinc[v][1] < 0 || yinc[v][1] < 0) return false;
  }
  // edge walk: alternate sides, always leave through the other slot
  int start = xinc[0][0];
  int cur = start;
  bool from_x = true;
  std::size_t traversed = 0;
  do {
    auto [xi, yj] = edges[static_cast<std::size_t>(cur)];
    if (from_x) {
      cur = (yinc[yj][0] == cur) ? yinc[yj][1] : yinc[yj][0];
    } else {
      cur = (xinc[xi][0] == cur) ? xinc[xi][1] : xinc[xi][0];
    }
    from_x = !from_x;
    ++traversed;
  } while (!(cur == start && from_x) && traversed <= 2 * edges.size());
  return traversed == edges.size();
}

}  // namespace detail

/// Recomputes the cost and enforces the cycle invariants; throws otherwise.
inline double validate_cycle(const Instance& inst,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (!detail::forms_single_cycle(inst.n(), edges)) {
    throw std::invalid_argument("validate_cycle: not a single alternating cycle");
  }
  double cost = 0.0;
  for (auto [xi, yj] : edges) cost += inst.cost(xi, yj);
  return cost;
}

/// Rewrites a cycle in canonical traversal order: start at x-index 0,
/// first move toward its smaller adjacent y-index.
inline CycleResult canonicalize_cycle(const Instance& inst,
                                      std::vector<std::pair<std::size_t, std::size_t>> edges) {
  double cost = validate_cycle(inst, edges);
  const std::size_t n = inst.n();
  std::vector<std::array<int, 2>> xinc(n, {-1, -1}), yinc(n, {-1, -1});
  for (std::size_t e = 0; e < edges.size(); ++e) {
    auto [xi, yj] = edges[e];
    (xinc[xi][0] < 0 ? xinc[xi][0] : xinc[xi][1]) = static_cast<int>(e);
    (yinc[yj][0] < 0 ? yinc[yj][0] : yinc[yj][1]) = static_cast<int>(e);
  }
  auto ey = [&](int e) { return edges[static_cast<std::size_t>(e)].second; };
  int cur = xinc[0][0];
  if (ey(xinc[0][1]) < ey(xinc[0][0])) cur = xinc[0][1];
  std::vector<std::pair<std::size_t, std::size_t>> ordered;
  ordered.reserve(edges.size());
  bool from_x = true;
  while (ordered.size() < edges.size()) {
    auto [xi, yj] = edges[static_cast<std::size_t>(cur)];
    ordered.emplace_back(xi, yj);
    if (from_x) {
      cur = (yinc[yj][0] == cur) ? yinc[yj][1] : yinc[yj][0];
    } else {
      cur = (xinc[xi][0] == cur) ? xinc[xi][1] : xinc[xi][0];
    }
    from_x = !from_x;
  }
  return {std::move(ordered), cost};
}

/// Exhaustive minimum over cycle parametrizations (sigma, tau) with
/// sigma(1) fixed, quotienting rotations. Reference oracle, n <= 6.
inline CycleResult tsp_bruteforce(const Instance& inst) {
  const std::size_t n = inst.n();
  if (n > 6) throw std::invalid_argument("tsp_bruteforce: n must be <= 6");
  std::vector<std::size_t> sigma(n), tau(n);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  std::iota(tau.begin(), tau.end(), std::size_t{0});
  auto cycle_cost = [&](const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      c += inst.cost(s[i], t[i]) + inst.cost(s[(i + 1) % n], t[i]);
    }
    return c;
  };
  std::vector<std::size_t> best_s = sigma, best_t = tau;
  double best = cycle_cost(sigma, tau);
  do {
    do {
      double c = cycle_cost(sigma, tau);
      if (c < best) {
        best = c;
        best_s = sigma;
        best_t = tau;
      }
    } while (std::next_permutation(tau.begin(), tau.end()));
    std::iota(tau.begin(), tau.end(), std::size_t{0});
  } while (std::next_permutation(sigma.begin() + 1, sigma.end()));  // sigma(1) fixed

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.emplace_back(best_s[i], best_t[i]);
    edges.emplace_back(best_s[(i + 1) % n], best_t[i]);
  }
  return canonicalize_cycle(inst, std::move(edges));
}

namespace detail {

/// Exact alternating-cycle solver by bitmask DP over point classes. Points
/// inside one class share a coordinate and are interchangeable, which keeps
/// endpoint-augmented instances tractable: state space is the product of
/// per-class usage counters, not of raw points.
struct PointClass {
  double pos;
  int count;
};

class AlternatingCycleSolver {
 public:
  AlternatingCycleSolver(std::vector<PointClass> xc, std::vector<PointClass> yc,
                         double alpha)
      : xc_(std::move(xc)), yc_(std::move(yc)) {
    cx_ = xc_.size();
    cy_ = yc_.size();
    ux_total_ = strides(xc_, xstride_);
    uy_total_ = strides(yc_, ystride_);
    cost_.assign(cx_ * cy_, 0.0);
    for (std::size_t i = 0; i < cx_; ++i) {
      for (std::size_t j = 0; j < cy_; ++j) {
        cost_[i * cy_ + j] = std::pow(std::abs(xc_[i].pos - yc_[j].pos), alpha);
      }
    }
  }

  /// Minimum cycle cost; class sequence (x0, y, x, y, ...) via out-param.
  double solve(std::vector<std::pair<std::size_t, std::size_t>>* class_edges) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dpx(ux_total_ * uy_total_ * cx_, inf);
    std::vector<double> dpy(ux_total_ * uy_total_ * cy_, inf);
    std::vector<std::int8_t> parx(dpx.size(), -1), pary(dpy.size(), -1);
    auto ix = [&](std::size_t ux, std::size_t uy, std::size_t c) {
      return (ux * uy_total_ + uy) * cx_ + c;
    };
    auto iy = [&](std::size_t ux, std::size_t uy, std::size_t c) {
      return (ux * uy_total_ + uy) * cy_ + c;
    };

    dpx[ix(xstride_[0], 0, 0)] = 0.0;  // path starts at the first x class
    for (std::size_t ux = 0; ux < ux_total_; ++ux) {
      for (std::size_t uy = 0; uy < uy_total_; ++uy) {
        // arrive at an x class: predecessor ends at some y with one less x
        for (std::size_t a = 0; a < cx_; ++a) {
          if (ux == xstride_[0] && uy == 0 && a == 0) continue;  // start state
          int used = used_of(ux, xstride_, xc_, a);
          if (used == 0) continue;
          std::size_t pux = ux - xstride_[a];
          double best = inf;
          std::int8_t arg = -1;
          for (std::size_t b = 0; b < cy_; ++b) {
            double v = dpy[iy(pux, uy, b)];
            if (v == inf) continue;
            v += cost_[a * cy_ + b];
            if (v < best) {
              best = v;
              arg = static_cast<std::int8_t>(b);
            }
          }
          if (arg >= 0) {
            dpx[ix(ux, uy, a)] = best;
            parx[ix(ux, uy, a)] = arg;
          }
        }
        // arrive at a y class: predecessor ends at some x with one less y
        for (std::size_t b = 0; b < cy_; ++b) {
          int used = used_of(uy, ystride_, yc_, b);
          if (used == 0) continue;
          std::size_t puy = uy - ystride_[b];
          double best = inf;
          std::int8_t arg = -1;
          for (std::size_t a = 0; a < cx_; ++a) {
            double v = dpx[ix(ux, puy, a)];
            if (v == inf) continue;
            v += cost_[a * cy_ + b];
            if (v < best) {
              best = v;
              arg = static_cast<std::int8_t>(a);
            }
          }
          if (arg >= 0) {
            dpy[iy(ux, uy, b)] = best;
            pary[iy(ux, uy, b)] = arg;
          }
        }
      }
    }

    const std::size_t fx = ux_total_ - 1, fy = uy_total_ - 1;
    double best = inf;
    std::size_t best_b = cy_;
    for (std::size_t b = 0; b < cy_; ++b) {
      double v = dpy[iy(fx, fy, b)];
      if (v == inf) continue;
      v += cost_[0 * cy_ + b];  // close the cycle back to the start class
      if (v < best) {
        best = v;
        best_b = b;
      }
    }
    if (best_b == cy_) {
      throw std::invalid_argument("AlternatingCycleSolver: no feasible cycle");
    }

    if (class_edges) {
      std::vector<std::size_t> xseq, yseq;  // class ids in reverse path order
      std::size_t ux = fx, uy = fy, b = best_b;
      while (true) {
        yseq.push_back(b);
        std::size_t a = static_cast<std::size_t>(pary[iy(ux, uy, b)]);
        xseq.push_back(a);
        uy -= ystride_[b];
        if (ux == xstride_[0] && uy == 0 && a == 0) break;
        b = static_cast<std::size_t>(parx[ix(ux, uy, a)]);
        ux -= xstride_[a];
      }
      std::reverse(xseq.begin(), xseq.end());
      std::reverse(yseq.begin(), yseq.end());
      class_edges->clear();
      for (std::size_t i = 0; i < xseq.size(); ++i) {
        class_edges->emplace_back(xseq[i], yseq[i]);
        class_edges->emplace_back(xseq[(i + 1) % xseq.size()], yseq[i]);
      }
    }
    return best;
  }

 private:
  static std::size_t strides(const std::vector<PointClass>& cls,
                             std::vector<std::size_t>& out) {
    out.resize(cls.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < cls.size(); ++i) {
      out[i] = total;
      total *= static_cast<std::size_t>(cls[i].count + 1);
    }
    return total;
  }
  static int used_of(std::size_t u, const std::vector<std::size_t>& stride,
                     const std::vector<PointClass>& cls, std::size_t i) {
    return static_cast<int>((u / stride[i]) % static_cast<std::size_t>(cls[i].count + 1));
  }

  std::vector<PointClass> xc_, yc_;
  std::size_t cx_ = 0, cy_ = 0;
  std::vector<std::size_t> xstride_, ystride_;
  std::size_t ux_total_ = 1, uy_total_ = 1;
  std::vector<double> cost_;
};

/// Expand a class-id edge sequence into concrete vertex indices, assigning
/// members of each class in order of use. base[i] maps class members to
/// original indices.
inline std::vector<std::pair<std::size_t, std::size_t>> assign_class_members(
    const std::vector<std::pair<std::size_t, std::size_t>>& class_edges,
    const std::vector<std::vector<std::size_t>>& xmembers,
    const std::vector<std::vector<std::size_t>>& ymembers) {
  // traversal order: e0=(x_0,y_0), e1=(x_1,y_0), e2=(x_1,y_1), ... so the
  // x of edge 2i+1 is the x of edge 2i+2, and the y of 2i is the y of 2i+1.
  std::vector<std::size_t> xuse(xmembers.size(), 0), yuse(ymembers.size(), 0);
  const std::size_t m = class_edges.size();
  std::vector<std::pair<std::size_t, std::size_t>> out(m);
  std::vector<std::size_t> xvert(m / 2), yvert(m / 2);
  for (std::size_t i = 0; i < m / 2; ++i) {
    std::size_t xc = class_edges[2 * i].first;
    xvert[i] = xmembers[xc][xuse[xc]++];
    std::size_t yc = class_edges[2 * i].second;
    yvert[i] = ymembers[yc][yuse[yc]++];
  }
  for (std::size_t i = 0; i < m / 2; ++i) {
    out[2 * i] = {xvert[i], yvert[i]};
    out[2 * i + 1] = {xvert[(i + 1) % (m / 2)], yvert[i]};
  }
  return out;
}

}  // namespace detail

/// Exact bipartite TSP by bitmask DP; practical up to n ~ 9. Agrees with
/// tsp_bruteforce on the overlapping range.
inline CycleResult tsp_exact(const Instance& inst) {
  const std::size_t n = inst.n();
  if (n > 9) throw std::invalid_argument("tsp_exact: n must be <= 9");
  std::vector<detail::PointClass> xc, yc;
  std::vector<std::vector<std::size_t>> xm(n), ym(n);
  for (std::size_t i = 0; i < n; ++i) {
    xc.push_back({inst.xs[i], 1});
    yc.push_back({inst.ys[i], 1});
    xm[i] = {i};
    ym[i] = {i};
  }
  detail::AlternatingCycleSolver solver(std::move(xc), std::move(yc), inst.alpha.value());
  std::vector<std::pair<std::size_t, std::size_t>> class_edges;
  solver.solve(&class_edges);
  auto edges = detail::assign_class_members(class_edges, xm, ym);
  return canonicalize_cycle(inst, std::move(edges));
}

/// Feasible cycle from an optimal assignment: visit the x's in sorted order,
/// each followed by its matched y. On [0,1] its cost is at most
/// 2 M_alpha + 1 + n^(1-alpha).
inline CycleResult tsp_upper_from_matching(const Instance& inst) {
  const std::size_t n = inst.n();
  auto matching = match_fast(inst);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t xi = inst.x_order[r];
    std::size_t xnext = inst.x_order[(r + 1) % n];
    edges.emplace_back(xi, matching.sigma[xi]);
    edges.emplace_back(xnext, matching.sigma[xi]);
  }
  return canonicalize_cycle(inst, std::move(edges));
}

/// Maximum, over edges, of the number of other edges partially overlapping
/// it. Descriptive: optimal cycles for alpha < 1 should report <= 2.
inline int check_cycle_crossings(const Instance& inst, const CycleResult& cyc) {
  const auto& e = cyc.edges;
  int worst = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    int cnt = 0;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (i == j) continue;
      if (detail::open_intervals_cross(inst.xs[e[i].first], inst.ys[e[i].second],
                                       inst.xs[e[j].first], inst.ys[e[j].second])) {
        ++cnt;
      }
    }
    worst = std::max(worst, cnt);
  }
  return worst;
}

/// Two-edge exchange optimality condition on cycles: for edges (i,k), (j,l)
/// of G whose swap partners (i,l), (j,k) are absent and whose exchange still
/// yields a single cycle, the kept pair must be no more expensive than the
/// swap. Exchanges that would split the cycle carry no optimality
/// information and are skipped.
inline bool check_cycle_monotonicity(const Instance& inst, const CycleResult& cyc,
                                     double tol = 1e-12) {
  const auto& e = cyc.edges;
  auto in_cycle = [&](std::size_t xi, std::size_t yj) {
    for (auto& [a, b] : e) {
      if (a == xi && b == yj) return true;
    }
    return false;
  };
  for (std::size_t p = 0; p < e.size(); ++p) {
    for (std::size_t q = p + 1; q < e.size(); ++q) {
      auto [i, k] = e[p];
      auto [j, l] = e[q];
      if (in_cycle(i, l) || in_cycle(j, k)) continue;
      auto swapped_edges = e;
      swapped_edges[p] = {i, l};
      swapped_edges[q] = {j, k};
      if (!detail::forms_single_cycle(inst.n(), swapped_edges)) continue;
      double kept = inst.cost(i, k) + inst.cost(j, l);
      double swapped = inst.cost(i, l) + inst.cost(j, k);
      if (kept > swapped + tol) return false;
    }
  }
  return true;
}

struct SandwichCheck {
  bool lower_ok = false;
  bool upper_ok = false;
  double tsp = 0.0;
  double twice_matching = 0.0;
  double slack_budget = 0.0;  // 1 + n^(1-alpha)
};

/// Two-sided comparison 0 <= TSP - 2 M_alpha <= 1 + n^(1-alpha) on [0,1].
inline SandwichCheck check_tsp_sandwich(const Instance& inst, double tol = 1e-9) {
  if (inst.interval.lo != 0.0 || inst.interval.hi != 1.0) {
    throw std::invalid_argument("check_tsp_sandwich: instance must live on [0,1]");
  }
  SandwichCheck out;
  out.tsp = tsp_bruteforce(inst).cost;
  out.twice_matching = 2.0 * match_noncrossing_dp(inst).cost;
  out.slack_budget =
      1.0 + std::pow(static_cast<double>(inst.n()), 1.0 - inst.alpha.value());
  double gap = out.tsp - out.twice_matching;
  out.lower_ok = gap >= -tol;
  out.upper_ok = gap <= out.slack_budget + tol;
  return out;
}

}  // namespace kyot
