#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kyot/core.hpp"

namespace kyot {

/// Variation exponent p >= 1, with p = infinity meaning the oscillation.
struct VariationExponent {
  double p;

  explicit VariationExponent(double p_) : p(p_) {
    if (!(p >= 1.0)) {
      throw std::invalid_argument("VariationExponent: p must be >= 1 or infinity");
    }
  }
  static VariationExponent inf() {
    return VariationExponent(std::numeric_limits<double>::infinity());
  }
  bool is_inf() const { return std::isinf(p); }
};

/// sup_{i<j} |f_j - f_i| / (t_j - t_i)^alpha, exact for the grid restriction.
inline double holder_seminorm(const GridFunction& f, Alpha alpha) {
  const double a = alpha.value();
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      double num = std::abs(f.values[j] - f.values[i]);
      if (num == 0.0) continue;
      double ratio = num / std::pow(f.grid[j] - f.grid[i], a);
      if (ratio > best) best = ratio;
    }
  }
  return best;
}

inline double oscillation(const GridFunction& f) {
  double mn = f.values[0], mx = f.values[0];
  for (double v : f.values) {
    if (v < mn) mn = v;
    if (v > mx) mx = v;
  }
  return mx - mn;
}

/// Exact p-variation of the grid restriction: supremum of (sum |df|^p)^(1/p)
/// over increasing subsequences, by the O(N^2) chain DP.
inline double p_variation(const GridFunction& f, VariationExponent p) {
  if (p.is_inf()) return oscillation(f);
  const std::size_t n = f.size();
  if (n > 20000) {
    throw std::invalid_argument(
        "p_variation: exact DP limited to 20000 grid points; use p_variation_bounds");
  }
  std::vector<double> best(n, 0.0);
  double ans = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    double b = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      double cand = best[i] + std::pow(std::abs(f.values[j] - f.values[i]), p.p);
      if (cand > b) b = cand;
    }
    best[j] = b;
    if (b > ans) ans = b;
  }
  return std::pow(ans, 1.0 / p.p);
}

/// Lower/upper bracket for very long grids: greedy alternating-extremes lower
/// bound and a dyadic-block upper bound. Cheap, not tight.
struct VariationBounds {
  double lower;
  double upper;
};

inline VariationBounds p_variation_bounds(const GridFunction& f, VariationExponent p) {
  if (p.is_inf()) {
    double o = oscillation(f);
    return {o, o};
  }
  // Lower bound: p-variation of the local-extremes subsequence (exact for
  // p = 1, a valid subsequence bound in general).
  std::vector<double> ext;
  ext.push_back(f.values.front());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    double a = f.values[i - 1], b = f.values[i], c = f.values[i + 1];
    if ((b - a) * (c - b) < 0.0) ext.push_back(b);
  }
  ext.push_back(f.values.back());
  double lower = 0.0;
  {
    std::vector<double> best(ext.size(), 0.0);
    for (std::size_t j = 1; j < ext.size(); ++j) {
      double b = 0.0;
      for (std::size_t i = 0; i < j; ++i) {
        double cand = best[i] + std::pow(std::abs(ext[j] - ext[i]), p.p);
        if (cand > b) b = cand;
      }
      best[j] = b;
      if (b > lower) lower = b;
    }
    lower = std::pow(lower, 1.0 / p.p);
  }
  // Upper bound: sum over dyadic scales of block oscillations; for each block
  // the oscillation bounds any single increment inside it.
  double upper_p = 0.0;
  for (std::size_t block = 1; block < 2 * f.size(); block *= 2) {
    double level = 0.0;
    for (std::size_t start = 0; start < f.size(); start += block) {
      std::size_t end = std::min(start + block + 1, f.size());
      double mn = f.values[start], mx = f.values[start];
      for (std::size_t i = start; i < end; ++i) {
        mn = std::min(mn, f.values[i]);
        mx = std::max(mx, f.values[i]);
      }
      level += std::pow(mx - mn, p.p);
    }
    upper_p = std::max(upper_p, level);
    if (block >= f.size()) break;
  }
  // The dyadic max over scales is a heuristic envelope; never report an upper
  // bound below the certified lower bound.
  double upper = std::max(lower, std::pow(upper_p, 1.0 / p.p));
  return {lower, upper};
}

/// Left-point Riemann-Stieltjes sum on a common grid.
inline double young_integral(const GridFunction& f, const GridFunction& g) {
  if (f.grid != g.grid) {
    throw std::invalid_argument("young_integral: arguments must share one grid");
  }
  double s = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    s += f.values[i - 1] * (g.values[i] - g.values[i - 1]);
  }
  return s;
}

/// Refine both arguments onto the merged grid by linear interpolation.
inline std::pair<GridFunction, GridFunction> refine_to_common_grid(
    const GridFunction& f, const GridFunction& g) {
  std::vector<double> grid = merge_grids(f.grid, g.grid);
  return {resample(f, grid), resample(g, grid)};
}

}  // namespace kyot
