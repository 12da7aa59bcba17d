#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "kyot/core.hpp"

namespace kyot {

/// Assignment x_i -> y_{sigma[i]} (original input indices) plus its cost.
struct MatchingResult {
  std::vector<std::size_t> sigma;
  double cost = 0.0;
};

inline double matching_cost(const Instance& inst, const std::vector<std::size_t>& sigma) {
  double s = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) s += inst.cost(i, sigma[i]);
  return s;
}

inline bool is_permutation_of_n(const std::vector<std::size_t>& sigma, std::size_t n) {
  if (sigma.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t v : sigma) {
    if (v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

namespace detail {

struct MergedPoint {
  double pos;
  bool is_x;
  std::size_t orig;
};

inline std::vector<MergedPoint> merged_points(const Instance& inst) {
  std::vector<MergedPoint> pts;
  pts.reserve(2 * inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) pts.push_back({inst.xs[i], true, i});
  for (std::size_t j = 0; j < inst.n(); ++j) pts.push_back({inst.ys[j], false, j});
  std::stable_sort(pts.begin(), pts.end(), [](const MergedPoint& a, const MergedPoint& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.is_x && !b.is_x;
  });
  return pts;
}

/// Exact min-cost matching over the non-crossing (nested) family by interval
/// DP on balanced blocks of the merged order. Memoized sparsely: only
/// balanced blocks are ever visited. Ties prefer the smallest partner index.
class NoncrossingSolver {
 public:
  NoncrossingSolver(const std::vector<MergedPoint>& pts, double alpha)
      : pts_(pts), alpha_(alpha), n2_(pts.size()) {
    height_.resize(n2_ + 1, 0);
    int hmin = 0, hmax = 0;
    for (std::size_t k = 0; k < n2_; ++k) {
      height_[k + 1] = height_[k] + (pts_[k].is_x ? 1 : -1);
      hmin = std::min(hmin, height_[k + 1]);
      hmax = std::max(hmax, height_[k + 1]);
    }
    if (height_[n2_] != 0) {
      throw std::invalid_argument("NoncrossingSolver: unbalanced point sequence");
    }
    offset_ = -hmin;
    by_level_.resize(static_cast<std::size_t>(hmax - hmin) + 1);
    for (std::size_t k = 0; k < n2_; ++k) {
      by_level_[static_cast<std::size_t>(height_[k + 1] + offset_)].push_back(k);
    }
    memo_.max_load_factor(0.7f);
    memo_.reserve(4 * n2_);
  }

  double solve() { return value(0, n2_); }

  /// Pairs (x orig index, y orig index) realizing the optimum of [i, j).
  void extract_pairs(std::vector<std::pair<std::size_t, std::size_t>>& out) {
    backtrack(0, n2_, out);
  }

 private:
  using Key = std::uint64_t;
  static Key key(std::size_t i, std::size_t j) {
    return (static_cast<Key>(i) << 32) | static_cast<Key>(j);
  }

  double cost(std::size_t a, std::size_t b) const {
    return std::pow(std::abs(pts_[a].pos - pts_[b].pos), alpha_);
  }

  // Candidate partners k for point i inside [i, j): opposite side and
  // h[k+1] == h[i], so that the pair plus its interior is balanced.
  template <typename Fn>
  void for_candidates(std::size_t i, std::size_t j, Fn&& fn) const {
    const auto& lvl = by_level_[static_cast<std::size_t>(height_[i] + offset_)];
    auto it = std::upper_bound(lvl.begin(), lvl.end(), i);
    for (; it != lvl.end() && *it < j; ++it) {
      if (pts_[*it].is_x != pts_[i].is_x) fn(*it);
    }
  }

  double value(std::size_t i, std::size_t j) {
    if (i >= j) return 0.0;
    auto found = memo_.find(key(i, j));
    if (found != memo_.end()) return found->second.first;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = j;
    for_candidates(i, j, [&](std::size_t k) {
      double c = cost(i, k) + value(i + 1, k) + value(k + 1, j);
      if (c < best) {
        best = c;
        best_k = k;
      }
    });
    memo_.emplace(key(i, j), std::make_pair(best, best_k));
    return best;
  }

  void backtrack(std::size_t i, std::size_t j,
                 std::vector<std::pair<std::size_t, std::size_t>>& out) {
    while (i < j) {
      std::size_t k = memo_.at(key(i, j)).second;
      const auto& a = pts_[i];
      const auto& b = pts_[k];
      out.emplace_back(a.is_x ? a.orig : b.orig, a.is_x ? b.orig : a.orig);
      backtrack(i + 1, k, out);
      i = k + 1;
    }
  }

  const std::vector<MergedPoint>& pts_;
  double alpha_;
  std::size_t n2_;
  std::vector<int> height_;
  int offset_ = 0;
  std::vector<std::vector<std::size_t>> by_level_;
  std::unordered_map<Key, std::pair<double, std::size_t>> memo_;
};

}  // namespace detail

/// Exhaustive minimum over all permutations; ties resolve to the
/// lexicographically smallest sigma. Reference oracle, n <= 9.
inline MatchingResult match_bruteforce(const Instance& inst) {
  const std::size_t n = inst.n();
  if (n > 9) throw std::invalid_argument("match_bruteforce: n must be <= 9");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  MatchingResult best{perm, matching_cost(inst, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    double c = matching_cost(inst, perm);
    if (c < best.cost) best = {perm, c};
  }
  return best;
}

/// Exact optimal assignment by shortest augmenting paths with potentials
/// (the textbook O(n^3) algorithm); no structural assumptions on the cost.
inline MatchingResult match_generic(const Instance& inst) {
  const std::size_t n = inst.n();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, n), way(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    p[n] = i;
    std::size_t j0 = n;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = n;
      double delta = inf;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        double cur = inst.cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  std::vector<std::size_t> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[p[j]] = j;
  return {sigma, matching_cost(inst, sigma)};
}

/// Interval DP over the merged point order: dp on contiguous balanced blocks,
/// pairing the first point of a block with each admissible partner. Exact for
/// alpha in (0,1) because optimal assignments are non-crossing; for alpha = 1
/// it still returns an optimal value (some optimum is non-crossing).
inline MatchingResult match_noncrossing_dp(const Instance& inst) {
  auto pts = detail::merged_points(inst);
  detail::NoncrossingSolver solver(pts, inst.alpha.value());
  solver.solve();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  solver.extract_pairs(pairs);
  std::vector<std::size_t> sigma(inst.n());
  for (auto& [xi, yj] : pairs) sigma[xi] = yj;
  return {sigma, matching_cost(inst, sigma)};
}

namespace detail {

/// One peeling pass of the fast solver. An adjacent opposite-label pair (a,b)
/// is committed when pairing it and bridging its nearest opposite outer
/// neighbours is no worse than splitting: then some optimal matching contains
/// (a,b), by a swap argument using that t -> t^alpha has decreasing
/// increments. Returns pairs peeled; survivors stay in the linked list.
class IndicatorPeeler {
 public:
  IndicatorPeeler(const std::vector<MergedPoint>& pts, double alpha)
      : pts_(pts), alpha_(alpha) {
    const std::size_t n2 = pts.size();
    prev_.resize(n2);
    next_.resize(n2);
    alive_.assign(n2, true);
    for (std::size_t k = 0; k < n2; ++k) {
      prev_[k] = (k == 0) ? npos : k - 1;
      next_[k] = (k + 1 == n2) ? npos : k + 1;
    }
    head_ = n2 ? 0 : npos;
  }

  void run(std::vector<std::pair<std::size_t, std::size_t>>& out) {
    bool progress = true;
    while (progress) {
      progress = false;
      std::vector<std::size_t> work;
      for (std::size_t k = head_; k != npos; k = next_[k]) work.push_back(k);
      for (std::size_t idx = work.size(); idx-- > 0;) stack_.push_back(work[idx]);
      while (!stack_.empty()) {
        std::size_t a = stack_.back();
        stack_.pop_back();
        if (a == npos || !alive_[a]) continue;
        std::size_t b = next_[a];
        if (b == npos || pts_[a].is_x == pts_[b].is_x) continue;
        if (!passes(a, b)) continue;
        commit(a, b, out);
        progress = true;
      }
    }
  }

  std::vector<std::size_t> survivors() const {
    std::vector<std::size_t> out;
    for (std::size_t k = head_; k != npos; k = next_[k]) out.push_back(k);
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  double cost(std::size_t u, std::size_t v) const {
    return std::pow(std::abs(pts_[u].pos - pts_[v].pos), alpha_);
  }

  std::size_t nearest_left_opposite(std::size_t a) const {
    for (std::size_t k = prev_[a]; k != npos; k = prev_[k]) {
      if (pts_[k].is_x != pts_[a].is_x) return k;
    }
    return npos;
  }
  std::size_t nearest_right_opposite(std::size_t b) const {
    for (std::size_t k = next_[b]; k != npos; k = next_[k]) {
      if (pts_[k].is_x != pts_[b].is_x) return k;
    }
    return npos;
  }

  bool passes(std::size_t a, std::size_t b) const {
    std::size_t ol = nearest_left_opposite(a);
    std::size_t orr = nearest_right_opposite(b);
    if (ol == npos && orr == npos) return true;
    double ind;
    if (ol == npos) {
      ind = cost(a, b) - cost(b, orr);
    } else if (orr == npos) {
      ind = cost(a, b) - cost(ol, a);
    } else {
      ind = cost(a, b) + cost(ol, orr) - cost(ol, a) - cost(b, orr);
    }
    return ind <= 0.0;
  }

  void commit(std::size_t a, std::size_t b,
              std::vector<std::pair<std::size_t, std::size_t>>& out) {
    const auto& pa = pts_[a];
    const auto& pb = pts_[b];
    out.emplace_back(pa.is_x ? pa.orig : pb.orig, pa.is_x ? pb.orig : pa.orig);
    std::size_t l = prev_[a], r = next_[b];
    alive_[a] = alive_[b] = false;
    if (l != npos) next_[l] = r; else head_ = r;
    if (r != npos) prev_[r] = l;
    // Fresh adjacency and relaxed neighbourhoods around the removal site.
    if (l != npos) {
      stack_.push_back(l);
      if (prev_[l] != npos) stack_.push_back(prev_[l]);
    }
    if (r != npos) stack_.push_back(r);
  }

  const std::vector<MergedPoint>& pts_;
  double alpha_;
  std::vector<std::size_t> prev_, next_;
  std::vector<bool> alive_;
  std::size_t head_ = npos;
  std::vector<std::size_t> stack_;
};

}  // namespace detail

/// Statistics from the fast solver, mainly for diagnostics and tests.
struct FastSolveInfo {
  std::size_t peeled_pairs = 0;
  std::size_t residual_points = 0;
};

/// Exact solver for experiment-scale instances: indicator peeling removes
/// provably-optimal adjacent pairs in near-linear time; whatever survives is
/// finished off by the balanced-block interval DP. Cost-exact for any
/// alpha in (0,1]; returned assignment is optimal but tie-breaking is
/// unspecified.
inline MatchingResult match_fast(const Instance& inst, FastSolveInfo* info = nullptr) {
  auto pts = detail::merged_points(inst);
  detail::IndicatorPeeler peeler(pts, inst.alpha.value());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  peeler.run(pairs);
  auto rest = peeler.survivors();
  if (info) {
    info->peeled_pairs = pairs.size();
    info->residual_points = rest.size();
  }
  if (!rest.empty()) {
    std::vector<detail::MergedPoint> sub;
    sub.reserve(rest.size());
    for (std::size_t k : rest) sub.push_back(pts[k]);
    detail::NoncrossingSolver solver(sub, inst.alpha.value());
    solver.solve();
    solver.extract_pairs(pairs);
  }
  std::vector<std::size_t> sigma(inst.n());
  for (auto& [xi, yj] : pairs) sigma[xi] = yj;
  return {sigma, matching_cost(inst, sigma)};
}

/// Necessary optimality condition: no profitable two-point swap.
inline bool check_monotonicity(const Instance& inst, const std::vector<std::size_t>& sigma,
                               double tol = 1e-12) {
  if (!is_permutation_of_n(sigma, inst.n())) {
    throw std::invalid_argument("check_monotonicity: sigma is not a permutation");
  }
  for (std::size_t i = 0; i < inst.n(); ++i) {
    for (std::size_t j = i + 1; j < inst.n(); ++j) {
      double kept = inst.cost(i, sigma[i]) + inst.cost(j, sigma[j]);
      double swapped = inst.cost(i, sigma[j]) + inst.cost(j, sigma[i]);
      if (kept > swapped + tol) return false;
    }
  }
  return true;
}

namespace detail {

/// Open intervals cross when they overlap partially: neither disjoint nor
/// one inside the other.
inline bool open_intervals_cross(double a0, double a1, double b0, double b1) {
  double al = std::min(a0, a1), ar = std::max(a0, a1);
  double bl = std::min(b0, b1), br = std::max(b0, b1);
  if (ar <= bl || br <= al) return false;               // disjoint
  if (al <= bl && br <= ar) return false;               // b inside a
  if (bl <= al && ar <= br) return false;               // a inside b
  return true;
}

}  // namespace detail

/// True iff no two matched open intervals partially overlap.
inline bool check_noncrossing(const Instance& inst, const std::vector<std::size_t>& sigma) {
  if (!is_permutation_of_n(sigma, inst.n())) {
    throw std::invalid_argument("check_noncrossing: sigma is not a permutation");
  }
  for (std::size_t i = 0; i < inst.n(); ++i) {
    for (std::size_t j = i + 1; j < inst.n(); ++j) {
      if (detail::open_intervals_cross(inst.xs[i], inst.ys[sigma[i]], inst.xs[j],
                                       inst.ys[sigma[j]])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace kyot
