#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "kyot/core.hpp"
#include "kyot/matching.hpp"
#include "kyot/seminorms.hpp"

namespace kyot {

/// Atomic signed increments of a bridge: the positive part plays the source
/// measure, the negative part the target measure of the transport problem.
struct SignedAtomicMeasure {
  struct Atom {
    double location;
    double mass;
  };
  std::vector<Atom> atoms;

  SignedAtomicMeasure() = default;
  explicit SignedAtomicMeasure(std::vector<Atom> a) : atoms(std::move(a)) {
    double total = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i > 0 && !(atoms[i - 1].location < atoms[i].location)) {
        throw std::invalid_argument("SignedAtomicMeasure: locations must increase");
      }
      total += atoms[i].mass;
      scale = std::max(scale, std::abs(atoms[i].mass));
    }
    if (std::abs(total) > 1e-12 * scale * std::max<std::size_t>(atoms.size(), 1)) {
      throw std::invalid_argument("SignedAtomicMeasure: total mass must vanish");
    }
  }

  double total_positive() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::max(a.mass, 0.0);
    return s;
  }
};

/// Finitely supported coupling: mass flows from where the bridge rises to
/// where it falls.
struct TransportPlan {
  struct Move {
    double source;
    double target;
    double mass;
  };
  std::vector<Move> moves;

  double energy(Alpha alpha) const {
    double s = 0.0;
    for (const auto& m : moves) s += m.mass * power_cost(m.source, m.target, alpha.value());
    return s;
  }
};

struct KYResult {
  double norm = 0.0;
  TransportPlan plan;
  int quantization = 0;     // 0 means exact unit-atom mode
  double mass_quantum = 0;  // mass carried per expanded unit (1.0 in exact mode)
};

/// Jump measure of a bridge grid function: atom at t_i of mass g_i - g_{i-1}.
inline SignedAtomicMeasure increments(const GridFunction& g) {
  double scale = std::max(1.0, oscillation(g));
  if (std::abs(g.values.front() - g.values.back()) > 1e-12 * scale) {
    throw std::invalid_argument("increments: g must satisfy the bridge condition");
  }
  std::vector<SignedAtomicMeasure::Atom> atoms;
  for (std::size_t i = 1; i < g.size(); ++i) {
    double d = g.values[i] - g.values[i - 1];
    if (d != 0.0) atoms.push_back({g.grid[i], d});
  }
  // force exact balance so downstream atom arithmetic cancels cleanly
  double total = 0.0;
  for (auto& a : atoms) total += a.mass;
  if (!atoms.empty() && total != 0.0) atoms.back().mass -= total;
  if (!atoms.empty() && atoms.back().mass == 0.0) atoms.pop_back();
  return SignedAtomicMeasure(std::move(atoms));
}

namespace detail {

inline bool all_integer_masses(const SignedAtomicMeasure& mu) {
  for (const auto& a : mu.atoms) {
    double r = std::round(a.mass);
    if (std::abs(a.mass - r) > 1e-9 || r == 0.0) return false;
  }
  return true;
}

/// Largest-remainder rounding of |masses|/quantum to integers summing to
/// exactly q_units.
inline std::vector<long> quantize_side(const std::vector<double>& masses, double quantum,
                                       long q_units) {
  std::vector<long> units(masses.size());
  std::vector<std::pair<double, std::size_t>> rem(masses.size());
  long used = 0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    double r = masses[i] / quantum;
    units[i] = static_cast<long>(std::floor(r + 1e-12));
    used += units[i];
    rem[i] = {r - static_cast<double>(units[i]), i};
  }
  long leftover = q_units - used;
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long k = 0; k < leftover && k < static_cast<long>(rem.size()); ++k) {
    units[rem[static_cast<std::size_t>(k)].second] += 1;
  }
  if (std::accumulate(units.begin(), units.end(), 0L) != q_units) {
    throw std::invalid_argument("quantize_side: rounding failed to balance");
  }
  return units;
}

}  // namespace detail

/// Transport norm of a balanced atomic measure: expand to unit atoms (exactly
/// for integer masses, by monotone rounding into Q units otherwise) and solve
/// the resulting concave-cost assignment exactly.
inline KYResult walpha(const SignedAtomicMeasure& mu, Alpha alpha, int quantization) {
  if (mu.atoms.empty()) return KYResult{0.0, {}, 0, 1.0};

  std::vector<double> pos_loc, pos_mass, neg_loc, neg_mass;
  for (const auto& a : mu.atoms) {
    if (a.mass > 0) {
      pos_loc.push_back(a.location);
      pos_mass.push_back(a.mass);
    } else if (a.mass < 0) {
      neg_loc.push_back(a.location);
      neg_mass.push_back(-a.mass);
    }
  }
  if (pos_loc.empty()) return KYResult{0.0, {}, 0, 1.0};

  double quantum = 1.0;
  int q_used = 0;
  std::vector<long> pos_units, neg_units;
  if (detail::all_integer_masses(mu)) {
    for (double m : pos_mass) pos_units.push_back(static_cast<long>(std::llround(m)));
    for (double m : neg_mass) neg_units.push_back(static_cast<long>(std::llround(m)));
  } else {
    if (quantization <= 0) {
      throw std::invalid_argument("walpha: non-integer masses need quantization > 0");
    }
    q_used = quantization;
    quantum = mu.total_positive() / static_cast<double>(quantization);
    pos_units = detail::quantize_side(pos_mass, quantum, quantization);
    neg_units = detail::quantize_side(neg_mass, quantum, quantization);
  }

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < pos_loc.size(); ++i) {
    xs.insert(xs.end(), static_cast<std::size_t>(pos_units[i]), pos_loc[i]);
  }
  for (std::size_t i = 0; i < neg_loc.size(); ++i) {
    ys.insert(ys.end(), static_cast<std::size_t>(neg_units[i]), neg_loc[i]);
  }
  if (xs.empty()) return KYResult{0.0, {}, q_used, quantum};
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("walpha: expansion produced unbalanced sides");
  }

  double lo = std::min(xs.empty() ? 0.0 : *std::min_element(xs.begin(), xs.end()),
                       ys.empty() ? 0.0 : *std::min_element(ys.begin(), ys.end()));
  double hi = std::max(*std::max_element(xs.begin(), xs.end()),
                       *std::max_element(ys.begin(), ys.end()));
  if (!(lo < hi)) {
    // every atom sits at one location; nothing to move
    return KYResult{0.0, {}, q_used, quantum};
  }
  auto inst = validate_instance(xs, ys, alpha, Interval(lo, hi));
  auto res = match_fast(inst);

  std::map<std::pair<double, double>, double> agg;
  for (std::size_t i = 0; i < res.sigma.size(); ++i) {
    double s = inst.xs[i], t = inst.ys[res.sigma[i]];
    if (s == t) continue;
    agg[{s, t}] += quantum;
  }
  TransportPlan plan;
  for (const auto& [st, m] : agg) plan.moves.push_back({st.first, st.second, m});
  return KYResult{quantum * res.cost, std::move(plan), q_used, quantum};
}

/// Transport norm of a bridge grid function.
inline KYResult ky_norm(const GridFunction& g, Alpha alpha, int quantization) {
  return walpha(increments(g), alpha, quantization);
}

/// Exact pairing sum_atoms f(u) dg(u): the refinement limit of the left-point
/// sums for a continuous integrand against a step integrator. Requires the
/// test function to be feasible for the dual problem.
inline double dual_value(const GridFunction& g, const GridFunction& f, Alpha alpha) {
  if (f.grid != g.grid) {
    throw std::invalid_argument("dual_value: f and g must share one grid");
  }
  if (holder_seminorm(f, alpha) > 1.0 + 1e-9) {
    throw std::invalid_argument("dual_value: test function exceeds the Holder ball");
  }
  double s = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) {
    s += f.values[i] * (g.values[i] - g.values[i - 1]);
  }
  return s;
}

/// Builds a dual certificate from an (optimal) plan: tight potentials with
/// f(source) - f(target) = |source - target|^alpha on every move and Holder
/// seminorm at most 1, by shortest-path relaxation over the difference
/// constraints. Throws when the system is infeasible, which signals a
/// non-optimal plan.
inline GridFunction potential_from_plan(const TransportPlan& plan, Alpha alpha,
                                        const std::vector<double>& grid) {
  std::vector<double> nodes = grid;
  for (const auto& m : plan.moves) {
    nodes.push_back(m.source);
    nodes.push_back(m.target);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const std::size_t V = nodes.size();
  if (V < 2) throw std::invalid_argument("potential_from_plan: need at least 2 nodes");
  auto index_of = [&](double t) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
    return static_cast<std::size_t>(it - nodes.begin());
  };

  struct Arc {
    std::size_t from, to;
    double w;
  };
  std::vector<Arc> arcs;
  const double a = alpha.value();
  for (std::size_t i = 0; i < V; ++i) {
    for (std::size_t j = i + 1; j < V; ++j) {
      double w = std::pow(nodes[j] - nodes[i], a);
      arcs.push_back({i, j, w});
      arcs.push_back({j, i, w});
    }
  }
  for (const auto& m : plan.moves) {
    std::size_t s = index_of(m.source), t = index_of(m.target);
    double c = std::pow(std::abs(m.source - m.target), a);
    arcs.push_back({t, s, c});    // f(s) <= f(t) + c
    arcs.push_back({s, t, -c});   // f(t) <= f(s) - c
  }

  std::vector<double> f(V, std::numeric_limits<double>::infinity());
  f[0] = 0.0;
  for (std::size_t round = 0; round < V; ++round) {
    bool changed = false;
    for (const auto& arc : arcs) {
      if (f[arc.from] + arc.w < f[arc.to] - 1e-15) {
        f[arc.to] = f[arc.from] + arc.w;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (const auto& arc : arcs) {
    if (f[arc.from] + arc.w < f[arc.to] - 1e-9) {
      throw std::invalid_argument(
          "potential_from_plan: infeasible constraints (plan not optimal?)");
    }
  }
  return GridFunction(std::move(nodes), std::move(f));
}

/// Identity pairing beats every permutation of targets over subsets of up to
/// k moves: the concave-cost analogue of cyclical monotonicity.
inline bool check_alpha_monotone(const TransportPlan& plan, Alpha alpha, int k,
                                 double tol = 1e-12) {
  if (k < 2 || k > 4) throw std::invalid_argument("check_alpha_monotone: k in {2,3,4}");
  const double a = alpha.value();
  const std::size_t m = plan.moves.size();
  std::vector<std::size_t> idx;
  // enumerate subsets of size 2..k by simple nested recursion
  std::vector<std::size_t> subset;
  bool ok = true;
  auto test_subset = [&]() {
    std::vector<std::size_t> perm(subset.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double identity = 0.0;
    for (std::size_t i : subset) {
      identity += std::pow(std::abs(plan.moves[i].target - plan.moves[i].source), a);
    }
    do {
      double alt = 0.0;
      for (std::size_t r = 0; r < subset.size(); ++r) {
        alt += std::pow(
            std::abs(plan.moves[subset[perm[r]]].target - plan.moves[subset[r]].source), a);
      }
      if (identity > alt + tol) {
        ok = false;
        return;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
    if (!ok) return;
    if (subset.size() >= 2) test_subset();
    if (remaining == 0 || !ok) return;
    for (std::size_t i = start; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1, remaining - 1);
      subset.pop_back();
    }
  };
  rec(0, k);
  return ok;
}

/// Left side of the divergence identity for a finitely supported coupling.
inline double divergence_sum(const TransportPlan& plan, const GridFunction& f) {
  double s = 0.0;
  for (const auto& m : plan.moves) s += m.mass * (f.eval(m.source) - f.eval(m.target));
  return s;
}

/// Residual of the divergence identity sum m (f(source) - f(target)) =
/// int f dg over the supplied test functions, with the integral taken in the
/// atomic pairing sense (exact for plans transporting the jump measure; a
/// full-depth dyadic plan instead telescopes to the left-point sum, compare
/// divergence_sum against young_integral for those).
inline double check_divergence(const TransportPlan& plan, const GridFunction& g,
                               Alpha alpha, const std::vector<GridFunction>& test_fns) {
  (void)alpha;
  auto mu = increments(g);
  double worst = 0.0;
  for (const auto& f : test_fns) {
    double lhs = divergence_sum(plan, f);
    double rhs = 0.0;
    for (const auto& a : mu.atoms) rhs += f.eval(a.location) * a.mass;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

/// Truncated multiscale coupling of a bridge on [0,1]: at every dyadic level
/// the increment over the right half-interval is carried between the left
/// half's endpoints, oriented so the divergence identity telescopes to the
/// left-point sums.
inline TransportPlan dyadic_coupling(const GridFunction& g, int levels) {
  if (g.grid.front() != 0.0 || g.grid.back() != 1.0) {
    throw std::invalid_argument("dyadic_coupling: g must live on [0,1]");
  }
  if (std::abs(g.values.front()) > 1e-12 || std::abs(g.values.back()) > 1e-12) {
    throw std::invalid_argument("dyadic_coupling: need g(0) = g(1) = 0");
  }
  auto value_at = [&](double t) {
    auto it = std::lower_bound(g.grid.begin(), g.grid.end(), t);
    if (it == g.grid.end() || *it != t) {
      throw std::invalid_argument("dyadic_coupling: grid misses a dyadic point");
    }
    return g.values[static_cast<std::size_t>(it - g.grid.begin())];
  };
  TransportPlan plan;
  for (int n = 1; n <= levels; ++n) {
    double h = std::ldexp(1.0, -n);  // 2^-n
    long half = 1L << (n - 1);
    for (long k = 0; k < half; ++k) {
      double b0 = static_cast<double>(2 * k) * h;
      double b1 = static_cast<double>(2 * k + 1) * h;
      double b2 = static_cast<double>(2 * k + 2) * h;
      double d = value_at(b2) - value_at(b1);
      if (d > 0.0) {
        plan.moves.push_back({b1, b0, d});
      } else if (d < 0.0) {
        plan.moves.push_back({b0, b1, -d});
      }
    }
  }
  return plan;
}

/// Marginal consistency of a plan against the measure it claims to transport.
inline bool validate_plan(const TransportPlan& plan, const SignedAtomicMeasure& mu,
                          double tol) {
  std::map<double, double> out_flow, in_flow;
  for (const auto& m : plan.moves) {
    if (!(m.mass > 0.0)) return false;
    out_flow[m.source] += m.mass;
    in_flow[m.target] += m.mass;
  }
  for (const auto& a : mu.atoms) {
    if (a.mass > 0) {
      if (std::abs(out_flow[a.location] - a.mass) > tol) return false;
      out_flow.erase(a.location);
    } else {
      if (std::abs(in_flow[a.location] + a.mass) > tol) return false;
      in_flow.erase(a.location);
    }
  }
  return out_flow.empty() && in_flow.empty();
}

}  // namespace kyot
