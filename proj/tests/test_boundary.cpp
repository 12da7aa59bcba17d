#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "kyot/boundary.hpp"
#include "kyot/core.hpp"
#include "kyot/matching.hpp"
#include "kyot/random.hpp"
#include "kyot/tsp.hpp"

using namespace kyot;

namespace {

Instance random_strict_instance(CounterRng& rng, std::size_t n, double alpha) {
  while (true) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(0.001 + 0.998 * rng.next_double());
    for (std::size_t i = 0; i < n; ++i) ys.push_back(0.001 + 0.998 * rng.next_double());
    auto inst = validate_instance(xs, ys, Alpha(alpha), unit_interval());
    if (inst.strict) return inst;
  }
}

// Independent oracle: enumerate every placement (a, c) for m <= cap and
// solve each augmented assignment by the Hungarian method.
double boundary_match_oracle(const Instance& inst, std::size_t cap) {
  double best = match_generic(inst).cost;
  for (std::size_t m = 1; m <= cap; ++m) {
    for (std::size_t a = 0; a <= m; ++a) {
      for (std::size_t c = 0; c <= m; ++c) {
        auto aug = detail::augment_with_boundary(inst, {a, m - a, c, m - c});
        best = std::min(best, match_generic(aug).cost);
      }
    }
  }
  return best;
}

// Same for the TSP, via the exact bitmask solver (n + m <= 9).
double boundary_tsp_oracle(const Instance& inst, std::size_t cap) {
  double best = tsp_exact(inst).cost;
  for (std::size_t m = 1; m <= cap; ++m) {
    for (std::size_t a = 0; a <= m; ++a) {
      for (std::size_t c = 0; c <= m; ++c) {
        auto aug = detail::augment_with_boundary(inst, {a, m - a, c, m - c});
        best = std::min(best, tsp_exact(aug).cost);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("discrepancy sup counts threshold imbalance", "[boundary]") {
  auto a = validate_instance({0.9}, {0.1}, Alpha(0.5), unit_interval());
  CHECK(discrepancy_sup(a) == 1);

  auto b = validate_instance({0.1, 0.3}, {0.2, 0.4}, Alpha(0.5), unit_interval());
  CHECK(discrepancy_sup(b) == 1);

  auto c = validate_instance({0.1, 0.2}, {0.8, 0.9}, Alpha(0.5), unit_interval());
  CHECK(discrepancy_sup(c) == 2);
}

TEST_CASE("boundary ops reject bad instances", "[boundary]") {
  auto dup = validate_instance({0.2, 0.2}, {0.3, 0.4}, Alpha(0.5), unit_interval());
  CHECK_THROWS_AS(discrepancy_sup(dup), std::invalid_argument);
  CHECK_THROWS_AS(match_boundary(dup), std::invalid_argument);

  auto edge = validate_instance({0.0}, {0.5}, Alpha(0.5), unit_interval());
  CHECK_THROWS_AS(match_boundary(edge), std::invalid_argument);

  auto off = validate_instance({0.2}, {0.7}, Alpha(0.5), Interval(-1.0, 2.0));
  CHECK_THROWS_AS(tsp_boundary(off), std::invalid_argument);
}

TEST_CASE("boundary matching beats the free problem when points hug the ends",
          "[boundary]") {
  auto inst = validate_instance({0.9}, {0.1}, Alpha(0.5), unit_interval());
  auto res = match_boundary(inst);
  // oracle over m in {0,1}: best routes both points to their nearest ends
  CHECK(res.cost == Catch::Approx(2.0 * std::sqrt(0.1)));
  CHECK(res.m_used == 1);
  CHECK(res.cost < match_generic(inst).cost);
  CHECK(res.placement.x_at_lo + res.placement.x_at_hi == res.m_used);
  CHECK(res.placement.y_at_lo + res.placement.y_at_hi == res.m_used);

  auto centered = validate_instance({0.49}, {0.51}, Alpha(0.5), unit_interval());
  auto rc = match_boundary(centered);
  CHECK(rc.m_used == 0);
  CHECK(rc.cost == Catch::Approx(std::sqrt(0.02)));
}

TEST_CASE("boundary cost never exceeds the free cost", "[boundary]") {
  CounterRng rng(RngSeed{606});
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (int rep = 0; rep < 15; ++rep) {
      std::size_t n = 1 + rng.next_u64() % 5;
      auto inst = random_strict_instance(rng, n, alpha);
      auto bm = match_boundary(inst);
      CHECK(bm.cost <= match_generic(inst).cost + 1e-12);
      auto bt = tsp_boundary(inst);
      CHECK(bt.cost <= tsp_exact(inst).cost + 1e-12);
      // removal lemma applied to the optimal augmented configuration
      CHECK(match_generic(inst).cost <= bm.cost + double(bm.m_used) + 1e-9);
      CHECK(tsp_exact(inst).cost <= bt.cost + 2.0 * double(bt.m_used) + 1e-9);
    }
  }
}

TEST_CASE("match_boundary equals the full mixed-placement oracle", "[boundary]") {
  CounterRng rng(RngSeed{70707});
  for (int rep = 0; rep < 25; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 4;
    double alpha = 0.3 + 0.6 * rng.next_double();
    auto inst = random_strict_instance(rng, n, alpha);
    std::size_t cap = static_cast<std::size_t>(discrepancy_sup(inst));
    auto res = match_boundary(inst);
    CHECK(res.cost == Catch::Approx(boundary_match_oracle(inst, cap)).margin(1e-10));
    // pure-split fast variant reaches the same optimum
    auto fast = match_boundary(inst, {0, false, true});
    CHECK(fast.cost == Catch::Approx(res.cost).margin(1e-10));
  }
}

TEST_CASE("tsp_boundary equals the mixed-placement oracle on tiny instances",
          "[boundary]") {
  CounterRng rng(RngSeed{80808});
  for (int rep = 0; rep < 15; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 3;
    double alpha = 0.3 + 0.6 * rng.next_double();
    auto inst = random_strict_instance(rng, n, alpha);
    std::size_t cap = static_cast<std::size_t>(discrepancy_sup(inst)) + 1;
    if (n + cap > 6) continue;  // keep the oracle exact and quick
    auto res = tsp_boundary(inst);
    CHECK(res.cost == Catch::Approx(boundary_tsp_oracle(inst, cap)).margin(1e-10));
  }
}

TEST_CASE("extending the search beyond the cap never helps", "[boundary]") {
  CounterRng rng(RngSeed{90909});
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 4;
    double alpha = 0.3 + 0.6 * rng.next_double();
    auto inst = random_strict_instance(rng, n, alpha);
    auto base = match_boundary(inst);
    auto probed = match_boundary(inst, {2, true, false});
    CHECK(probed.cost >= base.cost - 1e-9);

    auto tbase = tsp_boundary(inst);
    auto tprobed = tsp_boundary(inst, {2});
    CHECK(tprobed.cost >= tbase.cost - 1e-9);
  }
}

TEST_CASE("optimal boundary configurations stay non-crossing", "[boundary]") {
  CounterRng rng(RngSeed{123321});
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 5;
    auto inst = random_strict_instance(rng, n, 0.3 + 0.5 * rng.next_double());
    auto res = match_boundary(inst);
    CHECK(check_noncrossing(res.augmented, res.inner.sigma));
  }
}

TEST_CASE("removal bounds hold on random augmentations", "[boundary]") {
  CounterRng rng(RngSeed{445566});
  auto zero = validate_instance({0.2, 0.8}, {0.4, 0.6}, Alpha(0.5), unit_interval());
  auto rc0 = check_removal_bound(zero, 0);
  CHECK(rc0.match_ok);
  CHECK(rc0.tsp_ok);
  CHECK(rc0.match_slack == Catch::Approx(0.0).margin(1e-12));

  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 5;
    std::size_t m = 1 + rng.next_u64() % 2;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n + m; ++i) {
      xs.push_back(rng.next_double());
      ys.push_back(rng.next_double());
    }
    auto aug = validate_instance(xs, ys, Alpha(0.5), unit_interval());
    auto rc = check_removal_bound(aug, m);
    CHECK(rc.match_ok);
    CHECK(rc.tsp_ok);
  }

  // adversarial appended pair at the extreme ends
  auto adv = validate_instance({0.3, 0.7, 0.0}, {0.4, 0.6, 1.0}, Alpha(0.5),
                               unit_interval());
  auto rca = check_removal_bound(adv, 1);
  CHECK(rca.match_ok);
  CHECK(rca.tsp_ok);
}
