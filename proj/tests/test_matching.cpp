#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "kyot/core.hpp"
#include "kyot/matching.hpp"
#include "kyot/random.hpp"

using namespace kyot;

namespace {

Instance random_instance(CounterRng& rng, std::size_t n, double alpha) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.next_double() * 0.999);
  for (std::size_t i = 0; i < n; ++i) ys.push_back(rng.next_double() * 0.999);
  return validate_instance(xs, ys, Alpha(alpha), unit_interval());
}

}  // namespace

TEST_CASE("bruteforce on tiny instances", "[matching]") {
  auto one = validate_instance({0.2}, {0.7}, Alpha(0.5), unit_interval());
  auto r = match_bruteforce(one);
  CHECK(r.cost == Catch::Approx(std::sqrt(0.5)));
  CHECK(r.sigma == std::vector<std::size_t>{0});

  // equal families match at zero cost
  auto same = validate_instance({0.1, 0.4, 0.9}, {0.9, 0.1, 0.4}, Alpha(0.3),
                                unit_interval());
  CHECK(match_bruteforce(same).cost == Catch::Approx(0.0).margin(1e-15));

  // concavity prefers nesting: enumerate both permutations by hand
  auto nest = validate_instance({0.0, 0.6}, {0.5, 1.0}, Alpha(0.5), unit_interval());
  double monotone = std::sqrt(0.5) + std::sqrt(0.4);
  double nested = 1.0 + std::sqrt(0.1);
  REQUIRE(nested < monotone);
  auto rn = match_bruteforce(nest);
  CHECK(rn.cost == Catch::Approx(nested));
  CHECK(rn.sigma == std::vector<std::size_t>{1, 0});
}

TEST_CASE("bruteforce rejects large n", "[matching]") {
  CounterRng rng(RngSeed{1});
  auto inst = random_instance(rng, 10, 0.5);
  CHECK_THROWS_AS(match_bruteforce(inst), std::invalid_argument);
}

TEST_CASE("interval DP spec examples", "[matching]") {
  auto nest = validate_instance({0.0, 0.6}, {0.5, 1.0}, Alpha(0.5), unit_interval());
  CHECK(match_noncrossing_dp(nest).cost == Catch::Approx(1.0 + std::sqrt(0.1)));

  auto inter = validate_instance({0.1, 0.3}, {0.2, 0.4}, Alpha(0.7), unit_interval());
  CHECK(match_noncrossing_dp(inter).cost == Catch::Approx(2.0 * std::pow(0.1, 0.7)));

  auto one = validate_instance({0.25}, {0.5}, Alpha(0.9), unit_interval());
  CHECK(match_noncrossing_dp(one).cost == Catch::Approx(std::pow(0.25, 0.9)));
}

TEST_CASE("oracle equivalence of all four solvers", "[matching]") {
  CounterRng rng(RngSeed{314});
  for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
    for (int rep = 0; rep < 60; ++rep) {
      std::size_t n = 1 + rng.next_u64() % 7;
      auto inst = random_instance(rng, n, alpha);
      auto bf = match_bruteforce(inst);
      auto hg = match_generic(inst);
      auto dp = match_noncrossing_dp(inst);
      auto ft = match_fast(inst);
      CHECK(std::abs(bf.cost - hg.cost) < 1e-9);
      CHECK(std::abs(bf.cost - dp.cost) < 1e-9);
      CHECK(std::abs(bf.cost - ft.cost) < 1e-9);
      CHECK(is_permutation_of_n(hg.sigma, n));
      CHECK(is_permutation_of_n(dp.sigma, n));
      CHECK(is_permutation_of_n(ft.sigma, n));
    }
  }
}

TEST_CASE("fast solver agrees with interval DP at medium sizes", "[matching]") {
  CounterRng rng(RngSeed{2718});
  for (double alpha : {0.25, 0.5, 0.75, 0.95}) {
    for (int rep = 0; rep < 25; ++rep) {
      std::size_t n = 2 + rng.next_u64() % 63;
      auto inst = random_instance(rng, n, alpha);
      auto dp = match_noncrossing_dp(inst);
      FastSolveInfo info;
      auto ft = match_fast(inst, &info);
      REQUIRE(std::abs(dp.cost - ft.cost) < 1e-9);
      CHECK(check_monotonicity(inst, ft.sigma));
    }
  }
}

TEST_CASE("fast solver handles duplicates and alpha = 1", "[matching]") {
  CounterRng rng(RngSeed{555});
  for (int rep = 0; rep < 40; ++rep) {
    std::size_t n = 2 + rng.next_u64() % 6;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      double v = (1 + rng.next_u64() % 8) / 10.0;  // heavy ties
      xs.push_back(v);
      ys.push_back((1 + rng.next_u64() % 8) / 10.0);
    }
    double alpha = (rep % 4 == 0) ? 1.0 : 0.35 + 0.6 * rng.next_double();
    auto inst = validate_instance(xs, ys, Alpha(alpha), unit_interval());
    auto bf = match_bruteforce(inst);
    auto ft = match_fast(inst);
    REQUIRE(std::abs(bf.cost - ft.cost) < 1e-9);
  }
}

TEST_CASE("optimal matchings are monotone and non-crossing", "[matching]") {
  CounterRng rng(RngSeed{161});
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (int rep = 0; rep < 40; ++rep) {
      std::size_t n = 1 + rng.next_u64() % 7;
      auto inst = random_instance(rng, n, alpha);
      auto bf = match_bruteforce(inst);
      CHECK(check_monotonicity(inst, bf.sigma));
      CHECK(check_noncrossing(inst, bf.sigma));
    }
  }
}

TEST_CASE("crossing assignment fails the validators", "[matching]") {
  auto inst = validate_instance({0.0, 0.6}, {0.5, 1.0}, Alpha(0.5), unit_interval());
  std::vector<std::size_t> crossing{1, 0};  // (0,1.0) and (0.6,0.5): nested, fine
  std::vector<std::size_t> monotone{0, 1};  // (0,0.5) and (0.6,1.0): disjoint
  CHECK(check_noncrossing(inst, crossing));
  CHECK(check_noncrossing(inst, monotone));
  CHECK_FALSE(check_monotonicity(inst, monotone));  // swap is strictly better

  auto inst2 = validate_instance({0.0, 0.5}, {0.7, 1.0}, Alpha(0.5), unit_interval());
  std::vector<std::size_t> partial{0, 1};  // (0,0.7) and (0.5,1.0) overlap partially
  CHECK_FALSE(check_noncrossing(inst2, partial));

  auto single = validate_instance({0.3}, {0.9}, Alpha(0.5), unit_interval());
  CHECK(check_monotonicity(single, {0}));
  CHECK(check_noncrossing(single, {0}));
}

TEST_CASE("zero-distance pairs can be absorbed without cost change", "[matching]") {
  CounterRng rng(RngSeed{808});
  for (int rep = 0; rep < 30; ++rep) {
    std::size_t n = 2 + rng.next_u64() % 5;
    auto inst = random_instance(rng, n, 0.5);
    // plant an exact coincidence x_k = y_l
    std::vector<double> xs = inst.xs, ys = inst.ys;
    xs[0] = ys[n - 1];
    auto planted = validate_instance(xs, ys, Alpha(0.5), unit_interval());
    auto full = match_bruteforce(planted);

    std::vector<double> rx(xs.begin() + 1, xs.end());
    std::vector<double> ry(ys.begin(), ys.end() - 1);
    double reduced =
        rx.empty() ? 0.0
                   : match_bruteforce(validate_instance(rx, ry, Alpha(0.5),
                                                        unit_interval()))
                         .cost;
    CHECK(full.cost == Catch::Approx(reduced).margin(1e-9));
  }
}

TEST_CASE("optimal cost is scale covariant", "[matching]") {
  CounterRng rng(RngSeed{909});
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t n = 1 + rng.next_u64() % 6;
    double alpha = 0.3 + 0.6 * rng.next_double();
    auto inst = random_instance(rng, n, alpha);
    double lambda = 0.25 + 3.0 * rng.next_double();
    std::vector<double> xs, ys;
    for (double t : inst.xs) xs.push_back(lambda * t);
    for (double t : inst.ys) ys.push_back(lambda * t);
    auto scaled = validate_instance(xs, ys, Alpha(alpha), Interval(0.0, lambda));
    auto r0 = match_bruteforce(inst);
    auto r1 = match_bruteforce(scaled);
    CHECK(r1.cost == Catch::Approx(std::pow(lambda, alpha) * r0.cost));
    CHECK(r1.sigma == r0.sigma);
  }
}

TEST_CASE("hungarian handles moderately large instances", "[matching]") {
  CounterRng rng(RngSeed{424});
  auto inst = random_instance(rng, 120, 0.6);
  auto hg = match_generic(inst);
  auto dp = match_noncrossing_dp(inst);
  auto ft = match_fast(inst);
  CHECK(std::abs(hg.cost - dp.cost) < 1e-9);
  CHECK(std::abs(hg.cost - ft.cost) < 1e-9);
}
