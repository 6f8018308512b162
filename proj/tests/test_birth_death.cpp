#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "cpb/birth_death.hpp"
#include "cpb/rng.hpp"
#include "oracles.hpp"

using namespace cpb;
using Catch::Approx;

namespace {

BirthDeathSpec random_spec(RngStream& rng, std::uint32_t max_span = 60) {
  BirthDeathSpec spec;
  spec.k0 = 1 + static_cast<std::uint32_t>(rng.next_below(20));
  spec.k1 = spec.k0 + 2 + static_cast<std::uint32_t>(rng.next_below(max_span - 1));
  auto rates = std::make_shared<std::vector<double>>();
  for (std::uint32_t k = 0; k <= spec.k1; ++k)
    rates->push_back(0.1 + 9.9 * rng.next_double());
  spec.birth_rate = [rates](std::uint32_t k) { return (*rates)[k]; };
  return spec;
}

}  // namespace

TEST_CASE("hitting times on hand-solved chains", "[birthdeath]") {
  // no interior state: a single down-step at rate death(k1)
  BirthDeathSpec minimal;
  minimal.k0 = 1;
  minimal.k1 = 2;
  minimal.birth_rate = [](std::uint32_t) { return 1.0; };
  auto ht = expected_hitting_times(minimal);
  CHECK(ht.at(1).value() == Approx(0.0).margin(1e-300));
  CHECK(ht.at(2).value() == Approx(0.5).epsilon(1e-12));

  // {0,1,2} with birth 1 at state 1, deaths k: H_1 = 3/2, H_2 = 2
  BirthDeathSpec chain;
  chain.k0 = 0;
  chain.k1 = 2;
  chain.birth_rate = [](std::uint32_t) { return 1.0; };
  auto h = expected_hitting_times(chain);
  CHECK(h.at(1).value() == Approx(1.5).epsilon(1e-12));
  CHECK(h.at(2).value() == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hitting times reject bad specs", "[birthdeath]") {
  BirthDeathSpec bad;
  bad.k0 = 2;
  bad.k1 = 2;
  bad.birth_rate = [](std::uint32_t) { return 1.0; };
  CHECK_THROWS_AS(expected_hitting_times(bad), std::invalid_argument);

  BirthDeathSpec zero_rate;
  zero_rate.k0 = 1;
  zero_rate.k1 = 4;
  zero_rate.birth_rate = [](std::uint32_t) { return 0.0; };
  CHECK_THROWS_AS(expected_hitting_times(zero_rate), std::invalid_argument);
}

TEST_CASE("hitting times are strictly increasing from zero", "[birthdeath]") {
  RngStream rng(21, "bd.mono");
  for (int trial = 0; trial < 20; ++trial) {
    auto spec = random_spec(rng);
    auto ht = expected_hitting_times(spec);
    CHECK(ht.at(spec.k0).is_zero());
    for (std::uint32_t k = spec.k0 + 1; k <= spec.k1; ++k)
      CHECK(ht.at(k) > ht.at(k - 1));
  }
}

TEST_CASE("exact solver agrees with a dense linear solve", "[birthdeath]") {
  RngStream rng(22, "bd.dense");
  for (int trial = 0; trial < 30; ++trial) {
    auto spec = random_spec(rng, 200);
    auto ht = expected_hitting_times(spec);
    auto dense = oracles::dense_hitting_solve(spec);
    for (std::uint32_t k = spec.k0 + 1; k <= spec.k1; ++k) {
      const double lg = ht.at(k).log();
      const auto ref = static_cast<double>(std::log(dense[k - spec.k0 - 1]));
      if (!std::isfinite(ref)) continue;  // magnitudes past long double range
      INFO("trial " << trial << " k=" << k);
      CHECK(lg == Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("time rescaling: scaling all rates by c scales H by 1/c", "[birthdeath]") {
  RngStream rng(23, "bd.scale");
  auto spec = random_spec(rng);
  const double c = 3.7;
  BirthDeathSpec scaled = spec;
  auto birth = spec.birth_rate;
  auto death = spec.death_rate;
  scaled.birth_rate = [birth, c](std::uint32_t k) { return c * birth(k); };
  scaled.death_rate = [death, c](std::uint32_t k) { return c * death(k); };
  auto h = expected_hitting_times(spec);
  auto hs = expected_hitting_times(scaled);
  for (std::uint32_t k = spec.k0 + 1; k <= spec.k1; ++k)
    CHECK(hs.at(k).log() == Approx(h.at(k).log() - std::log(c)).margin(1e-10));
}

TEST_CASE("sandwich bounds on hand chains", "[birthdeath][sandwich]") {
  BirthDeathSpec chain;
  chain.k0 = 0;
  chain.k1 = 2;
  chain.birth_rate = [](std::uint32_t) { return 1.0; };
  CHECK(hitting_lower_bound(chain).value() == Approx(0.5).epsilon(1e-12));
  CHECK(hitting_upper_bound(chain).value() == Approx(2.0).epsilon(1e-12));

  // birth(i) = i makes every product term 1
  BirthDeathSpec unit;
  unit.k0 = 2;
  unit.k1 = 9;
  unit.birth_rate = [](std::uint32_t k) { return static_cast<double>(k); };
  CHECK(hitting_lower_bound(unit).value() == Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(hitting_upper_bound(unit).value() == Approx(0.5 * 49.0).epsilon(1e-12));

  // birth(i)/i <= 1 everywhere: the max is the empty product
  BirthDeathSpec sub;
  sub.k0 = 3;
  sub.k1 = 10;
  sub.birth_rate = [](std::uint32_t k) { return 0.5 * static_cast<double>(k); };
  CHECK(hitting_upper_bound(sub).value() == Approx(0.5 * 49.0).epsilon(1e-12));
}

TEST_CASE("sandwich holds for randomized specs with death rate k", "[birthdeath][sandwich]") {
  RngStream rng(24, "bd.sandwich");
  for (int trial = 0; trial < 100; ++trial) {
    auto spec = random_spec(rng);
    auto ht = expected_hitting_times(spec);
    auto lower = hitting_lower_bound(spec);
    auto upper = hitting_upper_bound(spec);
    for (std::uint32_t k = spec.k0 + 1; k <= spec.k1; ++k) {
      INFO("trial " << trial << " k=" << k << " range [" << spec.k0 << "," << spec.k1 << "]");
      CHECK(lower <= ht.at(k));
      CHECK(ht.at(k) <= upper);
    }
  }
}

TEST_CASE("complete graph spec and its sandwich", "[birthdeath][complete]") {
  auto s2 = complete_graph_spec(2, 1.0);
  CHECK(s2.birth_rate(1) == Approx(0.5));
  auto s10 = complete_graph_spec(10, 2.0);
  CHECK(s10.birth_rate(5) == Approx(5.0));

  auto s50 = complete_graph_spec(50, 2.0);
  auto ht = expected_hitting_times(s50);
  auto lower = hitting_lower_bound(s50);
  auto upper = hitting_upper_bound(s50);
  for (std::uint32_t k = 1; k <= 50; ++k) {
    CHECK(lower <= ht.at(k));
    CHECK(ht.at(k) <= upper);
  }
}

TEST_CASE("complete graph growth exponent at N=800", "[birthdeath][complete]") {
  auto ht = expected_hitting_times(complete_graph_spec(800, 2.0));
  const double exponent = ht.at(800).log() / 800.0;
  CHECK(std::abs(exponent - (std::log(2.0) - 0.5)) <= 0.03);
}

TEST_CASE("proposition lower bound formula", "[birthdeath][proposition]") {
  // tau M_k = k for all k collapses the product to 1/k1
  auto bound = proposition_lower_bound(0.5, [](std::uint32_t k) { return 2ull * k; }, 1, 12);
  CHECK(bound.value() == Approx(1.0 / 12.0).epsilon(1e-12));

  CHECK_THROWS_AS(proposition_lower_bound(0.5, [](std::uint32_t) { return 0ull; }, 1, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(proposition_lower_bound(0.5, [](std::uint32_t) { return 3ull; }, 0, 5),
                  std::invalid_argument);
}

TEST_CASE("proposition bound reproduces the complete-graph product", "[birthdeath][proposition]") {
  const std::uint32_t n = 40;
  const double lam = 2.0;
  const auto k1 = static_cast<std::uint32_t>(std::ceil((1.0 - 1.0 / lam) * n));
  auto m = [n](std::uint32_t k) { return static_cast<std::uint64_t>(k) * (n - k); };
  auto bound = proposition_lower_bound(lam / n, m, 1, k1);

  double expected = -std::log(static_cast<double>(k1));
  for (std::uint32_t k = 2; k < k1; ++k) expected += std::log(lam * (n - k) / n);
  CHECK(bound.log() == Approx(expected).margin(1e-10));

  // and it really is a lower bound for the exact hitting time
  auto ht = expected_hitting_times(complete_graph_spec(n, lam));
  CHECK(bound <= ht.at(k1));
}
