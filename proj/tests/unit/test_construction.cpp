#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "packdim/error.hpp"
#include "packdim/gallery.hpp"
#include "packdim/law.hpp"
#include "packdim/stats.hpp"
#include "packdim/tree.hpp"

using namespace packdim;

TEST_CASE("deterministic Cantor always draws (1/3, 1/3)") {
  const auto law = deterministic_cantor_law().law;
  Stream s(7);
  for (int i = 0; i < 100; ++i) {
    const auto v = sample_offspring(law, s);
    CHECK(v == std::vector<double>{1.0 / 3.0, 1.0 / 3.0});
  }
}

TEST_CASE("random Cantor draws lie on the triangle and have mean 1/3") {
  const auto law = random_cantor_law().law;
  Stream s(11);
  RunningStats t1;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const auto v = sample_offspring(law, s);
    REQUIRE(v[0] >= 0.0);
    REQUIRE(v[1] >= 0.0);
    REQUIRE(v[0] < 1.0);
    REQUIRE(v[1] < 1.0);
    REQUIRE(v[0] + v[1] <= 1.0);
    t1.add(v[0]);
  }
  // Marginal density 2(1 - t): mean 1/3, variance 1/6 - 1/9 = 1/18.
  const double se = std::sqrt(1.0 / 18.0 / n);
  CHECK(std::abs(t1.mean() - 1.0 / 3.0) < 3.0 * se);
}

TEST_CASE("malformed laws are rejected") {
  ReductionLaw empty;
  empty.name = "empty";
  Stream s(1);
  CHECK_THROWS_AS(sample_offspring(empty, s), ConfigError);
  ReductionLaw no_sampler;
  no_sampler.slots = 2;
  CHECK_THROWS_AS(no_sampler.validate(), ConfigError);
}

TEST_CASE("law invariants hold for every shipped law") {
  for (const char* name : {"det-cantor", "rand-cantor", "bb-zero-density", "bernoulli-cantor(0.7,0.25)"}) {
    CAPTURE(name);
    const auto ex = make_example_law(name);
    Stream s(3);
    RunningStats m25, m50, m100;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
      const auto v = sample_offspring(ex.law, s);
      double sum = 0.0, a = 0.0, b = 0.0, c = 0.0;
      for (double t : v) {
        REQUIRE(t >= 0.0);
        REQUIRE(t < 1.0);
        sum += t;
        if (t > 0.0) {
          a += std::pow(t, 0.25);
          b += std::pow(t, 0.5);
          c += t;
        }
      }
      if (ex.law.interval_osc) REQUIRE(sum <= 1.0);
      m25.add(a);
      m50.add(b);
      m100.add(c);
    }
    if (ex.law.has_moment()) {
      CHECK(std::abs(m25.mean() - ex.law.moment(0.25)) <= 4.0 * m25.std_error() + 1e-12);
      CHECK(std::abs(m50.mean() - ex.law.moment(0.5)) <= 4.0 * m50.std_error() + 1e-12);
      CHECK(std::abs(m100.mean() - ex.law.moment(1.0)) <= 4.0 * m100.std_error() + 1e-12);
    }
  }
}

TEST_CASE("code points") {
  const CodePoint a({1, 2});
  const CodePoint b({2});
  CHECK(a.concat(b).size() == 3);
  CHECK(a.concat(b).prefix(2) == a);
  CHECK(a.is_prefix_of(a.concat(b)));
  CHECK(a.child(1).to_string() == "1.2.1");
  CHECK(CodePoint().to_string() == "-");
  CHECK_THROWS_AS(a.prefix(3), ContractError);
}

TEST_CASE("grow_tree basics") {
  const auto det = deterministic_cantor_law().law;
  Stream s(5);
  const auto root = grow_tree(det, 0, s);
  CHECK(root.depth() == 0);
  CHECK(root.node_count() == 1);
  CHECK(root.level(0).length[0] == 1.0);

  Stream s2(5);
  const auto t = grow_tree(det, 6, s2);
  CHECK(t.level(6).size() == 64);
  for (double l : t.level(6).length) CHECK(l == doctest::Approx(std::pow(3.0, -6)).epsilon(1e-14));
}

TEST_CASE("multiplicativity and reproducibility") {
  const auto law = random_cantor_law().law;
  Stream a(99), b(99);
  const auto t1 = grow_tree(law, 8, a);
  const auto t2 = grow_tree(law, 8, b);
  for (int k = 1; k <= 8; ++k) {
    const auto& lv = t1.level(k);
    const auto& up = t1.level(k - 1);
    REQUIRE(lv.size() == t2.level(k).size());
    for (std::size_t j = 0; j < lv.size(); ++j) {
      CHECK(lv.length[j] == lv.ratio[j] * up.length[lv.parent[j]]);
      CHECK(lv.length[j] == t2.level(k).length[j]);
      CHECK(lv.ratio[j] == t2.level(k).ratio[j]);
    }
  }
  std::ostringstream csv;
  t1.write_csv(csv);
  CHECK(csv.str().rfind("code,depth,T,l,alive\n", 0) == 0);
}

TEST_CASE("dead nodes are pruned") {
  const auto law = bernoulli_cantor_law(0.6, 0.3).law;
  Stream s(4);
  const auto t = grow_tree(law, 10, s);
  for (int k = 1; k <= t.depth(); ++k) {
    for (double r : t.level(k).ratio) CHECK(r > 0.0);
  }
}

TEST_CASE("node cap raises a resource error naming the cap") {
  const auto law = deterministic_cantor_law().law;
  Stream s(1);
  GrowOptions opts;
  opts.node_cap = 1000;
  try {
    (void)grow_tree(law, 20, s, opts);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("level sums have mean one at the solved dimension") {
  const auto ex = random_cantor_law();
  const double alpha = *ex.oracles.alpha;
  for (int k : {2, 5, 8}) {
    RunningStats sums;
    for (int i = 0; i < 4000; ++i) {
      Stream s(2024, StreamStage::kGeneric, static_cast<std::uint64_t>(i));
      sums.add(grow_tree(ex.law, k, s).level_sum(k, alpha));
    }
    CAPTURE(k);
    CHECK(std::abs(sums.mean() - 1.0) < 3.0 * sums.std_error());
  }
}

TEST_CASE("extinction probabilities") {
  CHECK(estimate_extinction(deterministic_cantor_law().law, 200, 10, 1) == 0.0);
  CHECK(estimate_extinction(random_cantor_law().law, 200, 10, 1) == 0.0);

  const double p = 0.7;
  // Oracle: smallest root of q = (1 - p + p q)^2, found by fixed-point iteration from 0.
  double q = 0.0;
  for (int i = 0; i < 10000; ++i) q = std::pow(1.0 - p + p * q, 2);
  CHECK(bernoulli_extinction_probability(p) == doctest::Approx(q).epsilon(1e-9));

  const auto law = bernoulli_cantor_law(p, 0.25).law;
  const std::size_t n = 4000;
  const double est = estimate_extinction(law, n, 30, 17);
  CHECK(std::abs(est - q) < 3.0 * std::sqrt(q * (1 - q) / n));

  double prev = 0.0;
  for (int depth : {1, 2, 4, 8, 16}) {
    const double e = estimate_extinction(law, 1000, depth, 5);
    CHECK(e >= prev);
    prev = e;
  }
}
