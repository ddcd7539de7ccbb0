#include "bvlab/contraction.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/picard.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bvlab;
using fixtures::q;

namespace {

OrbitRecord corpus_orbit(const std::string& name, const char* start, std::size_t budget,
                         std::optional<Point> limit = std::nullopt) {
  const auto& e = fixtures::entry(name);
  return iterate(Space(e.space), e.map, fixtures::pt(name, start), budget, limit);
}

Space space_of(const std::string& name) { return Space(fixtures::entry(name).space); }

}  // namespace

TEST(IterateTest, QuarterMapReachesZero) {
  auto orbit = corpus_orbit("e4", "1", 10);
  EXPECT_EQ(fixtures::labels(orbit.points), (std::vector<std::string>{"1", "1/2", "0"}));
  const auto* fixed = std::get_if<FixedPointReached>(&orbit.status);
  ASSERT_NE(fixed, nullptr);
  EXPECT_EQ(fixed->point.label, "0");
  EXPECT_EQ(fixed->index, 2u);
  EXPECT_EQ(orbit.s_seq, (std::vector<Scalar>{7, 1}));
  EXPECT_FALSE(orbit.t_seq);
}

TEST(IterateTest, QuarterMapFollowsItsClosedForm) {
  // Above 1 the map is affine with fixed point 1/3: T^n x - 1/3 = (x - 1/3) / 4^n.
  auto orbit = corpus_orbit("e4", "21", 10);
  const Scalar third = q("1/3");
  EXPECT_EQ(*orbit.points[1].value, third + (21 - third) / 4);
  EXPECT_EQ(*orbit.points[2].value, third + (21 - third) / 16);
  EXPECT_EQ(fixtures::labels(orbit.points), (std::vector<std::string>{"21", "11/2", "13/8", "21/32", "0"}));
}

TEST(IterateTest, IdentityIsFixedImmediately) {
  auto space = oracle::to_space({{0, 1}, {1, 0}});
  auto orbit = iterate(Space(space), SelfMap::identity(), space.point(1), 5);
  EXPECT_EQ(orbit.points.size(), 1u);
  EXPECT_EQ(describe(orbit.status), "FixedPoint(p1, 0)");
  EXPECT_TRUE(orbit.s_seq.empty());
}

TEST(IterateTest, HalvingMapExhaustsTheBudget) {
  auto orbit = corpus_orbit("e8", "1", 10);
  ASSERT_EQ(orbit.points.size(), 11u);
  EXPECT_EQ(orbit.points.back().label, "1/1024");
  EXPECT_EQ(describe(orbit.status), "BudgetExhausted(10)");
  for (std::size_t n = 0; n < orbit.s_seq.size(); ++n) {
    Scalar two_n = 1;
    for (std::size_t k = 0; k < n; ++k) two_n *= 2;
    EXPECT_EQ(orbit.s_seq[n], 1 + 3 / two_n);
  }
}

TEST(IterateTest, DetectsCycles) {
  auto space = oracle::to_space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  auto map = SelfMap::from_indices(space, {1, 2, 1});
  auto orbit = iterate(Space(space), map, space.point(0), 50);
  const auto* cycle = std::get_if<CycleDetected>(&orbit.status);
  ASSERT_NE(cycle, nullptr);
  EXPECT_EQ(cycle->entry, 1u);
  EXPECT_EQ(cycle->period, 2u);
  EXPECT_EQ(fixtures::labels(orbit.points), (std::vector<std::string>{"p0", "p1", "p2", "p1"}));
  EXPECT_EQ(orbit_point(orbit, 10).label, "p2");
  EXPECT_EQ(orbit_point(orbit, 11).label, "p1");
  auto verdict = verify_sn_strict_decrease(orbit);
  EXPECT_FALSE(verdict.passed);
}

TEST(IterateTest, FixedPointFoundOnTheLastStep) {
  auto orbit = corpus_orbit("e4", "1", 2);
  EXPECT_EQ(describe(orbit.status), "FixedPoint(0, 2)");
  auto short_orbit = corpus_orbit("e4", "1", 1);
  EXPECT_EQ(describe(short_orbit.status), "BudgetExhausted(1)");
  EXPECT_EQ(short_orbit.points.size(), 2u);
}

TEST(IterateTest, CandidateLimitFillsTn) {
  auto orbit = corpus_orbit("e4", "1", 10, fixtures::pt("e4", "0"));
  ASSERT_TRUE(orbit.t_seq);
  EXPECT_EQ(*orbit.t_seq, (std::vector<Scalar>{2, 1, 0}));
}

TEST(IterateTest, Preconditions) {
  const auto& e4 = fixtures::entry("e4");
  EXPECT_THROW(iterate(Space(e4.space), e4.map, fixtures::pt("e4", "1"), 0), InvalidArgument);
  EXPECT_THROW(iterate(Space(e4.space), e4.map, Point::of_value(-1), 3), PointNotInCarrier);
}

TEST(DecreaseTest, PublishedOrbits) {
  auto quarter = verify_sn_strict_decrease(corpus_orbit("e4", "1", 10));
  EXPECT_TRUE(quarter.passed);
  EXPECT_FALSE(quarter.vacuous);
  EXPECT_TRUE(verify_sn_strict_decrease(corpus_orbit("e8", "1", 30)).passed);
  auto fixed = verify_sn_strict_decrease(corpus_orbit("e4", "0", 5));
  EXPECT_TRUE(fixed.passed);
  EXPECT_TRUE(fixed.vacuous);
}

TEST(DecreaseTest, ReportsTheFirstIncrease) {
  auto space = oracle::to_space({{0, 1, 3, 3}, {1, 0, 2, 3}, {3, 2, 0, 1}, {3, 3, 1, 0}});
  auto orbit = iterate(Space(space), SelfMap::from_indices(space, {1, 2, 3, 3}), space.point(0), 10);
  EXPECT_EQ(orbit.s_seq, (std::vector<Scalar>{1, 2, 1}));
  auto verdict = verify_sn_strict_decrease(orbit);
  EXPECT_FALSE(verdict.passed);
  EXPECT_EQ(verdict.first_failure, 0u);
}

TEST(FixedPointsTest, PublishedSets) {
  const auto& e2 = fixtures::entry("e2");
  EXPECT_TRUE(detect_fixed_points(std::span<const Point>(e2.sample()), e2.map).empty());
  const auto& e4 = fixtures::entry("e4");
  auto sample = fixtures::sample("e4", "{0, 1/4, 1/2, 1, 2}");
  EXPECT_EQ(fixtures::labels(detect_fixed_points(std::span<const Point>(sample), e4.map)),
            std::vector<std::string>{"0"});
  auto space = oracle::to_space({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(detect_fixed_points(space, SelfMap::identity()).size(), 3u);
}

TEST(SuzukiTest, QuarterMapIsSupportedWithDeltaEqualEps) {
  auto orbit = corpus_orbit("e4", "1", 10);
  SuzukiOptions options;
  options.factor = 4;
  auto findings = check_suzuki(space_of("e4"), orbit, options);
  ASSERT_EQ(findings.size(), SuzukiOptions::default_epsilons().size());
  for (const auto& f : findings) {
    EXPECT_TRUE(f.supported) << to_string(f.epsilon);
    EXPECT_EQ(*f.delta, f.epsilon);
    EXPECT_EQ(f.horizon, 10u);
  }
}

TEST(SuzukiTest, QuarterMapFromTheFixedTail) {
  auto orbit = corpus_orbit("e4", "1", 10);
  SuzukiOptions options;
  options.factor = 4;
  options.start_indices = {2};
  for (const auto& f : check_suzuki(space_of("e4"), orbit, options)) {
    ASSERT_TRUE(f.supported);
    EXPECT_EQ(*f.start_index, 2u);
    EXPECT_EQ(*f.delta, f.epsilon);
  }
}

TEST(SuzukiTest, HalvingMapIsRefutedOnTheWholeGrid) {
  auto orbit = corpus_orbit("e8", "1", 40);
  SuzukiOptions options;
  options.factor = 4;
  options.epsilons = {q("1/4")};
  auto findings = check_suzuki(space_of("e8"), orbit, options);
  ASSERT_EQ(findings.size(), 1u);
  const auto& f = findings.front();
  EXPECT_FALSE(f.supported);
  EXPECT_EQ(f.witnesses.size(), 7u * 6u);
  const Space space = space_of("e8");
  for (const auto& w : f.witnesses) {
    EXPECT_GE(w.n, w.start_index);
    EXPECT_LT(w.n, w.m);
    EXPECT_LT(w.m, 40u);
    EXPECT_EQ(w.premise, distance(space, orbit.points[w.n], orbit.points[w.m]));
    EXPECT_EQ(w.conclusion, distance(space, orbit.points[w.n + 1], orbit.points[w.m + 1]));
    EXPECT_LT(w.premise, 4 * f.epsilon + w.delta);
    EXPECT_GT(w.conclusion, 1);
  }
}

TEST(SuzukiTest, ConstantOrbit) {
  auto space = oracle::to_space({{0, 1}, {1, 0}});
  auto orbit = iterate(Space(space), SelfMap::identity(), space.point(0), 20);
  SuzukiOptions options;
  options.factor = 1;
  for (const auto& f : check_suzuki(Space(space), orbit, options)) {
    ASSERT_TRUE(f.supported);
    EXPECT_EQ(*f.delta, f.epsilon);
    EXPECT_EQ(*f.start_index, 0u);
  }
}

TEST(SuzukiTest, RejectsShortOrBadInput) {
  auto orbit = corpus_orbit("e8", "1", 10);
  SuzukiOptions options;
  options.factor = 4;
  EXPECT_THROW(check_suzuki(space_of("e8"), orbit, options), OrbitTooShort);
  options.start_indices = {0, 4};
  EXPECT_NO_THROW(check_suzuki(space_of("e8"), orbit, options));
  options.epsilons = {0};
  EXPECT_THROW(check_suzuki(space_of("e8"), orbit, options), InvalidArgument);
  options.epsilons = {1};
  options.deltas = {q("-1/2")};
  EXPECT_THROW(check_suzuki(space_of("e8"), orbit, options), InvalidArgument);
}

TEST(CauchyProfileTest, PublishedOrbits) {
  auto quarter = corpus_orbit("e4", "1", 10);
  const std::vector<std::size_t> two{2};
  EXPECT_EQ(cauchy_profile(space_of("e4"), quarter, two).front().second, 0);

  auto halving = corpus_orbit("e8", "1", 20);
  const std::vector<std::size_t> starts{0, 5, 10, 15};
  auto profile = cauchy_profile(space_of("e8"), halving, starts);
  EXPECT_EQ(profile[2].first, 10u);
  // The tail diameter from N is attained by the adjacent pair: 1 + 3 / 2^N.
  EXPECT_EQ(profile[2].second, q("1027/1024"));
  for (const auto& [n, diameter] : profile) {
    Scalar two_n = 1;
    for (std::size_t k = 0; k < n; ++k) two_n *= 2;
    EXPECT_EQ(diameter, 1 + 3 / two_n);
  }
  for (std::size_t k = 1; k < profile.size(); ++k) EXPECT_LT(profile[k].second, profile[k - 1].second);
  const std::vector<std::size_t> beyond{21};
  EXPECT_THROW(cauchy_profile(space_of("e8"), halving, beyond), OrbitTooShort);
}

TEST(CauchyProfileTest, ConstantOrbit) {
  auto space = oracle::to_space({{0, 1}, {1, 0}});
  auto orbit = iterate(Space(space), SelfMap::identity(), space.point(1), 3);
  const std::vector<std::size_t> starts{0, 1, 7};
  for (const auto& [n, diameter] : cauchy_profile(Space(space), orbit, starts)) EXPECT_EQ(diameter, 0);
}

TEST(PicardPropertyTest, OrbitsAreWellFormed) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 6;
    auto space = oracle::to_space(oracle::random_table(rng, n));
    auto map = SelfMap::from_indices(space, oracle::random_map(rng, n));
    auto orbit = iterate(Space(space), map, space.point(trial % n), 3 + trial % 10);
    ASSERT_EQ(orbit.s_seq.size() + 1, orbit.points.size());
    for (std::size_t k = 0; k + 1 < orbit.points.size(); ++k) {
      EXPECT_EQ(map.apply(orbit.points[k]), orbit.points[k + 1]);
      EXPECT_EQ(orbit.s_seq[k], space.distance(orbit.points[k], orbit.points[k + 1]));
    }
    if (const auto* f = std::get_if<FixedPointReached>(&orbit.status)) {
      EXPECT_EQ(map.apply(f->point), f->point);
      EXPECT_EQ(orbit.points[f->index], f->point);
    }
    if (const auto* c = std::get_if<CycleDetected>(&orbit.status)) {
      EXPECT_EQ(orbit.points[c->entry], orbit.points[c->entry + c->period]);
    }
  }
}

TEST(PicardPropertyTest, ContractiveMapsHaveAtMostOneFixedPoint) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const std::size_t n = 2 + trial % 5;
    auto space = oracle::to_space(oracle::random_table(rng, n, 6, 3));
    auto map = SelfMap::from_indices(space, oracle::random_map(rng, n));
    const bool reich = check_reich(space, map, ReichCoefficients::reich(q("1/3"), q("1/3"), q("1/3"))).passed;
    const bool ciric = check_ciric_max(space, map).passed;
    if (!reich && !ciric) continue;
    ++checked;
    EXPECT_LE(detect_fixed_points(space, map).size(), 1u);
  }
  EXPECT_GT(checked, 100);
}

TEST(PicardPropertyTest, SuzukiFindingsReverify) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + trial % 4;
    auto table = oracle::random_table(rng, n, 4, 2);
    auto space = oracle::to_space(table);
    auto map = SelfMap::from_indices(space, oracle::random_map(rng, n));
    auto orbit = iterate(Space(space), map, space.point(0), 24);
    if (!orbit.absorbed()) continue;
    SuzukiOptions options;
    options.factor = trial % 2 ? Scalar(1) : Scalar(4);
    for (const auto& f : check_suzuki(Space(space), orbit, options)) {
      auto rho = [&](std::size_t a, std::size_t b) {
        return space.distance(orbit_point(orbit, a), orbit_point(orbit, b));
      };
      if (f.supported) {
        for (std::size_t a = *f.start_index; a < f.horizon; ++a) {
          for (std::size_t b = a + 1; b < f.horizon; ++b) {
            if (rho(a, b) < options.factor * f.epsilon + *f.delta) {
              EXPECT_LE(rho(a + 1, b + 1), f.epsilon);
            }
          }
        }
      } else {
        for (const auto& w : f.witnesses) {
          EXPECT_EQ(w.premise, rho(w.n, w.m));
          EXPECT_EQ(w.conclusion, rho(w.n + 1, w.m + 1));
          EXPECT_LT(w.premise, options.factor * f.epsilon + w.delta);
          EXPECT_GT(w.conclusion, f.epsilon);
        }
      }
    }
  }
}
