#include "bvlab/completeness.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/errors.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace bvlab;
using fixtures::q;

namespace {

CauchySeed shipped_seed(const std::string& file) {
  auto resolve = [](const std::string& name) {
    auto text = corpus_file(name);
    if (!text) throw UnknownExample(name);
    return *text;
  };
  return parse_seed(*corpus_file(file), resolve);
}

const CauchySeed& harmonic() {
  static const CauchySeed seed = shipped_seed("harmonic.seed");
  return seed;
}

// Brute-force inf over 2 <= n <= limit of |x - 1/n|; exact once 1/limit < x / 2.
Scalar gap_oracle(const Scalar& x, int limit = 4000) {
  Scalar best = x - Scalar(1) / 2 < 0 ? Scalar(1) / 2 - x : x - Scalar(1) / 2;
  for (int n = 3; n <= limit; ++n) {
    Scalar d = x - Scalar(1) / n;
    if (d < 0) d = -d;
    if (d < best) best = d;
  }
  return best;
}

}  // namespace

TEST(SeedTest, ShippedHarmonicSeed) {
  const auto& seed = harmonic();
  EXPECT_EQ(seed.sequence.size(), 201u);
  EXPECT_EQ(seed.sequence.front().label, "1/2");
  EXPECT_EQ(seed.sequence.back().label, "1/202");
  EXPECT_EQ(seed.member_count, 20u);
  EXPECT_EQ(seed.outsiders.size(), 10u);
  EXPECT_EQ(seed.b, q("1/2"));
  ASSERT_TRUE(seed.certificate);
  EXPECT_EQ(seed.certificate->tail_upper(3, seed.sequence[3]), q("1/5"));
  EXPECT_EQ(seed.default_sample().size(), 30u);
  EXPECT_EQ(*seed.index_of(Point::of_value(q("1/7"))), 5u);
}

TEST(SeedTest, CertifiedGapsMatchTheOracle) {
  const auto& seed = harmonic();
  for (const auto& x : seed.outsiders) {
    auto gap = seed.certificate->range_gap(x);
    ASSERT_TRUE(gap) << x.label;
    EXPECT_EQ(*gap, gap_oracle(*x.value)) << x.label;
  }
}

TEST(SeedTest, RejectsMalformedSeeds) {
  auto resolve = [](const std::string& name) { return *corpus_file(name); };
  EXPECT_THROW(parse_seed("name: a\nspace: unit-interval.space\ncolour: red\n", resolve), InvalidArgument);
  EXPECT_THROW(parse_seed("name: a\nspace: unit-interval.space\nsequence:\n1/2\n1/2\n", resolve), InvalidArgument);
  EXPECT_THROW(parse_seed("name: a\nspace: unit-interval.space\nsequence:\n", resolve), InvalidArgument);
  EXPECT_THROW(parse_seed("name: a\nsequence:\n1/2\n", resolve), InvalidArgument);
  EXPECT_THROW(parse_seed("name: a\nspace: unit-interval.space\nsequence:\n1/2\n1/3\n3/4 junk\n", resolve), Error);
  EXPECT_THROW(
      parse_seed("name: a\nspace: unit-interval.space\noutsiders: {1/3}\nsequence:\n1/2\n1/3\n", resolve),
      InvalidArgument);
}

TEST(HarmonicGapTest, AgreesWithBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(1, 60), den(1, 60);
  for (int trial = 0; trial < 400; ++trial) {
    Scalar x = Scalar(num(rng)) / den(rng);
    if (x > 1) x = 1 / x;
    EXPECT_EQ(harmonic_gap(x), gap_oracle(x)) << to_string(x);
  }
  EXPECT_EQ(harmonic_gap(q("1/7")), 0);
  EXPECT_EQ(harmonic_gap(q("2/5")), q("1/15"));
  EXPECT_EQ(harmonic_gap(1), q("1/2"));
}

TEST(EscapeMapTest, MemberChoicesFollowTheClosedForm) {
  // With tail bound u_j = 1/(j+2), the first admissible j after n0 solves
  // 1/(j+2) <= (1/(n0+2) - 1/(j+2)) / 2, i.e. j = 3*n0 + 4.
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  ASSERT_EQ(construction.member_choice.size(), 20u);
  for (const auto& [n0, chosen] : construction.member_choice) EXPECT_EQ(chosen, 3 * n0 + 4) << n0;
  EXPECT_EQ(construction.member_choice.front(), std::make_pair(std::size_t{0}, std::size_t{4}));
  EXPECT_EQ(construction.member_choice.back(), std::make_pair(std::size_t{19}, std::size_t{61}));
  EXPECT_FALSE(construction.prefix_relative);
}

TEST(EscapeMapTest, OutsiderChoicesFollowTheGap) {
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  ASSERT_EQ(construction.outsider_choice.size(), 10u);
  const auto& first = construction.outsider_choice.front();
  EXPECT_EQ(first.x.label, "2/5");
  EXPECT_EQ(first.gap, q("1/15"));
  EXPECT_EQ(first.chosen, 28u);
  for (const auto& c : construction.outsider_choice) {
    EXPECT_TRUE(c.gap_certified);
    // Smallest j with 1/(j+2) <= gap/2.
    std::size_t j = 0;
    while (Scalar(1) / Scalar(j + 2) > c.gap / 2) ++j;
    EXPECT_EQ(c.chosen, j) << c.x.label;
    EXPECT_EQ(construction.map.apply(c.x), seed.sequence[j]);
  }
}

TEST(EscapeMapTest, ThirtyPointSampleVerifies) {
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  auto verdict = verify_escape_map(construction, seed, seed.b);
  EXPECT_TRUE(verdict.passed);
  EXPECT_FALSE(verdict.fixed_point);
  EXPECT_TRUE(verdict.kannan.passed);
  EXPECT_EQ(verdict.kannan.pairs_checked, 870u);
  EXPECT_EQ(verdict.coverage.at(PairClass::MemberMember), 380u);
  EXPECT_EQ(verdict.coverage.at(PairClass::OutsiderOutsider), 90u);
  EXPECT_EQ(verdict.coverage.at(PairClass::Mixed), 400u);
  for (const auto& [kind, ok] : verdict.class_passed) EXPECT_TRUE(ok) << to_string(kind);
  EXPECT_STREQ(to_string(PairClass::Mixed), "outsider/member");
}

TEST(EscapeMapTest, RejectsWeightsOutsideTheOpenInterval) {
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  EXPECT_THROW(build_escape_map(seed, sample, 0), InvalidArgument);
  EXPECT_THROW(build_escape_map(seed, sample, 1), InvalidArgument);
  EXPECT_THROW(build_escape_map(seed, sample, q("-1/2")), InvalidArgument);
  EXPECT_THROW(build_escape_map(seed, std::span<const Point>(), seed.b), EmptySelector);
}

TEST(EscapeMapTest, RejectsPointsOutsideTheCarrier) {
  const auto& seed = harmonic();
  std::vector<Point> sample{Point::of_value(0)};
  EXPECT_THROW(build_escape_map(seed, sample, seed.b), PointNotInCarrier);
}

TEST(EscapeMapTest, DetectsAFixedPoint) {
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  construction.map = SelfMap::identity();
  auto verdict = verify_escape_map(construction, seed, seed.b);
  EXPECT_FALSE(verdict.passed);
  ASSERT_TRUE(verdict.fixed_point);
  EXPECT_EQ(verdict.fixed_point->label, "1/2");
}

TEST(EscapeMapTest, IndicesChosenTooEarlyBreakKannan) {
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  std::vector<std::pair<Point, Point>> table;
  for (const auto& x : sample) {
    auto n0 = seed.index_of(x);
    table.emplace_back(x, n0 ? seed.sequence[*n0 + 1] : construction.map.apply(x));
  }
  construction.map = SelfMap::table("shift", table);
  auto verdict = verify_escape_map(construction, seed, seed.b);
  EXPECT_FALSE(verdict.passed);
  EXPECT_FALSE(verdict.fixed_point);
  ASSERT_FALSE(verdict.kannan.passed);
  const auto& w = *verdict.kannan.witness;
  const Space& space = seed.space;
  const Point tx = construction.map.apply(w.x), ty = construction.map.apply(w.y);
  EXPECT_EQ(w.lhs, distance(space, tx, ty));
  EXPECT_EQ(w.rhs, seed.b * distance(space, w.x, tx) + (1 - seed.b) * distance(space, w.y, ty));
  EXPECT_GE(w.lhs, w.rhs);
  EXPECT_FALSE(verdict.class_passed.at(PairClass::Mixed));
}

TEST(EscapeMapTest, ControlSeedConverges) {
  auto control = shipped_seed("harmonic-control.seed");
  auto sample = control.default_sample();
  EXPECT_THROW(build_escape_map(control, sample, control.b), ZeroDistanceToRange);
  // Without the limit point the construction goes through.
  std::vector<Point> without(sample.begin(), sample.end() - 2);
  without.push_back(sample.back());
  EXPECT_NO_THROW(build_escape_map(control, without, control.b));
}

TEST(EscapeMapTest, UncertifiedSeedIsPrefixRelative) {
  CauchySeed seed = harmonic();
  seed.certificate.reset();
  auto sample = seed.default_sample();
  auto construction = build_escape_map(seed, sample, seed.b);
  EXPECT_TRUE(construction.prefix_relative);
  const auto certified = build_escape_map(harmonic(), sample, seed.b);
  for (std::size_t k = 0; k < construction.member_choice.size(); ++k) {
    EXPECT_LE(construction.member_choice[k].second, certified.member_choice[k].second);
  }
  for (const auto& bound : construction.bounds_used) {
    EXPECT_FALSE(bound.tail);
    EXPECT_LT(bound.prefix_max, bound.target);
  }
}

TEST(EscapeMapTest, CertificateContradictedByThePrefix) {
  CauchySeed seed = harmonic();
  seed.certificate->tail_upper = [](std::size_t, const Point& u) { return *u.value / 100; };
  auto sample = seed.default_sample();
  EXPECT_THROW(build_escape_map(seed, sample, seed.b), InvalidCertificate);

  CauchySeed gap = harmonic();
  gap.certificate->range_gap = [](const Point&) -> std::optional<Scalar> { return q("1/2"); };
  std::vector<Point> outsider{Point::of_value(q("2/5"))};
  EXPECT_THROW(build_escape_map(gap, outsider, gap.b), InvalidCertificate);
}

TEST(EscapeMapTest, ShortSeedHasNoAdmissibleIndex) {
  CauchySeed seed = harmonic();
  seed.sequence.resize(10);
  std::vector<Point> sample{seed.sequence[5]};
  EXPECT_THROW(build_escape_map(seed, sample, seed.b), NoAdmissibleIndex);
  std::vector<Point> early{seed.sequence[1]};
  EXPECT_NO_THROW(build_escape_map(seed, early, seed.b));
}

TEST(EscapeMapTest, WeightAboveHalfBreaksTheSwappedOrder) {
  // For a pair whose first point receives the later index, the member bound
  // only gives rho(Tx, Ty) < b*rho(y, Ty), which is below the Kannan right
  // side only when b <= c.
  const auto& seed = harmonic();
  auto sample = seed.default_sample();
  const Scalar b = q("3/4");
  auto construction = build_escape_map(seed, sample, b);
  auto verdict = verify_escape_map(construction, seed, b);
  EXPECT_FALSE(verdict.passed);
  EXPECT_FALSE(verdict.fixed_point);
  ASSERT_TRUE(verdict.kannan.witness);
  const auto& w = *verdict.kannan.witness;
  EXPECT_EQ(w.x.label, "1/7");
  EXPECT_EQ(w.y.label, "1/2");
  // 1/7 -> 1/17 and 1/2 -> 1/5.
  EXPECT_EQ(construction.map.apply(w.x).label, "1/17");
  EXPECT_EQ(construction.map.apply(w.y).label, "1/5");
  EXPECT_EQ(w.lhs, q("1/5") - q("1/17"));
  EXPECT_EQ(w.rhs, b * (q("1/7") - q("1/17")) + (1 - b) * (q("1/2") - q("1/5")));
  EXPECT_EQ(w.rhs, q("657/4760"));
  EXPECT_FALSE(verdict.class_passed.at(PairClass::MemberMember));
}

TEST(EscapePropertyTest, RandomSamplesAndWeightsVerify) {
  std::mt19937_64 rng(17);
  const std::vector<Scalar> weights{q("1/8"), q("1/4"), q("1/3"), q("1/2"), q("2/3"), q("3/4"), q("7/8")};
  CauchySeed seed = harmonic();
  seed.certificate->range_gap = [](const Point& x) -> std::optional<Scalar> { return harmonic_gap(*x.value); };
  std::uniform_int_distribution<int> num(1, 30), den(2, 30), member(0, 15), count(1, 6);
  for (int trial = 0; trial < 70; ++trial) {
    std::vector<Point> sample;
    for (int k = count(rng); k > 0; --k) {
      Point p = seed.sequence[static_cast<std::size_t>(member(rng))];
      if (std::find(sample.begin(), sample.end(), p) == sample.end()) sample.push_back(p);
    }
    for (int k = count(rng); k > 0; --k) {
      Scalar x = Scalar(num(rng)) / den(rng);
      if (x > 1 || harmonic_gap(x) == 0 || harmonic_gap(x) < q("1/20")) continue;
      Point p = Point::of_value(x);
      if (std::find(sample.begin(), sample.end(), p) == sample.end()) sample.push_back(p);
    }
    const Scalar& b = weights[static_cast<std::size_t>(trial) % weights.size()];
    // Building with the smaller weight keeps both orders of every pair inside the bound.
    const Scalar build_weight = std::min(b, 1 - b);
    auto construction = build_escape_map(seed, sample, build_weight);
    auto verdict = verify_escape_map(construction, seed, b);
    EXPECT_TRUE(verdict.passed) << "trial " << trial << " b=" << to_string(b);
    std::size_t total = 0;
    for (const auto& [kind, n] : verdict.coverage) total += n;
    EXPECT_EQ(total, sample.size() * (sample.size() - 1));
  }
}
