#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "astroknn/geometry.hpp"
#include "astroknn/layout_io.hpp"

namespace astroknn {
namespace {

constexpr int kCases = 200;

TEST(BuildHexSwarm, OneRingHasSevenAstrobots) {
  const auto layout = build_hex_swarm(1, std::nullopt, 22.4, 11.2, 11.2);
  ASSERT_EQ(layout.size(), 7u);
  EXPECT_EQ(layout.degree(0), 6);
  for (int i = 1; i < 7; ++i) EXPECT_EQ(layout.degree(i), 3) << "ring astrobot " << i;
}

TEST(BuildHexSwarm, FullSizes) {
  EXPECT_EQ(build_hex_swarm(5, std::nullopt, 22.4, 11.2, 11.2).size(), 91u);
  EXPECT_EQ(build_hex_swarm(0, std::nullopt, 22.4, 11.2, 11.2).size(), 1u);
  EXPECT_EQ(hex_size(13), 547u);
}

TEST(BuildHexSwarm, TrimsOuterRingTo116) {
  const auto full = build_hex_swarm(6, std::nullopt, 22.4, 11.2, 11.2);
  const auto trimmed = build_hex_swarm(6, 116, 22.4, 11.2, 11.2);
  ASSERT_EQ(full.size(), 127u);
  ASSERT_EQ(trimmed.size(), 116u);

  // Everything inside ring 6 survives; exactly 11 ring-6 sites are dropped.
  // Ring 5 reaches at most 5 pitches from the center, ring 6 at least 6 * sqrt(3) / 2 ~ 5.2.
  auto ring6 = [](const SwarmLayout& l) {
    return std::count_if(l.astrobots().begin(), l.astrobots().end(),
                         [](const AstrobotSpec& a) { return norm(a.center) > 5.1 * 22.4; });
  };
  EXPECT_EQ(ring6(full), 36);
  EXPECT_EQ(ring6(full) - ring6(trimmed), 11);

  // The first removed site is the one at angle 0 on the outermost ring.
  const bool has_angle_zero = std::any_of(trimmed.astrobots().begin(), trimmed.astrobots().end(), [](const auto& a) {
    return std::abs(a.center.y) < 1e-9 && std::abs(a.center.x - 6 * 22.4) < 1e-9;
  });
  EXPECT_FALSE(has_angle_zero);
}

TEST(BuildHexSwarm, RejectsCountAboveFullSize) {
  try {
    build_hex_swarm(12, 487, 22.4, 11.2, 11.2);
    FAIL() << "expected insufficient rings";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "insufficient rings");
  }
  EXPECT_EQ(build_hex_swarm(13, 487, 22.4, 11.2, 11.2).size(), 487u);
}

TEST(BuildHexSwarm, RejectsArmsTooShortForPitch) {
  EXPECT_THROW(build_hex_swarm(1, std::nullopt, 22.4, 5.0, 5.0), Error);
  EXPECT_THROW(build_hex_swarm(1, std::nullopt, 0.0, 11.2, 11.2), Error);
}

TEST(Neighborhood, CenterOfOneRing) {
  const auto layout = build_hex_swarm(1, std::nullopt, 22.4, 11.2, 11.2);
  const auto nb = neighborhood_of(layout, 0);
  EXPECT_EQ(nb.member_ids, (std::vector<int>{0, 1, 2, 3, 4, 5, 6}));
}

TEST(Neighborhood, CornerWithTwoNeighbors) {
  // Triangle plus a pendant; astrobot 0 has exactly two neighbors.
  const double p = 22.4;
  const double h = p * std::sqrt(3.0) / 2.0;
  std::vector<AstrobotSpec> bots = {{0, {0, 0}, 11.2, 11.2}, {1, {p, 0}, 11.2, 11.2}, {2, {p / 2, h}, 11.2, 11.2},
                                    {3, {2 * p, 0}, 11.2, 11.2}};
  const auto layout = SwarmLayout::from_centers(p, bots);
  const auto nb = neighborhood_of(layout, 0);
  EXPECT_EQ(nb.member_ids, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(nb.member_ids.size(), 3u);
}

TEST(Neighborhood, SingleAstrobot) {
  const auto layout = build_hex_swarm(0, std::nullopt, 22.4, 11.2, 11.2);
  EXPECT_EQ(neighborhood_of(layout, 0).member_ids, std::vector<int>{0});
  EXPECT_THROW(neighborhood_of(layout, 1), Error);
  EXPECT_THROW(neighborhood_of(layout, -1), Error);
}

TEST(LayoutProperties, SymmetryAndDegreeBound) {
  for (int rings = 0; rings <= 7; ++rings) {
    const auto full = hex_size(rings);
    for (std::size_t count = 1; count <= full; count += (full > 40 ? 3 : 1)) {
      const auto layout = build_hex_swarm(rings, count, 22.4, 11.2, 11.2);
      ASSERT_EQ(layout.size(), count);
      for (std::size_t i = 0; i < layout.size(); ++i) {
        const int id = static_cast<int>(i);
        EXPECT_LE(layout.degree(id), 6);
        for (int j : layout.neighbors(id)) {
          const auto& back = layout.neighbors(j);
          EXPECT_TRUE(std::find(back.begin(), back.end(), id) != back.end());
        }
        const auto nb = neighborhood_of(layout, id);
        EXPECT_GE(nb.member_ids.size(), 1u);
        EXPECT_LE(nb.member_ids.size(), 7u);
        EXPECT_EQ(nb.member_ids.front(), id);
      }
    }
  }
  const auto two = build_hex_swarm(2, std::nullopt, 22.4, 11.2, 11.2);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(two.degree(i), 6) << "interior astrobot " << i;
}

TEST(SampleTarget, EqualArmsCoverFullDisc) {
  const AstrobotSpec spec{0, {1.0, -2.0}, 11.2, 11.2};
  Rng rng(3);
  double min_r = 1e9;
  for (int i = 0; i < 20000; ++i) min_r = std::min(min_r, norm(sample_target(spec, rng) - spec.center));
  EXPECT_LT(min_r, 0.5);
}

TEST(SampleTarget, AnnulusContainmentProperty) {
  Rng gen(11);
  for (int c = 0; c < kCases; ++c) {
    const AstrobotSpec spec{0, {uniform01(gen) * 100 - 50, uniform01(gen) * 100 - 50}, 1.0 + 10 * uniform01(gen),
                            1.0 + 10 * uniform01(gen)};
    Rng rng(c);
    for (int s = 0; s < 50; ++s) {
      const double d = norm(sample_target(spec, rng) - spec.center);
      EXPECT_GE(d, spec.inner_radius() - 1e-9);
      EXPECT_LE(d, spec.outer_radius() + 1e-9);
    }
  }
}

TEST(SampleTarget, AreaUniform) {
  // Equal-area annuli receive equal shares: split the disc at r = R / sqrt(2).
  const AstrobotSpec spec{0, {0, 0}, 11.2, 11.2};
  Rng rng(5);
  int inner = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) inner += norm(sample_target(spec, rng)) < spec.outer_radius() / std::sqrt(2.0);
  EXPECT_NEAR(static_cast<double>(inner) / n, 0.5, 0.01);
}

TEST(SampleTarget, DeterministicForFixedSeed) {
  const AstrobotSpec spec{0, {0, 0}, 11.2, 8.0};
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_target(spec, a), sample_target(spec, b));
}

TEST(InverseKinematics, Examples) {
  const AstrobotSpec spec{0, {3.0, 4.0}, 1.0, 1.0};
  auto extended = inverse_kinematics(spec, spec.center + Vec2{2.0, 0.0});
  EXPECT_NEAR(extended.phi, 0.0, 1e-7);
  EXPECT_NEAR(extended.theta, 0.0, 1e-7);

  auto folded = inverse_kinematics(spec, spec.center);
  EXPECT_DOUBLE_EQ(folded.phi, M_PI);
  EXPECT_DOUBLE_EQ(folded.theta, 0.0);

  auto right = inverse_kinematics(spec, spec.center + Vec2{0.0, std::sqrt(2.0)});
  EXPECT_NEAR(right.phi, M_PI / 2, 1e-12);

  try {
    inverse_kinematics(spec, spec.center + Vec2{2.5, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "out of workspace");
  }
  const AstrobotSpec uneven{0, {0, 0}, 2.0, 1.0};
  EXPECT_THROW(inverse_kinematics(uneven, {0.5, 0.0}), Error);
}

TEST(InverseKinematics, ForwardOfInverseIsIdentityProperty) {
  Rng gen(17);
  for (int c = 0; c < kCases * 5; ++c) {
    const AstrobotSpec spec{0, {uniform01(gen) * 50, uniform01(gen) * 50}, 2.0 + 10 * uniform01(gen),
                            2.0 + 10 * uniform01(gen)};
    const Vec2 target = sample_target(spec, gen);
    const ArmPose pose = inverse_kinematics(spec, target);
    EXPECT_GE(pose.phi, 0.0);
    EXPECT_LE(pose.phi, M_PI);
    const ArmChain chain = arm_chain(spec, pose);
    EXPECT_LE(norm(chain[2] - target), 1e-9);
    EXPECT_NEAR(norm(chain[1] - spec.center), spec.l1, 1e-9);
    EXPECT_NEAR(norm(chain[2] - chain[1]), spec.l2, 1e-9);
  }
}

TEST(ArmChain, FoldedAndExtended) {
  const AstrobotSpec spec{0, {2.0, 1.0}, 1.0, 1.0};
  const auto folded = arm_chain(spec, ArmPose::folded());
  EXPECT_EQ(folded[0], spec.center);
  EXPECT_NEAR(folded[1].x, 3.0, 1e-15);
  EXPECT_NEAR(folded[1].y, 1.0, 1e-15);
  EXPECT_NEAR(norm(folded[2] - spec.center), 0.0, 1e-15);

  const auto straight = arm_chain(spec, {0.7, 0.0});
  EXPECT_NEAR(norm(straight[2] - straight[0]), 2.0, 1e-12);
  EXPECT_NEAR(cross(straight[1] - straight[0], straight[2] - straight[0]), 0.0, 1e-12);
}

TEST(MinChainDistance, Examples) {
  const ArmChain a{Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 0}};
  const ArmChain b{Vec2{0, 3}, Vec2{1, 3}, Vec2{1, 3}};
  EXPECT_DOUBLE_EQ(min_chain_distance(a, b), 3.0);
  EXPECT_DOUBLE_EQ(segment_distance({0, 0}, {1, 0}, {0, 3}, {1, 3}), 3.0);
  EXPECT_DOUBLE_EQ(segment_distance({-1, 0}, {1, 0}, {0, -1}, {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(segment_distance({0, 0}, {2, 0}, {1, 0}, {3, 0}), 0.0);  // collinear overlap
  EXPECT_DOUBLE_EQ(segment_distance({0, 0}, {1, 0}, {2, 0}, {3, 0}), 1.0);  // collinear disjoint
}

// Brute-force oracle: dense sampling of both segments.
double sampled_segment_distance(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1, int samples) {
  std::vector<Vec2> qs(samples);
  for (int j = 0; j < samples; ++j) qs[j] = q0 + (static_cast<double>(j) / (samples - 1)) * (q1 - q0);
  double best2 = 1e300;
  for (int i = 0; i < samples; ++i) {
    const Vec2 p = p0 + (static_cast<double>(i) / (samples - 1)) * (p1 - p0);
    for (const Vec2& q : qs) {
      const double dx = p.x - q.x, dy = p.y - q.y;
      best2 = std::min(best2, dx * dx + dy * dy);
    }
  }
  return std::sqrt(best2);
}

TEST(MinChainDistance, AgreesWithSamplingOracle) {
  Rng gen(23);
  auto pt = [&] { return Vec2{2.0 * uniform01(gen) - 1.0, 2.0 * uniform01(gen) - 1.0}; };
  for (int c = 0; c < 12; ++c) {
    const Vec2 p0 = pt(), p1 = pt(), q0 = pt(), q1 = pt();
    EXPECT_NEAR(segment_distance(p0, p1, q0, q1), sampled_segment_distance(p0, p1, q0, q1, 10000), 1e-3)
        << "case " << c;
  }
}

TEST(MinChainDistance, SymmetricAndNonNegativeProperty) {
  Rng gen(29);
  const AstrobotSpec a{0, {0, 0}, 11.2, 11.2};
  const AstrobotSpec b{1, {22.4, 0}, 11.2, 11.2};
  for (int c = 0; c < kCases * 5; ++c) {
    const auto ca = arm_chain(a, inverse_kinematics(a, sample_target(a, gen)));
    const auto cb = arm_chain(b, inverse_kinematics(b, sample_target(b, gen)));
    const double d = min_chain_distance(ca, cb);
    EXPECT_GE(d, 0.0);
    EXPECT_EQ(d, min_chain_distance(cb, ca));
  }
}

TEST(LayoutJson, RoundTripIsBitExact) {
  const auto layout = build_hex_swarm(6, 116, 22.4, 11.2, 11.2);
  const std::string text = layout_to_json(layout);
  const SwarmLayout back = layout_from_json(text);
  EXPECT_EQ(back, layout);
  EXPECT_EQ(layout_to_json(back), text);
  EXPECT_EQ(layout_fingerprint(back), layout_fingerprint(layout));
  EXPECT_NE(layout_fingerprint(layout), layout_fingerprint(build_hex_swarm(6, 115, 22.4, 11.2, 11.2)));
}

TEST(LayoutJson, RejectsAsymmetricGraph) {
  const std::string text =
      R"({"pitch":22.4,"astrobots":[{"id":0,"x":0,"y":0,"l1":11.2,"l2":11.2},{"id":1,"x":22.4,"y":0,"l1":11.2,"l2":11.2}],"neighbors":{"0":[1],"1":[]}})";
  EXPECT_THROW(layout_from_json(text), Error);
  EXPECT_THROW(layout_from_json("{not json"), Error);
}

}  // namespace
}  // namespace astroknn
