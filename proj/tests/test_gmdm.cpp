#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "test_helpers.hpp"
#include "trplan/gmdm.hpp"
#include "trplan/oracle.hpp"

using namespace trplan;
using trplan::test::kLimits;
using trplan::test::position_error;

namespace {

MotionPrimitive arc(SegmentKind k, double sigma, double radius, double speed) {
  return {k, sigma, speed, radius};
}

Pose chain(const Pose& start, PathType type, const SegmentParams& p, double r1, double r2,
           double r3) {
  const auto kinds = segment_kinds(type);
  const double radii[3] = {r1, r2, r3};
  Pose q = start;
  for (int i = 0; i < 3; ++i) q = apply_primitive(q, {kinds[i], p[i], 1.0, radii[i]});
  return q;
}

void expect_pose_near(const Pose& a, const Pose& b, double tol) {
  EXPECT_LE(position_error(a, b), tol) << oracle::describe(a) << " vs " << oracle::describe(b);
  EXPECT_LE(angle_distance(a.theta, b.theta), tol)
      << oracle::describe(a) << " vs " << oracle::describe(b);
}

}  // namespace

TEST(ApplyPrimitive, ZeroLengthStraightIsIdentity) {
  const Pose p = apply_primitive({0, 0, 0}, {SegmentKind::S, 0.0, 1.0, 0.0});
  EXPECT_EQ(p, (Pose{0, 0, 0}));
}

TEST(ApplyPrimitive, QuarterLeftTurnOnUnitCircle) {
  const Pose p = apply_primitive({0, 0, 0}, arc(SegmentKind::L, kPi / 2, 1.0, 0.5));
  EXPECT_NEAR(p.x, 1.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
  EXPECT_NEAR(p.theta, kPi / 2, 1e-15);
}

TEST(ApplyPrimitive, RightArcMatchesIntegratedKinematics) {
  const double u_max = 0.5;
  const MotionPrimitive m = arc(SegmentKind::R, 0.7, 1.6, 1.6 * u_max);
  const Pose start{2, 3, kPi / 4};
  const Pose closed = apply_primitive(start, m);
  const Pose integrated = oracle::integrate_primitive(start, m, 1e-4);
  expect_pose_near(closed, integrated, 1e-6);
  EXPECT_NEAR(closed.theta, normalize_angle(kPi / 4 - 0.7), 1e-15);
}

TEST(ApplyPrimitive, HeadingAlwaysNormalized) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const Pose p = apply_primitive(test::random_pose(rng), test::random_primitive(rng, kLimits));
    EXPECT_GE(p.theta, 0.0);
    EXPECT_LT(p.theta, kTwoPi);
  }
}

TEST(SolveCsc, IdentityConnection) {
  const auto p = solve_csc({0, 0, 0}, {0, 0, 0}, PathType::LSL, 1, 1);
  ASSERT_TRUE(p);
  EXPECT_EQ(*p, (SegmentParams{0, 0, 0}));
}

TEST(SolveCsc, CollinearStraightLine) {
  const auto p = solve_csc({0, 0, 0}, {5, 0, 0}, PathType::LSL, 1, 1);
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], 0.0, 1e-15);
  EXPECT_NEAR((*p)[1], 5.0, 1e-15);
  EXPECT_NEAR((*p)[2], 0.0, 1e-15);
}

TEST(SolveCsc, SidestepLslAgreesWithBothOracles) {
  const Pose a{0, 0, 0}, b{0, 4, 0};
  const auto p = solve_csc(a, b, PathType::LSL, 1, 1);
  ASSERT_TRUE(p);
  EXPECT_NEAR((*p)[0], kPi / 2, 1e-12);
  EXPECT_NEAR((*p)[1], 4.0, 1e-12);
  EXPECT_NEAR((*p)[2], 3 * kPi / 2, 1e-12);

  const std::array<MotionPrimitive, 3> segs = {arc(SegmentKind::L, (*p)[0], 1, 0.5),
                                               MotionPrimitive{SegmentKind::S, (*p)[1], 0.5, 0},
                                               arc(SegmentKind::L, (*p)[2], 1, 0.5)};
  expect_pose_near(oracle::integrate_path(a, segs, 1e-4), b, 1e-6);
  const auto ref = oracle::dubins_word_length(a, b, 1.0, PathType::LSL);
  ASSERT_TRUE(ref);
  EXPECT_NEAR(*ref, 4 + kTwoPi, 1e-12);
  EXPECT_NEAR((*p)[0] + (*p)[1] + (*p)[2], *ref, 1e-12);
}

TEST(SolveCsc, InnerTangentNeedsSeparatedCircles) {
  // Left circle about (0, 1), right circle about (0, -0.5): 1.5 apart < 1 + 1.
  EXPECT_FALSE(solve_csc({0, 0, 0}, {0, 0.5, 0}, PathType::LSR, 1, 1));
  EXPECT_TRUE(solve_csc({0, 0, 0}, {0, 0.5, 0}, PathType::LSL, 1, 1));
}

TEST(SolveCsc, UnequalRadiiChain) {
  Rng rng(11);
  int solved = 0;
  for (int i = 0; i < 2000; ++i) {
    const Pose a = test::random_pose(rng, 0, 10), b = test::random_pose(rng, 0, 10);
    const double r1 = rng.uniform(1, 2), r3 = rng.uniform(1, 2);
    for (PathType t : {PathType::LSL, PathType::LSR, PathType::RSL, PathType::RSR}) {
      if (auto p = solve_csc(a, b, t, r1, r3)) {
        ++solved;
        EXPECT_GE((*p)[1], 0.0);
        for (int k : {0, 2}) {
          EXPECT_GE((*p)[k], 0.0);
          EXPECT_LT((*p)[k], kTwoPi);
        }
        expect_pose_near(chain(a, t, *p, r1, 0, r3), b, 1e-9);
      }
    }
  }
  EXPECT_GT(solved, 6000);
}

TEST(SolveCcc, IdentityClosesLoop) {
  const auto sols = solve_ccc({0, 0, 0}, {0, 0, 0}, PathType::LRL, 1, 1, 1);
  ASSERT_FALSE(sols.empty());
  for (const auto& p : sols) expect_pose_near(chain({0, 0, 0}, PathType::LRL, p, 1, 1, 1), {0, 0, 0}, 1e-9);
}

TEST(SolveCcc, RlrMatchesClassicalWord) {
  const Pose a{0, 0, 0}, b{2, 0, kPi};
  const auto sols = solve_ccc(a, b, PathType::RLR, 1, 1, 1);
  ASSERT_FALSE(sols.empty());
  const auto ref = oracle::dubins_word_length(a, b, 1.0, PathType::RLR);
  ASSERT_TRUE(ref);
  double best_gap = 1e9;
  for (const auto& p : sols) {
    expect_pose_near(chain(a, PathType::RLR, p, 1, 1, 1), b, 1e-9);
    best_gap = std::min(best_gap, std::abs(p[0] + p[1] + p[2] - *ref));
  }
  EXPECT_LT(best_gap, 1e-9);
}

TEST(SolveCcc, FarPosesHaveNoSolution) {
  EXPECT_TRUE(solve_ccc({0, 0, 0}, {100, 0, 0}, PathType::LRL, 1, 1, 1).empty());
}

TEST(SolveCcc, UnequalRadiiChainAndTangency) {
  Rng rng(5);
  int solved = 0;
  for (int i = 0; i < 3000; ++i) {
    const Pose a = test::random_pose(rng, 0, 4), b = test::random_pose(rng, 0, 4);
    const double r1 = rng.uniform(1, 2), r2 = rng.uniform(1, 2), r3 = rng.uniform(1, 2);
    for (PathType t : {PathType::LRL, PathType::RLR}) {
      const auto sols = solve_ccc(a, b, t, r1, r2, r3);
      EXPECT_LE(sols.size(), 2u);
      for (const auto& p : sols) {
        ++solved;
        expect_pose_near(chain(a, t, p, r1, r2, r3), b, 1e-9);
      }
    }
  }
  EXPECT_GT(solved, 1000);
}

TEST(Candidates, CollinearGivesStraightLslPerSpeed) {
  const State a{{0, 0, 0}, 1.0}, b{{10, 0, 0}, 1.0};
  const auto cands = enumerate_candidates(a, b, kLimits, 3);
  std::vector<GmdmPath> lsl;
  std::copy_if(cands.begin(), cands.end(), std::back_inserter(lsl),
               [](const GmdmPath& p) { return p.type == PathType::LSL; });
  ASSERT_EQ(lsl.size(), 3u);
  const double speeds[3] = {0.5, 0.75, 1.0};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(lsl[i].segments[0].sigma, 0.0, 1e-15);
    EXPECT_NEAR(lsl[i].segments[1].sigma, 10.0, 1e-15);
    EXPECT_NEAR(lsl[i].segments[2].sigma, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(lsl[i].segments[1].speed, speeds[i]);
    EXPECT_NEAR(lsl[i].duration, 10.0 / speeds[i], 1e-12);
  }
}

TEST(Candidates, SameStateIsDegenerate) {
  const State a{{1, 2, 0.3}, 0.7};
  EXPECT_THROW(enumerate_candidates(a, a, kLimits, 3), DegenerateQuery);
}

TEST(Candidates, BoundarySpeedsAndOrder) {
  const State a{{0, 0, 0}, 0.5}, b{{3, 3, kPi / 2}, 1.0};
  const auto cands = enumerate_candidates(a, b, kLimits, 3);
  ASSERT_FALSE(cands.empty());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const GmdmPath& p = cands[i];
    EXPECT_EQ(p.segments[0].speed, a.v);
    EXPECT_EQ(p.segments[2].speed, b.v);
    EXPECT_DOUBLE_EQ(p.segments[0].radius, 1.0);
    EXPECT_DOUBLE_EQ(p.segments[2].radius, 2.0);
    if (i > 0) {
      EXPECT_LE(static_cast<int>(cands[i - 1].type), static_cast<int>(p.type));
    }
    expect_pose_near(chained_end(p), b.pose, 1e-9);
  }
}

TEST(Candidates, FastestMatchesDenseSweep) {
  const State a{{0, 0, 0}, 0.5}, b{{3, 3, kPi / 2}, 1.0};
  const auto cands = enumerate_candidates(a, b, kLimits, 3);
  double fastest = kTwoPi * 1e3;
  for (const auto& c : cands) fastest = std::min(fastest, c.duration);

  // k = 0 in a huge empty map turns the oracle's joint cost into pure time.
  const Workspace open({-1e3, -1e3, 1e3, 1e3}, {});
  const RiskParams time_only{6.0, 0.0, 4};
  const double same_grid = oracle::exhaustive_joint_cost(a, b, kLimits, 3, open, time_only, false);
  const double dense = oracle::exhaustive_joint_cost(a, b, kLimits, 101, open, time_only, false);
  EXPECT_NEAR(same_grid, fastest, 1e-9);
  EXPECT_LE(dense, fastest + 1e-9);
  // The 3-speed grid is 50 points apart on the 101 grid; the gap stays a
  // small fraction of the trip.
  EXPECT_LT(fastest - dense, 0.1 * fastest);
}

TEST(Candidates, MiddleSpeedGrid) {
  EXPECT_EQ(middle_speeds(kLimits, 3), (std::vector<double>{0.5, 0.75, 1.0}));
  EXPECT_EQ(middle_speeds(kLimits, 2), (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(middle_speeds(kLimits, 1), (std::vector<double>{0.75}));
  EXPECT_THROW(middle_speeds(kLimits, 0), BadCount);
}

TEST(PointAt, EndsAndMidpoint) {
  const State a{{0, 0, 0}, 0.5}, b{{0, 4, 0}, 0.5};
  const auto cands = enumerate_candidates(a, b, kLimits, 3);
  const auto it = std::find_if(cands.begin(), cands.end(),
                               [](const GmdmPath& p) { return p.type == PathType::LSL; });
  ASSERT_NE(it, cands.end());
  const GmdmPath& p = *it;
  EXPECT_NEAR(p.length, 4 + kTwoPi, 1e-12);
  EXPECT_EQ(point_at(p, 0.0), a);
  const State e = point_at(p, p.length);
  expect_pose_near(e.pose, b.pose, 1e-9);
  EXPECT_EQ(e.v, b.v);

  const State mid = point_at(p, p.length / 2);
  // Oracle: integrate the first arc fully, then part of the straight.
  Pose q = oracle::integrate_primitive(a.pose, p.segments[0], 1e-4);
  MotionPrimitive part = p.segments[1];
  part.sigma = p.length / 2 - p.segments[0].length();
  q = oracle::integrate_primitive(q, part, 1e-4);
  expect_pose_near(mid.pose, q, 1e-6);
  EXPECT_NEAR(mid.pose.x, 1.0, 1e-12);
  EXPECT_NEAR(mid.pose.theta, kPi / 2, 1e-12);
  EXPECT_EQ(mid.v, p.segments[1].speed);

  EXPECT_THROW(point_at(p, -0.1), OutOfRange);
  EXPECT_THROW(point_at(p, p.length + 0.1), OutOfRange);
}

TEST(PointAt, JunctionBelongsToEarlierSegment) {
  const State a{{0, 0, 0}, 0.5}, b{{0, 4, 0}, 0.5};
  const auto cands = enumerate_candidates(a, b, kLimits, 3);
  const GmdmPath& fast = cands[2];  // LSL, middle at v_max
  ASSERT_EQ(fast.type, PathType::LSL);
  EXPECT_EQ(point_at(fast, fast.segments[0].length()).v, 0.5);
  EXPECT_EQ(point_at(fast, fast.segments[0].length() + 1e-9).v, 1.0);
}

TEST(Interpolate, CountsAndSpacing) {
  const State a{{0, 0, 0}, 1.0}, b{{9, 0, 0}, 1.0};
  const GmdmPath p = enumerate_candidates(a, b, kLimits, 2)[1];
  ASSERT_EQ(p.type, PathType::LSL);
  ASSERT_NEAR(p.length, 9.0, 1e-12);

  const auto two = interpolate_states(p, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], a);
  EXPECT_EQ(two[1], b);

  const auto four = interpolate_states(p, 4);
  ASSERT_EQ(four.size(), 4u);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(four[j].pose.x, 3.0 * j, 1e-12);
  EXPECT_THROW(interpolate_states(p, 1), BadCount);
}

TEST(Interpolate, StatesCarrySegmentSpeed) {
  // Slow turns into a fast straight: the interpolated speeds follow the segments.
  const State a{{0, 0, kPi / 2}, 0.5}, b{{8, 1, 1.0}, 0.5};
  for (const GmdmPath& p : enumerate_candidates(a, b, kLimits, 3)) {
    const auto states = interpolate_states(p, 4);
    for (int j = 0; j < 4; ++j) {
      const double s = p.length * j / 3.0;
      double speed = p.segments[2].speed;
      if (s <= p.segments[0].length()) {
        speed = p.segments[0].speed;
      } else if (s <= p.segments[0].length() + p.segments[1].length()) {
        speed = p.segments[1].speed;
      }
      if (j == 3) speed = b.v;
      EXPECT_EQ(states[j].v, speed) << to_string(p.type) << " j=" << j;
    }
  }
}

TEST(Properties, DubinsReductionOnSample) {
  Rng rng(2024);
  const VehicleLimits one{1.0, 1.0, 1.0};  // radius 1 everywhere
  for (int i = 0; i < 2000; ++i) {
    const State a{test::random_pose(rng), 1.0}, b{test::random_pose(rng), 1.0};
    double best = 1e18;
    for (const auto& c : enumerate_candidates(a, b, one, 1)) best = std::min(best, c.length);
    EXPECT_NEAR(best, oracle::dubins_reference(a.pose, b.pose, 1.0), 1e-9);
  }
}

TEST(Properties, ChainingAllCandidates) {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const State a = test::random_state(rng, kLimits, 0, 8), b = test::random_state(rng, kLimits, 0, 8);
    for (const auto& c : enumerate_candidates(a, b, kLimits, 3)) {
      expect_pose_near(chained_end(c), b.pose, 1e-9);
      double len = 0, dur = 0;
      for (const auto& m : c.segments) {
        len += m.length();
        dur += m.length() / m.speed;
      }
      EXPECT_NEAR(c.length, len, 1e-12);
      EXPECT_NEAR(c.duration, dur, 1e-12);
    }
  }
}

TEST(Properties, FasterStraightNeverSlower) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const State a = test::random_state(rng, kLimits), b = test::random_state(rng, kLimits);
    for (GmdmPath c : enumerate_candidates(a, b, kLimits, 3)) {
      if (!is_csc(c.type)) continue;
      const double before = c.duration;
      c = make_path(c.type, c.start, c.end,
                    {c.segments[0].sigma, c.segments[1].sigma, c.segments[2].sigma},
                    {c.segments[0].speed, std::min(kLimits.v_max, c.segments[1].speed * 1.2),
                     c.segments[2].speed},
                    kLimits.u_max);
      EXPECT_LE(c.duration, before + 1e-12);
    }
  }
}

TEST(Limits, RadiusAndAdmissibleSet) {
  EXPECT_DOUBLE_EQ(kLimits.r_min(), 1.0);
  EXPECT_DOUBLE_EQ(kLimits.r_max(), 2.0);
  EXPECT_TRUE(kLimits.admissible(1.0, 0.5));
  EXPECT_FALSE(kLimits.admissible(1.01, 0.5));
  EXPECT_TRUE(kLimits.admissible(-0.5, 1.0));
  EXPECT_FALSE(kLimits.admissible(0.0, 1.1));
  EXPECT_LT(kLimits.radius_for(0.6), kLimits.radius_for(0.7));
}
