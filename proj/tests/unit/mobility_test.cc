#include <gtest/gtest.h>

#include <cmath>

#include "aeronet/error.h"
#include "aeronet/mobility/mobility.h"
#include "support/paths.h"

namespace aeronet {
namespace {

MobilitySpec RandomWaypoint() {
  MobilitySpec spec;
  spec.kind = MobilityKind::kRandomWaypoint3D;
  spec.bounds = Box{{0, 0, 50}, {1000, 600, 150}};
  return spec;
}

TEST(Mobility, MovingArrivesExactlyAndHovers) {
  const MobilitySpec spec = RandomWaypoint();
  RngStream rng(1, "mobility");
  KinematicState s;
  s.position = {100, 100, 100};
  s.target = {200, 100, 100};
  s.speed_mps = 10.0;
  s.velocity = {10, 0, 0};
  s.phase = FlightPhase::kMoving;
  const KinematicState next = Step(spec, s, 10.0, rng);
  EXPECT_EQ(next.position, s.target);
  EXPECT_EQ(next.phase, FlightPhase::kHovering);
  EXPECT_EQ(next.velocity, Vec3{});
  EXPECT_GE(next.hover_remaining_s, spec.hover_min_s);
  EXPECT_LE(next.hover_remaining_s, spec.hover_max_s);
}

TEST(Mobility, StaticNeverMoves) {
  MobilitySpec spec;
  RngStream rng(1, "mobility");
  const KinematicState s0 = InitialKinematics(spec, {5, 6, 7}, rng);
  KinematicState s = s0;
  for (double dt : {0.1, 1.0, 100.0}) s = Step(spec, s, dt, rng);
  EXPECT_EQ(s.position, s0.position);
}

TEST(Mobility, RandomWaypointStaysInBoundsAndUnderSpeedLimit) {
  const MobilitySpec spec = RandomWaypoint();
  RngStream rng(3, "mobility");
  KinematicState s = InitialKinematics(spec, {500, 300, 100}, rng);
  const double dt = 0.1;
  for (int i = 0; i < 100000; ++i) {
    const KinematicState next = Step(spec, s, dt, rng);
    ASSERT_TRUE(spec.bounds.Contains(next.position)) << "step " << i;
    ASSERT_LE(Distance(s.position, next.position), spec.speed_max_mps * dt + 1e-9);
    if (next.phase == FlightPhase::kMoving) {
      ASSERT_GE(next.speed_mps, spec.speed_min_mps);
      ASSERT_LE(next.speed_mps, spec.speed_max_mps);
      ASSERT_NEAR(next.velocity.Norm(), next.speed_mps, 1e-9);
    } else {
      ASSERT_EQ(next.velocity, Vec3{});
    }
    s = next;
  }
}

TEST(Mobility, SameSeedSameTrajectory) {
  const MobilitySpec spec = RandomWaypoint();
  RngStream a(9, "mobility"), b(9, "mobility");
  KinematicState sa = InitialKinematics(spec, {500, 300, 100}, a);
  KinematicState sb = InitialKinematics(spec, {500, 300, 100}, b);
  for (int i = 0; i < 5000; ++i) {
    sa = Step(spec, sa, 0.1, a);
    sb = Step(spec, sb, 0.1, b);
    ASSERT_EQ(sa.position, sb.position);
  }
}

TEST(Mobility, FixedTrajectoryLoopsAtCruiseSpeed) {
  MobilitySpec spec;
  spec.kind = MobilityKind::kFixedTrajectory;
  spec.bounds = Box{{0, 0, 0}, {200, 200, 200}};
  spec.waypoints = {{0, 0, 100}, {100, 0, 100}, {100, 100, 100}, {0, 100, 100}};
  spec.speed_min_mps = spec.speed_max_mps = 10.0;
  RngStream rng(1, "mobility");
  KinematicState s = InitialKinematics(spec, {}, rng);
  for (int i = 0; i < 400; ++i) s = Step(spec, s, 0.1, rng);
  // One 400 m loop at 10 m/s takes exactly 40 s.
  EXPECT_NEAR(s.position.x, 0.0, 1e-6);
  EXPECT_NEAR(s.position.y, 0.0, 1e-6);
}

TEST(Mobility, SquareTourDuration) {
  MobilitySpec spec;
  spec.kind = MobilityKind::kFixedTrajectory;
  spec.waypoints = {{0, 0, 50}, {100, 0, 50}, {100, 100, 50}, {0, 100, 50}};
  EXPECT_DOUBLE_EQ(TrajectoryDuration(spec, 10.0), 40.0);
}

TEST(Mobility, ShippedTourTakesAboutEightMinutes) {
  MobilitySpec spec;
  spec.kind = MobilityKind::kFixedTrajectory;
  spec.waypoints = LoadTrajectoryFile(testing::ScenarioPath("fig6_tour.txt"));
  const double length = TourLength(spec.waypoints);
  EXPECT_NEAR(length, 6000.0, 100.0);
  EXPECT_NEAR(TrajectoryDuration(spec, 12.5), 480.0, 10.0);
}

TEST(Mobility, CoincidentWaypointsAreDegenerate) {
  MobilitySpec spec;
  spec.kind = MobilityKind::kFixedTrajectory;
  spec.waypoints = {{10, 10, 50}, {10, 10, 50}};
  EXPECT_THROW(TrajectoryDuration(spec, 10.0), DegenerateTrajectory);
  spec.bounds = Box{{0, 0, 0}, {100, 100, 100}};
  EXPECT_THROW(ValidateMobility(spec), DegenerateTrajectory);
}

TEST(Mobility, ValidationRejectsBadRanges) {
  MobilitySpec spec = RandomWaypoint();
  spec.speed_min_mps = 20.0;
  EXPECT_THROW(ValidateMobility(spec), ConstraintError);
  spec = RandomWaypoint();
  spec.hover_min_s = -1.0;
  EXPECT_THROW(ValidateMobility(spec), ConstraintError);
  spec = RandomWaypoint();
  spec.kind = MobilityKind::kFixedTrajectory;
  spec.waypoints = {{0, 0, 100}, {5000, 0, 100}};
  EXPECT_THROW(ValidateMobility(spec), ConstraintError);
}

TEST(Mobility, TrajectoryFileParsing) {
  const auto pts = ParseTrajectory("# header\n0 0 100\n\n  10 20 30\n");
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1], (Vec3{10, 20, 30}));
  EXPECT_THROW(ParseTrajectory("1 2\n"), SchemaError);
  EXPECT_THROW(ParseTrajectory("1 2 3 4\n"), SchemaError);
}

TEST(Mobility, TrajectoryHashIsOrderSensitive) {
  const std::vector<Vec3> a = {{0, 0, 0}, {1, 0, 0}};
  const std::vector<Vec3> b = {{1, 0, 0}, {0, 0, 0}};
  EXPECT_EQ(TrajectoryHash(a), TrajectoryHash(a));
  EXPECT_NE(TrajectoryHash(a), TrajectoryHash(b));
}

}  // namespace
}  // namespace aeronet
