#ifndef AERONET_MOBILITY_MOBILITY_H_
#define AERONET_MOBILITY_MOBILITY_H_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "aeronet/geometry.h"
#include "aeronet/sim/rng.h"

namespace aeronet {

enum class MobilityKind { kStatic, kRandomWaypoint3D, kFixedTrajectory };

std::string_view MobilityKindName(MobilityKind kind);

struct MobilitySpec {
  MobilityKind kind = MobilityKind::kStatic;
  Box bounds;
  double speed_min_mps = 10.0;
  double speed_max_mps = 15.0;
  double hover_min_s = 0.0;
  double hover_max_s = 2.0;
  // FixedTrajectory only; the route loops back to waypoints[0].
  std::vector<Vec3> waypoints;

  // Constant cruise speed used by fixed trajectories.
  double CruiseSpeed() const { return 0.5 * (speed_min_mps + speed_max_mps); }
};

// Throws ConstraintError (or DegenerateTrajectory) when a MobilitySpec breaks
// an invariant: speed range ordering, negative hover, waypoints outside
// bounds, fewer than two waypoints for a fixed trajectory.
void ValidateMobility(const MobilitySpec& spec);

enum class FlightPhase { kMoving, kHovering };

struct KinematicState {
  Vec3 position;
  Vec3 velocity;
  FlightPhase phase = FlightPhase::kHovering;
  Vec3 target;
  std::size_t waypoint_index = 0;
  double speed_mps = 0.0;
  double hover_remaining_s = 0.0;
};

// Starting state. Fixed trajectories start on waypoint 0 heading for
// waypoint 1; random waypoint draws its first leg from rng.
KinematicState InitialKinematics(const MobilitySpec& spec, const Vec3& start,
                                 RngStream& rng);

// Advances the state by dt seconds (dt > 0).
KinematicState Step(const MobilitySpec& spec, KinematicState state, double dt,
                    RngStream& rng);

// Closed-tour length (including the leg back to the first waypoint) divided
// by speed. Throws DegenerateTrajectory if the tour has zero length.
double TrajectoryDuration(const MobilitySpec& spec, double speed_mps);
double TourLength(const std::vector<Vec3>& waypoints);

// Trajectory file: one "x y z" waypoint per line, '#' starts a comment line.
std::vector<Vec3> LoadTrajectoryFile(const std::filesystem::path& path);
std::vector<Vec3> ParseTrajectory(std::string_view text,
                                  std::string_view source = "<trajectory>");

// Random tour of n waypoints drawn uniformly from bounds.
std::vector<Vec3> GenerateRandomTour(const Box& bounds, std::size_t n,
                                     RngStream& rng);

// Order-sensitive hash of a waypoint list (bitwise over the coordinates).
std::uint64_t TrajectoryHash(const std::vector<Vec3>& waypoints);

}  // namespace aeronet

#endif  // AERONET_MOBILITY_MOBILITY_H_
