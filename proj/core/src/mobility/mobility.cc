#include "aeronet/mobility/mobility.h"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "aeronet/error.h"

namespace aeronet {
namespace {

constexpr double kArrivalEps = 1e-9;

Vec3 DrawPoint(const Box& b, RngStream& rng) {
  const double x = rng.Uniform(b.min.x, b.max.x);
  const double y = rng.Uniform(b.min.y, b.max.y);
  const double z = rng.Uniform(b.min.z, b.max.z);
  return {x, y, z};
}

Vec3 Heading(const Vec3& from, const Vec3& to, double speed) {
  const Vec3 d = to - from;
  const double n = d.Norm();
  if (n < kArrivalEps) return {};
  return d * (speed / n);
}

void BeginLeg(const MobilitySpec& spec, KinematicState& s, RngStream& rng) {
  s.target = DrawPoint(spec.bounds, rng);
  s.speed_mps = rng.Uniform(spec.speed_min_mps, spec.speed_max_mps);
  s.phase = FlightPhase::kMoving;
  s.hover_remaining_s = 0.0;
  s.velocity = Heading(s.position, s.target, s.speed_mps);
}

KinematicState StepFixed(const MobilitySpec& spec, KinematicState s, double dt) {
  const auto& wp = spec.waypoints;
  double budget = s.speed_mps * dt;
  const double lap = TourLength(wp);
  if (lap > 0.0 && budget > lap) budget = std::fmod(budget, lap);
  while (budget > 0.0) {
    const double d = Distance(s.position, s.target);
    if (d <= budget) {
      s.position = s.target;
      budget -= d;
      s.waypoint_index = (s.waypoint_index + 1) % wp.size();
      s.target = wp[s.waypoint_index];
    } else {
      s.position = s.position + (s.target - s.position) * (budget / d);
      budget = 0.0;
    }
  }
  s.velocity = Heading(s.position, s.target, s.speed_mps);
  return s;
}

KinematicState StepRandomWaypoint(const MobilitySpec& spec, KinematicState s,
                                  double dt, RngStream& rng) {
  if (s.phase == FlightPhase::kHovering) {
    s.hover_remaining_s -= dt;
    if (s.hover_remaining_s <= kArrivalEps) BeginLeg(spec, s, rng);
    return s;
  }
  const double d = Distance(s.position, s.target);
  const double step = s.speed_mps * dt;
  if (step + kArrivalEps >= d) {
    s.position = s.target;
    s.velocity = {};
    s.phase = FlightPhase::kHovering;
    s.hover_remaining_s = rng.Uniform(spec.hover_min_s, spec.hover_max_s);
  } else {
    s.position = s.position + (s.target - s.position) * (step / d);
  }
  return s;
}

}  // namespace

std::string_view MobilityKindName(MobilityKind kind) {
  switch (kind) {
    case MobilityKind::kStatic: return "static";
    case MobilityKind::kRandomWaypoint3D: return "random_waypoint";
    case MobilityKind::kFixedTrajectory: return "fixed";
  }
  return "unknown";
}

void ValidateMobility(const MobilitySpec& spec) {
  if (spec.speed_min_mps < 0.0 || spec.speed_min_mps > spec.speed_max_mps) {
    throw ConstraintError("mobility: speed range must satisfy 0 <= v_min <= v_max");
  }
  if (spec.hover_min_s < 0.0 || spec.hover_min_s > spec.hover_max_s) {
    throw ConstraintError("mobility: hover range must satisfy 0 <= h_min <= h_max");
  }
  const Box& b = spec.bounds;
  if (b.min.x > b.max.x || b.min.y > b.max.y || b.min.z > b.max.z) {
    throw ConstraintError("mobility: bounds are inverted");
  }
  if (spec.kind != MobilityKind::kFixedTrajectory) return;
  if (spec.waypoints.size() < 2) {
    throw ConstraintError("mobility: fixed trajectory needs at least 2 waypoints");
  }
  for (std::size_t i = 0; i < spec.waypoints.size(); ++i) {
    if (!b.Contains(spec.waypoints[i])) {
      throw ConstraintError("mobility: waypoint " + std::to_string(i) +
                            " lies outside the mobility bounds");
    }
  }
  if (TourLength(spec.waypoints) <= 0.0) {
    throw DegenerateTrajectory("mobility: trajectory has zero length");
  }
  if (spec.CruiseSpeed() <= 0.0) {
    throw ConstraintError("mobility: fixed trajectory needs a positive speed");
  }
}

KinematicState InitialKinematics(const MobilitySpec& spec, const Vec3& start,
                                 RngStream& rng) {
  KinematicState s;
  s.position = start;
  switch (spec.kind) {
    case MobilityKind::kStatic:
      break;
    case MobilityKind::kFixedTrajectory:
      s.position = spec.waypoints.front();
      s.waypoint_index = 1;
      s.target = spec.waypoints[1];
      s.speed_mps = spec.CruiseSpeed();
      s.phase = FlightPhase::kMoving;
      s.velocity = Heading(s.position, s.target, s.speed_mps);
      break;
    case MobilityKind::kRandomWaypoint3D:
      if (!spec.bounds.Contains(start)) {
        throw ConstraintError("mobility: random waypoint start lies outside bounds");
      }
      BeginLeg(spec, s, rng);
      break;
  }
  return s;
}

KinematicState Step(const MobilitySpec& spec, KinematicState state, double dt,
                    RngStream& rng) {
  switch (spec.kind) {
    case MobilityKind::kStatic:
      return state;
    case MobilityKind::kFixedTrajectory:
      return StepFixed(spec, state, dt);
    case MobilityKind::kRandomWaypoint3D:
      return StepRandomWaypoint(spec, state, dt, rng);
  }
  return state;
}

double TourLength(const std::vector<Vec3>& waypoints) {
  if (waypoints.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    total += Distance(waypoints[i], waypoints[(i + 1) % waypoints.size()]);
  }
  return total;
}

double TrajectoryDuration(const MobilitySpec& spec, double speed_mps) {
  if (speed_mps <= 0.0) {
    throw ConstraintError("trajectory duration needs a positive speed");
  }
  const double length = TourLength(spec.waypoints);
  if (length <= 0.0) {
    throw DegenerateTrajectory("trajectory has zero total length");
  }
  return length / speed_mps;
}

std::vector<Vec3> ParseTrajectory(std::string_view text, std::string_view source) {
  std::vector<Vec3> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Vec3 p;
    std::string extra;
    if (!(fields >> p.x >> p.y >> p.z) || (fields >> extra)) {
      throw SchemaError(std::string(source) + ":" + std::to_string(line_no),
                        "expected three numbers 'x y z'");
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Vec3> LoadTrajectoryFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseTrajectory(buf.str(), path.string());
}

std::vector<Vec3> GenerateRandomTour(const Box& bounds, std::size_t n,
                                     RngStream& rng) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(DrawPoint(bounds, rng));
  return out;
}

std::uint64_t TrajectoryHash(const std::vector<Vec3>& waypoints) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Vec3& p : waypoints) {
    for (double c : {p.x, p.y, p.z}) {
      const auto bits = std::bit_cast<std::uint64_t>(c);
      char bytes[8];
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
      h = Fnv1a64(std::string_view(bytes, 8), h);
    }
  }
  return h;
}

}  // namespace aeronet
