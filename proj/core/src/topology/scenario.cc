#include "aeronet/topology/scenario.h"

#include <algorithm>
#include <set>
#include <string>

#include "aeronet/error.h"
#include "aeronet/sim/rng.h"

namespace aeronet {
namespace {

using nlohmann::json;

std::string Join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}
std::string Index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const json& Require(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(Join(path, key), "required field missing");
  return *it;
}

double AsNumber(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::uint64_t AsUnsigned(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

double NumberOr(const json& obj, const std::string& path, const char* key,
                double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : AsNumber(*it, Join(path, key));
}

std::pair<double, double> Range(const json& obj, const std::string& path,
                                const char* key, std::pair<double, double> fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  const std::string p = Join(path, key);
  if (it->is_number()) {
    const double v = it->get<double>();
    return {v, v};
  }
  if (!it->is_array() || it->size() != 2) {
    throw SchemaError(p, "expected [min, max]");
  }
  return {AsNumber((*it)[0], Index(p, 0)), AsNumber((*it)[1], Index(p, 1))};
}

Vec3 ParsePoint(const json& v, const std::string& path, double default_z) {
  if (!v.is_array() || (v.size() != 2 && v.size() != 3)) {
    throw SchemaError(path, "expected [x, y] or [x, y, z]");
  }
  Vec3 p{AsNumber(v[0], Index(path, 0)), AsNumber(v[1], Index(path, 1)), default_z};
  if (v.size() == 3) p.z = AsNumber(v[2], Index(path, 2));
  return p;
}

MobilitySpec ParseMobility(const json& m, const std::string& path,
                           const Area& area,
                           const std::filesystem::path& base_dir) {
  MobilitySpec spec;
  spec.bounds = area.AsBox();
  if (m.is_null()) return spec;
  if (!m.is_object()) throw SchemaError(path, "expected an object");
  const std::string kind = m.value("kind", "static");
  if (kind == "static") {
    spec.kind = MobilityKind::kStatic;
  } else if (kind == "random_waypoint") {
    spec.kind = MobilityKind::kRandomWaypoint3D;
  } else if (kind == "fixed") {
    spec.kind = MobilityKind::kFixedTrajectory;
  } else {
    throw SchemaError(Join(path, "kind"),
                      "unknown mobility kind '" + kind +
                          "' (static | random_waypoint | fixed)");
  }
  std::tie(spec.speed_min_mps, spec.speed_max_mps) =
      Range(m, path, "speed_mps", {10.0, 15.0});
  std::tie(spec.hover_min_s, spec.hover_max_s) = Range(m, path, "hover_s", {0.0, 2.0});
  if (spec.kind == MobilityKind::kRandomWaypoint3D) {
    auto [zlo, zhi] = Range(m, path, "altitude_m", {50.0, 150.0});
    spec.bounds.min.z = zlo;
    spec.bounds.max.z = zhi;
  }
  if (spec.kind == MobilityKind::kFixedTrajectory) {
    if (auto it = m.find("waypoints"); it != m.end()) {
      const std::string p = Join(path, "waypoints");
      if (!it->is_array()) throw SchemaError(p, "expected an array of points");
      for (std::size_t i = 0; i < it->size(); ++i) {
        spec.waypoints.push_back(ParsePoint((*it)[i], Index(p, i), 100.0));
      }
    } else if (auto f = m.find("trajectory_file"); f != m.end()) {
      if (!f->is_string()) {
        throw SchemaError(Join(path, "trajectory_file"), "expected a path string");
      }
      std::filesystem::path file = f->get<std::string>();
      if (file.is_relative()) file = base_dir / file;
      spec.waypoints = LoadTrajectoryFile(file);
    } else {
      throw SchemaError(path, "fixed mobility needs 'waypoints' or 'trajectory_file'");
    }
  }
  try {
    ValidateMobility(spec);
  } catch (const DegenerateTrajectory&) {
    throw;
  } catch (const ConstraintError& e) {
    throw ConstraintError(path + ": " + e.what());
  }
  return spec;
}

std::vector<InterfaceBinding> ParseInterfaces(const json& ue, const std::string& path) {
  std::vector<InterfaceBinding> out;
  auto it = ue.find("interfaces");
  if (it == ue.end()) {
    out.push_back(InterfaceBinding{});
    return out;
  }
  const std::string p = Join(path, "interfaces");
  if (!it->is_array()) throw SchemaError(p, "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& entry = (*it)[i];
    InterfaceBinding b;
    if (entry.is_number_integer()) {
      b.interface_group = entry.get<int>();
    } else if (entry.is_object()) {
      b.interface_group = static_cast<int>(
          AsUnsigned(Require(entry, Index(p, i), "group"), Join(Index(p, i), "group")));
      if (auto c = entry.find("candidates"); c != entry.end()) {
        const std::string cp = Join(Index(p, i), "candidates");
        if (!c->is_array()) throw SchemaError(cp, "expected an array of gNB ids");
        for (std::size_t k = 0; k < c->size(); ++k) {
          b.candidate_gnbs.push_back(
              static_cast<NodeId>(AsUnsigned((*c)[k], Index(cp, k))));
        }
      }
    } else {
      throw SchemaError(Index(p, i), "expected a group number or {group, candidates}");
    }
    out.push_back(std::move(b));
  }
  return out;
}

void ResolveCandidates(Scenario& s) {
  for (auto& ue : s.ues) {
    for (auto& b : ue.interfaces) {
      if (b.candidate_gnbs.empty()) {
        for (const auto& g : s.gnbs) {
          if (g.interface_group == b.interface_group) b.candidate_gnbs.push_back(g.id);
        }
      }
      std::sort(b.candidate_gnbs.begin(), b.candidate_gnbs.end());
    }
  }
}

Vec3 DrawInCoverage(const Scenario& s, double radius, double height, RngStream& rng) {
  Box region{{1e300, 1e300, 0}, {-1e300, -1e300, 0}};
  for (const auto& g : s.gnbs) {
    region.min.x = std::min(region.min.x, g.position.x - radius);
    region.min.y = std::min(region.min.y, g.position.y - radius);
    region.max.x = std::max(region.max.x, g.position.x + radius);
    region.max.y = std::max(region.max.y, g.position.y + radius);
  }
  region.min.x = std::max(region.min.x, 0.0);
  region.min.y = std::max(region.min.y, 0.0);
  region.max.x = std::min(region.max.x, s.area.x_m);
  region.max.y = std::min(region.max.y, s.area.y_m);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Vec3 p{rng.Uniform(region.min.x, region.max.x),
                 rng.Uniform(region.min.y, region.max.y), height};
    for (const auto& g : s.gnbs) {
      if (HorizontalDistance(p, g.position) <= radius) return p;
    }
  }
  throw ConstraintError("random_ues: coverage discs do not intersect the area");
}

}  // namespace

double DefaultCarrierGhz(int interface_group) {
  return interface_group == 1 ? 3.5 : 2.6;
}

const GnbConfig& Scenario::gnb(NodeId id) const { return gnbs[GnbIndex(id)]; }

std::size_t Scenario::GnbIndex(NodeId id) const {
  for (std::size_t i = 0; i < gnbs.size(); ++i) {
    if (gnbs[i].id == id) return i;
  }
  throw UnknownGnb("no gNB with id " + std::to_string(id));
}

Scenario BuildScenario(const json& spec, const std::filesystem::path& base_dir) {
  if (!spec.is_object()) throw SchemaError("$", "scenario must be a JSON object");
  Scenario s;

  const json& area = Require(spec, "", "area");
  s.area.x_m = AsNumber(Require(area, "area", "x_m"), "area.x_m");
  s.area.y_m = AsNumber(Require(area, "area", "y_m"), "area.y_m");
  s.area.z_max_m = NumberOr(area, "area", "z_max_m", 300.0);
  s.duration_s = AsNumber(Require(spec, "", "duration_s"), "duration_s");
  if (auto it = spec.find("seed"); it != spec.end()) s.seed = AsUnsigned(*it, "seed");
  if (auto it = spec.find("trajectory_seed"); it != spec.end()) {
    s.trajectory_seed = AsUnsigned(*it, "trajectory_seed");
  }

  const json& gnbs = Require(spec, "", "gnbs");
  if (!gnbs.is_array()) throw SchemaError("gnbs", "expected an array");
  for (std::size_t i = 0; i < gnbs.size(); ++i) {
    const std::string p = Index("gnbs", i);
    const json& g = gnbs[i];
    GnbConfig c;
    c.id = static_cast<NodeId>(AsUnsigned(Require(g, p, "id"), Join(p, "id")));
    c.position = ParsePoint(Require(g, p, "pos"), Join(p, "pos"), kDefaultGnbHeightM);
    if (auto it = g.find("group"); it != g.end()) {
      c.interface_group = static_cast<int>(AsUnsigned(*it, Join(p, "group")));
    }
    c.carrier_freq_ghz = NumberOr(g, p, "freq_ghz", DefaultCarrierGhz(c.interface_group));
    c.bandwidth_mhz = NumberOr(g, p, "bw_mhz", kDefaultBandwidthMhz);
    c.tx_power_dbm = NumberOr(g, p, "power_dbm", kDefaultGnbPowerDbm);
    c.noise_figure_db = NumberOr(g, p, "noise_figure_db", kDefaultNoiseFigureDb);
    s.gnbs.push_back(c);
  }

  NodeId next_ue_id = 0;
  if (auto it = spec.find("ues"); it != spec.end()) {
    if (!it->is_array()) throw SchemaError("ues", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = Index("ues", i);
      const json& u = (*it)[i];
      UeConfig c;
      c.id = static_cast<NodeId>(AsUnsigned(Require(u, p, "id"), Join(p, "id")));
      c.tx_power_dbm = NumberOr(u, p, "power_dbm", kDefaultUePowerDbm);
      c.interfaces = ParseInterfaces(u, p);
      c.mobility = ParseMobility(u.value("mobility", json()), Join(p, "mobility"),
                                 s.area, base_dir);
      if (auto pos = u.find("pos"); pos != u.end()) {
        c.initial_position = ParsePoint(*pos, Join(p, "pos"), 0.0);
      } else if (c.mobility.kind == MobilityKind::kFixedTrajectory) {
        c.initial_position = c.mobility.waypoints.front();
      } else {
        throw SchemaError(Join(p, "pos"), "required field missing");
      }
      next_ue_id = std::max(next_ue_id, c.id + 1);
      s.ues.push_back(std::move(c));
    }
  }

  if (auto it = spec.find("random_ues"); it != spec.end()) {
    const auto count = AsUnsigned(*it, "random_ues");
    const json tmpl = spec.value("random_ue", json::object());
    const std::string tp = "random_ue";
    const double radius = NumberOr(spec, "", "placement_radius_m", kDefaultPlacementRadiusM);
    const double height = NumberOr(tmpl, tp, "height_m", 50.0);
    RngStream rng(s.seed, "topology");
    for (std::uint64_t k = 0; k < count; ++k) {
      UeConfig c;
      c.id = next_ue_id++;
      c.tx_power_dbm = NumberOr(tmpl, tp, "power_dbm", kDefaultUePowerDbm);
      c.interfaces = ParseInterfaces(tmpl, tp);
      c.mobility = ParseMobility(tmpl.value("mobility", json()), Join(tp, "mobility"),
                                 s.area, base_dir);
      c.initial_position = DrawInCoverage(s, radius, height, rng);
      s.ues.push_back(std::move(c));
    }
  }

  ResolveCandidates(s);
  ValidateScenario(s);
  return s;
}

void ValidateScenario(const Scenario& s) {
  if (!(s.duration_s > 0.0)) throw ConstraintError("duration_s must be > 0");
  if (s.area.x_m <= 0.0 || s.area.y_m <= 0.0 || s.area.z_max_m < 0.0) {
    throw ConstraintError("area dimensions must be positive");
  }
  if (s.gnbs.empty()) throw ConstraintError("scenario needs at least one gNB");
  std::set<NodeId> gnb_ids;
  for (const auto& g : s.gnbs) {
    const std::string who = "gNB " + std::to_string(g.id);
    if (!gnb_ids.insert(g.id).second) throw ConstraintError("duplicate " + who);
    if (!(g.carrier_freq_ghz > 0.0)) throw ConstraintError(who + ": carrier_freq must be > 0");
    if (!(g.bandwidth_mhz > 0.0)) throw ConstraintError(who + ": bandwidth must be > 0");
    if (g.position.z < 0.0) throw ConstraintError(who + ": height must be >= 0");
  }
  const Box area = s.area.AsBox();
  std::set<NodeId> ue_ids;
  for (const auto& u : s.ues) {
    const std::string who = "UE " + std::to_string(u.id);
    if (!ue_ids.insert(u.id).second) throw ConstraintError("duplicate " + who);
    if (!area.Contains(u.initial_position)) {
      throw ConstraintError(who + ": initial position outside the area");
    }
    if (u.interfaces.empty()) throw ConstraintError(who + ": needs at least one interface");
    std::set<int> groups;
    for (const auto& b : u.interfaces) {
      if (!groups.insert(b.interface_group).second) {
        throw ConstraintError(who + ": two interfaces bound to group " +
                              std::to_string(b.interface_group));
      }
      if (b.candidate_gnbs.empty()) {
        throw ConstraintError(who + ": no gNB serves interface group " +
                              std::to_string(b.interface_group));
      }
      for (NodeId c : b.candidate_gnbs) {
        if (!gnb_ids.count(c)) throw ConstraintError(who + ": unknown candidate gNB " + std::to_string(c));
        if (s.gnb(c).interface_group != b.interface_group) {
          throw ConstraintError(who + ": candidate gNB " + std::to_string(c) +
                                " belongs to another interface group");
        }
      }
      if (b.serving_gnb && std::find(b.candidate_gnbs.begin(), b.candidate_gnbs.end(),
                                     *b.serving_gnb) == b.candidate_gnbs.end()) {
        throw ConstraintError(who + ": serving gNB is not a candidate");
      }
    }
  }
}

NodeId SelectServing(std::span<const CandidateSinr> candidates) {
  if (candidates.empty()) throw NoCandidates("no candidate gNB to associate with");
  const CandidateSinr* best = &candidates[0];
  for (const auto& c : candidates.subspan(1)) {
    if (c.sinr_db > best->sinr_db || (c.sinr_db == best->sinr_db && c.gnb < best->gnb)) {
      best = &c;
    }
  }
  return best->gnb;
}

}  // namespace aeronet
