#include "aeronet/channel/channel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aeronet/error.h"

namespace aeronet {
namespace {

constexpr double kSpeedOfLight = 299792458.0;

// Terrestrial UMi street canyon, used below the aerial height range.
double TerrestrialLosDb(const LinkGeometry& g) {
  const double h_ut = std::clamp(g.h_ut_m, 1.5, kAerialMinHeightM);
  const double h_bs = std::max(g.h_bs_m, 1.5);
  const double breakpoint = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * g.fc_ghz * 1e9 / kSpeedOfLight;
  const double fc_term = 20.0 * std::log10(g.fc_ghz);
  if (g.d2d_m <= breakpoint) {
    return 32.4 + 21.0 * std::log10(g.d3d_m) + fc_term;
  }
  const double dh = h_bs - h_ut;
  return 32.4 + 40.0 * std::log10(g.d3d_m) + fc_term -
         9.5 * std::log10(breakpoint * breakpoint + dh * dh);
}

double TerrestrialNlosDb(const LinkGeometry& g) {
  const double h_ut = std::clamp(g.h_ut_m, 1.5, kAerialMinHeightM);
  const double nlos = 35.3 * std::log10(g.d3d_m) + 22.4 +
                      21.3 * std::log10(g.fc_ghz) - 0.3 * (h_ut - 1.5);
  return std::max(TerrestrialLosDb(g), nlos);
}

double AerialLosDb(const LinkGeometry& g) {
  return 30.9 + (22.25 - 0.5 * std::log10(g.h_ut_m)) * std::log10(g.d3d_m) +
         20.0 * std::log10(g.fc_ghz);
}

double AerialNlosDb(const LinkGeometry& g) {
  const double nlos = 32.4 + (43.2 - 7.6 * std::log10(g.h_ut_m)) * std::log10(g.d3d_m) +
                      20.0 * std::log10(g.fc_ghz);
  return std::max(AerialLosDb(g), nlos);
}

}  // namespace

LinkGeometry LinkGeometry::Between(const Vec3& ue, const Vec3& gnb, double fc_ghz) {
  LinkGeometry g;
  g.d2d_m = HorizontalDistance(ue, gnb);
  g.d3d_m = std::max(Distance(ue, gnb), 1.0);
  g.h_ut_m = ue.z;
  g.h_bs_m = gnb.z;
  g.fc_ghz = fc_ghz;
  return g;
}

double LosProbability(double d2d_m, double h_ut_m) {
  if (h_ut_m > kAerialMaxHeightM) {
    throw DomainError("LoS probability undefined above 300 m (h_ut = " +
                      std::to_string(h_ut_m) + ")");
  }
  if (d2d_m < 0.0) throw DomainError("negative horizontal distance");
  double d1, p1;
  if (h_ut_m <= kAerialMinHeightM) {
    d1 = 18.0;
    p1 = 36.0;
  } else {
    const double lh = std::log10(h_ut_m);
    d1 = std::max(294.05 * lh - 432.94, 18.0);
    p1 = 233.98 * lh - 0.95;
  }
  if (d2d_m <= d1) return 1.0;
  return d1 / d2d_m + std::exp(-d2d_m / p1) * (1.0 - d1 / d2d_m);
}

double PathLossDb(const LinkGeometry& g, bool los) {
  if (g.d3d_m < 1.0) throw DomainError("path loss needs d3d >= 1 m");
  if (!(g.fc_ghz > 0.0)) throw DomainError("path loss needs fc > 0");
  if (g.h_ut_m > kAerialMaxHeightM) {
    throw DomainError("path loss undefined above 300 m (h_ut = " +
                      std::to_string(g.h_ut_m) + ")");
  }
  if (g.h_ut_m <= kAerialMinHeightM) {
    return los ? TerrestrialLosDb(g) : TerrestrialNlosDb(g);
  }
  return los ? AerialLosDb(g) : AerialNlosDb(g);
}

double DbmToMw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double MwToDbm(double mw) { return 10.0 * std::log10(mw); }

double ThermalNoiseDbm(double bandwidth_hz, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double UplinkSinrDb(double signal_dbm, std::span<const Interferer> interferers,
                    double noise_dbm) {
  double denom = DbmToMw(noise_dbm);
  for (const auto& i : interferers) denom += i.weight * DbmToMw(i.rx_power_dbm);
  return MwToDbm(DbmToMw(signal_dbm) / denom);
}

LinkChannel::LinkChannel(const ChannelConfig& config, std::uint64_t seed,
                         std::uint64_t link_index)
    : config_(config),
      los_rng_(seed, "los", link_index),
      shadow_rng_(seed, "shadowing", link_index),
      jitter_rng_(seed, "jitter", link_index) {}

ChannelSample LinkChannel::Sample(const Vec3& ue_pos, const GnbConfig& gnb,
                                  double ue_tx_power_dbm, double gain_db, double t_s) {
  const LinkGeometry geom = LinkGeometry::Between(ue_pos, gnb.position, gnb.carrier_freq_ghz);
  if (!initialized_) {
    los_ = los_rng_.Uniform() < LosProbability(geom.d2d_m, geom.h_ut_m);
    los_anchor_ = ue_pos;
    shadow_z_ = shadow_rng_.Normal();
    shadow_anchor_ = ue_pos;
    initialized_ = true;
  } else {
    if (Distance(ue_pos, los_anchor_) > config_.los_hold_m) {
      los_ = los_rng_.Uniform() < LosProbability(geom.d2d_m, geom.h_ut_m);
      los_anchor_ = ue_pos;
    }
    const double moved = Distance(ue_pos, shadow_anchor_);
    if (moved > 0.0) {
      const double rho = std::exp(-moved / config_.decorrelation_m);
      shadow_z_ = rho * shadow_z_ + std::sqrt(1.0 - rho * rho) * shadow_rng_.Normal();
      shadow_anchor_ = ue_pos;
    }
  }

  ChannelSample s;
  s.gnb = gnb.id;
  s.t_s = t_s;
  s.los = los_;
  s.path_loss_db = PathLossDb(geom, los_);
  s.shadow_db = config_.shadowing
                    ? shadow_z_ * (los_ ? config_.sigma_los_db : config_.sigma_nlos_db)
                    : 0.0;
  s.rx_power_dbm = ue_tx_power_dbm + gain_db - s.path_loss_db - s.shadow_db;
  if (config_.jitter_db > 0.0) s.rx_power_dbm += config_.jitter_db * jitter_rng_.Normal();
  return s;
}

ChannelModel::ChannelModel(const Scenario& scenario, const ChannelConfig& config,
                           std::uint64_t seed)
    : scenario_(&scenario) {
  const std::size_t n = scenario.ues.size() * scenario.gnbs.size();
  links_.reserve(n);
  for (std::size_t ui = 0; ui < scenario.ues.size(); ++ui) {
    for (std::size_t gi = 0; gi < scenario.gnbs.size(); ++gi) {
      // Key on node ids, not indices, so adding a UE leaves others' draws alone.
      const std::uint64_t key = (static_cast<std::uint64_t>(scenario.ues[ui].id) << 32) |
                                scenario.gnbs[gi].id;
      links_.emplace_back(config, seed, key);
    }
  }
}

ChannelSample ChannelModel::Sample(std::size_t ue_index, std::size_t gnb_index,
                                   const Vec3& ue_pos, double t_s) {
  const auto& ue = scenario_->ues[ue_index];
  const auto& gnb = scenario_->gnbs[gnb_index];
  const double gain = gain_ ? gain_(ue.id, gnb.id, ue_pos, gnb.position) : 0.0;
  ChannelSample s = links_[ue_index * scenario_->gnbs.size() + gnb_index].Sample(
      ue_pos, gnb, ue.tx_power_dbm, gain, t_s);
  s.ue = ue.id;
  return s;
}

}  // namespace aeronet
