#ifndef AERONET_CHANNEL_CHANNEL_H_
#define AERONET_CHANNEL_CHANNEL_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aeronet/geometry.h"
#include "aeronet/sim/rng.h"
#include "aeronet/topology/scenario.h"

namespace aeronet {

// Heights above this use the aerial (UMi-AV) formulas; at or below it the
// terrestrial UMi street-canyon model applies.
inline constexpr double kAerialMinHeightM = 22.5;
inline constexpr double kAerialMaxHeightM = 300.0;

struct LinkGeometry {
  double d2d_m = 0.0;
  double d3d_m = 0.0;
  double h_ut_m = 0.0;
  double h_bs_m = 0.0;
  double fc_ghz = 0.0;

  // d3d is floored at 1 m, the lower validity limit of the path-loss model.
  static LinkGeometry Between(const Vec3& ue, const Vec3& gnb, double fc_ghz);
};

// Probability of line of sight for a UE at height h_ut and horizontal
// distance d2d. Throws DomainError for h_ut > 300 m or d2d < 0.
double LosProbability(double d2d_m, double h_ut_m);

// Throws DomainError when d3d < 1 m, fc <= 0, or h_ut > 300 m.
double PathLossDb(const LinkGeometry& g, bool los);

double DbmToMw(double dbm);
double MwToDbm(double mw);

// kTC over bw plus the receiver noise figure.
double ThermalNoiseDbm(double bandwidth_hz, double noise_figure_db);

struct Interferer {
  double rx_power_dbm = 0.0;
  // Fraction of the victim's resources the interferer occupies.
  double weight = 1.0;
};

// Linear-domain SINR: S / (sum(w_i * I_i) + N), returned in dB.
double UplinkSinrDb(double signal_dbm, std::span<const Interferer> interferers,
                    double noise_dbm);

struct ChannelConfig {
  double sigma_los_db = 4.0;
  double sigma_nlos_db = 6.0;
  double decorrelation_m = 13.0;
  // LoS state is redrawn only after the UE moves this far.
  double los_hold_m = 5.0;
  // Optional per-sample Gaussian jitter on received power (0 = off).
  double jitter_db = 0.0;
  bool shadowing = true;
};

struct ChannelSample {
  NodeId ue = 0;
  NodeId gnb = 0;
  double t_s = 0.0;
  bool los = true;
  double path_loss_db = 0.0;
  double shadow_db = 0.0;
  double rx_power_dbm = 0.0;
};

// Per-link large-scale channel state: LoS state held over los_hold_m of
// travel, and spatially correlated lognormal shadowing (Gudmundson model).
// Each link owns its random streams so samples never depend on the order in
// which other links are evaluated.
class LinkChannel {
 public:
  LinkChannel(const ChannelConfig& config, std::uint64_t seed,
              std::uint64_t link_index);

  ChannelSample Sample(const Vec3& ue_pos, const GnbConfig& gnb,
                       double ue_tx_power_dbm, double gain_db, double t_s);

 private:
  ChannelConfig config_;
  RngStream los_rng_;
  RngStream shadow_rng_;
  RngStream jitter_rng_;
  bool initialized_ = false;
  bool los_ = true;
  Vec3 los_anchor_;
  double shadow_z_ = 0.0;
  Vec3 shadow_anchor_;
};

// Channel state for every (UE, gNB) pair of a scenario.
class ChannelModel {
 public:
  // Extra antenna gain in dB for a link; isotropic (0 dB) by default.
  using GainFn = std::function<double(NodeId ue, NodeId gnb, const Vec3& ue_pos,
                                      const Vec3& gnb_pos)>;

  ChannelModel(const Scenario& scenario, const ChannelConfig& config,
               std::uint64_t seed);

  void set_gain(GainFn gain) { gain_ = std::move(gain); }

  ChannelSample Sample(std::size_t ue_index, std::size_t gnb_index,
                       const Vec3& ue_pos, double t_s);

 private:
  const Scenario* scenario_;
  std::vector<LinkChannel> links_;
  GainFn gain_;
};

}  // namespace aeronet

#endif  // AERONET_CHANNEL_CHANNEL_H_
