#include "support/channel_oracle.h"

#include <cmath>

namespace aeronet::testing {
namespace {

double Log10(double x) { return std::log(x) / std::log(10.0); }

}  // namespace

double OracleLosProbability(double d2d_m, double h_ut_m) {
  // Table B-1, UMi-AV, 22.5 m < h_UT <= 300 m.
  double p1 = 233.98 * Log10(h_ut_m) - 0.95;
  double d1 = 294.05 * Log10(h_ut_m) - 432.94;
  if (d1 < 18.0) d1 = 18.0;
  if (d2d_m <= d1) return 1.0;
  double ratio = d1 / d2d_m;
  return ratio + (1.0 - ratio) * std::exp(-d2d_m / p1);
}

double OraclePathLossDb(double d3d_m, double h_ut_m, double fc_ghz, bool los) {
  // Table B-2, UMi-AV, 22.5 m < h_UT <= 300 m.
  double pl_los = 30.9 + 22.25 * Log10(d3d_m) - 0.5 * Log10(h_ut_m) * Log10(d3d_m) +
                  20.0 * Log10(fc_ghz);
  if (los) return pl_los;
  double pl_nlos = 32.4 + 43.2 * Log10(d3d_m) - 7.6 * Log10(h_ut_m) * Log10(d3d_m) +
                   20.0 * Log10(fc_ghz);
  return pl_nlos > pl_los ? pl_nlos : pl_los;
}

}  // namespace aeronet::testing
