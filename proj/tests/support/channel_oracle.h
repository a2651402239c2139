#ifndef AERONET_TESTS_SUPPORT_CHANNEL_ORACLE_H_
#define AERONET_TESTS_SUPPORT_CHANNEL_ORACLE_H_

// Hand-coded TR 36.777 UMi-AV reference formulas for aerial UEs
// (22.5 m < h_ut <= 300 m), kept separate from the library implementation.
namespace aeronet::testing {

double OracleLosProbability(double d2d_m, double h_ut_m);
double OraclePathLossDb(double d3d_m, double h_ut_m, double fc_ghz, bool los);

}  // namespace aeronet::testing

#endif  // AERONET_TESTS_SUPPORT_CHANNEL_ORACLE_H_
