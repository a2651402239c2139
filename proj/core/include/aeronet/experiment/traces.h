#ifndef AERONET_EXPERIMENT_TRACES_H_
#define AERONET_EXPERIMENT_TRACES_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "aeronet/engine/simulation.h"
#include "aeronet/handover/handover.h"

namespace aeronet {

// Trace files. Times are seconds with millisecond resolution, so a file
// round-trips to the in-memory rows exactly.
//   handovers.csv  t,ue,interface,from,to,trigger,pingpong_flag
//   flows.csv      t,flow_id,protocol,path_id,cwnd,srtt_ms,delivered_bytes,
//                  lost_packets,queue_drops
//   sinr.csv       t,ue,interface,gnb,sinr_db,serving
//   positions.csv  t,ue,x,y,z
void WriteHandoverCsv(std::ostream& out, std::span<const HandoverRecord> records);
void WriteFlowCsv(std::ostream& out, std::span<const FlowRow> rows);
void WriteSinrCsv(std::ostream& out, std::span<const SinrRow> rows);
void WritePositionCsv(std::ostream& out, std::span<const PositionRow> rows);

// Throw SchemaError on malformed input.
std::vector<HandoverRecord> ReadHandoverCsv(std::istream& in);
std::vector<FlowRow> ReadFlowCsv(std::istream& in);

struct UeMetrics {
  NodeId ue = 0;
  double throughput_bps = 0.0;
  // Packets lost in the network (radio errors and handover flushes) over
  // packets that left the UE. Transmit-buffer overflow is reported
  // separately as queue_drops.
  double loss_rate = 0.0;
  int handovers = 0;
  int pingpongs = 0;
  std::int64_t delivered_bytes = 0;
  std::int64_t lost_packets = 0;
  std::int64_t queue_drops = 0;
};

struct RunSummary {
  double duration_s = 0.0;
  std::vector<UeMetrics> ues;
  double mean_throughput_bps = 0.0;
  double mean_loss_rate = 0.0;
  double mean_handovers = 0.0;
  double mean_pingpongs = 0.0;
  int total_handovers = 0;
  int total_pingpongs = 0;
};

// Pure reduction over the trace rows: the last flows.csv sample of each
// flow (flow id = UE id) plus the handover log. The run duration is the
// time of the last flow sample.
RunSummary Summarize(std::span<const HandoverRecord> handovers,
                     std::span<const FlowRow> flows, int packet_bytes);

// ue,throughput_bps,loss_rate,handovers,pingpongs,delivered_bytes,
// lost_packets,queue_drops
void WriteSummaryCsv(std::ostream& out, const RunSummary& summary);

// Deterministic fixed-precision rendering used by every CSV writer.
std::string FormatDouble(double v, int decimals);

}  // namespace aeronet

#endif  // AERONET_EXPERIMENT_TRACES_H_
