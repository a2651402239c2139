#include "aeronet/experiment/traces.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "aeronet/error.h"

namespace aeronet {
namespace {

std::string Seconds(Tick t) { return FormatDouble(ToSeconds(t), 3); }

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T ParseField(const std::string& s, const std::string& where) {
  T v{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw SchemaError(where, "bad value '" + s + "'");
  return v;
}

Tick ParseTime(const std::string& s, const std::string& where) {
  return ToTicks(ParseField<double>(s, where));
}

// Reads the header and calls row(fields, where) for every data line.
template <typename F>
void ReadCsv(std::istream& in, const char* name, std::size_t columns, F row) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(name, "empty file");
  if (SplitCsv(line).size() != columns) throw SchemaError(std::string(name) + ":1", "bad header");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = std::string(name) + ":" + std::to_string(line_no);
    std::vector<std::string> f = SplitCsv(line);
    if (f.size() != columns) throw SchemaError(where, "expected " + std::to_string(columns) + " fields");
    row(f, where);
  }
}

}  // namespace

std::string FormatDouble(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // "-0.000" and "0.000" must not differ.
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void WriteHandoverCsv(std::ostream& out, std::span<const HandoverRecord> records) {
  out << "t,ue,interface,from,to,trigger,pingpong_flag\n";
  for (const HandoverRecord& r : records) {
    out << Seconds(r.t) << ',' << r.ue << ',' << r.interface_index << ',' << r.from << ','
        << r.to << ',' << TriggerName(r.trigger) << ',' << (r.pingpong ? 1 : 0) << '\n';
  }
}

void WriteFlowCsv(std::ostream& out, std::span<const FlowRow> rows) {
  out << "t,flow_id,protocol,path_id,cwnd,srtt_ms,delivered_bytes,lost_packets,queue_drops\n";
  for (const FlowRow& r : rows) {
    out << Seconds(r.t) << ',' << r.flow_id << ',' << ProtocolName(r.protocol) << ','
        << r.path_id << ',' << FormatDouble(r.cwnd, 3) << ',' << FormatDouble(r.srtt_ms, 3)
        << ',' << r.delivered_bytes << ',' << r.lost_packets << ',' << r.queue_drops << '\n';
  }
}

void WriteSinrCsv(std::ostream& out, std::span<const SinrRow> rows) {
  out << "t,ue,interface,gnb,sinr_db,serving\n";
  for (const SinrRow& r : rows) {
    out << Seconds(r.t) << ',' << r.ue << ',' << r.interface_index << ',' << r.gnb << ','
        << FormatDouble(r.sinr_db, 4) << ',' << (r.serving ? 1 : 0) << '\n';
  }
}

void WritePositionCsv(std::ostream& out, std::span<const PositionRow> rows) {
  out << "t,ue,x,y,z\n";
  for (const PositionRow& r : rows) {
    out << Seconds(r.t) << ',' << r.ue << ',' << FormatDouble(r.position.x, 3) << ','
        << FormatDouble(r.position.y, 3) << ',' << FormatDouble(r.position.z, 3) << '\n';
  }
}

std::vector<HandoverRecord> ReadHandoverCsv(std::istream& in) {
  std::vector<HandoverRecord> out;
  ReadCsv(in, "handovers.csv", 7, [&](const std::vector<std::string>& f, const std::string& w) {
    HandoverRecord r;
    r.t = ParseTime(f[0], w);
    r.ue = ParseField<NodeId>(f[1], w);
    r.interface_index = ParseField<std::size_t>(f[2], w);
    r.from = ParseField<NodeId>(f[3], w);
    r.to = ParseField<NodeId>(f[4], w);
    try {
      r.trigger = ParseTrigger(f[5]);
    } catch (const ConfigError&) {
      throw SchemaError(w, "unknown trigger '" + f[5] + "'");
    }
    r.pingpong = ParseField<int>(f[6], w) != 0;
    out.push_back(r);
  });
  return out;
}

std::vector<FlowRow> ReadFlowCsv(std::istream& in) {
  std::vector<FlowRow> out;
  ReadCsv(in, "flows.csv", 9, [&](const std::vector<std::string>& f, const std::string& w) {
    FlowRow r;
    r.t = ParseTime(f[0], w);
    r.flow_id = ParseField<std::uint32_t>(f[1], w);
    try {
      r.protocol = ParseProtocol(f[2]);
    } catch (const ConfigError&) {
      throw SchemaError(w, "unknown protocol '" + f[2] + "'");
    }
    r.path_id = ParseField<std::uint32_t>(f[3], w);
    r.cwnd = ParseField<double>(f[4], w);
    r.srtt_ms = ParseField<double>(f[5], w);
    r.delivered_bytes = ParseField<std::int64_t>(f[6], w);
    r.lost_packets = ParseField<std::int64_t>(f[7], w);
    r.queue_drops = ParseField<std::int64_t>(f[8], w);
    out.push_back(r);
  });
  return out;
}

RunSummary Summarize(std::span<const HandoverRecord> handovers,
                     std::span<const FlowRow> flows, int packet_bytes) {
  RunSummary s;
  Tick end = 0;
  for (const FlowRow& r : flows) end = std::max(end, r.t);
  s.duration_s = ToSeconds(end);

  // Last sample per (flow, path); counters are cumulative.
  std::map<std::pair<std::uint32_t, std::uint32_t>, const FlowRow*> last;
  for (const FlowRow& r : flows) {
    const FlowRow*& slot = last[{r.flow_id, r.path_id}];
    if (!slot || r.t >= slot->t) slot = &r;
  }
  std::map<NodeId, UeMetrics> per_ue;
  for (const auto& [key, row] : last) {
    UeMetrics& m = per_ue[key.first];
    m.ue = key.first;
    m.delivered_bytes += row->delivered_bytes;
    m.lost_packets += row->lost_packets;
    m.queue_drops += row->queue_drops;
  }
  for (const HandoverRecord& h : handovers) {
    UeMetrics& m = per_ue[h.ue];
    m.ue = h.ue;
    ++m.handovers;
    if (h.pingpong) ++m.pingpongs;
  }
  for (auto& [ue, m] : per_ue) {
    m.throughput_bps = s.duration_s > 0.0 ? 8.0 * m.delivered_bytes / s.duration_s : 0.0;
    const double delivered_packets = static_cast<double>(m.delivered_bytes) / packet_bytes;
    const double attempted = delivered_packets + static_cast<double>(m.lost_packets);
    m.loss_rate = attempted > 0.0 ? m.lost_packets / attempted : 0.0;
    s.ues.push_back(m);
    s.total_handovers += m.handovers;
    s.total_pingpongs += m.pingpongs;
  }
  if (!s.ues.empty()) {
    const double n = static_cast<double>(s.ues.size());
    for (const UeMetrics& m : s.ues) {
      s.mean_throughput_bps += m.throughput_bps / n;
      s.mean_loss_rate += m.loss_rate / n;
    }
    s.mean_handovers = s.total_handovers / n;
    s.mean_pingpongs = s.total_pingpongs / n;
  }
  return s;
}

void WriteSummaryCsv(std::ostream& out, const RunSummary& s) {
  out << "ue,throughput_bps,loss_rate,handovers,pingpongs,delivered_bytes,lost_packets,"
         "queue_drops\n";
  for (const UeMetrics& m : s.ues) {
    out << m.ue << ',' << FormatDouble(m.throughput_bps, 3) << ','
        << FormatDouble(m.loss_rate, 6) << ',' << m.handovers << ',' << m.pingpongs << ','
        << m.delivered_bytes << ',' << m.lost_packets << ',' << m.queue_drops << '\n';
  }
}

}  // namespace aeronet
