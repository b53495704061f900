#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "quadsim/engine.hpp"

namespace quadsim {

/// A round index, or max_rounds with `censored` set when the event never
/// happened inside the simulated horizon.
struct RoundMetric {
  std::uint64_t round = 0;
  bool censored = false;

  friend bool operator==(const RoundMetric&, const RoundMetric&) = default;
};

RoundMetric stability_period(const SimulationResult& res);  // first node death
RoundMetric network_lifetime(const SimulationResult& res);  // last node death
std::uint64_t unstable_period(const SimulationResult& res);

std::vector<std::uint64_t> cumulative_throughput(const SimulationResult& res);
std::vector<std::size_t> chs_per_round(const SimulationResult& res);
std::vector<std::array<std::size_t, kQuadrantCount>> nodes_per_quadrant(
    const SimulationResult& res);

/// One row of the exported trace CSV.
struct TraceRow {
  std::uint64_t round = 0;
  std::size_t alive = 0;
  std::size_t n_chs = 0;
  std::uint64_t packets_to_bs = 0;
  std::uint64_t packets_to_chs = 0;
  double energy_remaining_j = 0.0;
  std::array<std::size_t, kQuadrantCount> alive_q{};
  std::vector<NodeId> deaths;

  static TraceRow from(const RoundTrace& t);
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

inline constexpr const char* kTraceCsvHeader =
    "round,alive,n_chs,packets_to_bs,packets_to_chs,energy_remaining_j,"
    "alive_q1,alive_q2,alive_q3,alive_q4,deaths";
inline constexpr const char* kReportCsvHeader =
    "protocol,seed,fnd,fnd_censored,lnd,lnd_censored,unstable,total_packets_bs";

void write_trace_csv(const std::vector<RoundTrace>& rounds, const std::filesystem::path& path);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

struct RunSummary {
  std::string protocol;
  std::uint64_t seed = 0;
  RoundMetric fnd;
  RoundMetric lnd;
  std::uint64_t unstable = 0;
  std::uint64_t total_packets_bs = 0;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

RunSummary summarize(const SimulationResult& res);

struct Spread {
  double mean = 0.0;
  double median = 0.0;
};

struct ProtocolAggregate {
  std::string protocol;
  std::size_t runs = 0;
  Spread fnd;
  Spread lnd;
  Spread unstable;
  Spread total_packets_bs;
  std::size_t censored_runs = 0;  // runs where fnd or lnd is censored
};

Spread spread_of(std::vector<double> values);

struct ComparisonReport {
  std::vector<std::string> protocols;  // in requested order
  std::vector<std::uint64_t> seeds;
  std::string config_fingerprint;
  std::vector<RunSummary> runs;  // protocol-major, then seed order

  /// Throws std::logic_error if some protocol lacks a run for some seed.
  std::vector<ProtocolAggregate> aggregates() const;
};

void write_report_csv(const ComparisonReport& report, const std::filesystem::path& path);
std::vector<RunSummary> read_report_csv(const std::filesystem::path& path);

/// Two-column whitespace-separated series, one `x y` pair per line, preceded
/// by `#` comment lines.
void write_series(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& rows,
                  const std::vector<std::string>& comments = {});

/// Alive-vs-round, cumulative throughput, CHs-per-round and nodes-per-quadrant
/// series for one run. `suffix` is appended to each file stem.
std::vector<std::filesystem::path> write_run_plot_data(const SimulationResult& res,
                                                       const std::filesystem::path& dir,
                                                       const std::string& suffix,
                                                       const std::string& fingerprint);

}  // namespace quadsim
