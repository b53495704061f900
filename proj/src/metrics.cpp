#include "quadsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "quadsim/error.hpp"

namespace quadsim {

namespace fs = std::filesystem;

RoundMetric stability_period(const SimulationResult& res) {
  for (const RoundTrace& t : res.rounds) {
    if (!t.deaths.empty()) return {t.round, false};
  }
  return {res.config.max_rounds, true};
}

RoundMetric network_lifetime(const SimulationResult& res) {
  if (!res.rounds.empty() && res.rounds.back().alive == 0) return {res.rounds.back().round, false};
  return {res.config.max_rounds, true};
}

std::uint64_t unstable_period(const SimulationResult& res) {
  return network_lifetime(res).round - stability_period(res).round;
}

std::vector<std::uint64_t> cumulative_throughput(const SimulationResult& res) {
  std::vector<std::uint64_t> out;
  out.reserve(res.rounds.size());
  std::uint64_t sum = 0;
  for (const RoundTrace& t : res.rounds) out.push_back(sum += t.packets_to_bs);
  return out;
}

std::vector<std::size_t> chs_per_round(const SimulationResult& res) {
  std::vector<std::size_t> out;
  out.reserve(res.rounds.size());
  for (const RoundTrace& t : res.rounds) out.push_back(t.ch_ids.size());
  return out;
}

std::vector<std::array<std::size_t, kQuadrantCount>> nodes_per_quadrant(
    const SimulationResult& res) {
  std::vector<std::array<std::size_t, kQuadrantCount>> out;
  out.reserve(res.rounds.size());
  for (const RoundTrace& t : res.rounds) out.push_back(t.alive_per_quadrant);
  return out;
}

TraceRow TraceRow::from(const RoundTrace& t) {
  return {t.round,          t.alive,          t.ch_ids.size(),      t.packets_to_bs,
          t.packets_to_chs, t.energy_remaining, t.alive_per_quadrant, t.deaths};
}

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const fs::path& path, std::size_t line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return value;
}

std::ifstream open_for_read(const fs::path& path, const char* header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string first;
  if (!std::getline(in, first) || first != header) {
    throw IoError(path.string() + ": unexpected header");
  }
  return in;
}

}  // namespace

void write_trace_csv(const std::vector<RoundTrace>& rounds, const fs::path& path) {
  std::ofstream out = open_for_write(path);
  out << kTraceCsvHeader << '\n';
  for (const RoundTrace& t : rounds) {
    const TraceRow row = TraceRow::from(t);
    out << row.round << ',' << row.alive << ',' << row.n_chs << ',' << row.packets_to_bs << ','
        << row.packets_to_chs << ',' << format_double(row.energy_remaining_j);
    for (std::size_t q : row.alive_q) out << ',' << q;
    out << ',';
    for (std::size_t i = 0; i < row.deaths.size(); ++i) {
      if (i) out << ';';
      out << row.deaths[i];
    }
    out << '\n';
  }
  finish(out, path);
}

std::vector<TraceRow> read_trace_csv(const fs::path& path) {
  std::ifstream in = open_for_read(path, kTraceCsvHeader);
  std::vector<TraceRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split(line, ',');
    if (f.size() != 11) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 11 columns");
    }
    TraceRow row;
    row.round = parse_number<std::uint64_t>(f[0], path, line_no);
    row.alive = parse_number<std::size_t>(f[1], path, line_no);
    row.n_chs = parse_number<std::size_t>(f[2], path, line_no);
    row.packets_to_bs = parse_number<std::uint64_t>(f[3], path, line_no);
    row.packets_to_chs = parse_number<std::uint64_t>(f[4], path, line_no);
    row.energy_remaining_j = parse_number<double>(f[5], path, line_no);
    for (std::size_t q = 0; q < kQuadrantCount; ++q) {
      row.alive_q[q] = parse_number<std::size_t>(f[6 + q], path, line_no);
    }
    if (!f[10].empty()) {
      for (const std::string& id : split(f[10], ';')) {
        row.deaths.push_back(parse_number<NodeId>(id, path, line_no));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RunSummary summarize(const SimulationResult& res) {
  return {res.config.protocol,    res.config.seed,      stability_period(res),
          network_lifetime(res),  unstable_period(res), res.total_packets_bs};
}

Spread spread_of(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  const double median = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
  return {mean, median};
}

std::vector<ProtocolAggregate> ComparisonReport::aggregates() const {
  std::vector<ProtocolAggregate> out;
  for (const std::string& protocol : protocols) {
    std::vector<double> fnd, lnd, unstable, tp;
    ProtocolAggregate agg;
    agg.protocol = protocol;
    for (std::uint64_t seed : seeds) {
      auto it = std::find_if(runs.begin(), runs.end(), [&](const RunSummary& r) {
        return r.protocol == protocol && r.seed == seed;
      });
      if (it == runs.end()) {
        throw std::logic_error("report lacks run for " + protocol + " seed " +
                               std::to_string(seed));
      }
      fnd.push_back(static_cast<double>(it->fnd.round));
      lnd.push_back(static_cast<double>(it->lnd.round));
      unstable.push_back(static_cast<double>(it->unstable));
      tp.push_back(static_cast<double>(it->total_packets_bs));
      if (it->fnd.censored || it->lnd.censored) ++agg.censored_runs;
    }
    agg.runs = seeds.size();
    agg.fnd = spread_of(fnd);
    agg.lnd = spread_of(lnd);
    agg.unstable = spread_of(unstable);
    agg.total_packets_bs = spread_of(tp);
    out.push_back(std::move(agg));
  }
  return out;
}

void write_report_csv(const ComparisonReport& report, const fs::path& path) {
  std::ofstream out = open_for_write(path);
  out << kReportCsvHeader << '\n';
  for (const RunSummary& r : report.runs) {
    out << r.protocol << ',' << r.seed << ',' << r.fnd.round << ',' << int{r.fnd.censored} << ','
        << r.lnd.round << ',' << int{r.lnd.censored} << ',' << r.unstable << ','
        << r.total_packets_bs << '\n';
  }
  finish(out, path);
}

std::vector<RunSummary> read_report_csv(const fs::path& path) {
  std::ifstream in = open_for_read(path, kReportCsvHeader);
  std::vector<RunSummary> runs;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = split(line, ',');
    if (f.size() != 8) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 8 columns");
    }
    RunSummary r;
    r.protocol = f[0];
    r.seed = parse_number<std::uint64_t>(f[1], path, line_no);
    r.fnd = {parse_number<std::uint64_t>(f[2], path, line_no), f[3] == "1"};
    r.lnd = {parse_number<std::uint64_t>(f[4], path, line_no), f[5] == "1"};
    r.unstable = parse_number<std::uint64_t>(f[6], path, line_no);
    r.total_packets_bs = parse_number<std::uint64_t>(f[7], path, line_no);
    runs.push_back(std::move(r));
  }
  return runs;
}

void write_series(const fs::path& path,
                  const std::vector<std::pair<std::string, std::string>>& rows,
                  const std::vector<std::string>& comments) {
  std::ofstream out = open_for_write(path);
  for (const std::string& c : comments) out << "# " << c << '\n';
  for (const auto& [x, y] : rows) out << x << ' ' << y << '\n';
  finish(out, path);
}

std::vector<fs::path> write_run_plot_data(const SimulationResult& res, const fs::path& dir,
                                          const std::string& suffix,
                                          const std::string& fingerprint) {
  const std::string tag = "config " + fingerprint + ", protocol " + res.config.protocol +
                          ", seed " + std::to_string(res.config.seed);
  std::vector<fs::path> written;
  auto emit = [&](const std::string& stem, const std::string& columns,
                  std::vector<std::pair<std::string, std::string>> rows) {
    const fs::path path = dir / (stem + suffix + ".dat");
    write_series(path, rows, {tag, columns});
    written.push_back(path);
  };

  std::vector<std::pair<std::string, std::string>> alive, throughput, chs, quadrants;
  const auto cumulative = cumulative_throughput(res);
  for (std::size_t i = 0; i < res.rounds.size(); ++i) {
    const RoundTrace& t = res.rounds[i];
    const std::string r = std::to_string(t.round);
    alive.emplace_back(r, std::to_string(t.alive));
    throughput.emplace_back(r, std::to_string(cumulative[i]));
    chs.emplace_back(r, std::to_string(t.ch_ids.size()));
  }
  for (QuadrantId q : kAllQuadrants) {
    quadrants.emplace_back(std::string(to_string(q)),
                           std::to_string(res.deployed_per_quadrant[index_of(q)]));
  }
  emit("alive_vs_round", "round alive_nodes", std::move(alive));
  emit("cumulative_throughput", "round packets_to_bs_cumulative", std::move(throughput));
  emit("chs_per_round", "round cluster_heads", std::move(chs));
  emit("nodes_per_quadrant", "quadrant deployed_nodes", std::move(quadrants));
  return written;
}

}  // namespace quadsim
