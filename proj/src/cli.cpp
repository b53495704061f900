#include "quadsim/cli.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "quadsim/config.hpp"
#include "quadsim/error.hpp"
#include "quadsim/metrics.hpp"
#include "quadsim/rng.hpp"

#ifndef QUADSIM_VERSION
#define QUADSIM_VERSION "unknown"
#endif

namespace quadsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_out_dir(const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QUADSIM_OUT"); env != nullptr && *env != '\0') return env;
  return "quadsim-out";
}

namespace {

struct Failure {
  int code;
};

void report_issues(const ConfigLoad& load, std::ostream& err) {
  for (const ConfigIssue& issue : load.issues) {
    err << (issue.severity == ConfigIssue::Severity::kError ? "error: " : "warning: ")
        << issue.field << ": " << issue.message << '\n';
  }
}

/// Config file (or built-in defaults) plus flag overrides. Flags win.
ConfigLoad resolve_config(const Options& opts, const std::vector<std::string>& extra,
                          std::ostream& err) {
  std::vector<std::string> overrides = opts.overrides;
  if (opts.rounds) overrides.push_back("simulation.max_rounds=" + std::to_string(*opts.rounds));
  if (opts.seed) overrides.push_back("simulation.seed=" + std::to_string(*opts.seed));
  overrides.insert(overrides.end(), extra.begin(), extra.end());

  ConfigLoad load;
  try {
    load = opts.config ? load_config_file(*opts.config, overrides) : parse_config("", overrides);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    throw Failure{kConfigError};
  }
  report_issues(load, err);
  if (!load.ok()) {
    const bool unimplemented = std::any_of(load.issues.begin(), load.issues.end(), [](auto& i) {
      return i.message.find("not implemented") != std::string::npos;
    });
    throw Failure{unimplemented ? kNotImplemented : kConfigError};
  }
  return load;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

/// Runs every config on a small worker pool; results come back in input order.
std::vector<SimulationResult> run_all(const std::vector<SimulationConfig>& configs) {
  std::vector<SimulationResult> results(configs.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, configs.size()));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < configs.size();) {
            results[i] = run_simulation(configs[i]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string file_tag(const SimulationConfig& cfg) {
  return "_" + cfg.protocol + "_seed" + std::to_string(cfg.seed);
}

json config_json(const SimulationConfig& cfg) {
  return {
      {"n_nodes", cfg.n_nodes},
      {"field", {{"width", cfg.field.width}, {"height", cfg.field.height}}},
      {"initial_energy", cfg.initial_energy},
      {"election",
       {{"p", cfg.election.p},
        {"epoch_len", cfg.election.epoch_len()},
        {"per_area_cap", cfg.election.per_area_cap},
        {"orphan_policy", to_string(cfg.orphan_policy)}}},
      {"radio",
       {{"e_elec", cfg.radio.e_elec},
        {"e_amp", cfg.radio.e_amp},
        {"e_da", cfg.radio.e_da},
        {"bs_x", cfg.radio.bs_position.x},
        {"bs_y", cfg.radio.bs_position.y}}},
      {"packets", {{"data_bits", cfg.packets.data_bits}, {"ctrl_bits", cfg.packets.ctrl_bits}}},
      {"max_rounds", cfg.max_rounds},
  };
}

void write_manifest(const fs::path& dir, const std::string& command, const SimulationConfig& cfg,
                    const std::vector<std::string>& protocols,
                    const std::vector<std::uint64_t>& seeds, const std::vector<fs::path>& files) {
  json manifest = {
      {"tool", "quadsim"},
      {"version", QUADSIM_VERSION},
      {"command", command},
      {"rng_algorithm", std::string(kRngAlgorithm)},
      {"config_fingerprint", config_fingerprint(cfg)},
      {"config", config_json(cfg)},
      {"protocols", protocols},
      {"seeds", seeds},
  };
  json listed = json::array();
  for (const fs::path& f : files) listed.push_back(f.lexically_relative(dir).generic_string());
  manifest["files"] = listed;

  const fs::path path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Failure& f) {
    return f.code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const NotImplementedError& e) {
    err << "error: " << e.what() << '\n';
    return kNotImplemented;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int cmd_run(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.protocols.size() > 1) {
      err << "error: run takes a single --protocol; use compare for several\n";
      return int{kUsage};
    }
    std::vector<std::string> extra;
    if (!opts.protocols.empty()) extra.push_back("simulation.protocol=" + opts.protocols.front());
    const SimulationConfig cfg = resolve_config(opts, extra, err).config;

    const fs::path dir = resolve_out_dir(opts.out);
    const SimulationResult res = run_simulation(cfg);
    ensure_dir(dir);

    const std::string tag = file_tag(cfg);
    std::vector<fs::path> files{dir / ("trace" + tag + ".csv")};
    write_trace_csv(res.rounds, files.front());
    for (const fs::path& p : write_run_plot_data(res, dir, tag, config_fingerprint(cfg))) {
      files.push_back(p);
    }
    write_manifest(dir, "run", cfg, {cfg.protocol}, {cfg.seed}, files);

    const RunSummary s = summarize(res);
    out << "protocol " << s.protocol << ", seed " << s.seed << ", " << res.rounds.size()
        << " rounds\n"
        << "  first node death (S.P):  " << s.fnd.round << (s.fnd.censored ? " (censored)" : "")
        << '\n'
        << "  last node death (N.L.T): " << s.lnd.round << (s.lnd.censored ? " (censored)" : "")
        << '\n'
        << "  unstable period:         " << s.unstable << '\n'
        << "  packets to BS (T.P):     " << s.total_packets_bs << '\n'
        << "  output:                  " << dir.string() << '\n';
    return int{kOk};
  });
}

int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> protocols = opts.protocols;
    if (protocols.empty()) protocols = {"qleach", "leach"};
    if (protocols.size() < 2) {
      err << "error: compare needs at least two --protocol values\n";
      return int{kUsage};
    }
    for (const std::string& p : protocols) make_protocol(p);

    const SimulationConfig base = resolve_config(opts, {}, err).config;
    std::vector<std::uint64_t> seeds;
    if (opts.seed_count) {
      for (std::uint64_t s = 0; s < *opts.seed_count; ++s) seeds.push_back(s);
    } else if (opts.seed) {
      seeds.push_back(*opts.seed);
    } else {
      for (std::uint64_t s = 0; s < 20; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) {
      err << "error: compare needs at least one seed\n";
      return int{kUsage};
    }

    std::vector<SimulationConfig> configs;
    for (const std::string& p : protocols) {
      for (std::uint64_t s : seeds) {
        SimulationConfig c = base;
        c.protocol = p;
        c.seed = s;
        configs.push_back(std::move(c));
      }
    }
    const fs::path dir = resolve_out_dir(opts.out);
    const std::vector<SimulationResult> results = run_all(configs);
    ensure_dir(dir);
    ensure_dir(dir / "traces");

    ComparisonReport report{protocols, seeds, config_fingerprint(base), {}};
    std::vector<fs::path> files;
    for (const SimulationResult& res : results) {
      report.runs.push_back(summarize(res));
      const fs::path trace = dir / "traces" / ("trace" + file_tag(res.config) + ".csv");
      write_trace_csv(res.rounds, trace);
      files.push_back(trace);
      if (res.config.seed == seeds.front()) {
        for (const fs::path& p :
             write_run_plot_data(res, dir, file_tag(res.config), report.config_fingerprint)) {
          files.push_back(p);
        }
      }
    }
    write_report_csv(report, dir / "report.csv");
    files.push_back(dir / "report.csv");

    const auto aggregates = report.aggregates();
    std::vector<std::pair<std::string, std::string>> bars;
    for (const ProtocolAggregate& a : aggregates) {
      bars.emplace_back(a.protocol, std::to_string(a.unstable.median));
    }
    write_series(dir / "unstable_period.dat", bars,
                 {"config " + report.config_fingerprint, "protocol median_unstable_rounds"});
    files.push_back(dir / "unstable_period.dat");
    write_manifest(dir, "compare", base, protocols, seeds, files);

    out << "median over " << seeds.size() << " seeds (mean in parentheses)\n";
    out << std::left << std::setw(10) << "protocol" << std::setw(20) << "S.P (FND)"
        << std::setw(20) << "N.L.T (LND)" << std::setw(20) << "T.P (to BS)"
        << "censored\n";
    out << std::fixed << std::setprecision(1);
    for (const ProtocolAggregate& a : aggregates) {
      auto cell = [](const Spread& s) {
        std::ostringstream c;
        c << std::fixed << std::setprecision(1) << s.median << " (" << s.mean << ")";
        return c.str();
      };
      out << std::setw(10) << a.protocol << std::setw(20) << cell(a.fnd) << std::setw(20)
          << cell(a.lnd) << std::setw(20) << cell(a.total_packets_bs) << a.censored_runs
          << '\n';
    }
    out << "output: " << dir.string() << '\n';
    return int{kOk};
  });
}

int cmd_validate(const Options& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> extra;
    if (opts.protocols.size() == 1) extra.push_back("simulation.protocol=" + opts.protocols.front());
    const ConfigLoad load = resolve_config(opts, extra, err);
    out << "# resolved configuration (fingerprint " << config_fingerprint(load.config) << ")\n"
        << "# per_area_cap " << (load.cap_derived ? "derived from n_nodes and p" : "set explicitly")
        << ", epoch_len " << load.config.election.epoch_len() << " rounds\n"
        << render_config(load.config);
    return int{kOk};
  });
}

}  // namespace quadsim::cli
