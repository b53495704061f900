// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quadsim/config.hpp"
#include "quadsim/engine.hpp"
#include "quadsim/metrics.hpp"
#include "quadsim/protocols.hpp"

using namespace quadsim;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeeds = 20;

// Pass bars.
constexpr double kFndRatio = 1.3;
constexpr double kLndRatio = 1.15;
constexpr double kSweepSeconds = 60.0;
constexpr std::uint64_t kLeachFndLo = 300, kLeachFndHi = 1500;
constexpr std::uint64_t kLeachLndLo = 800, kLeachLndHi = 3000;
constexpr double kConservationTol = 1e-9;
constexpr std::size_t kUniformNodes = 10000, kUniformTarget = 2500, kUniformBand = 125;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Sweep {
  std::vector<SimulationResult> qleach, leach;
  double seconds = 0.0;
};

SimulationConfig reference_config() {
  SimulationConfig cfg;  // 100 nodes, 100x100 m, 0.5 J, p=0.05, 2000-bit frames, BS (50, 150)
  cfg.max_rounds = 10000;
  return cfg;
}

const Sweep& sweep() {
  static const Sweep s = [] {
    Sweep out;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
      SimulationConfig cfg = reference_config();
      cfg.seed = seed;
      cfg.protocol = "qleach";
      out.qleach.push_back(run_simulation(cfg));
      cfg.protocol = "leach";
      out.leach.push_back(run_simulation(cfg));
    }
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }();
  return s;
}

double median_of(const std::vector<SimulationResult>& runs,
                 const std::function<double(const SimulationResult&)>& f) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(f(r));
  return spread_of(v).median;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome relative_improvement() {
  const Sweep& s = sweep();
  auto fnd = [](const SimulationResult& r) { return double(stability_period(r).round); };
  auto lnd = [](const SimulationResult& r) { return double(network_lifetime(r).round); };
  auto tp = [](const SimulationResult& r) { return double(r.total_packets_bs); };
  const double qf = median_of(s.qleach, fnd), lf = median_of(s.leach, fnd);
  const double ql = median_of(s.qleach, lnd), ll = median_of(s.leach, lnd);
  const double qt = median_of(s.qleach, tp), lt = median_of(s.leach, tp);
  const bool fnd_ok = qf >= kFndRatio * lf;
  const bool lnd_ok = ql >= kLndRatio * ll;
  const bool tp_ok = qt > lt;
  const bool time_ok = s.seconds < kSweepSeconds;
  return {fnd_ok && lnd_ok && tp_ok && time_ok,
          fmt("FND %.1f vs %.1f (x%.3f, need >= %.2f) %s; LND %.1f vs %.1f (x%.3f, need >= %.2f) "
              "%s; T.P %.1f vs %.1f %s; %zu-run sweep %.2fs %s",
              qf, lf, qf / lf, kFndRatio, fnd_ok ? "ok" : "FAIL", ql, ll, ql / ll, kLndRatio,
              lnd_ok ? "ok" : "FAIL", qt, lt, tp_ok ? "ok" : "FAIL", 2 * kSeeds, s.seconds,
              time_ok ? "ok" : "FAIL")};
}

Outcome order_of_magnitude() {
  const Sweep& s = sweep();
  std::uint64_t fmin = ~0ull, fmax = 0, lmin = ~0ull, lmax = 0;
  bool censored = false;
  for (const auto& r : s.leach) {
    const RoundMetric f = stability_period(r), l = network_lifetime(r);
    censored = censored || f.censored || l.censored;
    fmin = std::min(fmin, f.round);
    fmax = std::max(fmax, f.round);
    lmin = std::min(lmin, l.round);
    lmax = std::max(lmax, l.round);
  }
  const bool ok = !censored && fmin >= kLeachFndLo && fmax <= kLeachFndHi && lmin >= kLeachLndLo &&
                  lmax <= kLeachLndHi;
  return {ok, fmt("LEACH FND range [%llu, %llu] within [%llu, %llu]; LND range [%llu, %llu] "
                  "within [%llu, %llu] over %llu seeds",
                  (unsigned long long)fmin, (unsigned long long)fmax,
                  (unsigned long long)kLeachFndLo, (unsigned long long)kLeachFndHi,
                  (unsigned long long)lmin, (unsigned long long)lmax,
                  (unsigned long long)kLeachLndLo, (unsigned long long)kLeachLndHi,
                  (unsigned long long)kSeeds)};
}

Outcome energy_conservation() {
  double worst = 0.0;
  for (const auto* runs : {&sweep().qleach, &sweep().leach}) {
    for (const auto& r : *runs) {
      const double gap = std::abs(r.initial_energy_total - (r.charged.total() + r.residual_energy));
      worst = std::max(worst, gap / r.initial_energy_total);
    }
  }
  return {worst <= kConservationTol,
          fmt("worst relative gap %.3e over %llu runs (tolerance %.0e)", worst,
              (unsigned long long)(2 * kSeeds), kConservationTol)};
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "quadsim-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::size_t compared = 0;
  bool same = true;
  for (const char* protocol : {"qleach", "leach"}) {
    for (std::uint64_t seed : {0u, 7u, 19u}) {
      SimulationConfig cfg = reference_config();
      cfg.protocol = protocol;
      cfg.seed = seed;
      const fs::path a = dir / "a.csv", b = dir / "b.csv";
      write_trace_csv(run_simulation(cfg).rounds, a);
      write_trace_csv(run_simulation(cfg).rounds, b);
      same = same && read_bytes(a) == read_bytes(b);
      ++compared;
    }
  }
  // Two separate processes.
  const std::string cmd = std::string(QUADSIM_BIN) + " run --seed 7 --out ";
  const int s1 = std::system((cmd + (dir / "p1").string() + " > /dev/null").c_str());
  const int s2 = std::system((cmd + (dir / "p2").string() + " > /dev/null").c_str());
  const bool proc_ok = s1 == 0 && s2 == 0 &&
                       read_bytes(dir / "p1" / "trace_qleach_seed7.csv") ==
                           read_bytes(dir / "p2" / "trace_qleach_seed7.csv") &&
                       !read_bytes(dir / "p1" / "trace_qleach_seed7.csv").empty();
  fs::remove_all(dir);
  return {same && proc_ok, fmt("%zu in-process trace pairs %s; two CLI invocations %s", compared,
                               same ? "identical" : "DIFFER", proc_ok ? "identical" : "DIFFER")};
}

Outcome election_oracle() {
  Rng gen(20240501);
  std::size_t mismatches = 0, heads_seen = 0;
  const FieldPartition part = partition_field({});
  for (int trial = 0; trial < 100; ++trial) {
    // Ten nodes, all inside one quadrant.
    const auto q = static_cast<QuadrantId>(trial % 4);
    const Rect& box = part.rect(q);
    std::vector<Node> nodes;
    for (NodeId id = 0; id < 10; ++id) {
      Node n;
      n.id = id;
      n.position = {gen.uniform(box.x0, box.x1), gen.uniform(box.y0, box.y1)};
      n.quadrant = quadrant_of(n.position, part);
      n.energy = 0.5;
      n.eligible = gen.uniform() < 0.8;
      n.alive = gen.uniform() < 0.9;
      nodes.push_back(n);
    }
    const auto round = static_cast<std::uint64_t>(gen.uniform(0, 60));
    const std::uint64_t stream = gen.next_u64();

    Rng rng(stream);
    const RoundContext ctx{round, nodes, part, rng};
    const Election got = elect_cluster_heads_qleach(ctx, {0.05, kUnlimitedCap});

    // Brute-force replay: literal threshold, one draw per alive eligible node.
    Rng replay(stream);
    std::vector<NodeId> want;
    const double t = std::min(1.0, 0.05 / (1.0 - 0.05 * double(round % 20)));
    for (const Node& n : nodes) {
      if (!n.alive || !n.eligible) continue;
      if (replay.uniform() <= t) want.push_back(n.id);
    }
    if (got.heads != want) ++mismatches;
    heads_seen += want.size();
  }
  return {mismatches == 0, fmt("100 ten-node cases, %zu mismatches (%zu heads replayed)",
                               mismatches, heads_seen)};
}

Outcome structural_invariants() {
  std::size_t rounds_checked = 0;
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what) {
    if (failures.size() < 5) failures.push_back(what);
  };

  for (std::size_t cap : {std::size_t{1}, std::size_t{2}}) {
    for (const char* name : {"qleach", "leach"}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SimulationConfig cfg = reference_config();
        cfg.protocol = name;
        cfg.seed = seed;
        cfg.election.per_area_cap = cap;
        const bool quadrant_mode = cfg.protocol == "qleach";
        auto protocol = make_protocol(name);
        NetworkState state = make_initial_state(cfg);
        bool whole = true;
        std::set<NodeId> served;
        while (state.alive_count() > 0) {
          if (state.round % cfg.election.epoch_len() == 0) served.clear();
          std::vector<bool> alive_before(state.nodes.size());
          for (const Node& n : state.nodes) alive_before[n.id] = n.alive;
          const RoundTrace t = run_round(state, *protocol, cfg);
          ++rounds_checked;

          std::array<std::size_t, kQuadrantCount> per_q{};
          std::set<NodeId> heads(t.ch_ids.begin(), t.ch_ids.end());
          for (NodeId h : t.ch_ids) {
            ++per_q[index_of(state.nodes[h].quadrant)];
            if (whole && !served.insert(h).second) fail("double election within an epoch");
          }
          if (quadrant_mode) {
            for (std::size_t c : per_q) {
              if (c > cap) fail("quadrant above cap");
            }
          }

          std::multiset<NodeId> covered(t.direct.begin(), t.direct.end());
          for (const Cluster& c : t.clusters) {
            for (NodeId m : c.members) {
              covered.insert(m);
              if (quadrant_mode && state.nodes[m].quadrant != state.nodes[c.head].quadrant) {
                fail("cluster spans quadrants");
              }
            }
          }
          for (NodeId id : covered) {
            if (covered.count(id) != 1) fail("node in two clusters");
            if (heads.count(id)) fail("head listed as member");
            if (!alive_before[id]) fail("dead node clustered");
          }
          for (const Node& n : state.nodes) {
            if (n.alive && !heads.count(n.id) && covered.count(n.id) != 1) {
              fail("alive non-head node not covered");
            }
          }
          if (!t.deaths.empty()) whole = false;
        }
      }
    }
  }
  const bool threshold_exact = leach_threshold(0.05, 19, true) == 1.0;
  if (!threshold_exact) fail("T(0.05, 19) != 1.0");
  std::string detail = fmt("%zu rounds checked (caps 1 and 2, both protocols); T(0.05,19) = %.17g",
                           rounds_checked, leach_threshold(0.05, 19, true));
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome uniform_deployment() {
  const auto nodes =
      deploy_nodes(kUniformNodes, {}, 0.5, stream_seed(0, Stream::kDeployment));
  const auto counts = count_per_quadrant(nodes);
  bool ok = true;
  for (std::size_t c : counts) {
    ok = ok && c >= kUniformTarget - kUniformBand && c <= kUniformTarget + kUniformBand;
  }
  return {ok, fmt("quadrant counts %zu %zu %zu %zu, band %zu +/- %zu", counts[0], counts[1],
                  counts[2], counts[3], kUniformTarget, kUniformBand)};
}

Outcome metrics_algebra() {
  const fs::path path = fs::temp_directory_path() / "quadsim-acceptance-trace.csv";
  std::size_t runs = 0;
  std::vector<std::string> failures;
  for (const auto* set : {&sweep().qleach, &sweep().leach}) {
    for (const auto& r : *set) {
      ++runs;
      if (stability_period(r).round > network_lifetime(r).round) failures.push_back("fnd > lnd");
      const auto cum = cumulative_throughput(r);
      if (!std::is_sorted(cum.begin(), cum.end())) failures.push_back("throughput decreases");
      if (cum.empty() || cum.back() != r.total_packets_bs) failures.push_back("final throughput");
      write_trace_csv(r.rounds, path);
      const auto rows = read_trace_csv(path);
      bool lossless = rows.size() == r.rounds.size();
      for (std::size_t i = 0; lossless && i < rows.size(); ++i) {
        const TraceRow want = TraceRow::from(r.rounds[i]);
        lossless = rows[i].round == want.round && rows[i].alive == want.alive &&
                   rows[i].n_chs == want.n_chs && rows[i].packets_to_bs == want.packets_to_bs &&
                   rows[i].packets_to_chs == want.packets_to_chs &&
                   rows[i].alive_q == want.alive_q && rows[i].deaths == want.deaths;
      }
      if (!lossless) failures.push_back("CSV integer round trip");
    }
  }
  fs::remove(path);
  std::string detail = fmt("%zu runs: fnd <= lnd, cumulative throughput monotone and equal to "
                           "engine total, integer CSV fields lossless",
                           runs);
  for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 5); ++i) {
    detail += "; " + failures[i];
  }
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 relative improvement", relative_improvement},
      {"2 order of magnitude", order_of_magnitude},
      {"3 energy conservation", energy_conservation},
      {"4 determinism", determinism},
      {"5 election oracle", election_oracle},
      {"6 structural invariants", structural_invariants},
      {"7 uniform deployment", uniform_deployment},
      {"8 metrics algebra", metrics_algebra},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const Outcome o = check();
    std::printf("[%s] %-26s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
