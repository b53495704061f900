#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadsim/model.hpp"
#include "quadsim/protocols.hpp"
#include "quadsim/radio.hpp"
#include "quadsim/rng.hpp"

namespace quadsim {

/// What happens to nodes whose candidate scope elected no cluster head.
enum class OrphanPolicy {
  kDirectToBs,   // orphans send straight to the base station
  kPromoteHead,  // best-drawing eligible node of the scope becomes head first
};

std::string to_string(OrphanPolicy policy);
OrphanPolicy parse_orphan_policy(const std::string& text);

struct SimulationConfig {
  std::size_t n_nodes = 100;
  FieldSpec field;
  double initial_energy = 0.5;  // J
  ElectionParams election;
  RadioModel radio;
  PacketSpec packets;
  std::string protocol = "qleach";
  std::uint64_t max_rounds = 5000;
  std::uint64_t seed = 0;
  OrphanPolicy orphan_policy = OrphanPolicy::kPromoteHead;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Joules charged during a round, by kind.
struct EnergyLedger {
  double tx = 0.0;
  double rx = 0.0;
  double aggregation = 0.0;
  double exhausted = 0.0;  // residual drained by an action the node could not afford

  double total() const { return tx + rx + aggregation + exhausted; }
  EnergyLedger& operator+=(const EnergyLedger& o);
};

struct RoundTrace {
  std::uint64_t round = 0;
  std::size_t alive = 0;        // after the round
  std::vector<NodeId> ch_ids;   // heads that advertised
  std::uint64_t packets_to_bs = 0;
  std::uint64_t packets_to_chs = 0;
  double energy_remaining = 0.0;
  std::array<std::size_t, kQuadrantCount> alive_per_quadrant{};
  std::vector<NodeId> deaths;
  // Not exported to CSV:
  EnergyLedger charged;
  std::vector<Cluster> clusters;  // as scheduled for the steady state
  std::vector<NodeId> direct;     // nodes that sent straight to the BS

  friend bool operator==(const RoundTrace& a, const RoundTrace& b) {
    return a.round == b.round && a.alive == b.alive && a.ch_ids == b.ch_ids &&
           a.packets_to_bs == b.packets_to_bs && a.packets_to_chs == b.packets_to_chs &&
           a.energy_remaining == b.energy_remaining &&
           a.alive_per_quadrant == b.alive_per_quadrant && a.deaths == b.deaths;
  }
};

struct NetworkState {
  std::vector<Node> nodes;
  FieldPartition partition;
  std::uint64_t round = 0;
  Rng rng;

  std::size_t alive_count() const;
  double total_energy() const;
};

/// Deploys from the deployment sub-stream and seeds the protocol RNG from the
/// protocol sub-stream of cfg.seed.
NetworkState make_initial_state(const SimulationConfig& cfg);

/// Runs one full round on `state` and advances state.round. Requires at
/// least one alive node.
RoundTrace run_round(NetworkState& state, const ClusteringProtocol& protocol,
                     const SimulationConfig& cfg);

struct SimulationResult {
  SimulationConfig config;
  std::vector<RoundTrace> rounds;
  std::optional<std::uint64_t> first_death;  // round index
  std::optional<std::uint64_t> last_death;   // set only once every node is dead
  std::uint64_t total_packets_bs = 0;
  double initial_energy_total = 0.0;
  std::array<std::size_t, kQuadrantCount> deployed_per_quadrant{};
  double residual_energy = 0.0;
  EnergyLedger charged;
};

SimulationResult run_simulation(const SimulationConfig& cfg);

}  // namespace quadsim
