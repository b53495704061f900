#include "quadsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quadsim/error.hpp"

namespace quadsim {

std::string to_string(OrphanPolicy policy) {
  switch (policy) {
    case OrphanPolicy::kDirectToBs: return "direct";
    case OrphanPolicy::kPromoteHead: return "promote";
  }
  return "?";
}

OrphanPolicy parse_orphan_policy(const std::string& text) {
  if (text == "direct") return OrphanPolicy::kDirectToBs;
  if (text == "promote") return OrphanPolicy::kPromoteHead;
  throw ConfigError("election.orphan_policy",
                    "unknown value '" + text + "', valid values: direct, promote");
}

void SimulationConfig::validate() const {
  if (n_nodes < 1) throw ConfigError("simulation.n_nodes", "must be >= 1");
  field.validate();
  if (!(std::isfinite(initial_energy) && initial_energy > 0.0)) {
    throw ConfigError("simulation.initial_energy", "must be > 0");
  }
  election.validate();
  radio.validate();
  packets.validate();
  if (max_rounds < 1) throw ConfigError("simulation.max_rounds", "must be >= 1");
  make_protocol(protocol);
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& o) {
  tx += o.tx;
  rx += o.rx;
  aggregation += o.aggregation;
  exhausted += o.exhausted;
  return *this;
}

std::size_t NetworkState::alive_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive; }));
}

double NetworkState::total_energy() const {
  return std::accumulate(nodes.begin(), nodes.end(), 0.0,
                         [](double acc, const Node& n) { return acc + n.energy; });
}

NetworkState make_initial_state(const SimulationConfig& cfg) {
  return NetworkState{
      deploy_nodes(cfg.n_nodes, cfg.field, cfg.initial_energy,
                   stream_seed(cfg.seed, Stream::kDeployment)),
      partition_field(cfg.field), 0, Rng(stream_seed(cfg.seed, Stream::kProtocol))};
}

namespace {

enum class Charge { kTx, kRx, kAggregation };

/// Per-round bookkeeping shared by all phases.
class RoundAccount {
 public:
  RoundAccount(std::vector<Node>& nodes, RoundTrace& trace) : nodes_(nodes), trace_(trace) {}

  /// Debits `cost` from `id`. An unaffordable action does not happen: the
  /// node's residual is drained and it dies. Returns whether the action
  /// happened.
  bool charge(NodeId id, double cost, Charge kind) {
    Node& node = nodes_[id];
    if (!node.alive) return false;
    if (node.energy >= cost) {
      node.energy -= cost;
      book(kind, cost);
      if (node.energy <= 0.0) kill(node);
      return true;
    }
    trace_.charged.exhausted += node.energy;
    kill(node);
    return false;
  }

  bool alive(NodeId id) const { return nodes_[id].alive; }

 private:
  void book(Charge kind, double cost) {
    switch (kind) {
      case Charge::kTx: trace_.charged.tx += cost; break;
      case Charge::kRx: trace_.charged.rx += cost; break;
      case Charge::kAggregation: trace_.charged.aggregation += cost; break;
    }
  }

  void kill(Node& node) {
    node.energy = 0.0;
    node.alive = false;
    trace_.deaths.push_back(node.id);
  }

  std::vector<Node>& nodes_;
  RoundTrace& trace_;
};

bool in_scope(const Node& a, const Node& b, AssociationScope scope) {
  return scope == AssociationScope::Global || a.quadrant == b.quadrant;
}

}  // namespace

RoundTrace run_round(NetworkState& state, const ClusteringProtocol& protocol,
                     const SimulationConfig& cfg) {
  auto& nodes = state.nodes;
  const RadioModel& radio = cfg.radio;
  const std::int64_t ctrl = cfg.packets.ctrl_bits;
  const std::int64_t data = cfg.packets.data_bits;
  const AssociationScope scope = protocol.scope();

  RoundTrace trace;
  trace.round = state.round;
  RoundAccount account(nodes, trace);

  // 1. epoch reset
  if (state.round % cfg.election.epoch_len() == 0) {
    for (Node& n : nodes) n.eligible = n.alive;
  }
  for (Node& n : nodes) {
    if (n.alive) n.role = Role::Member;
  }

  // 2. election
  const RoundContext ctx{state.round, nodes, state.partition, state.rng};
  Election election = protocol.elect(ctx, cfg.election);
  if (cfg.orphan_policy == OrphanPolicy::kPromoteHead) {
    promote_orphan_scopes(nodes, election, scope);
  }
  for (NodeId h : election.heads) {
    nodes[h].role = Role::ClusterHead;
    nodes[h].eligible = false;
  }

  // 3. advertisement: each head broadcasts to the farthest listener in scope
  std::vector<NodeId> heads;
  for (NodeId h : election.heads) {
    double reach = 0.0;
    for (const Node& n : nodes) {
      if (n.alive && n.role == Role::Member && in_scope(n, nodes[h], scope)) {
        reach = std::max(reach, distance(n.position, nodes[h].position));
      }
    }
    if (!account.charge(h, tx_cost(ctrl, reach, radio), Charge::kTx)) continue;
    heads.push_back(h);
    for (const Node& n : nodes) {
      if (n.alive && n.role == Role::Member && in_scope(n, nodes[h], scope)) {
        account.charge(n.id, rx_cost(ctrl, radio), Charge::kRx);
      }
    }
  }
  trace.ch_ids = heads;

  // 4. association (heads that died advertising are not candidates)
  Association assoc = associate_members(nodes, heads, scope);
  std::vector<NodeId> direct = assoc.unclustered;

  // 5. join requests, 6. schedule broadcast
  std::vector<TdmaSchedule> schedules;
  for (Cluster& cluster : assoc.clusters) {
    const Node& head = nodes[cluster.head];
    std::vector<NodeId> joined;
    for (NodeId m : cluster.members) {
      if (!account.alive(cluster.head)) {
        if (account.alive(m)) direct.push_back(m);
        continue;
      }
      const double d = distance(nodes[m].position, head.position);
      if (!account.charge(m, tx_cost(ctrl, d, radio), Charge::kTx)) continue;
      if (account.charge(cluster.head, rx_cost(ctrl, radio), Charge::kRx)) {
        joined.push_back(m);
      } else {
        direct.push_back(m);
      }
    }
    cluster.members = std::move(joined);
    if (!account.alive(cluster.head)) {
      for (NodeId m : cluster.members) {
        if (account.alive(m)) direct.push_back(m);
      }
      continue;
    }
    if (!cluster.members.empty()) {
      double reach = 0.0;
      for (NodeId m : cluster.members) {
        reach = std::max(reach, distance(nodes[m].position, head.position));
      }
      if (!account.charge(cluster.head, tx_cost(ctrl, reach, radio), Charge::kTx)) {
        for (NodeId m : cluster.members) {
          if (account.alive(m)) direct.push_back(m);
        }
        continue;
      }
      std::vector<NodeId> scheduled;
      for (NodeId m : cluster.members) {
        if (account.charge(m, rx_cost(ctrl, radio), Charge::kRx)) scheduled.push_back(m);
      }
      cluster.members = std::move(scheduled);
    }
    schedules.push_back(build_tdma_schedule(cluster));
    trace.clusters.push_back(cluster);
  }

  // 7. steady state: one frame per member slot, fuse, forward to the BS.
  // Members keep their radio off outside their own slot.
  for (const TdmaSchedule& schedule : schedules) {
    const Node& head = nodes[schedule.head];
    std::int64_t signals = 1;
    for (NodeId m : schedule.slot_order) {
      const double d = distance(nodes[m].position, head.position);
      if (!account.charge(m, tx_cost(data, d, radio), Charge::kTx)) continue;
      if (account.charge(schedule.head, rx_cost(data, radio), Charge::kRx)) {
        ++trace.packets_to_chs;
        ++signals;
      }
    }
    if (!account.charge(schedule.head, aggregation_cost(data, signals, radio),
                        Charge::kAggregation)) {
      continue;
    }
    const double d_bs = distance(head.position, radio.bs_position);
    if (account.charge(schedule.head, tx_cost(data, d_bs, radio), Charge::kTx)) {
      ++trace.packets_to_bs;
    }
  }

  std::sort(direct.begin(), direct.end());
  trace.direct = direct;
  for (NodeId id : direct) {
    const double d_bs = distance(nodes[id].position, radio.bs_position);
    if (account.charge(id, tx_cost(data, d_bs, radio), Charge::kTx)) ++trace.packets_to_bs;
  }

  // 9. trace
  trace.alive = state.alive_count();
  trace.energy_remaining = state.total_energy();
  trace.alive_per_quadrant = count_per_quadrant(nodes);
  ++state.round;
  return trace;
}

SimulationResult run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  const auto protocol = make_protocol(cfg.protocol);

  SimulationResult result;
  result.config = cfg;
  NetworkState state = make_initial_state(cfg);
  result.initial_energy_total = state.total_energy();
  result.deployed_per_quadrant = count_per_quadrant(state.nodes);

  while (state.round < cfg.max_rounds && state.alive_count() > 0) {
    RoundTrace trace = run_round(state, *protocol, cfg);
    if (!trace.deaths.empty()) {
      if (!result.first_death) result.first_death = trace.round;
      if (trace.alive == 0) result.last_death = trace.round;
    }
    result.total_packets_bs += trace.packets_to_bs;
    result.charged += trace.charged;
    result.rounds.push_back(std::move(trace));
  }
  result.residual_energy = state.total_energy();
  return result;
}

}  // namespace quadsim
