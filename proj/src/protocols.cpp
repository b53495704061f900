#include "quadsim/protocols.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "quadsim/error.hpp"
#include "quadsim/radio.hpp"

namespace quadsim {

namespace {

void validate_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("election.p", "must lie in (0, 1), got " + std::to_string(p));
  }
}

std::size_t epoch_length(double p) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / p)));
}

template <typename AdmitFn>
Election run_election(const RoundContext& ctx, const ElectionParams& params, AdmitFn&& admit) {
  validate_probability(params.p);
  Election election;
  for (const Node& node : ctx.nodes) {
    if (!node.alive || !node.eligible) continue;
    const double temp = ctx.rng.uniform();
    election.draws.push_back({node.id, temp});
    if (temp <= leach_threshold(params.p, ctx.round, true) && admit(node)) {
      election.heads.push_back(node.id);
    }
  }
  return election;
}

bool same_scope(const Node& a, const Node& b, AssociationScope scope) {
  return scope == AssociationScope::Global || a.quadrant == b.quadrant;
}

}  // namespace

std::size_t ElectionParams::epoch_len() const { return epoch_length(p); }

void ElectionParams::validate() const {
  validate_probability(p);
  if (per_area_cap < 1) throw ConfigError("election.per_area_cap", "must be >= 1");
}

std::size_t ElectionParams::default_cap(std::size_t n_nodes, double p) {
  const double expected = static_cast<double>(n_nodes) * p / static_cast<double>(kQuadrantCount);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(expected)));
}

double leach_threshold(double p, std::uint64_t round, bool eligible) {
  validate_probability(p);
  if (!eligible) return 0.0;
  const auto offset = static_cast<double>(round % epoch_length(p));
  const double denom = 1.0 / p - offset;
  if (denom <= 1.0) return 1.0;
  return std::clamp(1.0 / denom, 0.0, 1.0);
}

Election elect_cluster_heads_qleach(const RoundContext& ctx, const ElectionParams& params) {
  std::array<std::size_t, kQuadrantCount> per_quadrant{};
  return run_election(ctx, params, [&](const Node& node) {
    std::size_t& count = per_quadrant[index_of(node.quadrant)];
    if (count >= params.per_area_cap) return false;
    ++count;
    return true;
  });
}

Election elect_cluster_heads_leach(const RoundContext& ctx, const ElectionParams& params) {
  return run_election(ctx, params, [](const Node&) { return true; });
}

std::vector<NodeId> promote_orphan_scopes(std::span<const Node> nodes, Election& election,
                                          AssociationScope scope) {
  std::vector<bool> is_head(nodes.size(), false);
  for (NodeId id : election.heads) is_head[id] = true;

  std::vector<NodeId> promoted;
  auto scope_has_head = [&](const Node& probe) {
    return std::any_of(election.heads.begin(), election.heads.end(),
                       [&](NodeId h) { return same_scope(nodes[h], probe, scope); });
  };
  for (const Node& node : nodes) {
    if (!node.alive || is_head[node.id] || scope_has_head(node)) continue;
    // `node` is the lowest-id orphan of its scope; pick the best draw there.
    const Draw* best = nullptr;
    for (const Draw& d : election.draws) {
      const Node& cand = nodes[d.id];
      if (is_head[d.id] || !same_scope(cand, node, scope)) continue;
      if (best == nullptr || d.value < best->value ||
          (d.value == best->value && d.id < best->id)) {
        best = &d;
      }
    }
    if (best == nullptr) continue;
    is_head[best->id] = true;
    promoted.push_back(best->id);
    election.heads.insert(std::lower_bound(election.heads.begin(), election.heads.end(), best->id),
                          best->id);
  }
  return promoted;
}

Association associate_members(std::span<const Node> nodes, std::span<const NodeId> heads,
                              AssociationScope scope) {
  Association out;
  std::vector<NodeId> sorted_heads(heads.begin(), heads.end());
  std::sort(sorted_heads.begin(), sorted_heads.end());

  std::vector<bool> is_head(nodes.size(), false);
  for (NodeId h : sorted_heads) {
    is_head[h] = true;
    Cluster c;
    c.head = h;
    if (scope == AssociationScope::QuadrantLocal) c.quadrant = nodes[h].quadrant;
    out.clusters.push_back(std::move(c));
  }

  for (const Node& node : nodes) {
    if (!node.alive || is_head[node.id]) continue;
    std::optional<std::size_t> best;
    double best_rssi = -1.0;
    for (std::size_t i = 0; i < sorted_heads.size(); ++i) {
      const Node& head = nodes[sorted_heads[i]];
      if (!same_scope(head, node, scope)) continue;
      const double s = rssi(distance(node.position, head.position));
      // Heads are visited in ascending id, so strict > keeps the lower id on ties.
      if (s > best_rssi) {
        best_rssi = s;
        best = i;
      }
    }
    if (best) {
      out.clusters[*best].members.push_back(node.id);
    } else {
      out.unclustered.push_back(node.id);
    }
  }
  return out;
}

TdmaSchedule build_tdma_schedule(const Cluster& cluster) {
  TdmaSchedule schedule{cluster.head, cluster.members};
  std::sort(schedule.slot_order.begin(), schedule.slot_order.end());
  return schedule;
}

std::vector<std::string> implemented_protocols() { return {"leach", "qleach"}; }

std::unique_ptr<ClusteringProtocol> make_protocol(std::string_view name) {
  if (name == "qleach") return std::make_unique<QLeachProtocol>();
  if (name == "leach") return std::make_unique<LeachProtocol>();
  if (name == "sep" || name == "deec") {
    throw NotImplementedError("protocol '" + std::string(name) +
                              "' is not implemented; add it as a ClusteringProtocol plugin");
  }
  throw ConfigError("simulation.protocol",
                    "unknown protocol '" + std::string(name) + "', valid names: leach, qleach");
}

}  // namespace quadsim
