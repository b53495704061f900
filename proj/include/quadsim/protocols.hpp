#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quadsim/model.hpp"
#include "quadsim/rng.hpp"

namespace quadsim {

inline constexpr std::size_t kUnlimitedCap = std::numeric_limits<std::size_t>::max();

struct ElectionParams {
  double p = 0.05;
  std::size_t per_area_cap = 1;  // cluster heads per quadrant, Q-LEACH only

  /// round(1/p): rounds per epoch, after which every alive node is eligible again.
  std::size_t epoch_len() const;
  void validate() const;

  /// round(n * p / 4) but at least 1: the expected cluster count spread evenly
  /// over the quadrants.
  static std::size_t default_cap(std::size_t n_nodes, double p);
};

/// Election threshold T(n) for round r.
///
/// Evaluated as 1 / (1/p - r mod epoch) which is algebraically
/// p / (1 - p * (r mod epoch)) but lands exactly on 1.0 in the last round of
/// an epoch. Ineligible nodes get 0. Result is clamped to [0, 1].
double leach_threshold(double p, std::uint64_t round, bool eligible);

struct RoundContext {
  std::uint64_t round = 0;
  std::span<const Node> nodes;  // indexed by id
  const FieldPartition& partition;
  Rng& rng;
};

struct Draw {
  NodeId id;
  double value;
};

struct Election {
  std::vector<NodeId> heads;  // ascending id
  std::vector<Draw> draws;    // every draw taken, in draw order
};

/// Per-quadrant election. Alive eligible nodes draw in ascending id order; a
/// node is elected when its draw is <= T(n) and its quadrant holds fewer than
/// per_area_cap heads so far. Nodes in a full quadrant still draw.
Election elect_cluster_heads_qleach(const RoundContext& ctx, const ElectionParams& params);

/// Network-wide election with the same draw sequence and no cap.
Election elect_cluster_heads_leach(const RoundContext& ctx, const ElectionParams& params);

enum class AssociationScope { QuadrantLocal, Global };

/// If a scope (a quadrant, or the whole network for Global) has alive non-head
/// nodes but no head, elect the eligible node of that scope whose draw came
/// closest to the threshold. Scopes without eligible nodes stay empty.
/// Returns the promoted ids.
std::vector<NodeId> promote_orphan_scopes(std::span<const Node> nodes, Election& election,
                                          AssociationScope scope);

struct Cluster {
  NodeId head = 0;
  std::vector<NodeId> members;  // ascending id, head excluded
  std::optional<QuadrantId> quadrant;
};

struct Association {
  std::vector<Cluster> clusters;   // ascending head id, one per head
  std::vector<NodeId> unclustered; // alive non-heads with no candidate head
};

/// Each alive non-head node joins the candidate head with the strongest RSSI;
/// ties go to the lower head id. QuadrantLocal restricts candidates to the
/// node's own quadrant.
Association associate_members(std::span<const Node> nodes, std::span<const NodeId> heads,
                              AssociationScope scope);

struct TdmaSchedule {
  NodeId head = 0;
  std::vector<NodeId> slot_order;

  std::size_t slots_per_frame() const { return slot_order.size(); }
};

TdmaSchedule build_tdma_schedule(const Cluster& cluster);

/// Setup-phase strategy. SEP and DEEC would slot in here.
class ClusteringProtocol {
 public:
  virtual ~ClusteringProtocol() = default;

  virtual std::string_view name() const = 0;
  virtual AssociationScope scope() const = 0;
  virtual Election elect(const RoundContext& ctx, const ElectionParams& params) const = 0;
};

class QLeachProtocol final : public ClusteringProtocol {
 public:
  std::string_view name() const override { return "qleach"; }
  AssociationScope scope() const override { return AssociationScope::QuadrantLocal; }
  Election elect(const RoundContext& ctx, const ElectionParams& params) const override {
    return elect_cluster_heads_qleach(ctx, params);
  }
};

class LeachProtocol final : public ClusteringProtocol {
 public:
  std::string_view name() const override { return "leach"; }
  AssociationScope scope() const override { return AssociationScope::Global; }
  Election elect(const RoundContext& ctx, const ElectionParams& params) const override {
    return elect_cluster_heads_leach(ctx, params);
  }
};

std::vector<std::string> implemented_protocols();

/// Throws NotImplementedError for "sep" and "deec", ConfigError (listing the
/// valid names) for anything else unknown.
std::unique_ptr<ClusteringProtocol> make_protocol(std::string_view name);

}  // namespace quadsim
