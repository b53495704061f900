#pragma once

#include <cstdint>
#include <vector>

#include "quadsim/engine.hpp"
#include "quadsim/model.hpp"

namespace quadsim::test {

inline Node make_node(NodeId id, double x, double y, const FieldPartition& part,
                      double energy = 0.5) {
  Node n;
  n.id = id;
  n.position = {x, y};
  n.energy = energy;
  n.quadrant = quadrant_of(n.position, part);
  return n;
}

/// State over hand-placed nodes; ids follow vector order.
inline NetworkState make_state(const std::vector<Position>& where, std::uint64_t seed = 1,
                               double energy = 0.5, FieldSpec field = {}) {
  NetworkState s{{}, partition_field(field), 0, Rng(seed)};
  for (std::size_t i = 0; i < where.size(); ++i) {
    s.nodes.push_back(make_node(static_cast<NodeId>(i), where[i].x, where[i].y, s.partition, energy));
  }
  return s;
}

inline double relative_gap(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace quadsim::test
