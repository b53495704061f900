#include "quadsim/model.hpp"

#include <cmath>
#include <string>

#include "quadsim/error.hpp"
#include "quadsim/rng.hpp"

namespace quadsim {

void FieldSpec::validate() const {
  if (!(std::isfinite(width) && width > 0.0)) {
    throw ConfigError("field.width", "must be > 0, got " + std::to_string(width));
  }
  if (!(std::isfinite(height) && height > 0.0)) {
    throw ConfigError("field.height", "must be > 0, got " + std::to_string(height));
  }
}

double distance_squared(Position a, Position b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Position a, Position b) { return std::sqrt(distance_squared(a, b)); }

std::string_view to_string(QuadrantId q) {
  switch (q) {
    case QuadrantId::A1: return "A1";
    case QuadrantId::A2: return "A2";
    case QuadrantId::A3: return "A3";
    case QuadrantId::A4: return "A4";
  }
  return "?";
}

FieldPartition partition_field(const FieldSpec& field) {
  field.validate();
  const double mx = field.width / 2.0;
  const double my = field.height / 2.0;
  FieldPartition part{field, {mx, my}, {}};
  part.quadrants[index_of(QuadrantId::A1)] = {0.0, 0.0, mx, my};
  part.quadrants[index_of(QuadrantId::A2)] = {mx, 0.0, field.width, my};
  part.quadrants[index_of(QuadrantId::A3)] = {0.0, my, mx, field.height};
  part.quadrants[index_of(QuadrantId::A4)] = {mx, my, field.width, field.height};
  return part;
}

bool in_field(Position p, const FieldSpec& field) {
  return p.x >= 0.0 && p.x <= field.width && p.y >= 0.0 && p.y <= field.height;
}

QuadrantId quadrant_of(Position p, const FieldPartition& part) {
  if (!in_field(p, part.field)) {
    throw DomainError("position (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") lies outside the field");
  }
  const bool high_x = p.x >= part.split.x;
  const bool high_y = p.y >= part.split.y;
  return static_cast<QuadrantId>((high_x ? 1 : 0) + (high_y ? 2 : 0));
}

std::vector<Node> deploy_nodes(std::size_t n, const FieldSpec& field, double initial_energy,
                               std::uint64_t seed) {
  if (n == 0) throw ConfigError("simulation.n_nodes", "must be >= 1");
  if (!(std::isfinite(initial_energy) && initial_energy > 0.0)) {
    throw ConfigError("simulation.initial_energy", "must be > 0");
  }
  const FieldPartition part = partition_field(field);
  Rng rng(seed);
  std::vector<Node> nodes;
  nodes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Node node;
    node.id = static_cast<NodeId>(i);
    node.position.x = rng.uniform(0.0, field.width);
    node.position.y = rng.uniform(0.0, field.height);
    node.energy = initial_energy;
    node.quadrant = quadrant_of(node.position, part);
    nodes.push_back(node);
  }
  return nodes;
}

std::array<std::size_t, kQuadrantCount> count_per_quadrant(const std::vector<Node>& nodes) {
  std::array<std::size_t, kQuadrantCount> counts{};
  for (const Node& node : nodes) {
    if (node.alive) ++counts[index_of(node.quadrant)];
  }
  return counts;
}

}  // namespace quadsim
