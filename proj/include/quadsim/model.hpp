#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace quadsim {

using NodeId = std::uint32_t;

struct FieldSpec {
  double width = 100.0;   // m
  double height = 100.0;  // m

  /// Throws ConfigError unless both sides are positive and finite.
  void validate() const;
  double area() const { return width * height; }
};

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);
double distance_squared(Position a, Position b);

enum class QuadrantId : std::uint8_t { A1 = 0, A2 = 1, A3 = 2, A4 = 3 };

inline constexpr std::size_t kQuadrantCount = 4;
inline constexpr std::array<QuadrantId, kQuadrantCount> kAllQuadrants = {
    QuadrantId::A1, QuadrantId::A2, QuadrantId::A3, QuadrantId::A4};

constexpr std::size_t index_of(QuadrantId q) { return static_cast<std::size_t>(q); }
std::string_view to_string(QuadrantId q);

/// Axis-aligned half-open rectangle [x0, x1) x [y0, y1).
struct Rect {
  double x0, y0, x1, y1;

  double area() const { return (x1 - x0) * (y1 - y0); }
};

/// Four equal quadrants split at the field midpoint.
///
/// A1 is low-x/low-y, A2 high-x/low-y, A3 low-x/high-y, A4 high-x/high-y.
/// Coordinates below the midpoint go to the low side, coordinates at or above
/// it to the high side. The outer field edges x == width and y == height
/// belong to the high quadrants, so the four rectangles tile the closed field.
struct FieldPartition {
  FieldSpec field;
  Position split;
  std::array<Rect, kQuadrantCount> quadrants;

  const Rect& rect(QuadrantId q) const { return quadrants[index_of(q)]; }
};

FieldPartition partition_field(const FieldSpec& field);

bool in_field(Position p, const FieldSpec& field);

/// Throws DomainError for positions outside the closed field.
QuadrantId quadrant_of(Position p, const FieldPartition& part);

enum class Role : std::uint8_t { Member, ClusterHead };

struct Node {
  NodeId id = 0;
  Position position;
  double energy = 0.0;  // J
  bool alive = true;
  QuadrantId quadrant = QuadrantId::A1;
  bool eligible = true;  // not yet a cluster head in the current epoch
  Role role = Role::Member;

  friend bool operator==(const Node&, const Node&) = default;
};

/// `n` nodes with independent uniform positions, ids 0..n-1, all alive and
/// eligible. Positions are drawn x then y per node from `seed` directly; use
/// stream_seed() to derive it from a master seed.
std::vector<Node> deploy_nodes(std::size_t n, const FieldSpec& field, double initial_energy,
                               std::uint64_t seed);

/// Alive-node count per quadrant.
std::array<std::size_t, kQuadrantCount> count_per_quadrant(const std::vector<Node>& nodes);

}  // namespace quadsim
