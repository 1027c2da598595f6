#pragma once

#include <optional>
#include <vector>

#include "wsn/rng.hpp"
#include "wsn/types.hpp"

namespace wsn {

struct Rect {
  Point min{0.0, 0.0};
  Point max{100.0, 100.0};
  bool operator==(const Rect&) const = default;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool contains(Point p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
  Point center() const { return {(min.x + max.x) / 2.0, (min.y + max.y) / 2.0}; }
};

struct BaseStation {
  StationId id;
  Point position;
  double cell_radius = 0.0;
  bool operator==(const BaseStation&) const = default;
};

enum class Placement { uniform_random, grid };

struct DeploymentSpec {
  std::uint32_t node_count = 25;
  Rect area;
  Placement placement = Placement::grid;
  std::vector<BaseStation> base_stations;
  double adjacency_radius = 30.0;
  std::uint32_t max_neighbors = 6;
  double peripheral_margin = 30.0;

  bool operator==(const DeploymentSpec&) const = default;
};

struct NodePlacement {
  NodeId id;
  Point position;
};

// Immutable once built: ids are dense in [0, N) and index `nodes`.
class Deployment {
 public:
  Deployment(Rect area, std::vector<NodePlacement> nodes, std::vector<BaseStation> stations,
             double adjacency_radius, std::uint32_t max_neighbors, double peripheral_margin);

  const Rect& area() const { return area_; }
  const std::vector<NodePlacement>& nodes() const { return nodes_; }
  const std::vector<BaseStation>& base_stations() const { return stations_; }
  double adjacency_radius() const { return adjacency_radius_; }
  std::uint32_t max_neighbors() const { return max_neighbors_; }
  double peripheral_margin() const { return peripheral_margin_; }

  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId id) const { return id.value < nodes_.size(); }
  // Throws UnknownNode.
  Point position(NodeId id) const;
  double distance(NodeId a, NodeId b) const;

 private:
  Rect area_;
  std::vector<NodePlacement> nodes_;
  std::vector<BaseStation> stations_;
  double adjacency_radius_;
  std::uint32_t max_neighbors_;
  double peripheral_margin_;
};

// Places nodes and checks cell coverage. Throws ParameterError for a bad
// spec and CoverageError naming every node outside all cells.
Deployment deploy(const DeploymentSpec& spec, Rng& rng);

// Per node: up to max_neighbors nearest nodes within adjacency_radius, sorted
// by distance then NodeId. Membership need not be symmetric.
using AdjacencyMap = std::vector<std::vector<NodeId>>;

AdjacencyMap neighbors(const Deployment& d);

// Distance to the nearest area edge is below the peripheral margin. Nodes on
// the boundary are peripheral even with a zero margin.
bool is_peripheral(const Deployment& d, NodeId id);

// Serving station per node: the nearest station whose cell covers it, lower
// station id on ties.
std::vector<StationId> assign_cells(const Deployment& d);

}  // namespace wsn
