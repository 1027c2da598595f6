#include "wsn/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsn/errors.hpp"

namespace wsn {

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i].value);
  }
  return out;
}

}  // namespace

CoverageError::CoverageError(std::vector<NodeId> uncovered)
    : Error("nodes outside every base-station cell: " + join_ids(uncovered)),
      uncovered_(std::move(uncovered)) {}

Deployment::Deployment(Rect area, std::vector<NodePlacement> nodes, std::vector<BaseStation> stations,
                       double adjacency_radius, std::uint32_t max_neighbors, double peripheral_margin)
    : area_(area),
      nodes_(std::move(nodes)),
      stations_(std::move(stations)),
      adjacency_radius_(adjacency_radius),
      max_neighbors_(max_neighbors),
      peripheral_margin_(peripheral_margin) {}

Point Deployment::position(NodeId id) const {
  if (!contains(id)) throw UnknownNode(id);
  return nodes_[id.value].position;
}

double Deployment::distance(NodeId a, NodeId b) const { return wsn::distance(position(a), position(b)); }

Deployment deploy(const DeploymentSpec& spec, Rng& rng) {
  if (spec.node_count < 1) throw ParameterError("deployment needs at least one node");
  if (!(spec.area.width() > 0.0) || !(spec.area.height() > 0.0)) {
    throw ParameterError("deployment area is degenerate");
  }
  if (spec.base_stations.empty()) throw ParameterError("deployment needs at least one base station");
  if (!(spec.adjacency_radius > 0.0)) throw ParameterError("adjacency radius must be positive");
  if (spec.peripheral_margin < 0.0) throw ParameterError("peripheral margin must be non-negative");

  const Rect& a = spec.area;
  std::vector<NodePlacement> nodes;
  nodes.reserve(spec.node_count);
  if (spec.placement == Placement::grid) {
    const auto n = spec.node_count;
    const auto cols = static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const std::uint32_t rows = (n + cols - 1) / cols;
    const double cw = a.width() / cols;
    const double ch = a.height() / rows;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t r = i / cols;
      const std::uint32_t c = i % cols;
      nodes.push_back({NodeId{i}, {a.min.x + (c + 0.5) * cw, a.min.y + (r + 0.5) * ch}});
    }
  } else {
    for (std::uint32_t i = 0; i < spec.node_count; ++i) {
      const double x = rng.uniform(a.min.x, a.max.x);
      const double y = rng.uniform(a.min.y, a.max.y);
      nodes.push_back({NodeId{i}, {x, y}});
    }
  }

  std::vector<NodeId> uncovered;
  for (const auto& n : nodes) {
    const bool covered = std::any_of(spec.base_stations.begin(), spec.base_stations.end(), [&](const BaseStation& s) {
      return wsn::distance(n.position, s.position) <= s.cell_radius;
    });
    if (!covered) uncovered.push_back(n.id);
  }
  if (!uncovered.empty()) throw CoverageError(std::move(uncovered));

  return Deployment(spec.area, std::move(nodes), spec.base_stations, spec.adjacency_radius, spec.max_neighbors,
                    spec.peripheral_margin);
}

AdjacencyMap neighbors(const Deployment& d) {
  AdjacencyMap adj(d.size());
  const double r = d.adjacency_radius();
  std::vector<std::pair<double, NodeId>> cand;
  for (const auto& a : d.nodes()) {
    cand.clear();
    for (const auto& b : d.nodes()) {
      if (b.id == a.id) continue;
      const double dist = wsn::distance(a.position, b.position);
      if (dist <= r) cand.emplace_back(dist, b.id);
    }
    std::sort(cand.begin(), cand.end());
    const std::size_t keep = std::min<std::size_t>(cand.size(), d.max_neighbors());
    auto& out = adj[a.id.value];
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(cand[i].second);
  }
  return adj;
}

bool is_peripheral(const Deployment& d, NodeId id) {
  const Point p = d.position(id);
  const Rect& a = d.area();
  const double edge = std::min({p.x - a.min.x, a.max.x - p.x, p.y - a.min.y, a.max.y - p.y});
  return edge < d.peripheral_margin() || edge <= 0.0;
}

std::vector<StationId> assign_cells(const Deployment& d) {
  std::vector<StationId> out;
  out.reserve(d.size());
  for (const auto& n : d.nodes()) {
    const BaseStation* best = nullptr;
    double best_dist = 0.0;
    for (const auto& s : d.base_stations()) {
      const double dist = wsn::distance(n.position, s.position);
      if (dist > s.cell_radius) continue;
      if (!best || dist < best_dist || (dist == best_dist && s.id < best->id)) {
        best = &s;
        best_dist = dist;
      }
    }
    if (!best) throw CoverageError({n.id});
    out.push_back(best->id);
  }
  return out;
}

}  // namespace wsn
