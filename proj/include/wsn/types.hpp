#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>

namespace wsn {

struct NodeId {
  std::uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct StationId {
  std::uint32_t value = 0;
  auto operator<=>(const StationId&) const = default;
};

using TimeStep = std::int64_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

using Key = std::array<std::uint8_t, 16>;
using Block = std::array<std::uint8_t, 16>;

}  // namespace wsn

template <>
struct std::hash<wsn::NodeId> {
  std::size_t operator()(wsn::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
