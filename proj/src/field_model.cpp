#include "wsn/field_model.hpp"

#include <cmath>

#include "wsn/errors.hpp"

namespace wsn {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void validate(const FieldSpec& spec) {
  if (spec.kind == FieldKind::gaussian_plume && !(spec.spread > 0.0)) {
    throw ParameterError("gaussian_plume requires spread > 0");
  }
}

Point plume_center(const FieldSpec& spec, TimeStep t) {
  const auto tt = static_cast<double>(t);
  return {spec.center_start.x + tt * spec.center_velocity.x,
          spec.center_start.y + tt * spec.center_velocity.y};
}

double field_value(const FieldSpec& spec, Point p, TimeStep t) {
  const double trend = spec.baseline + spec.drift * static_cast<double>(t);
  switch (spec.kind) {
    case FieldKind::gaussian_plume: {
      const Point c = plume_center(spec, t);
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      const double d2 = dx * dx + dy * dy;
      return trend + spec.amplitude * std::exp(-d2 / (2.0 * spec.spread * spec.spread));
    }
    case FieldKind::linear_gradient:
      return trend + spec.amplitude * (p.x + p.y);
    case FieldKind::constant:
      return trend;
  }
  return trend;
}

double observe(const FieldSpec& spec, const NoiseSpec& noise, Point p, TimeStep t, Rng& rng) {
  const double truth = field_value(spec, p, t);
  if (noise.sigma == 0.0) return truth;
  return truth + noise.sigma * rng.normal();
}

Rng noise_stream(std::uint64_t master_seed, NodeId node, TimeStep t) {
  return Rng::stream(master_seed, "noise", {node.value, static_cast<std::uint64_t>(t)});
}

}  // namespace wsn
