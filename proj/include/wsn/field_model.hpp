#pragma once

#include "wsn/rng.hpp"
#include "wsn/types.hpp"

namespace wsn {

enum class FieldKind { gaussian_plume, linear_gradient, constant };

// Ground-truth physical field. Evaluation is a pure function of (p, t).
struct FieldSpec {
  FieldKind kind = FieldKind::gaussian_plume;
  double amplitude = 10.0;
  Point center_start{30.0, 50.0};
  Point center_velocity{0.2, 0.0};  // meters per step
  double spread = 40.0;             // plume standard deviation, meters
  double baseline = 20.0;
  double drift = 0.0;  // field units per step

  bool operator==(const FieldSpec&) const = default;
};

struct NoiseSpec {
  double sigma = 1.0;

  bool operator==(const NoiseSpec&) const = default;
};

// Throws ParameterError when the spec is unusable (spread <= 0 for a plume).
void validate(const FieldSpec& spec);

Point plume_center(const FieldSpec& spec, TimeStep t);

double field_value(const FieldSpec& spec, Point p, TimeStep t);

// field_value + sigma * z, z drawn from `rng`. The caller positions the
// generator per (node, t); see noise_stream().
double observe(const FieldSpec& spec, const NoiseSpec& noise, Point p, TimeStep t, Rng& rng);

// Per-node, per-step observation noise substream.
Rng noise_stream(std::uint64_t master_seed, NodeId node, TimeStep t);

}  // namespace wsn
