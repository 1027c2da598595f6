#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "wsn/errors.hpp"
#include "wsn/field_model.hpp"

using namespace wsn;

namespace {

FieldSpec plume(double amplitude, double spread, double baseline) {
  FieldSpec f;
  f.kind = FieldKind::gaussian_plume;
  f.amplitude = amplitude;
  f.spread = spread;
  f.baseline = baseline;
  f.drift = 0.0;
  f.center_start = {40.0, 60.0};
  f.center_velocity = {0.5, -0.25};
  return f;
}

}  // namespace

TEST(FieldValue, ConstantFieldIgnoresPosition) {
  FieldSpec f;
  f.kind = FieldKind::constant;
  f.baseline = 10.0;
  f.drift = 0.0;
  EXPECT_EQ(field_value(f, {0, 0}, 5), 10.0);
  EXPECT_EQ(field_value(f, {73.5, -2}, 5), 10.0);
}

TEST(FieldValue, PlumePeakAtCenter) {
  const FieldSpec f = plume(4.0, 12.0, 1.0);
  const TimeStep t = 7;
  EXPECT_DOUBLE_EQ(field_value(f, plume_center(f, t), t), 5.0);
}

TEST(FieldValue, PlumeHalfMaximumRadius) {
  const double s = 12.0;
  const FieldSpec f = plume(4.0, s, 0.0);
  const TimeStep t = 3;
  const Point c = plume_center(f, t);
  const double r = s * std::sqrt(2.0 * std::log(2.0));
  // Oracle: 4 * exp(-r^2 / (2 s^2)) = 4 * exp(-ln 2) = 2.
  const double oracle = 4.0 * std::exp(-(r * r) / (2.0 * s * s));
  EXPECT_NEAR(oracle, 2.0, 1e-12);
  EXPECT_NEAR(field_value(f, {c.x + r, c.y}, t), 2.0, 1e-12);
  EXPECT_NEAR(field_value(f, {c.x, c.y - r}, t), 2.0, 1e-12);
}

TEST(FieldValue, LinearGradientAndDrift) {
  FieldSpec f;
  f.kind = FieldKind::linear_gradient;
  f.amplitude = 0.5;
  f.baseline = 1.0;
  f.drift = 0.25;
  EXPECT_DOUBLE_EQ(field_value(f, {2.0, 4.0}, 8), 1.0 + 2.0 + 0.5 * 6.0);
}

TEST(FieldValue, PlumeRequiresPositiveSpread) {
  FieldSpec f = plume(1, 0.0, 0);
  EXPECT_THROW(validate(f), ParameterError);
  f.kind = FieldKind::constant;
  EXPECT_NO_THROW(validate(f));
}

TEST(FieldProperties, MonotonicDecayFromCenter) {
  const FieldSpec f = plume(10.0, 25.0, 3.0);
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const TimeStep t = static_cast<TimeStep>(rng.below(200));
    const double angle = rng.uniform(0.0, 6.283185307179586);
    const double r1 = rng.uniform(0.0, 150.0);
    const double r2 = r1 + rng.uniform(0.0, 50.0);
    const Point c = plume_center(f, t);
    const Point p1{c.x + r1 * std::cos(angle), c.y + r1 * std::sin(angle)};
    const Point p2{c.x + r2 * std::cos(angle), c.y + r2 * std::sin(angle)};
    EXPECT_GE(field_value(f, p1, t), field_value(f, p2, t));
  }
}

TEST(FieldProperties, SpatialCorrelationNearCenter) {
  const FieldSpec f = FieldSpec{};  // default plume
  const double bound = f.amplitude * (1.0 - std::exp(-1.0 / 8.0));
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const TimeStep t = static_cast<TimeStep>(rng.below(200));
    const Point c = plume_center(f, t);
    auto inside = [&] {
      const double r = rng.uniform(0.0, f.spread / 2.0);
      const double a = rng.uniform(0.0, 6.283185307179586);
      return Point{c.x + r * std::cos(a), c.y + r * std::sin(a)};
    };
    const Point a = inside();
    const Point b = inside();
    EXPECT_LE(std::abs(field_value(f, a, t) - field_value(f, b, t)), bound);
  }
}

TEST(Observe, ZeroNoiseIsExact) {
  const FieldSpec f = plume(10.0, 20.0, 2.0);
  const NoiseSpec noise{0.0};
  for (TimeStep t = 0; t < 20; ++t) {
    Rng rng = noise_stream(1, NodeId{3}, t);
    EXPECT_EQ(observe(f, noise, {10, 10}, t, rng), field_value(f, {10, 10}, t));
  }
}

TEST(Observe, SameStreamSameValue) {
  const FieldSpec f = plume(10.0, 20.0, 2.0);
  const NoiseSpec noise{1.5};
  Rng a = noise_stream(77, NodeId{4}, 12);
  Rng b = noise_stream(77, NodeId{4}, 12);
  EXPECT_EQ(observe(f, noise, {1, 2}, 12, a), observe(f, noise, {1, 2}, 12, b));
  Rng other_node = noise_stream(77, NodeId{5}, 12);
  Rng fresh = noise_stream(77, NodeId{4}, 12);
  EXPECT_NE(observe(f, noise, {1, 2}, 12, other_node), observe(f, noise, {1, 2}, 12, fresh));
}

TEST(Observe, NoiseMomentsOverTenThousandDraws) {
  FieldSpec f;
  f.kind = FieldKind::constant;
  f.baseline = 5.0;
  f.drift = 0.0;
  const NoiseSpec noise{1.0};
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int t = 0; t < n; ++t) {
    Rng rng = noise_stream(2024, NodeId{0}, t);
    const double z = observe(f, noise, {0, 0}, t, rng) - 5.0;
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(sd, 1.0, 0.05);
}

TEST(Observe, DeterministicSequences) {
  const FieldSpec f = FieldSpec{};
  const NoiseSpec noise{1.0};
  auto sequence = [&](std::uint64_t seed) {
    std::vector<double> out;
    for (std::uint32_t node = 0; node < 5; ++node) {
      for (TimeStep t = 0; t < 50; ++t) {
        Rng rng = noise_stream(seed, NodeId{node}, t);
        out.push_back(observe(f, noise, {node * 10.0, 5.0}, t, rng));
      }
    }
    return out;
  };
  EXPECT_EQ(sequence(9), sequence(9));
  EXPECT_NE(sequence(9), sequence(10));
}
