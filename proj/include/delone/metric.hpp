#pragma once

#include <optional>

#include "delone/point_set.hpp"

namespace delone {

inline constexpr double kMetricCap = 0.70710678118654752;  // 1/√2

struct MetricWitness {
  double epsilon = 0.0;
  Vec v{}, v_prime{};
};

/// Bracket for d(X, Y). cap_hit means no ε < 1/√2 admits a match on the
/// windows, and then lower = upper = 1/√2.
struct MetricResult {
  double lower = 0.0;
  double upper = kMetricCap;
  bool cap_hit = false;
  std::optional<MetricWitness> witness;
  double epsilon_min = 0.0;  // smallest ε the windows can decide: 1/ε + ε = min(W_X, W_Y)
  std::size_t decisions = 0;
};

struct MetricConfig {
  double tolerance = 1e-4;
  int max_iterations = 200;
};

/// Whether ε belongs to the defining set: some v, v′ in the open ball B_ε(0)
/// with (X − v) ∩ B_{1/ε}(0) = (Y − v′) ∩ B_{1/ε}(0) within kEta.
/// Throws InsufficientWindow when 1/ε + ε exceeds a window radius.
std::optional<MetricWitness> metric_match(const WindowedDeloneSet& X, const WindowedDeloneSet& Y, double epsilon);

/// Bisection over ε (the defining set is upward closed). Throws
/// InsufficientWindow when the windows cannot decide any ε < 1/√2.
MetricResult delone_distance(const WindowedDeloneSet& X, const WindowedDeloneSet& Y, const MetricConfig& cfg = {});

}  // namespace delone
