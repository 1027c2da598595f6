#include "wsn/trust_kbs.hpp"

#include <algorithm>
#include <cmath>

#include "wsn/errors.hpp"

namespace wsn {

void validate(const EstimatorConfig& cfg) {
  if (cfg.order < 1) throw ParameterError("estimator order must be >= 1");
  if (cfg.min_neighbors < 1) throw ParameterError("min_neighbors must be >= 1");
  if (!(cfg.distance_scale > 0.0)) throw ParameterError("distance_scale must be > 0");
  if (cfg.slope_window < 1 || cfg.slope_window > cfg.order) {
    throw ParameterError("slope_window must be in [1, order]");
  }
}

void validate(const TrustPolicy& pol) {
  if (!(pol.penalty_gain > 0.0)) throw ParameterError("penalty_gain must be > 0");
  if (!(pol.tolerance > 0.0)) throw ParameterError("tolerance must be > 0");
  if (pol.recovery_rate < 0.0) throw ParameterError("recovery_rate must be >= 0");
  if (!(pol.quarantine_threshold > 0.0 && pol.quarantine_threshold < 1.0)) {
    throw ParameterError("quarantine_threshold must be in (0, 1)");
  }
  if (!(pol.alarm_threshold > 0.0 && pol.alarm_threshold < 1.0)) {
    throw ParameterError("alarm_threshold must be in (0, 1)");
  }
  if (pol.alarm_threshold > pol.quarantine_threshold) {
    throw ParameterError("alarm_threshold must not exceed quarantine_threshold");
  }
  if (pol.hysteresis < 0.0) throw ParameterError("hysteresis must be >= 0");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(pol.initial_interior) || !unit(pol.initial_peripheral)) {
    throw ParameterError("initial trust values must be in [0, 1]");
  }
  if (!(pol.initial_peripheral < pol.initial_interior)) {
    throw ParameterError("initial_peripheral must be below initial_interior");
  }
}

void validate(const AvailabilityPolicy& pol) {
  if (pol.window < 1) throw ParameterError("availability window must be >= 1");
  if (!(pol.threshold > 0.0 && pol.threshold <= 1.0)) {
    throw ParameterError("availability threshold must be in (0, 1]");
  }
}

TrustLedger::TrustLedger(std::vector<double> initial) : trust_(std::move(initial)) {
  for (auto& b : trust_) b = std::clamp(b, 0.0, 1.0);
}

void TrustLedger::set(NodeId id, double b) { trust_.at(id.value) = std::clamp(b, 0.0, 1.0); }

TrustLedger initial_ledger(const Deployment& d, const TrustPolicy& pol) {
  std::vector<double> b;
  b.reserve(d.size());
  for (const auto& n : d.nodes()) b.push_back(is_peripheral(d, n.id) ? pol.initial_peripheral : pol.initial_interior);
  return TrustLedger(std::move(b));
}

NeighborHistory::NeighborHistory(const AdjacencyMap& adjacency, std::uint32_t depth)
    : adjacency_(adjacency), depth_(depth), rows_(adjacency.size()) {}

void NeighborHistory::append(TimeStep t, std::span<const std::optional<double>> readings) {
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    Row row;
    row.t = t;
    row.values.reserve(adjacency_[a].size());
    for (NodeId j : adjacency_[a]) {
      row.values.push_back(j.value < readings.size() ? readings[j.value] : std::nullopt);
    }
    auto& buf = rows_[a];
    buf.push_back(std::move(row));
    while (buf.size() > depth_) buf.pop_front();
  }
}

void NeighborHistory::purge(NodeId node) {
  for (std::size_t a = 0; a < adjacency_.size(); ++a) {
    const auto& adj = adjacency_[a];
    for (std::size_t k = 0; k < adj.size(); ++k) {
      if (adj[k] != node) continue;
      for (auto& row : rows_[a]) row.values[k].reset();
    }
  }
}

void NeighborHistory::overwrite(NodeId a, std::size_t row, std::size_t slot, std::optional<double> v) {
  rows_.at(a.value).at(row).values.at(slot) = v;
}

double extrapolate(std::span<const std::pair<double, double>> samples, TimeStep t) {
  if (samples.size() == 1) return samples.front().second;
  const auto k = static_cast<double>(samples.size());
  double st = 0.0, sx = 0.0;
  for (const auto& [ti, xi] : samples) {
    st += ti;
    sx += xi;
  }
  const double tbar = st / k;
  const double xbar = sx / k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [ti, xi] : samples) {
    sxx += (ti - tbar) * (ti - tbar);
    sxy += (ti - tbar) * (xi - xbar);
  }
  return xbar + (sxy / sxx) * (static_cast<double>(t) - tbar);
}

std::optional<double> estimate(NodeId a, const NeighborHistory& hist, const TrustLedger& ledger,
                               const Deployment& geom, const EstimatorConfig& cfg, TimeStep t) {
  if (!geom.contains(a)) throw UnknownNode(a);
  const auto& adj = hist.neighbors_of(a);
  const auto& rows = hist.rows(a);
  const TimeStep horizon = t - static_cast<TimeStep>(cfg.order);
  const TimeStep window_start = t - static_cast<TimeStep>(cfg.slope_window);

  std::vector<std::pair<double, double>> samples;
  double num = 0.0;
  double den = 0.0;
  std::uint32_t usable = 0;
  for (std::size_t k = 0; k < adj.size(); ++k) {
    const NodeId j = adj[k];
    const double w = ledger.at(j) * std::exp(-geom.distance(a, j) / cfg.distance_scale);
    if (!(w > 0.0)) continue;

    samples.clear();
    std::optional<double> newest;
    for (const auto& row : rows) {
      if (row.t >= t || row.t < horizon || !row.values[k]) continue;
      newest = *row.values[k];
      if (row.t >= window_start) samples.emplace_back(static_cast<double>(row.t), *row.values[k]);
    }
    if (!newest) continue;
    const double e_hat = samples.empty() ? *newest : extrapolate(samples, t);
    num += w * e_hat;
    den += w;
    ++usable;
  }
  if (usable < cfg.min_neighbors || !(den > 0.0)) return std::nullopt;
  return num / den;
}

double update_trust(double b_prev, double e, const TrustPolicy& pol) {
  const double mag = std::abs(e);
  const double g = mag > pol.tolerance ? pol.penalty_gain * (mag - pol.tolerance) : -pol.recovery_rate;
  return std::clamp(b_prev - g, 0.0, 1.0);
}

const char* to_string(Action a) {
  switch (a) {
    case Action::none: return "none";
    case Action::alarm: return "alarm";
    case Action::quarantine: return "quarantine";
    case Action::skip_no_estimate: return "skip_no_estimate";
  }
  return "?";
}

Decision decide(DecisionState& state, double b_new, const TrustPolicy& pol) {
  if (!state.quarantined) {
    if (b_new < pol.quarantine_threshold) {
      state.quarantined = true;
      return {Action::quarantine, false};
    }
    return {};
  }
  if (b_new > pol.quarantine_threshold + pol.hysteresis) {
    state = {};
    return {Action::none, true};
  }
  if (!state.alarmed && b_new < pol.alarm_threshold) {
    state.alarmed = true;
    return {Action::alarm, false};
  }
  return {};
}

AdjacencyMap restrict_adjacency(const AdjacencyMap& adjacency, const std::vector<NodeId>& members) {
  std::vector<bool> in(adjacency.size(), false);
  for (NodeId m : members) in.at(m.value) = true;
  AdjacencyMap out(adjacency.size());
  for (std::size_t a = 0; a < adjacency.size(); ++a) {
    if (!in[a]) continue;
    for (NodeId j : adjacency[a]) {
      if (in[j.value]) out[a].push_back(j);
    }
  }
  return out;
}

TrustEngine::TrustEngine(const Deployment& geom, const AdjacencyMap& adjacency, std::vector<NodeId> monitored,
                         EstimatorConfig cfg, TrustPolicy policy, AvailabilityPolicy availability)
    : geom_(&geom),
      monitored_(std::move(monitored)),
      is_monitored_(geom.size(), false),
      cfg_(cfg),
      policy_(policy),
      availability_(availability),
      ledger_(initial_ledger(geom, policy)),
      history_(restrict_adjacency(adjacency, monitored_), cfg.order),
      decisions_(geom.size()),
      revoked_(geom.size(), false),
      missing_window_(geom.size()),
      availability_latched_(geom.size(), false) {
  validate(cfg_);
  validate(policy_);
  validate(availability_);
  std::sort(monitored_.begin(), monitored_.end());
  for (NodeId m : monitored_) {
    if (!geom.contains(m)) throw UnknownNode(m);
    is_monitored_[m.value] = true;
  }
}

double TrustEngine::missing_rate(NodeId id) const {
  const auto& w = missing_window_.at(id.value);
  if (w.empty()) return 0.0;
  return static_cast<double>(std::count(w.begin(), w.end(), true)) / static_cast<double>(w.size());
}

void TrustEngine::mark_revoked(NodeId id) {
  revoked_.at(id.value) = true;
  history_.purge(id);
}

std::vector<Verdict> TrustEngine::step(TimeStep t, std::span<const Reading> readings) {
  std::vector<std::optional<double>> x(geom_->size());
  for (const auto& r : readings) {
    if (r.node.value < x.size() && is_monitored_[r.node.value] && !revoked_[r.node.value]) x[r.node.value] = r.value;
  }

  // Reads: every estimate sees the previous ledger and history.
  std::vector<Verdict> out;
  out.reserve(monitored_.size());
  for (NodeId a : monitored_) {
    Verdict v;
    v.node = a;
    v.t = t;
    v.value = x[a.value];
    v.missing = !v.value.has_value();
    v.estimate = estimate(a, history_, ledger_, *geom_, cfg_, t);
    v.trust = ledger_.at(a);
    out.push_back(v);
  }

  // Writes, in NodeId order.
  for (auto& v : out) {
    const NodeId a = v.node;
    if (v.value && v.estimate) {
      v.error = residual(*v.value, *v.estimate);
      v.trust = update_trust(ledger_.at(a), *v.error, policy_);
      ledger_.set(a, v.trust);
      const Decision d = decide(decisions_[a.value], v.trust, policy_);
      v.action = d.action;
      v.readmitted = d.readmitted;
      if (d.action == Action::quarantine) history_.purge(a);
    } else {
      v.action = Action::skip_no_estimate;
    }

    if (!revoked_[a.value]) {
      auto& w = missing_window_[a.value];
      w.push_back(v.missing);
      while (w.size() > availability_.window) w.pop_front();
      const bool full = w.size() == availability_.window;
      const double rate = missing_rate(a);
      if (full && rate >= availability_.threshold && !availability_latched_[a.value]) {
        availability_latched_[a.value] = true;
        v.availability_alarm = true;
      } else if (rate < availability_.threshold) {
        availability_latched_[a.value] = false;
      }
    }
  }

  std::vector<std::optional<double>> stored(geom_->size());
  for (NodeId a : monitored_) {
    if (!decisions_[a.value].quarantined && !revoked_[a.value]) stored[a.value] = x[a.value];
  }
  history_.append(t, stored);
  return out;
}

}  // namespace wsn
