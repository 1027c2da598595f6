#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "wsn/topology.hpp"
#include "wsn/types.hpp"

namespace wsn {

struct EstimatorConfig {
  std::uint32_t order = 4;            // n: history depth in steps
  double distance_scale = 30.0;       // lambda, meters
  std::uint32_t min_neighbors = 2;    // m_min
  std::uint32_t slope_window = 4;     // steps used by the line fit, <= order

  bool operator==(const EstimatorConfig&) const = default;
};

struct TrustPolicy {
  double penalty_gain = 0.05 / 3.0;   // alpha
  double tolerance = 3.0;             // tau
  double recovery_rate = 0.01;        // rho
  double quarantine_threshold = 0.5;  // theta_q
  double alarm_threshold = 0.3;       // theta_a
  double hysteresis = 0.1;            // re-admission above theta_q + h
  double initial_interior = 1.0;
  double initial_peripheral = 0.8;

  bool operator==(const TrustPolicy&) const = default;
};

struct AvailabilityPolicy {
  std::uint32_t window = 20;  // steps
  double threshold = 0.5;     // missing fraction that raises the alarm

  bool operator==(const AvailabilityPolicy&) const = default;
};

// Throw ParameterError on violated invariants.
void validate(const EstimatorConfig& cfg);
void validate(const TrustPolicy& pol);
void validate(const AvailabilityPolicy& pol);

// Per-node trust factor in [0, 1], indexed by NodeId.
class TrustLedger {
 public:
  TrustLedger() = default;
  explicit TrustLedger(std::vector<double> initial);

  double at(NodeId id) const { return trust_.at(id.value); }
  // Stores clamp(b, 0, 1).
  void set(NodeId id, double b);
  std::size_t size() const { return trust_.size(); }
  const std::vector<double>& values() const { return trust_; }

 private:
  std::vector<double> trust_;
};

TrustLedger initial_ledger(const Deployment& d, const TrustPolicy& pol);

// For every monitored node A, the last `depth` vectors of its neighbors'
// readings, oldest first. A slot is empty when the reading was dropped,
// rejected, or came from a quarantined/revoked neighbor.
class NeighborHistory {
 public:
  struct Row {
    TimeStep t = 0;
    std::vector<std::optional<double>> values;  // aligned with neighbors_of(A)
  };

  NeighborHistory(const AdjacencyMap& adjacency, std::uint32_t depth);

  const std::vector<NodeId>& neighbors_of(NodeId a) const { return adjacency_.at(a.value); }
  const std::deque<Row>& rows(NodeId a) const { return rows_.at(a.value); }
  std::uint32_t depth() const { return depth_; }

  // Appends time-t readings (indexed by NodeId) to every node's buffer and
  // drops rows beyond the depth.
  void append(TimeStep t, std::span<const std::optional<double>> readings);
  // Clears every stored slot that holds `node`'s readings.
  void purge(NodeId node);

  // Test hook: overwrite one stored slot.
  void overwrite(NodeId a, std::size_t row, std::size_t slot, std::optional<double> v);

 private:
  AdjacencyMap adjacency_;
  std::uint32_t depth_;
  std::vector<std::deque<Row>> rows_;
};

// One-step extrapolation of a neighbor's series to time t from samples
// (t_i, x_i), oldest first. Ordinary least squares for two or more samples,
// flat for one. Arithmetic order, which the test oracle mirrors:
//   tbar = (sum t_i) / k, xbar = (sum x_i) / k
//   sxx = sum (t_i - tbar)^2, sxy = sum (t_i - tbar) * (x_i - xbar)
//   result = xbar + (sxy / sxx) * (t - tbar)
double extrapolate(std::span<const std::pair<double, double>> samples, TimeStep t);

// Predicted value of `a` at time t from its neighbors' histories:
//   xhat = sum_j w_j * ehat_j / sum_j w_j,  w_j = b_j * exp(-d_aj / lambda)
// summed in adjacency order. ehat_j fits the samples inside the slope window;
// with none there it falls back to the newest sample within the order-n
// horizon. A neighbor counts only if it has a sample and w_j > 0; fewer than
// min_neighbors such neighbors gives nullopt. Throws UnknownNode.
std::optional<double> estimate(NodeId a, const NeighborHistory& hist, const TrustLedger& ledger,
                               const Deployment& geom, const EstimatorConfig& cfg, TimeStep t);

inline double residual(double x, double x_hat) { return x - x_hat; }

// b_new = clamp(b_prev - g(e), 0, 1) with the dead-band penalty
//   g(e) = alpha * (|e| - tau)  if |e| > tau,  -rho otherwise.
double update_trust(double b_prev, double e, const TrustPolicy& pol);

enum class Action { none, alarm, quarantine, skip_no_estimate };

const char* to_string(Action a);

// Latching threshold automaton of the decision block.
struct DecisionState {
  bool quarantined = false;
  bool alarmed = false;
  bool operator==(const DecisionState&) const = default;
};

struct Decision {
  Action action = Action::none;
  bool readmitted = false;
};

// One action per call. Quarantine fires when b drops below theta_q; the alarm
// fires on a later call once b < theta_a while quarantined. Re-admission
// (b > theta_q + h) clears both latches.
Decision decide(DecisionState& state, double b_new, const TrustPolicy& pol);

struct Reading {
  NodeId node;
  TimeStep t = 0;
  double value = 0.0;
};

struct Verdict {
  NodeId node;
  TimeStep t = 0;
  std::optional<double> value;     // x, absent when the reading was missing
  std::optional<double> estimate;  // x_hat
  std::optional<double> error;     // e
  double trust = 0.0;              // b after this step
  Action action = Action::none;
  bool missing = false;
  bool readmitted = false;
  bool availability_alarm = false;
};

// Base-station knowledge-based system for one cell.
class TrustEngine {
 public:
  // `monitored` are the cell's nodes; adjacency is restricted to them.
  TrustEngine(const Deployment& geom, const AdjacencyMap& adjacency, std::vector<NodeId> monitored,
              EstimatorConfig cfg, TrustPolicy policy, AvailabilityPolicy availability);

  // Processes the readings delivered for time t. For each monitored node in
  // ascending id: estimate from history strictly older than t, residual,
  // trust update, decision. Estimates use the ledger as it stood before this
  // call. Time-t readings then enter the histories.
  std::vector<Verdict> step(TimeStep t, std::span<const Reading> readings);

  // The node stops being monitored for availability and its slots are purged.
  void mark_revoked(NodeId id);

  const TrustLedger& ledger() const { return ledger_; }
  const NeighborHistory& history() const { return history_; }
  const std::vector<NodeId>& monitored() const { return monitored_; }
  bool is_quarantined(NodeId id) const { return decisions_.at(id.value).quarantined; }
  bool is_revoked(NodeId id) const { return revoked_.at(id.value); }
  double missing_rate(NodeId id) const;

 private:
  const Deployment* geom_;
  std::vector<NodeId> monitored_;
  std::vector<bool> is_monitored_;
  EstimatorConfig cfg_;
  TrustPolicy policy_;
  AvailabilityPolicy availability_;
  TrustLedger ledger_;
  NeighborHistory history_;
  std::vector<DecisionState> decisions_;
  std::vector<bool> revoked_;
  std::vector<std::deque<bool>> missing_window_;
  std::vector<bool> availability_latched_;
};

// Adjacency with every list filtered to `members`.
AdjacencyMap restrict_adjacency(const AdjacencyMap& adjacency, const std::vector<NodeId>& members);

}  // namespace wsn
