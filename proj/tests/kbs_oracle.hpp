#pragma once

// Brute-force recomputation of the trust engine from raw per-step readings.
// Shares no code with the engine: adjacency, peripheral test, history
// visibility, line fit, trust update and the decision automaton are all
// rebuilt here from their definitions. Single cell, no revocation.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "wsn/topology.hpp"
#include "wsn/trust_kbs.hpp"

namespace oracle {

struct Row {
  std::optional<double> x_hat;
  std::optional<double> e;
  double b = 0.0;
  wsn::Action action = wsn::Action::none;
};

struct Geometry {
  std::vector<wsn::Point> pos;
  wsn::Rect area;
  double radius = 0.0;
  std::size_t cap = 0;
  double margin = 0.0;

  static Geometry of(const wsn::Deployment& d) {
    Geometry g;
    for (const auto& n : d.nodes()) g.pos.push_back(n.position);
    g.area = d.area();
    g.radius = d.adjacency_radius();
    g.cap = d.max_neighbors();
    g.margin = d.peripheral_margin();
    return g;
  }

  double dist(std::size_t a, std::size_t b) const {
    return std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y);
  }

  std::vector<std::size_t> adjacency(std::size_t a) const {
    std::vector<std::size_t> in;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (j != a && dist(a, j) <= radius) in.push_back(j);
    }
    std::sort(in.begin(), in.end(), [&](std::size_t p, std::size_t q) {
      const double dp = dist(a, p), dq = dist(a, q);
      return dp != dq ? dp < dq : p < q;
    });
    if (in.size() > cap) in.resize(cap);
    return in;
  }

  bool peripheral(std::size_t a) const {
    const auto& p = pos[a];
    const double edge = std::min({p.x - area.min.x, area.max.x - p.x, p.y - area.min.y, area.max.y - p.y});
    return edge < margin || edge <= 0.0;
  }
};

// readings[t][node] for t = 1..T (index 0 unused). Returns rows[t][node].
inline std::vector<std::vector<Row>> recompute(const Geometry& g, const wsn::EstimatorConfig& cfg,
                                               const wsn::TrustPolicy& pol,
                                               const std::vector<std::vector<std::optional<double>>>& readings) {
  const std::size_t n = g.pos.size();
  const long T = static_cast<long>(readings.size()) - 1;
  std::vector<std::vector<Row>> out(readings.size(), std::vector<Row>(n));

  std::vector<double> trust(n);
  for (std::size_t a = 0; a < n; ++a) trust[a] = g.peripheral(a) ? pol.initial_peripheral : pol.initial_interior;
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t a = 0; a < n; ++a) adj[a] = g.adjacency(a);

  // 0 admitted, 1 quarantined, 2 quarantined and alarmed; state after step t.
  std::vector<std::vector<int>> state(readings.size(), std::vector<int>(n, 0));
  // quarantine_steps[j]: steps at which j was quarantined.
  std::vector<std::vector<long>> quarantine_steps(n);

  // Sample (j, s) is visible at step t when j reported at s, was admitted at
  // the end of s, and was not quarantined in any step q with s < q < t.
  auto visible = [&](std::size_t j, long s, long t) -> std::optional<double> {
    if (s < 1 || !readings[s][j] || state[s][j] != 0) return std::nullopt;
    for (long q : quarantine_steps[j]) {
      if (q > s && q < t) return std::nullopt;
    }
    return readings[s][j];
  };

  for (long t = 1; t <= T; ++t) {
    const std::vector<double> prev = trust;
    for (std::size_t a = 0; a < n; ++a) {
      double num = 0.0, den = 0.0;
      std::size_t usable = 0;
      for (std::size_t j : adj[a]) {
        const double w = prev[j] * std::exp(-g.dist(a, j) / cfg.distance_scale);
        if (!(w > 0.0)) continue;
        std::vector<std::pair<double, double>> fit;
        std::optional<double> newest;
        for (long s = t - static_cast<long>(cfg.order); s < t; ++s) {
          const auto v = visible(j, s, t);
          if (!v) continue;
          newest = v;
          if (s >= t - static_cast<long>(cfg.slope_window)) fit.emplace_back(static_cast<double>(s), *v);
        }
        if (!newest) continue;
        double ehat;
        if (fit.empty()) {
          ehat = *newest;
        } else if (fit.size() == 1) {
          ehat = fit[0].second;
        } else {
          const double k = static_cast<double>(fit.size());
          double st = 0.0, sx = 0.0;
          for (const auto& p : fit) {
            st += p.first;
            sx += p.second;
          }
          const double tb = st / k, xb = sx / k;
          double sxx = 0.0, sxy = 0.0;
          for (const auto& p : fit) {
            sxx += (p.first - tb) * (p.first - tb);
            sxy += (p.first - tb) * (p.second - xb);
          }
          ehat = xb + (sxy / sxx) * (static_cast<double>(t) - tb);
        }
        num += w * ehat;
        den += w;
        ++usable;
      }
      Row& r = out[t][a];
      if (usable >= cfg.min_neighbors && den > 0.0) r.x_hat = num / den;
      int st = state[t - 1][a];
      if (r.x_hat && readings[t][a]) {
        r.e = *readings[t][a] - *r.x_hat;
        const double mag = std::fabs(*r.e);
        double b = mag > pol.tolerance ? trust[a] - pol.penalty_gain * (mag - pol.tolerance)
                                       : trust[a] + pol.recovery_rate;
        b = b < 0.0 ? 0.0 : (b > 1.0 ? 1.0 : b);
        trust[a] = b;
        if (st == 0 && b < pol.quarantine_threshold) {
          st = 1;
          r.action = wsn::Action::quarantine;
          quarantine_steps[a].push_back(t);
        } else if (st != 0 && b > pol.quarantine_threshold + pol.hysteresis) {
          st = 0;
        } else if (st == 1 && b < pol.alarm_threshold) {
          st = 2;
          r.action = wsn::Action::alarm;
        }
      } else {
        r.action = wsn::Action::skip_no_estimate;
      }
      r.b = trust[a];
      state[t][a] = st;
    }
  }
  return out;
}

}  // namespace oracle
