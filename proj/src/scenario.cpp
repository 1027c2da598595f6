#include "wsn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "wsn/errors.hpp"

namespace wsn {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Typed view of one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const std::string& path() const { return path_; }

  const json* take(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
    return v->get<double>();
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) throw ConfigError(join(path_, key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  std::uint32_t u32(const std::string& key, std::uint32_t def) {
    const std::uint64_t v = u64(key, def);
    if (v > 0xFFFFFFFFULL) throw ConfigError(join(path_, key), "out of range");
    return static_cast<std::uint32_t>(v);
  }

  std::int64_t i64(const std::string& key, std::int64_t def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    return v->get<std::int64_t>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  Point point(const std::string& key, Point def) {
    const json* v = take(key);
    if (!v) return def;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      throw ConfigError(join(path_, key), "expected [x, y]");
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    return Section(*v, join(path_, key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::gaussian_plume: return "gaussian_plume";
    case FieldKind::linear_gradient: return "linear_gradient";
    case FieldKind::constant: return "constant";
  }
  return "?";
}

const char* to_string(Placement p) { return p == Placement::grid ? "grid" : "uniform_random"; }

// Runs `fn`, turning a ParameterError into a ConfigError at `path`.
template <class Fn>
void check(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
}

void parse_field(Section& s, FieldSpec& f) {
  const std::string kind = s.string("kind", to_string(f.kind));
  if (kind == "gaussian_plume") f.kind = FieldKind::gaussian_plume;
  else if (kind == "linear_gradient") f.kind = FieldKind::linear_gradient;
  else if (kind == "constant") f.kind = FieldKind::constant;
  else throw ConfigError(join(s.path(), "kind"), "unknown field kind '" + kind + "'");
  f.amplitude = s.number("amplitude", f.amplitude);
  f.center_start = s.point("center_start", f.center_start);
  f.center_velocity = s.point("center_velocity", f.center_velocity);
  f.spread = s.number("spread", f.spread);
  f.baseline = s.number("baseline", f.baseline);
  f.drift = s.number("drift", f.drift);
  s.finish();
}

void parse_deployment(Section& s, DeploymentSpec& d, bool& stations_given, bool& margin_given) {
  d.node_count = s.u32("nodes", d.node_count);
  const std::string placement = s.string("placement", to_string(d.placement));
  if (placement == "grid") d.placement = Placement::grid;
  else if (placement == "uniform_random") d.placement = Placement::uniform_random;
  else throw ConfigError(join(s.path(), "placement"), "unknown placement '" + placement + "'");
  if (auto area = s.child("area")) {
    d.area.min = area->point("min", d.area.min);
    d.area.max = area->point("max", d.area.max);
    area->finish();
  }
  d.adjacency_radius = s.number("adjacency_radius", d.adjacency_radius);
  d.max_neighbors = s.u32("max_neighbors", d.max_neighbors);
  margin_given = s.has("peripheral_margin");
  d.peripheral_margin = s.number("peripheral_margin", d.peripheral_margin);
  if (const json* st = s.take("base_stations")) {
    stations_given = true;
    const std::string path = join(s.path(), "base_stations");
    if (!st->is_array()) throw ConfigError(path, "expected an array");
    d.base_stations.clear();
    for (std::size_t i = 0; i < st->size(); ++i) {
      Section b((*st)[i], path + "[" + std::to_string(i) + "]");
      BaseStation bs;
      bs.id = StationId{b.u32("id", static_cast<std::uint32_t>(i))};
      bs.position = b.point("position", d.area.center());
      bs.cell_radius = b.number("radius", 0.0);
      b.finish();
      d.base_stations.push_back(bs);
    }
  }
  s.finish();
}

std::vector<NodeId> parse_targets(Section& s) {
  std::vector<NodeId> out;
  const json* v = s.take("targets");
  if (!v) return out;
  const std::string path = join(s.path(), "targets");
  if (!v->is_array()) throw ConfigError(path, "expected an array of node ids");
  for (const auto& e : *v) {
    if (!e.is_number_unsigned() || e.get<std::uint64_t>() > 0xFFFFFFFFULL) {
      throw ConfigError(path, "expected node ids");
    }
    out.push_back(NodeId{e.get<std::uint32_t>()});
  }
  return out;
}

AttackScript parse_attack(Section& s, TimeStep horizon) {
  AttackScript a;
  const std::string kind = s.string("kind", "");
  auto k = parse_attack_kind(kind);
  if (!k) throw ConfigError(join(s.path(), "kind"), "unknown attack kind '" + kind + "'");
  a.kind = *k;
  a.targets = parse_targets(s);
  a.start = s.i64("start", 1);
  a.end = s.i64("end", horizon);
  switch (a.kind) {
    case AttackKind::node_capture: {
      const std::string profile = s.string("profile", to_string(a.profile));
      auto p = parse_capture_profile(profile);
      if (!p) throw ConfigError(join(s.path(), "profile"), "unknown capture profile '" + profile + "'");
      a.profile = *p;
      a.constant_value = s.number("constant_value", a.constant_value);
      a.offset = s.number("offset", a.offset);
      a.random_lo = s.number("random_lo", a.random_lo);
      a.random_hi = s.number("random_hi", a.random_hi);
      a.stale_lag = s.u32("stale_lag", a.stale_lag);
      break;
    }
    case AttackKind::replay:
      a.replay_lag = s.u32("lag", a.replay_lag);
      break;
    case AttackKind::spoof_no_key:
      a.spoof_value = s.number("value", a.spoof_value);
      break;
    case AttackKind::sybil: {
      a.fake_ids = s.u32("fake_ids", a.fake_ids);
      const std::string mode = s.string("mode", to_string(a.sybil_mode));
      auto m = parse_sybil_mode(mode);
      if (!m) throw ConfigError(join(s.path(), "mode"), "unknown sybil mode '" + mode + "'");
      a.sybil_mode = *m;
      break;
    }
    case AttackKind::selective_forwarding:
      a.drop_probability = s.number("drop_probability", a.drop_probability);
      break;
  }
  s.finish();
  return a;
}

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig c;
  const Rect& a = c.deployment.area;
  c.deployment.base_stations = {BaseStation{StationId{0}, a.center(), std::hypot(a.width(), a.height())}};
  return c;
}

ScenarioConfig demo_config() {
  ScenarioConfig c = default_config();
  AttackScript capture;
  capture.kind = AttackKind::node_capture;
  capture.targets = {NodeId{12}};
  capture.start = 20;
  capture.end = c.horizon;
  capture.profile = CaptureProfile::offset;
  capture.offset = 10.0 * c.noise.sigma;
  c.attacks.push_back(capture);
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", e.what());
  }

  ScenarioConfig c = default_config();
  Section top(root, "");
  c.seed = top.u64("seed", c.seed);
  c.horizon = top.i64("horizon", c.horizon);

  if (auto s = top.child("field")) parse_field(*s, c.field);
  if (auto s = top.child("noise")) {
    c.noise.sigma = s->number("sigma", c.noise.sigma);
    s->finish();
  }

  bool stations_given = false;
  bool margin_given = false;
  if (auto s = top.child("deployment")) parse_deployment(*s, c.deployment, stations_given, margin_given);
  if (!margin_given) c.deployment.peripheral_margin = c.deployment.adjacency_radius;
  if (!stations_given) {
    const Rect& a = c.deployment.area;
    c.deployment.base_stations = {BaseStation{StationId{0}, a.center(), std::hypot(a.width(), a.height())}};
  }

  c.keying.ring_size = std::min<std::uint32_t>(8, c.deployment.node_count > 0 ? c.deployment.node_count - 1 : 0);
  if (auto s = top.child("keying")) {
    c.keying.ring_size = s->u32("ring_size", c.keying.ring_size);
    c.keying.quorum = s->u32("quorum", c.keying.quorum);
    c.keying.alarm_votes = s->boolean("alarm_votes", c.keying.alarm_votes);
    s->finish();
  }

  c.estimator.distance_scale = c.deployment.adjacency_radius;
  if (auto s = top.child("estimator")) {
    c.estimator.order = s->u32("order", c.estimator.order);
    c.estimator.distance_scale = s->number("distance_scale", c.estimator.distance_scale);
    c.estimator.min_neighbors = s->u32("min_neighbors", c.estimator.min_neighbors);
    c.estimator.slope_window = s->u32("slope_window", std::min(c.estimator.slope_window, c.estimator.order));
    s->finish();
  }

  c.trust.tolerance = c.noise.sigma > 0.0 ? 3.0 * c.noise.sigma : 1.0;
  if (auto s = top.child("trust")) {
    TrustPolicy& p = c.trust;
    p.tolerance = s->number("tolerance", p.tolerance);
    p.penalty_gain = s->number("penalty_gain", 0.05 / p.tolerance);
    p.recovery_rate = s->number("recovery_rate", p.recovery_rate);
    p.quarantine_threshold = s->number("quarantine_threshold", p.quarantine_threshold);
    p.alarm_threshold = s->number("alarm_threshold", p.alarm_threshold);
    p.hysteresis = s->number("hysteresis", p.hysteresis);
    p.initial_interior = s->number("initial_interior", p.initial_interior);
    p.initial_peripheral = s->number("initial_peripheral", p.initial_peripheral);
    s->finish();
  } else {
    c.trust.penalty_gain = 0.05 / c.trust.tolerance;
  }

  if (auto s = top.child("availability")) {
    c.availability.window = s->u32("window", c.availability.window);
    c.availability.threshold = s->number("threshold", c.availability.threshold);
    s->finish();
  }

  if (const json* arr = top.take("attacks")) {
    if (!arr->is_array()) throw ConfigError("attacks", "expected an array");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      Section s((*arr)[i], "attacks[" + std::to_string(i) + "]");
      c.attacks.push_back(parse_attack(s, c.horizon));
    }
  }
  top.finish();

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.path(), std::string(e.what()) + " (in " + path.string() + ")");
  }
}

void validate(const ScenarioConfig& c) {
  if (c.horizon < 0) throw ConfigError("horizon", "must be >= 0");

  check("field.spread", [&] { validate(c.field); });
  if (c.noise.sigma < 0.0) throw ConfigError("noise.sigma", "must be >= 0");

  const auto& d = c.deployment;
  if (d.node_count < 1) throw ConfigError("deployment.nodes", "must be >= 1");
  if (!(d.area.width() > 0.0) || !(d.area.height() > 0.0)) throw ConfigError("deployment.area", "is degenerate");
  if (!(d.adjacency_radius > 0.0)) throw ConfigError("deployment.adjacency_radius", "must be > 0");
  if (d.peripheral_margin < 0.0) throw ConfigError("deployment.peripheral_margin", "must be >= 0");
  if (d.base_stations.empty()) throw ConfigError("deployment.base_stations", "needs at least one station");
  std::set<StationId> ids;
  for (std::size_t i = 0; i < d.base_stations.size(); ++i) {
    const auto& b = d.base_stations[i];
    const std::string path = "deployment.base_stations[" + std::to_string(i) + "]";
    if (!ids.insert(b.id).second) throw ConfigError(path + ".id", "duplicate station id");
    if (!(b.cell_radius > 0.0)) throw ConfigError(path + ".radius", "must be > 0");
  }

  if (c.keying.ring_size < 1 || c.keying.ring_size >= d.node_count) {
    throw ConfigError("keying.ring_size", "must satisfy 1 <= ring_size < deployment.nodes");
  }
  if (c.keying.quorum < 1) throw ConfigError("keying.quorum", "must be >= 1");

  const auto& e = c.estimator;
  if (e.order < 1) throw ConfigError("estimator.order", "must be >= 1");
  if (e.min_neighbors < 1) throw ConfigError("estimator.min_neighbors", "must be >= 1");
  if (!(e.distance_scale > 0.0)) throw ConfigError("estimator.distance_scale", "must be > 0");
  if (e.slope_window < 1 || e.slope_window > e.order) {
    throw ConfigError("estimator.slope_window", "must be in [1, estimator.order]");
  }

  const auto& p = c.trust;
  if (p.alarm_threshold > p.quarantine_threshold) {
    throw ConfigError("trust.alarm_threshold", "must not exceed trust.quarantine_threshold");
  }
  if (!(p.initial_peripheral < p.initial_interior)) {
    throw ConfigError("trust.initial_peripheral", "must be below trust.initial_interior");
  }
  check("trust", [&] { validate(p); });
  check("availability", [&] { validate(c.availability); });

  for (std::size_t i = 0; i < c.attacks.size(); ++i) {
    check("attacks[" + std::to_string(i) + "]", [&] { validate(c.attacks[i], d.node_count); });
  }
}

std::string serialize_config(const ScenarioConfig& c) {
  auto pt = [](Point p) { return ordered_json::array({p.x, p.y}); };
  ordered_json j;
  j["seed"] = c.seed;
  j["horizon"] = c.horizon;
  j["field"] = {{"kind", to_string(c.field.kind)},
                {"amplitude", c.field.amplitude},
                {"center_start", pt(c.field.center_start)},
                {"center_velocity", pt(c.field.center_velocity)},
                {"spread", c.field.spread},
                {"baseline", c.field.baseline},
                {"drift", c.field.drift}};
  j["noise"] = {{"sigma", c.noise.sigma}};

  const auto& d = c.deployment;
  ordered_json stations = ordered_json::array();
  for (const auto& b : d.base_stations) {
    stations.push_back({{"id", b.id.value}, {"position", pt(b.position)}, {"radius", b.cell_radius}});
  }
  j["deployment"] = {{"nodes", d.node_count},
                     {"placement", to_string(d.placement)},
                     {"area", {{"min", pt(d.area.min)}, {"max", pt(d.area.max)}}},
                     {"adjacency_radius", d.adjacency_radius},
                     {"max_neighbors", d.max_neighbors},
                     {"peripheral_margin", d.peripheral_margin},
                     {"base_stations", stations}};
  j["keying"] = {{"ring_size", c.keying.ring_size}, {"quorum", c.keying.quorum}, {"alarm_votes", c.keying.alarm_votes}};
  j["estimator"] = {{"order", c.estimator.order},
                    {"distance_scale", c.estimator.distance_scale},
                    {"min_neighbors", c.estimator.min_neighbors},
                    {"slope_window", c.estimator.slope_window}};
  j["trust"] = {{"tolerance", c.trust.tolerance},
                {"penalty_gain", c.trust.penalty_gain},
                {"recovery_rate", c.trust.recovery_rate},
                {"quarantine_threshold", c.trust.quarantine_threshold},
                {"alarm_threshold", c.trust.alarm_threshold},
                {"hysteresis", c.trust.hysteresis},
                {"initial_interior", c.trust.initial_interior},
                {"initial_peripheral", c.trust.initial_peripheral}};
  j["availability"] = {{"window", c.availability.window}, {"threshold", c.availability.threshold}};

  ordered_json attacks = ordered_json::array();
  for (const auto& a : c.attacks) {
    ordered_json targets = ordered_json::array();
    for (NodeId t : a.targets) targets.push_back(t.value);
    ordered_json e = {{"kind", to_string(a.kind)}, {"targets", targets}, {"start", a.start}, {"end", a.end}};
    switch (a.kind) {
      case AttackKind::node_capture:
        e["profile"] = to_string(a.profile);
        e["constant_value"] = a.constant_value;
        e["offset"] = a.offset;
        e["random_lo"] = a.random_lo;
        e["random_hi"] = a.random_hi;
        e["stale_lag"] = a.stale_lag;
        break;
      case AttackKind::replay: e["lag"] = a.replay_lag; break;
      case AttackKind::spoof_no_key: e["value"] = a.spoof_value; break;
      case AttackKind::sybil:
        e["fake_ids"] = a.fake_ids;
        e["mode"] = to_string(a.sybil_mode);
        break;
      case AttackKind::selective_forwarding: e["drop_probability"] = a.drop_probability; break;
    }
    attacks.push_back(std::move(e));
  }
  j["attacks"] = attacks;
  return j.dump(2) + "\n";
}

}  // namespace wsn
