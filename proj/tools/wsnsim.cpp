// wsnsim: command-line driver for the sensor-network security simulator.
//
//   wsnsim run --config scenario.json --out results/ [--seed N]
//   wsnsim vectors
//   wsnsim demo [--out demo_out/]
//   wsnsim dump-topology --config scenario.json
//
// Exit codes: 0 success, 1 self-test or validation failure, 2 I/O error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsn/errors.hpp"
#include "wsn/outputs.hpp"
#include "wsn/scenario.hpp"
#include "wsn/self_test.hpp"
#include "wsn/simulator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kIo = 2;

void print_summary(const wsn::RunResult& r, std::ostream& os) {
  const auto& s = r.summary;
  os << "steps: " << r.config.horizon << "  nodes: " << r.config.deployment.node_count << "\n";
  for (const auto& c : s.captures) {
    os << "capture node " << c.node.value << ": ";
    if (c.latency) os << "quarantined at t=" << *c.quarantined_at << " (latency " << *c.latency << ")\n";
    else os << "not quarantined\n";
  }
  os << "TP=" << s.true_positives << " FN=" << s.false_negatives << " FP=" << s.false_positives << "\n";
  os << "crypto rejections: bad_tag=" << s.crypto_rejections.bad_tag << " replay=" << s.crypto_rejections.replay
     << " unknown_sender=" << s.crypto_rejections.unknown_sender << "\n";
  os << "sybil rejections: " << s.sybil_rejections << "  availability alarms: " << s.availability_alarms << "\n";
  os << "quarantines: " << s.quarantines << "  alarms: " << s.alarms << "  revocations: " << s.revocations << "\n";
}

int run_and_write(const wsn::ScenarioConfig& cfg, const std::string& out_dir) {
  const wsn::RunResult result = wsn::run(cfg);
  wsn::write_outputs(out_dir, result);
  print_summary(result, std::cout);
  std::cout << "outputs written to " << out_dir << "\n";
  return kOk;
}

int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const wsn::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const wsn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless sensor network security simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a scenario and write trace, events and summary");
  run->add_option("--config", config_path, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Override the master seed");

  app.add_subcommand("vectors", "AES-128 and AES-CMAC reference-vector self-test");

  std::string demo_out = "demo_out";
  auto* demo = app.add_subcommand("demo", "Write and run the default demo scenario");
  demo->add_option("--out", demo_out, "Output directory");

  std::string topo_config;
  auto* topo = app.add_subcommand("dump-topology", "Print node positions, peripheral flags and neighbor lists");
  topo->add_option("--config", topo_config, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFailure;
  }

  if (*run) {
    return guarded([&] {
      wsn::ScenarioConfig cfg = wsn::load_config(config_path);
      if (seed) cfg.seed = *seed;
      return run_and_write(cfg, out_dir);
    });
  }

  if (app.got_subcommand("vectors")) {
    bool ok = true;
    for (const auto& v : wsn::crypto::run_reference_vectors()) {
      std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << "  expected " << v.expected << "  got " << v.actual
                << "\n";
      ok = ok && v.pass;
    }
    return ok ? kOk : kFailure;
  }

  if (*demo) {
    return guarded([&] {
      const wsn::ScenarioConfig cfg = wsn::demo_config();
      std::filesystem::create_directories(demo_out);
      const auto scenario = std::filesystem::path(demo_out) / "scenario.json";
      std::ofstream out(scenario);
      out << wsn::serialize_config(cfg);
      if (!out) throw wsn::IoError("cannot write " + scenario.string());
      return run_and_write(cfg, demo_out);
    });
  }

  if (*topo) {
    return guarded([&] {
      const wsn::ScenarioConfig cfg = wsn::load_config(topo_config);
      const wsn::Deployment d = wsn::deployment_of(cfg);
      std::cout << wsn::topology_csv(d, wsn::neighbors(d));
      return kOk;
    });
  }
  return kFailure;
}
