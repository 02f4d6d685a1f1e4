#include "cocycle_lab/error.hpp"
#include "cocycle_lab/experiment.hpp"
#include "cocycle_lab/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using cocycle_lab::Error;
using cocycle_lab::ErrorKind;
namespace ex = cocycle_lab::experiment;
namespace io = cocycle_lab::io;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::map<std::string, double> parse_overrides(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::usage, "--tol-overrides expects K=V, got " + item);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1) throw Error(ErrorKind::usage, "--tol-overrides value is not a number: " + item);
    out[item.substr(0, eq)] = v;
  }
  return out;
}

void print_checks(const io::json& report) {
  for (const auto& c : report["checks"]) {
    std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  value="
              << c["value"].dump() << ' ' << c["relation"].get<std::string>() << ' ' << c["tolerance"].dump() << '\n';
  }
  for (const auto& w : report["warnings"]) std::cout << "warning: " << w.get<std::string>() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cocycle-lab: numerical experiments on group algebras, cocycles and Fourier multipliers"};
  std::string config_path, out_dir, golden_mode, golden_file;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool quiet = false;
  app.add_option("--config", config_path, "Experiment config (JSON)")->required();
  app.add_option("--seed", seed, "Root seed; overrides the config seed");
  app.add_option("--out", out_dir, "Directory for the JSON report and CSV tables");
  app.add_option("--golden", golden_mode, "Compare against or rewrite the golden file")
      ->check(CLI::IsMember({"verify", "update"}));
  app.add_option("--golden-file", golden_file, "Golden file path (default: <out>/golden.json)");
  app.add_option("--tol-overrides", overrides, "Tolerance overrides K=V")->take_all();
  app.add_flag("-q,--quiet", quiet, "Only print the verdict");
  app.footer("commands: check-length cocycle bmo multiplier mihlin lp meyer khintchine fft report-merge\n"
             "exit codes: 0 pass, 1 assertion failure, 2 usage error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string command = "config";
  try {
    ex::ExperimentConfig cfg = ex::ExperimentConfig::from_json(io::read_json_file(config_path));
    command = cfg.command;
    if (seed) cfg.seed = *seed;
    for (const auto& [k, v] : parse_overrides(overrides)) cfg.tolerances[k] = v;
    if (golden_mode.empty() && !golden_file.empty()) throw Error(ErrorKind::usage, "--golden-file needs --golden");

    if (out_dir.empty() && cfg.output.is_object() && cfg.output.contains("json")) {
      out_dir = fs::path(cfg.output["json"].get<std::string>()).parent_path().string();
    }
    if (!golden_mode.empty() && golden_file.empty()) {
      if (out_dir.empty()) throw Error(ErrorKind::usage, "--golden needs --golden-file or --out");
      golden_file = (fs::path(out_dir) / "golden.json").string();
    }

    ex::RunResult result = ex::run(cfg);
    bool pass = result.pass;

    if (golden_mode == "update") {
      const fs::path parent = fs::path(golden_file).parent_path();
      if (!parent.empty()) fs::create_directories(parent);
      io::write_text_file(golden_file, ex::make_golden(result.report).dump(2) + "\n");
      result.report["golden"] = {{"mode", "update"}, {"path", golden_file}};
    } else if (golden_mode == "verify") {
      const ex::GoldenDiff diff = ex::verify_golden(result.report, io::read_json_file(golden_file));
      result.report["golden"] = {{"mode", "verify"},
                                 {"path", golden_file},
                                 {"pass", diff.pass},
                                 {"drifted", diff.drifted},
                                 {"missing", diff.missing}};
      for (const auto& d : diff.drifted) std::cout << "golden drift: " << d << '\n';
      for (const auto& m : diff.missing) std::cout << "golden missing: " << m << '\n';
      pass = pass && diff.pass;
      result.report["pass"] = pass;
    }

    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      std::string json_name = cfg.command + ".json";
      if (cfg.output.is_object() && cfg.output.contains("json")) {
        json_name = fs::path(cfg.output["json"].get<std::string>()).filename().string();
      }
      io::write_text_file((fs::path(out_dir) / json_name).string(), result.report.dump(2) + "\n");
      for (const auto& [name, table] : result.tables) {
        std::string csv_name = name + ".csv";
        if (cfg.output.is_object() && cfg.output.contains("csv")) {
          csv_name = fs::path(cfg.output["csv"].get<std::string>()).filename().string();
        }
        table.write((fs::path(out_dir) / csv_name).string());
      }
    } else if (!quiet) {
      std::cout << result.report.dump(2) << '\n';
    }

    if (!quiet) print_checks(result.report);
    std::cout << cfg.command << ": " << (pass ? "pass" : "FAIL") << '\n';
    return pass ? kPass : kFail;
  } catch (const Error& e) {
    std::cerr << "error (" << command << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::usage ? kUsage : kFail;
  } catch (const std::exception& e) {
    std::cerr << "error (" << command << "): " << e.what() << '\n';
    return kFail;
  }
}
