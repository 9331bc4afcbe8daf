#include "hrrm/scenario/command.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>

#include "CLI11.hpp"

#include "hrrm/scenario/outputs.hpp"
#include "hrrm/scenario/parse.hpp"
#include "hrrm/sim/world.hpp"

namespace hrrm::scenario {

LogLevel parse_log_level(const char* text) {
  if (text == nullptr) return LogLevel::warn;
  if (std::strcmp(text, "error") == 0) return LogLevel::error;
  if (std::strcmp(text, "info") == 0) return LogLevel::info;
  if (std::strcmp(text, "debug") == 0) return LogLevel::debug;
  return LogLevel::warn;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> parse_seed_range(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) return std::nullopt;
  auto number = [](std::string_view s) -> std::optional<std::uint64_t> {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto lo = number(text.substr(0, dots));
  const auto hi = number(text.substr(dots + 2));
  if (!lo || !hi || *lo > *hi) return std::nullopt;
  return std::pair{*lo, *hi};
}

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const LogLevel level = parse_log_level(std::getenv(kLogLevelVariable));
  auto info = [&](const std::string& msg) {
    if (level >= LogLevel::info) err << "info: " << msg << '\n';
  };

  CLI::App app{"Hierarchical radio resource management simulator", "hrrm"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::uint64_t> seed;
  std::string seeds;
  std::string out_dir = "out";

  auto* run = app.add_subcommand("run", "Run a scenario and write metrics, summary and events");
  run->add_option("file", file, "Scenario file")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Seed overriding the scenario's own");
  auto* seeds_opt = run->add_option("--seeds", seeds, "Inclusive seed range A..B; one output directory per seed");
  seed_opt->excludes(seeds_opt);
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
  validate_cmd->add_option("file", file, "Scenario file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << first_line(e.what()) << '\n';
    return 2;
  }

  try {
    const ScenarioConfig config = parse_scenario(file);
    if (validate_cmd->parsed()) {
      out << file << ": ok\n";
      return 0;
    }

    std::vector<std::uint64_t> run_seeds;
    bool per_seed_dirs = false;
    if (!seeds.empty()) {
      const auto range = parse_seed_range(seeds);
      if (!range) {
        err << "error: --seeds expects A..B with A <= B\n";
        return 2;
      }
      for (std::uint64_t s = range->first;; ++s) {
        run_seeds.push_back(s);
        if (s == range->second) break;
      }
      per_seed_dirs = true;
    } else {
      run_seeds.push_back(seed.value_or(config.sim.seed));
    }

    // Every run completes before anything is written.
    std::vector<sim::SimulationResult> results;
    for (std::uint64_t s : run_seeds) {
      info("running " + config.name + " seed=" + std::to_string(s) + " slots=" +
           std::to_string(config.sim.horizon_slots));
      results.push_back(sim::simulate(config, s));
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::filesystem::path dir = out_dir;
      if (per_seed_dirs) dir /= "seed-" + std::to_string(run_seeds[i]);
      write_outputs(dir, results[i]);
      info("wrote " + dir.string());
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << first_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace hrrm::scenario
