// pgdetect: batch front-end for the periodogram detection library.
//
//   pgdetect <detect|validate|roc|histogram|calibrate> --config FILE
//            [--seed U64] [--threads N] [--out DIR]
//
// Exit codes: 0 ok, 2 configuration error, 3 ingestion error, 4 numeric failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "pgdetect/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kIngestion = 3, kNumeric = 4 };

int run(const std::string& command, const std::filesystem::path& config_path,
        std::optional<std::uint64_t> seed, unsigned threads,
        std::optional<std::filesystem::path> out) {
  using namespace pgdetect;
  static const std::map<std::string, std::function<CommandOutput(const ExperimentConfig&)>>
      commands = {{"detect", cmd_detect},
                  {"validate", cmd_validate},
                  {"roc", cmd_roc},
                  {"histogram", cmd_histogram},
                  {"calibrate", cmd_calibrate}};
  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed) cfg.seed = seed;
    if (out) cfg.out_dir = *out;
    cfg.threads = threads;
    const CommandOutput result = commands.at(command)(cfg);
    result.save(cfg.out_dir);
    for (const auto& [name, table] : result.tables) {
      std::cout << (cfg.out_dir / name).string() << " (" << table.rows().size() << " rows)\n";
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IngestionError& e) {
    std::cerr << "ingestion error: " << e.what() << '\n';
    return kIngestion;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sinusoid detection in colored noise with training-set standardized periodograms"};
  app.require_subcommand(1);

  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<std::filesystem::path> out;
  std::string chosen;

  const std::pair<const char*, const char*> commands[] = {
      {"detect", "Run the configured tests on one observation"},
      {"validate", "Compare closed-form false-alarm and detection rates with Monte Carlo"},
      {"roc", "Closed-form and empirical ROC curves with AUC"},
      {"histogram", "Frequencies of false alarms under noise only, with a uniformity test"},
      {"calibrate", "Monte Carlo thresholds for a target false-alarm rate"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Experiment configuration (JSON)")->required();
    sub->add_option("--seed", seed, "Master seed, overrides mc.seed");
    sub->add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", out, "Output directory, overrides output.dir");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }
  return run(chosen, config, seed, threads, out);
}
