// besovlab command-line harness.
//
//   labcli <verb> [--config PATH] [--out DIR] [--seed U64] [--threads K] [--set key=value]...
//
// Exit status: 0 success, 1 invariant failure, 2 invalid configuration, 3 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "besovlab/errors.hpp"
#include "besovlab/lab/config.hpp"
#include "besovlab/lab/plot.hpp"
#include "besovlab/lab/suites.hpp"
#include "besovlab/parallel.hpp"

namespace fs = std::filesystem;
using namespace besovlab;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Besov traces, half-space extensions and Riesz transforms"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Configuration file (dotted key=value lines)");
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", seed, "Family seed (overrides family.seed)");
  app.add_option("--threads", threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "Extra key=value assignment, applied after the file");
  for (const auto& name : lab::suite_names()) app.add_subcommand(name, "Run the " + name + " suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  lab::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = lab::ExperimentConfig::load(config_path);
    for (const auto& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw lab::ConfigError("--set expects key=value, got " + kv);
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (*seed_opt) config.seed = seed;
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.validate();
  } catch (const lab::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  }

  parallel::set_thread_count(threads);
  lab::Report report;
  try {
    report = lab::run_suite(verb, config);
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 1;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution failure: " << e.what() << "\n";
    return 1;
  }

  try {
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    if (config.write_json) write_file(dir / (verb + ".json"), report.json(utc_timestamp(), threads));
    if (config.write_csv)
      for (const auto& [experiment, doc] : report.csv()) write_file(dir / (verb + "_" + experiment + ".csv"), doc);
    if (config.write_plots)
      for (const auto& selector : lab::plot_selectors()) {
        try {
          for (const auto& [name, svg] : lab::plot(report, selector)) write_file(dir / name, svg);
        } catch (const PreconditionError&) {
          // no rows for this selector
        }
      }
  } catch (const IoError& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return 3;
  }

  std::cout << verb << ": " << report.rows.size() << " rows, config " << report.config_hash << "\n";
  for (const auto& f : report.failures) std::cout << "FAILED " << f << "\n";
  return report.failures.empty() ? 0 : 1;
}
