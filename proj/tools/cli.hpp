#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwsn/config.hpp"
#include "uwsn/engine.hpp"

namespace uwsn::cli {

// Carries the text to print and the process exit code (0 for --help).
class CliError : public std::runtime_error {
 public:
  CliError(const std::string& message, int exit_code) : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

struct RunRequest {
  NetworkConfig config;
  std::vector<ProtocolKind> protocols;
  std::vector<std::uint64_t> seeds;
  std::filesystem::path out_dir;
  unsigned jobs = 1;
  double confidence = 0.95;
};

// Flags: --config, --protocol, --seeds, --runs, --out, --set key=value,
// --jobs. With no flags: reference scenario, all protocols, three seeds.
RunRequest parse_args(int argc, const char* const* argv);
RunRequest parse_args(const std::vector<std::string>& args);

struct ExperimentResults {
  // Keyed by protocol, then in seed order.
  std::map<ProtocolKind, std::vector<std::vector<RoundRecord>>> runs;
};

// Runs every (protocol, seed) pair; output is identical for any job count.
ExperimentResults run_experiment(const RunRequest& request);

// Aggregates, writes one CSV per metric and protocol plus summary.txt, and
// prints the summary table. Returns the process exit code.
int execute(const RunRequest& request, std::ostream& out, std::ostream& err);

std::string summary_table(const RunRequest& request, const ExperimentResults& results);

}  // namespace uwsn::cli
