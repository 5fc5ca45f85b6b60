#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vague/errors.hpp"

namespace vague::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kDomain = 3, kIo = 4 };

/// Machine-readable outcome of a command. pass is metric_value <= tolerance.
struct Report {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
  std::int64_t n = 0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::string metric_name;
  double metric_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_time = 0.0;
  std::string version;

  bool operator==(const Report&) const = default;
};

nlohmann::json to_json(const Report& report);
/// Throws IoError on a malformed document.
Report report_from_json(const nlohmann::json& doc);

std::string version();

/// Parses and executes one command line (args excludes the program name).
/// Returns an ExitCode; diagnostics go to err, tables and summaries to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Space-joined paths of every leaf subcommand, e.g. "experiment evt-gumbel".
std::vector<std::string> command_inventory();

/// (library operation, subcommand path) for every operation exposed on the
/// command line.
std::vector<std::pair<std::string, std::string>> operation_commands();

}  // namespace vague::cli
