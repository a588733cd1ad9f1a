#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridstats/empirical_stats.hpp"

namespace gridstats::cli {

enum class Command { Analyze, Fit, Validate, Generate, Hist };

enum class OutputFormat { Params, Branches, Matpower };

/// Fully parsed command line. Produced by parse_args, consumed by execute.
struct RunConfig {
  Command command = Command::Analyze;
  std::optional<std::string> case_path;      // MATPOWER
  std::optional<std::string> branches_path;  // canonical CSV
  std::string profile = "builtin";
  std::vector<double> classes{115.0, 138.0, 230.0};
  double class_tolerance = 0.02;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  Binning binning = FreedmanDiaconis{};
  std::optional<std::string> thresholds_path;
  // generate
  std::size_t n = 100;
  bool lines = false;
  double system_mva_base = 100.0;
  OutputFormat format = OutputFormat::Params;
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidationFailed = 2;

/// Parses and runs one invocation. args excludes the program name. Reports go
/// to --out when given, otherwise to `out`; diagnostics go to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Runs an already-parsed configuration.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace gridstats::cli
