#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "starbody/config.hpp"

namespace starbody::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumeric = 3,
  kExitIo = 4,
};

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

// Runs the configured experiment. Library exceptions propagate.
ResultTable execute(const RunConfig& config);

// Metadata header: tool, version, command, config echo, PRNG, seed, warnings, summary.
nlohmann::ordered_json metadata(const RunConfig& config, const ResultTable& table);

// CSV: '#'-prefixed JSON metadata line, header, rows. JSON: {"meta", "rows"}.
std::string render(const RunConfig& config, const ResultTable& table);

// Full command line handling: `starbody <command> [--key value | --key=value]...`
// plus --config <path>. Results go to --out (default stdout), diagnostics to err.
int main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace starbody::cli
