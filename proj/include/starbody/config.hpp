#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "starbody/cfrac.hpp"
#include "starbody/experiment.hpp"
#include "starbody/geometry.hpp"
#include "starbody/surd.hpp"

namespace starbody::cli {

enum class Command { Gaps, Cf, Ubiquity, Rho, CoverageCircle, Coverage2d, Contrast, CheckConditions };
enum class OutputFormat { Csv, Json };

std::string to_string(Command command);
std::optional<Command> parse_command(const std::string& text);

// A real-valued input: exact surd (named constant or surd:a,b,d[,c]) or float.
struct RealValue {
  std::optional<Surd> exact;
  double value = 0.0;

  static RealValue of(const Surd& s) { return {s, static_cast<double>(s.value())}; }
  static RealValue of(double v) { return {std::nullopt, v}; }

  RealInput input() const;
  RealValue reciprocal() const;
  std::string canonical() const;
  friend bool operator==(const RealValue&, const RealValue&) = default;
};

std::optional<RealValue> parse_real_value(const std::string& text);

struct RunConfig {
  Command command = Command::Gaps;

  // shared
  OutputFormat format = OutputFormat::Csv;
  std::string out = "-";
  std::uint64_t seed = 0;
  unsigned threads = 1;

  std::optional<RealValue> alpha;
  std::optional<RealValue> alpha_rational;
  std::optional<RealValue> beta;
  std::optional<RealValue> x;
  BodyKind body = BodyKind::RotatedMultiplicative;
  std::optional<std::int64_t> q;
  std::optional<double> psi;

  std::vector<std::int64_t> n;       // gaps: single count; rho/coverage-circle: ladder
  std::vector<std::int64_t> window;  // key "P"
  std::vector<double> y0{0.0};

  double eps = kDefaultGapEpsilon;
  int depth = 16;

  int trials = 1000;
  double rho_min = 0.01;
  double rho_max = 0.1;
  std::int64_t r_offset_max = 4;

  RhoRule rho_rule = RhoRule::StripWidth;
  double apex_threshold = 1.0;

  SamplingMethod method = SamplingMethod::Grid;
  std::int64_t resolution = 0;  // 0: command default
  std::int64_t samples = 1'000'000;

  double s_min = 1.0;
  double s_max = 1000.0;
  std::int64_t n_samples = 1000;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  // Canonical key/value echo (defaults filled) of the keys the command uses.
  std::vector<std::pair<std::string, std::string>> to_kv() const;
  std::string to_text() const;
  // Warnings recorded in output metadata (float slopes etc.).
  std::vector<std::string> warnings() const;
};

struct ConfigResult {
  RunConfig config;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Parses the key = value text format ('#' comments, blank lines ignored).
// Overrides are applied after the file and win. Every violation is reported,
// each prefixed with its field name.
ConfigResult parse_config(const std::string& text, const Overrides& overrides = {});

}  // namespace starbody::cli
