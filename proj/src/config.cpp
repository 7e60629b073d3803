#include "starbody/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace starbody::cli {
namespace {

const std::map<Command, std::string>& command_names() {
  static const std::map<Command, std::string> names{
      {Command::Gaps, "gaps"},
      {Command::Cf, "cf"},
      {Command::Ubiquity, "ubiquity"},
      {Command::Rho, "rho"},
      {Command::CoverageCircle, "coverage-circle"},
      {Command::Coverage2d, "coverage-2d"},
      {Command::Contrast, "contrast"},
      {Command::CheckConditions, "check-conditions"},
  };
  return names;
}

const std::vector<std::string>& common_keys() {
  static const std::vector<std::string> keys{"command", "format", "out", "seed", "threads"};
  return keys;
}

const std::vector<std::string>& command_keys(Command c) {
  static const std::map<Command, std::vector<std::string>> keys{
      {Command::Gaps, {"beta", "n", "y0", "eps"}},
      {Command::Cf, {"x", "depth"}},
      {Command::Ubiquity, {"alpha", "beta", "y0", "trials", "rho_min", "rho_max", "r_offset_max", "depth"}},
      {Command::Rho, {"body", "alpha", "psi", "q", "n", "rho_rule", "apex_threshold"}},
      {Command::CoverageCircle, {"body", "alpha", "psi", "q", "n", "y0", "resolution", "rho_rule", "apex_threshold"}},
      {Command::Coverage2d, {"body", "alpha", "psi", "q", "P", "method", "resolution", "samples"}},
      {Command::Contrast, {"alpha", "alpha_rational", "psi", "q", "P", "method", "resolution", "samples"}},
      {Command::CheckConditions, {"body", "alpha", "s_min", "s_max", "n_samples"}},
  };
  return keys.at(c);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Int>
std::optional<Int> parse_int(const std::string& s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<std::string>& violations) : violations_(violations) {}

  void fail(const std::string& key, const std::string& message) { violations_.push_back(key + ": " + message); }

  template <typename Int>
  void integer(const std::string& key, const std::string& text, Int& out) {
    if (auto v = parse_int<Int>(text))
      out = *v;
    else
      fail(key, "expected an integer, got '" + text + "'");
  }

  template <typename Int>
  void integer(const std::string& key, const std::string& text, std::optional<Int>& out) {
    Int v{};
    const auto before = violations_.size();
    integer(key, text, v);
    if (violations_.size() == before) out = v;
  }

  void real(const std::string& key, const std::string& text, double& out) {
    if (auto v = parse_double(text))
      out = *v;
    else
      fail(key, "expected a finite number, got '" + text + "'");
  }

  void real(const std::string& key, const std::string& text, std::optional<double>& out) {
    double v = 0.0;
    const auto before = violations_.size();
    real(key, text, v);
    if (violations_.size() == before) out = v;
  }

  void real_value(const std::string& key, const std::string& text, std::optional<RealValue>& out) {
    if (auto v = parse_real_value(text))
      out = *v;
    else
      fail(key, "expected a number, a named constant (golden, silver, sqrtD) or surd:a,b,d[,c], got '" + text + "'");
  }

  template <typename T>
  void list(const std::string& key, const std::string& text, std::vector<T>& out) {
    std::vector<T> values;
    for (const auto& part : split_list(text)) {
      if constexpr (std::is_floating_point_v<T>) {
        auto v = parse_double(part);
        if (!v) return fail(key, "expected a comma-separated list of numbers, got '" + text + "'");
        values.push_back(*v);
      } else {
        auto v = parse_int<T>(part);
        if (!v) return fail(key, "expected a comma-separated list of integers, got '" + text + "'");
        values.push_back(*v);
      }
    }
    if (values.empty()) return fail(key, "list must not be empty");
    out = std::move(values);
  }

 private:
  std::vector<std::string>& violations_;
};

bool strictly_increasing(const std::vector<std::int64_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](auto a, auto b) { return a >= b; }) == v.end();
}

}  // namespace

std::string to_string(Command command) { return command_names().at(command); }

std::optional<Command> parse_command(const std::string& text) {
  for (const auto& [c, name] : command_names())
    if (name == text) return c;
  return std::nullopt;
}

RealInput RealValue::input() const {
  if (exact) return *exact;
  return value;
}

RealValue RealValue::reciprocal() const {
  if (exact) return of(exact->reciprocal());
  return of(1.0 / value);
}

std::string RealValue::canonical() const { return exact ? exact->to_string() : format_double(value); }

std::optional<RealValue> parse_real_value(const std::string& text) {
  if (auto s = parse_surd(text)) return RealValue::of(*s);
  if (auto v = parse_double(text)) return RealValue::of(*v);
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> RunConfig::to_kv() const {
  auto value_of = [&](const std::string& key) -> std::optional<std::string> {
    if (key == "command") return to_string(command);
    if (key == "format") return format == OutputFormat::Csv ? "csv" : "json";
    if (key == "out") return out;
    if (key == "seed") return std::to_string(seed);
    if (key == "threads") return std::to_string(threads);
    if (key == "alpha") return alpha ? std::optional(alpha->canonical()) : std::nullopt;
    if (key == "alpha_rational") return alpha_rational ? std::optional(alpha_rational->canonical()) : std::nullopt;
    if (key == "beta") return beta ? std::optional(beta->canonical()) : std::nullopt;
    if (key == "x") return x ? std::optional(x->canonical()) : std::nullopt;
    if (key == "body") return starbody::to_string(body);
    if (key == "q") return q ? std::optional(std::to_string(*q)) : std::nullopt;
    if (key == "psi") return psi ? std::optional(format_double(*psi)) : std::nullopt;
    if (key == "n") return n.empty() ? std::nullopt : std::optional(join(n));
    if (key == "P") return window.empty() ? std::nullopt : std::optional(join(window));
    if (key == "y0") return join(y0);
    if (key == "eps") return format_double(eps);
    if (key == "depth") return std::to_string(depth);
    if (key == "trials") return std::to_string(trials);
    if (key == "rho_min") return format_double(rho_min);
    if (key == "rho_max") return format_double(rho_max);
    if (key == "r_offset_max") return std::to_string(r_offset_max);
    if (key == "rho_rule") return starbody::to_string(rho_rule);
    if (key == "apex_threshold") return format_double(apex_threshold);
    if (key == "method") return starbody::to_string(method);
    if (key == "resolution") return std::to_string(resolution);
    if (key == "samples") return std::to_string(samples);
    if (key == "s_min") return format_double(s_min);
    if (key == "s_max") return format_double(s_max);
    if (key == "n_samples") return std::to_string(n_samples);
    return std::nullopt;
  };
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& key : common_keys())
    if (auto v = value_of(key)) kv.emplace_back(key, *v);
  for (const auto& key : command_keys(command))
    if (auto v = value_of(key)) kv.emplace_back(key, *v);
  return kv;
}

std::string RunConfig::to_text() const {
  std::string text;
  for (const auto& [k, v] : to_kv()) text += k + " = " + v + "\n";
  return text;
}

std::vector<std::string> RunConfig::warnings() const {
  std::vector<std::string> out;
  auto check = [&](const char* key, const std::optional<RealValue>& v) {
    if (v && !v->exact) out.push_back(std::string(key) + ": floating-point value treated as irrational by declaration");
  };
  const auto& keys = command_keys(command);
  auto uses = [&](const char* key) { return std::find(keys.begin(), keys.end(), key) != keys.end(); };
  if (uses("alpha")) check("alpha", alpha);
  if (uses("beta")) check("beta", beta);
  if (uses("x")) check("x", x);
  return out;
}

ConfigResult parse_config(const std::string& text, const Overrides& overrides) {
  ConfigResult result;
  auto& violations = result.violations;
  Parser p(violations);

  // Collect entries: file first, overrides replace.
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      violations.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    entries.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
  }
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : entries) values[k] = v;
  for (const auto& [k, v] : overrides) values[k] = v;

  RunConfig& c = result.config;
  if (!values.contains("command")) {
    violations.push_back("command: missing (one of gaps, cf, ubiquity, rho, coverage-circle, coverage-2d, contrast, "
                         "check-conditions)");
    return result;
  }
  const auto command = parse_command(values["command"]);
  if (!command) {
    violations.push_back("command: unknown command '" + values["command"] + "'");
    return result;
  }
  c.command = *command;

  std::set<std::string> allowed(common_keys().begin(), common_keys().end());
  allowed.insert(command_keys(c.command).begin(), command_keys(c.command).end());
  for (const auto& [k, v] : values)
    if (!allowed.contains(k)) p.fail(k, "not a parameter of command '" + to_string(c.command) + "'");

  // command-specific defaults
  c.depth = c.command == Command::Ubiquity ? 48 : 16;
  c.resolution = c.command == Command::CoverageCircle ? 100000 : 1024;

  for (const auto& [k, v] : values) {
    if (!allowed.contains(k) || k == "command") continue;
    if (k == "format") {
      if (v == "csv")
        c.format = OutputFormat::Csv;
      else if (v == "json")
        c.format = OutputFormat::Json;
      else
        p.fail(k, "must be csv or json");
    } else if (k == "out") {
      if (v.empty())
        p.fail(k, "must not be empty");
      else
        c.out = v;
    } else if (k == "seed") {
      p.integer(k, v, c.seed);
    } else if (k == "threads") {
      p.integer(k, v, c.threads);
    } else if (k == "alpha") {
      p.real_value(k, v, c.alpha);
    } else if (k == "alpha_rational") {
      p.real_value(k, v, c.alpha_rational);
    } else if (k == "beta") {
      p.real_value(k, v, c.beta);
    } else if (k == "x") {
      p.real_value(k, v, c.x);
    } else if (k == "body") {
      if (auto b = parse_body_kind(v))
        c.body = *b;
      else
        p.fail(k, "must be height, multiplicative or rotated");
    } else if (k == "q") {
      p.integer(k, v, c.q);
    } else if (k == "psi") {
      p.real(k, v, c.psi);
    } else if (k == "n") {
      p.list(k, v, c.n);
    } else if (k == "P") {
      p.list(k, v, c.window);
    } else if (k == "y0") {
      p.list(k, v, c.y0);
    } else if (k == "eps") {
      p.real(k, v, c.eps);
    } else if (k == "depth") {
      p.integer(k, v, c.depth);
    } else if (k == "trials") {
      p.integer(k, v, c.trials);
    } else if (k == "rho_min") {
      p.real(k, v, c.rho_min);
    } else if (k == "rho_max") {
      p.real(k, v, c.rho_max);
    } else if (k == "r_offset_max") {
      p.integer(k, v, c.r_offset_max);
    } else if (k == "rho_rule") {
      if (v == "strip")
        c.rho_rule = RhoRule::StripWidth;
      else if (v == "chord")
        c.rho_rule = RhoRule::InnerChord;
      else
        p.fail(k, "must be strip or chord");
    } else if (k == "apex_threshold") {
      p.real(k, v, c.apex_threshold);
    } else if (k == "method") {
      if (v == "grid")
        c.method = SamplingMethod::Grid;
      else if (v == "mc")
        c.method = SamplingMethod::MonteCarlo;
      else
        p.fail(k, "must be grid or mc");
    } else if (k == "resolution") {
      p.integer(k, v, c.resolution);
    } else if (k == "samples") {
      p.integer(k, v, c.samples);
    } else if (k == "s_min") {
      p.real(k, v, c.s_min);
    } else if (k == "s_max") {
      p.real(k, v, c.s_max);
    } else if (k == "n_samples") {
      p.integer(k, v, c.n_samples);
    }
  }

  // Range checks against the target operation's preconditions.
  const std::string cmd = to_string(c.command);
  auto require = [&](bool present, const char* key) {
    if (!present && !values.contains(key)) p.fail(key, "required for command '" + cmd + "'");
    return present;
  };
  auto require_slope = [&](const std::optional<RealValue>& v, const char* key, bool normalized) {
    if (!require(v.has_value(), key)) return;
    if (!(v->value > 0.0))
      p.fail(key, "must be > 0");
    else if (normalized && v->value < 0.5)
      p.fail(key, "must be >= 1/2 (exchange the roles of the axes)");
  };
  auto require_psi = [&] {
    if (require(c.psi.has_value(), "psi") && !(*c.psi > 0.0)) p.fail("psi", "psi_q must be > 0");
  };
  auto require_q = [&] {
    if (require(c.q.has_value(), "q") && *c.q < 1) p.fail("q", "must be >= 1");
  };
  auto require_ladder = [&](const std::vector<std::int64_t>& ladder, const char* key, std::int64_t min_value) {
    if (!require(!ladder.empty(), key)) return;
    if (std::any_of(ladder.begin(), ladder.end(), [&](auto v) { return v < min_value; }))
      p.fail(key, "entries must be >= " + std::to_string(min_value));
    else if (!strictly_increasing(ladder))
      p.fail(key, "ladder must be strictly increasing");
  };
  auto check_y0 = [&] {
    if (c.y0.empty()) p.fail("y0", "list must not be empty");
  };

  switch (c.command) {
    case Command::Gaps:
      if (require(c.beta.has_value(), "beta") && !(c.beta->value > 0.0)) p.fail("beta", "must be > 0");
      if (require(!c.n.empty(), "n") && (c.n.size() != 1 || c.n.front() < 1)) p.fail("n", "must be a single count >= 1");
      if (!(c.eps >= 0.0)) p.fail("eps", "must be >= 0");
      check_y0();
      break;
    case Command::Cf:
      if (require(c.x.has_value(), "x") && !(c.x->value > 0.0)) p.fail("x", "must be > 0");
      if (c.depth < 1) p.fail("depth", "must be >= 1");
      break;
    case Command::Ubiquity:
      if (c.alpha && c.beta) p.fail("beta", "give either alpha or beta, not both");
      if (!c.alpha && !c.beta && !values.contains("alpha") && !values.contains("beta"))
        p.fail("alpha", "alpha or beta required for command 'ubiquity'");
      if (c.alpha && !(c.alpha->value > 0.0)) p.fail("alpha", "must be > 0");
      if (c.beta && !(c.beta->value > 0.0)) p.fail("beta", "must be > 0");
      if (c.trials < 1) p.fail("trials", "must be >= 1");
      if (!(c.rho_min > 0.0)) p.fail("rho_min", "must be > 0");
      if (!(c.rho_max >= c.rho_min) || c.rho_max > 0.5) p.fail("rho_max", "must satisfy rho_min <= rho_max <= 1/2");
      if (c.r_offset_max < 0) p.fail("r_offset_max", "must be >= 0");
      if (c.depth < 2) p.fail("depth", "must be >= 2");
      check_y0();
      break;
    case Command::Rho:
    case Command::CoverageCircle:
      if (c.body != BodyKind::RotatedMultiplicative) p.fail("body", "command '" + cmd + "' requires body = rotated");
      require_slope(c.alpha, "alpha", true);
      require_psi();
      require_q();
      require_ladder(c.n, "n", 1);
      if (!(c.apex_threshold > 0.0)) p.fail("apex_threshold", "must be > 0");
      if (c.command == Command::CoverageCircle) {
        if (c.resolution < 1000) p.fail("resolution", "must be >= 1000 for circle coverage");
        check_y0();
      }
      break;
    case Command::Coverage2d:
    case Command::Contrast:
      if (c.command == Command::Contrast || c.body == BodyKind::RotatedMultiplicative)
        require_slope(c.alpha, "alpha", c.command == Command::Contrast);
      if (c.command == Command::Contrast) require_slope(c.alpha_rational, "alpha_rational", true);
      require_psi();
      require_q();
      require_ladder(c.window, "P", 0);
      if (c.resolution < 1) p.fail("resolution", "must be >= 1");
      if (c.samples < 1) p.fail("samples", "must be >= 1");
      break;
    case Command::CheckConditions:
      if (c.body == BodyKind::RotatedMultiplicative) require_slope(c.alpha, "alpha", false);
      if (!(c.s_min > 0.0)) p.fail("s_min", "must be > 0");
      if (!(c.s_max > c.s_min)) p.fail("s_max", "must be > s_min");
      if (c.n_samples < 2) p.fail("n_samples", "must be >= 2");
      break;
  }
  return result;
}

}  // namespace starbody::cli
