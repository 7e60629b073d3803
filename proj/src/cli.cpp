#include "starbody/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "starbody/errors.hpp"
#include "starbody/random.hpp"
#include "starbody/ubiquity.hpp"

namespace starbody::cli {
namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string big_to_cell(const BigInt& v) { return v.str(); }

Cell big_cell(const BigInt& v) {
  if (v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min())
    return static_cast<std::int64_t>(v);
  return big_to_cell(v);
}

StarBodyFn make_body(BodyKind kind, const std::optional<RealValue>& alpha) {
  switch (kind) {
    case BodyKind::Height:
      return StarBodyFn::height();
    case BodyKind::Multiplicative:
      return StarBodyFn::multiplicative();
    case BodyKind::RotatedMultiplicative:
      break;
  }
  if (!alpha) throw PreconditionError("alpha: required for body = rotated");
  if (alpha->exact) return StarBodyFn::rotated(*alpha->exact);
  return StarBodyFn::rotated(alpha->value);
}

PlanarSampling sampling_of(const RunConfig& c) {
  PlanarSampling s;
  s.method = c.method;
  s.resolution = c.resolution;
  s.samples = c.samples;
  s.seed = c.seed;
  s.threads = c.threads;
  return s;
}

RhoOptions rho_options(const RunConfig& c) {
  RhoOptions o;
  o.rule = c.rho_rule;
  o.apex_threshold = c.apex_threshold;
  return o;
}

ResultTable run_gaps(const RunConfig& c) {
  ResultTable t;
  t.columns = {"y0", "length", "multiplicity"};
  const std::int64_t count = c.n.front();
  const bool rational = c.beta->exact && !c.beta->exact->is_irrational();
  bool duplicates = false;
  std::size_t max_distinct = 0;
  for (double y0 : c.y0) {
    GapStructure gs;
    if (rational) {
      gs = rational_orbit_gaps(c.beta->exact->a, c.beta->exact->c, count);
    } else {
      gs = gap_structure(orbit_points({y0, c.beta->value, count}), c.eps);
    }
    duplicates = duplicates || gs.has_duplicate_points;
    max_distinct = std::max(max_distinct, gs.distinct_gaps.size());
    for (const auto& g : gs.distinct_gaps) t.rows.push_back({y0, g.length, g.multiplicity});
  }
  t.summary["exact_rational"] = rational;
  t.summary["max_distinct_gaps"] = max_distinct;
  t.summary["duplicate_points"] = duplicates;
  return t;
}

ResultTable run_cf(const RunConfig& c) {
  ResultTable t;
  t.columns = {"k", "a_k", "p_k", "q_k"};
  const auto cf = cf_expand(c.x->input(), c.depth);
  for (std::size_t k = 0; k < cf.partial_quotients.size(); ++k)
    t.rows.push_back({static_cast<std::int64_t>(k), cf.partial_quotients[k], big_cell(cf.convergents[k].p),
                      big_cell(cf.convergents[k].q)});
  t.summary["terminated"] = cf.terminated;
  if (c.x->exact) {
    if (auto period = detect_period(*c.x->exact, std::max(c.depth, 64))) {
      t.summary["preperiod"] = period->preperiod;
      t.summary["period"] = period->period;
    }
  }
  return t;
}

// Convergent denominators of beta. Float expansions stop at the precision
// guard and at 1e8, past which they are not trustworthy.
std::vector<std::int64_t> ubiquity_nr(const RealValue& beta, int depth, int& depth_used) {
  if (beta.exact) {
    depth_used = depth;
    return convergent_denominators(cf_expand(beta.input(), depth), std::numeric_limits<std::int64_t>::max() / 4);
  }
  for (int d = depth; d >= 1; --d) {
    try {
      depth_used = d;
      return convergent_denominators(cf_expand(beta.input(), d), 100'000'000);
    } catch (const PrecisionError&) {
    }
  }
  throw PrecisionError("beta: no trustworthy continued-fraction expansion");
}

ResultTable run_ubiquity(const RunConfig& c) {
  ResultTable t;
  t.columns = {"trial", "y0", "center", "rho", "r", "N_r", "N_r1", "lambda", "measured", "bound", "ratio", "pass"};
  const RealValue beta = c.beta ? *c.beta : c.alpha->reciprocal();
  int depth_used = 0;
  const auto nr = ubiquity_nr(beta, c.depth, depth_used);
  if (nr.size() < 2) throw std::length_error("beta: fewer than two convergent denominators available");
  double kappa = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  const ROffsetRange r_range{0, static_cast<std::size_t>(c.r_offset_max)};
  for (double y0 : c.y0) {
    const auto cal = calibrate_kappa(y0, beta.value, nr, c.trials, {c.rho_min, c.rho_max}, r_range, c.seed, c.threads);
    kappa = std::min(kappa, cal.kappa);
    all_pass = all_pass && cal.report.all_pass();
    std::int64_t i = 0;
    for (const auto& tr : cal.report.trials)
      t.rows.push_back({i++, y0, tr.interval.center, tr.interval.half_length, static_cast<std::int64_t>(tr.r),
                        tr.n_begin, tr.n_end, tr.lambda, tr.measured, tr.bound, tr.ratio(), tr.pass});
  }
  t.summary["beta"] = beta.canonical();
  t.summary["nr_count"] = nr.size();
  t.summary["cf_depth"] = depth_used;
  t.summary["kappa"] = kappa;
  t.summary["all_pass"] = all_pass;
  return t;
}

ResultTable run_rho(const RunConfig& c) {
  ResultTable t;
  t.columns = {"N", "S_N", "S_10N", "increment"};
  const auto f = make_body(c.body, c.alpha);
  const std::int64_t count = 10 * c.n.back();
  const auto rho = rho_sequence(f, *c.psi, c.alpha->value, *c.q, count, rho_options(c));
  const auto report = divergence_check(rho, c.n);
  for (const auto& p : report.ladder)
    t.rows.push_back({p.n, p.partial_sum, p.partial_sum + p.increment, p.increment});
  t.summary["verdict"] = report.verdict();
  t.summary["stable"] = report.stable;
  t.summary["flagged"] = rho.flagged;
  return t;
}

ResultTable run_coverage_circle(const RunConfig& c) {
  ResultTable t;
  t.columns = {"y0", "N", "grid_fraction", "exact_fraction"};
  const auto f = make_body(c.body, c.alpha);
  const auto rho = rho_sequence(f, *c.psi, c.alpha->value, *c.q, c.n.back(), rho_options(c));
  for (double y0 : c.y0)
    for (std::int64_t n : c.n) {
      const auto r = circle_coverage(c.alpha->value, y0, rho, n, c.resolution);
      t.rows.push_back({y0, n, r.fraction, r.exact_fraction.value_or(0.0)});
    }
  t.summary["flagged"] = rho.flagged;
  return t;
}

void push_coverage(ResultTable& t, const CoverageResult& r) {
  t.rows.push_back({r.parameter, r.fraction, r.sample_count, r.method, static_cast<std::int64_t>(r.seed)});
}

ResultTable run_coverage_2d(const RunConfig& c) {
  ResultTable t;
  t.columns = {"P", "fraction", "sample_count", "method", "seed"};
  const auto f = make_body(c.body, c.alpha);
  for (const auto& r : planar_coverage_ladder(f, *c.psi, *c.q, c.window, sampling_of(c))) push_coverage(t, r);
  return t;
}

ResultTable run_contrast(const RunConfig& c) {
  ResultTable t;
  t.columns = {"P", "irrational", "rational", "sample_count", "method", "seed"};
  const auto irr = make_body(BodyKind::RotatedMultiplicative, c.alpha);
  const auto rat = make_body(BodyKind::RotatedMultiplicative, c.alpha_rational);
  const auto sc = slope_contrast(*c.psi, *c.q, c.window, irr, rat, sampling_of(c));
  for (std::size_t i = 0; i < sc.windows.size(); ++i)
    t.rows.push_back({sc.windows[i], sc.irrational[i].fraction, sc.rational[i].fraction, sc.irrational[i].sample_count,
                      sc.irrational[i].method, static_cast<std::int64_t>(c.seed)});
  if (!sc.windows.empty()) {
    t.summary["irrational_top"] = sc.irrational.back().fraction;
    t.summary["rational_top"] = sc.rational.back().fraction;
  }
  return t;
}

ResultTable run_check_conditions(const RunConfig& c) {
  ResultTable t;
  t.columns = {"quantity", "cutoff", "value"};
  const auto f = make_body(c.body, c.alpha);
  const auto r = check_conditions(f, c.s_min, c.s_max, static_cast<int>(c.n_samples));
  const std::string none;
  t.rows.push_back({std::string("has_half_line"), none, r.has_half_line});
  t.rows.push_back({std::string("irrational_slope_found"), none, r.irrational_slope_found});
  for (const auto& s : r.strip_integrals) t.rows.push_back({std::string("strip_integral"), s.cutoff, s.integral});
  t.rows.push_back({std::string("strip_measure_diverges"), none, r.strip_measure_diverges});
  t.rows.push_back({std::string("strip_log_uniform"), none, r.strip_log_uniform});
  t.rows.push_back({std::string("symmetry_max_defect"), none, r.symmetry_max_defect});
  if (r.width_monotone_from)
    t.rows.push_back({std::string("width_monotone_from"), none, *r.width_monotone_from});
  else
    t.rows.push_back({std::string("width_monotone_from"), none, std::string("none")});
  t.rows.push_back({std::string("width_strictly_decreasing"), none, r.width_strictly_decreasing});
  t.summary["slope_note"] = r.slope_note;
  return t;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else
          return csv_escape(v);
      },
      cell);
}

ordered_json cell_json(const Cell& cell) {
  return std::visit([](const auto& v) { return ordered_json(v); }, cell);
}

const char* kUsage =
    "usage: starbody <command> [--key value | --key=value ...] [--config <path>]\n"
    "commands: gaps, cf, ubiquity, rho, coverage-circle, coverage-2d, contrast, check-conditions\n"
    "global flags: --config <path> --out <path> --format csv|json --seed <u64> --threads <n>\n";

std::string flag_key(std::string name) {
  if (name == "P" || name == "p") return "P";
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

}  // namespace

ResultTable execute(const RunConfig& config) {
  switch (config.command) {
    case Command::Gaps:
      return run_gaps(config);
    case Command::Cf:
      return run_cf(config);
    case Command::Ubiquity:
      return run_ubiquity(config);
    case Command::Rho:
      return run_rho(config);
    case Command::CoverageCircle:
      return run_coverage_circle(config);
    case Command::Coverage2d:
      return run_coverage_2d(config);
    case Command::Contrast:
      return run_contrast(config);
    case Command::CheckConditions:
      return run_check_conditions(config);
  }
  throw std::logic_error("unhandled command");
}

ordered_json metadata(const RunConfig& config, const ResultTable& table) {
  ordered_json meta;
  meta["tool"] = "starbody";
  meta["version"] = kVersion;
  meta["command"] = to_string(config.command);
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config.to_kv()) cfg[k] = v;
  meta["config"] = cfg;
  meta["prng"] = Rng::kName;
  meta["seed"] = config.seed;
  meta["warnings"] = config.warnings();
  meta["summary"] = table.summary;
  return meta;
}

std::string render(const RunConfig& config, const ResultTable& table) {
  const auto meta = metadata(config, table);
  if (config.format == OutputFormat::Json) {
    ordered_json doc;
    doc["meta"] = meta;
    doc["rows"] = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json obj = ordered_json::object();
      for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
      doc["rows"].push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
  }
  std::string out = "# " + meta.dump() + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

int main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Overrides overrides;
  std::optional<std::string> config_path;
  bool have_command = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg == "--help" || arg == "-h") {
      out << kUsage;
      return kExitOk;
    }
    if (arg.rfind("--", 0) == 0) {
      std::string name = arg.substr(2);
      std::string value;
      if (const auto eq = name.find('='); eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
      } else if (i + 1 < args.size()) {
        value = args[++i];
      } else {
        err << "error: " << flag_key(name) << ": missing value\n" << kUsage;
        return kExitValidation;
      }
      if (name == "config")
        config_path = value;
      else
        overrides.emplace_back(flag_key(name), value);
    } else if (!have_command) {
      overrides.emplace_back("command", arg);
      have_command = true;
    } else {
      err << "error: unexpected argument '" << arg << "'\n" << kUsage;
      return kExitValidation;
    }
  }

  std::string text;
  if (config_path) {
    std::ifstream in(*config_path);
    if (!in) {
      err << "error: config: cannot read '" << *config_path << "'\n";
      return kExitIo;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  const auto parsed = parse_config(text, overrides);
  if (!parsed.ok()) {
    for (const auto& v : parsed.violations) err << "error: " << v << "\n";
    if (!have_command && !text.empty()) err << kUsage;
    return kExitValidation;
  }
  const RunConfig& config = parsed.config;

  std::string rendered;
  try {
    rendered = render(config, execute(config));
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  for (const auto& w : config.warnings()) err << "warning: " << w << "\n";
  if (config.out == "-") {
    out << rendered;
    out.flush();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(config.out, std::ios::binary);
  if (!file) {
    err << "error: out: cannot open '" << config.out << "' for writing\n";
    return kExitIo;
  }
  file << rendered;
  file.close();
  if (!file) {
    err << "error: out: write to '" << config.out << "' failed\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace starbody::cli
