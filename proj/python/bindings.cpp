#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "starbody/cfrac.hpp"
#include "starbody/circle.hpp"
#include "starbody/cli.hpp"
#include "starbody/errors.hpp"
#include "starbody/experiment.hpp"
#include "starbody/geometry.hpp"
#include "starbody/ubiquity.hpp"

namespace py = pybind11;
using namespace starbody;

namespace {

using RealArg = std::variant<double, std::string>;

RealInput real_input(const RealArg& arg) {
  if (const auto* v = std::get_if<double>(&arg)) return *v;
  const auto& text = std::get<std::string>(arg);
  if (auto s = parse_surd(text)) return *s;
  throw PreconditionError("not a surd or named constant: '" + text + "'");
}

double real_value(const RealArg& arg) {
  const auto x = real_input(arg);
  if (const auto* s = std::get_if<Surd>(&x)) return static_cast<double>(s->value());
  return std::get<double>(x);
}

StarBodyFn make_body(const std::string& kind, const std::optional<RealArg>& alpha) {
  const auto k = parse_body_kind(kind);
  if (!k) throw PreconditionError("unknown body kind '" + kind + "'");
  if (*k == BodyKind::Height) return StarBodyFn::height();
  if (*k == BodyKind::Multiplicative) return StarBodyFn::multiplicative();
  if (!alpha) throw PreconditionError("rotated body needs alpha");
  const auto x = real_input(*alpha);
  if (const auto* s = std::get_if<Surd>(&x)) return StarBodyFn::rotated(*s);
  return StarBodyFn::rotated(std::get<double>(x));
}

PlanarSampling sampling(const std::string& method, std::int64_t resolution, std::int64_t samples, std::uint64_t seed,
                        unsigned threads) {
  PlanarSampling s;
  if (method == "grid")
    s.method = SamplingMethod::Grid;
  else if (method == "mc")
    s.method = SamplingMethod::MonteCarlo;
  else
    throw PreconditionError("method must be grid or mc");
  s.resolution = resolution;
  s.samples = samples;
  s.seed = seed;
  s.threads = threads;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Star-body Diophantine approximation experiments";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "eval_distance",
      [](const std::string& kind, std::optional<RealArg> alpha, double x1, double x2) {
        return eval_distance(make_body(kind, alpha), {x1, x2});
      },
      py::arg("kind"), py::arg("alpha") = py::none(), py::arg("x1"), py::arg("x2"));

  m.def(
      "halfwidth",
      [](const std::string& kind, std::optional<RealArg> alpha, double s, double level, bool root_find) {
        return halfwidth(make_body(kind, alpha), s, level, root_find ? WidthMethod::RootFind : WidthMethod::Auto);
      },
      py::arg("kind"), py::arg("alpha"), py::arg("s"), py::arg("level"), py::arg("root_find") = false);

  m.def(
      "cf_expand",
      [](const RealArg& x, int depth) {
        const auto cf = cf_expand(real_input(x), depth);
        py::list conv;
        for (const auto& c : cf.convergents)
          conv.append(py::make_tuple(py::int_(py::str(c.p.str())), py::int_(py::str(c.q.str()))));
        return py::make_tuple(cf.partial_quotients, conv, cf.terminated);
      },
      py::arg("x"), py::arg("depth"));

  m.def(
      "nr_sequence", [](const RealArg& x, int depth, std::size_t count) { return nr_sequence(cf_expand(real_input(x), depth), count); },
      py::arg("x"), py::arg("depth"), py::arg("count"));

  m.def(
      "orbit_points",
      [](double y0, const RealArg& beta, std::int64_t count) { return orbit_points({y0, real_value(beta), count}); },
      py::arg("y0"), py::arg("beta"), py::arg("count"));

  m.def(
      "gap_structure",
      [](const std::vector<double>& points, double eps) {
        std::vector<std::pair<double, std::int64_t>> out;
        for (const auto& g : gap_structure(points, eps).distinct_gaps) out.emplace_back(g.length, g.multiplicity);
        return out;
      },
      py::arg("points"), py::arg("eps") = kDefaultGapEpsilon);

  m.def(
      "union_measure",
      [](const std::vector<std::pair<double, double>>& arcs) {
        std::vector<Arc> a;
        for (const auto& [c, h] : arcs) a.push_back({c, h});
        return union_measure(IntervalUnion(a));
      },
      py::arg("arcs"));

  m.def(
      "lambda_value", [](std::int64_t n, const std::vector<std::int64_t>& nr) { return lambda_value(n, nr); }, py::arg("n"),
      py::arg("nr"));

  m.def(
      "calibrate_kappa",
      [](double y0, const RealArg& beta, const std::vector<std::int64_t>& nr, int trials, double rho_lo, double rho_hi,
         std::uint64_t seed, unsigned threads) {
        return calibrate_kappa(y0, real_value(beta), nr, trials, {rho_lo, rho_hi}, {}, seed, threads).kappa;
      },
      py::arg("y0"), py::arg("beta"), py::arg("nr"), py::arg("trials"), py::arg("rho_lo") = 0.01,
      py::arg("rho_hi") = 0.1, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "rho_sequence",
      [](const RealArg& alpha, double psi, std::int64_t q, std::int64_t count) {
        const auto rho = rho_sequence(make_body("rotated", alpha), psi, real_value(alpha), q, count);
        return py::make_tuple(rho.radii, rho.partial_sums);
      },
      py::arg("alpha"), py::arg("psi"), py::arg("q"), py::arg("count"));

  m.def(
      "circle_coverage",
      [](const RealArg& alpha, double psi, std::int64_t q, double y0, std::int64_t n) {
        const double a = real_value(alpha);
        return circle_coverage_exact(a, y0, rho_sequence(make_body("rotated", alpha), psi, a, q, n), n);
      },
      py::arg("alpha"), py::arg("psi"), py::arg("q"), py::arg("y0"), py::arg("n"));

  m.def(
      "planar_coverage",
      [](const std::string& kind, std::optional<RealArg> alpha, double psi, std::int64_t q, std::int64_t window,
         const std::string& method, std::int64_t resolution, std::int64_t samples, std::uint64_t seed, unsigned threads) {
        return planar_coverage(make_body(kind, alpha), psi, q, window,
                               sampling(method, resolution, samples, seed, threads))
            .fraction;
      },
      py::arg("kind"), py::arg("alpha"), py::arg("psi"), py::arg("q"), py::arg("window"), py::arg("method") = "grid",
      py::arg("resolution") = 256, py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
