#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vage/analysis.hpp"
#include "vage/errors.hpp"
#include "vage/expr.hpp"
#include "vage/hermite.hpp"
#include "vage/json_io.hpp"
#include "vage/linsys.hpp"
#include "vage/series.hpp"
#include "vage/weights.hpp"

namespace py = pybind11;
using namespace vage;

namespace {

PowerSeries phi_by_name(const std::string& name) {
  if (name == "exp") return PowerSeries::exp();
  if (name == "sin") return PowerSeries::sin();
  if (name == "cos") return PowerSeries::cos();
  if (name == "geometric") return PowerSeries::geometric();
  if (name == "log1p") return PowerSeries::log1p();
  throw DomainError("unknown power series \"" + name + "\"");
}

TruncationSpec window_of(py::tuple t) {
  if (t.size() != 2) throw DomainError("window must be a (K, N) tuple");
  return {t[0].cast<Generator>(), t[1].cast<std::uint32_t>()};
}

}  // namespace

PYBIND11_MODULE(_vage, m) {
  m.doc() = "Truncated convolution rings over weighted free commutative monoids";

  auto error = py::register_exception<Error>(m, "Error");
  auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<NotInvertibleError>(m, "NotInvertibleError", domain.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", domain.ptr());
  auto numeric = py::register_exception<NumericError>(m, "NumericError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numeric.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", numeric.ptr());
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<MultiIndex>(m, "MultiIndex")
      .def(py::init<>())
      .def(py::init<std::vector<MultiIndex::Entry>>(), py::arg("entries"))
      .def_static("unit", &MultiIndex::unit, py::arg("n"), py::arg("k") = 1)
      .def_property_readonly("entries", &MultiIndex::entries)
      .def_property_readonly("degree", &MultiIndex::degree)
      .def("__getitem__", &MultiIndex::operator[])
      .def(py::self + py::self)
      .def(py::self == py::self)
      .def("__hash__", [](const MultiIndex& a) { return std::hash<MultiIndex>{}(a); })
      .def("__str__", &MultiIndex::to_string)
      .def("__repr__", [](const MultiIndex& a) { return "MultiIndex(" + a.to_string() + ")"; });
  m.def("try_sub", &try_sub);
  m.def("enumerate", [](py::tuple t) { return enumerate(window_of(t)); }, py::arg("window"));

  py::class_<WeightSpec>(m, "WeightSpec")
      .def_static("schwartz", &WeightSpec::schwartz)
      .def_static("gspace", &WeightSpec::gspace)
      .def_static("kondratiev", &WeightSpec::kondratiev)
      .def_static("doubly_exponential", &WeightSpec::doubly_exponential)
      .def_static("power", &WeightSpec::power, py::arg("c"))
      .def_static("custom_generators", &WeightSpec::custom_generators, py::arg("w"))
      .def_static("tensor", &WeightSpec::tensor, py::arg("left"), py::arg("right"))
      .def_static("from_json", [](const std::string& s) { return weight_from_json(Json::parse(s)); })
      .def("eval", &WeightSpec::eval)
      .def("log_eval", &WeightSpec::log_eval)
      .def("to_json", [](const WeightSpec& w) { return dump_canonical(to_json(w)); })
      .def("__repr__", &WeightSpec::describe)
      .def(py::self == py::self);

  m.def("is_admissible", [](const WeightSpec& w, py::tuple t) { return is_admissible(w, window_of(t)).ok; });
  m.def("regularity_sum", &regularity_sum, py::arg("w"), py::arg("d"), py::arg("K"));
  m.def(
      "check_superexponential",
      [](const WeightSpec& w, py::tuple t) {
        const auto r = check_superexponential(w, window_of(t));
        py::object witness = py::none();
        if (r.witness) witness = py::make_tuple(r.witness->first, r.witness->second);
        return py::dict(py::arg("ok") = r.ok, py::arg("witness") = witness, py::arg("lhs") = r.lhs,
                        py::arg("rhs") = r.rhs);
      },
      py::arg("w"), py::arg("window"));
  m.def("vage_constant", &vage_constant_closed_form, py::arg("w"), py::arg("d"));
  m.def("vage_constant_partial", [](const WeightSpec& w, unsigned d, py::tuple t) {
    return vage_constant_partial(w, d, window_of(t));
  });

  py::class_<Series>(m, "Series")
      .def(py::init([](py::tuple window, const std::string& expr) { return parse_series_expr(expr, window_of(window)); }),
           py::arg("window"), py::arg("expr") = "0")
      .def_static("from_terms",
                  [](py::tuple window, const std::map<MultiIndex, Complex, GradedLexLess>& terms) {
                    return Series(window_of(window), terms);
                  })
      .def_static("from_json", [](const std::string& s) { return series_from_json(Json::parse(s)); })
      .def_property_readonly("window", [](const Series& f) {
        return py::make_tuple(f.window().max_generator, f.window().max_degree);
      })
      .def("terms", [](const Series& f) {
        std::vector<std::pair<MultiIndex, Complex>> out(f.terms().begin(), f.terms().end());
        return out;
      })
      .def("coeff", &Series::coeff)
      .def("max_abs_diff", &Series::max_abs_diff)
      .def("to_json", [](const Series& f) { return dump_canonical(to_json(f)); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def(-py::self)
      .def("__rmul__", [](const Series& f, Complex c) { return c * f; })
      .def("__eq__", [](const Series& a, const Series& b) { return a == b; })
      .def("__repr__", &Series::to_string);

  m.def("convolve", &convolve);
  m.def("expectation", &expectation);
  m.def("norm_p", &norm_p, py::arg("f"), py::arg("w"), py::arg("p"));
  m.def("power", &power);
  m.def("invert", &invert);
  m.def("neumann_invert", &neumann_invert, py::arg("f"), py::arg("terms"));
  m.def("derive", &derive, py::arg("n"), py::arg("f"));
  m.def(
      "compose",
      [](const std::string& phi, const Series& f, std::optional<WeightSpec> w, unsigned d) {
        std::optional<ComposeGuard> g;
        if (w) g = ComposeGuard{*w, d};
        return compose(phi_by_name(phi), f, g);
      },
      py::arg("phi"), py::arg("f"), py::arg("guard_weight") = py::none(), py::arg("d") = 1);

  m.def(
      "check_vage",
      [](const Series& f, const Series& g, const WeightSpec& w, int p, int q, int d) {
        const auto r = check_vage(f, g, w, p, q, d);
        return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("ratio") = r.ratio,
                        py::arg("constant") = r.constant, py::arg("holds") = r.holds);
      },
      py::arg("f"), py::arg("g"), py::arg("w"), py::arg("p"), py::arg("q"), py::arg("d"));
  m.def(
      "random_series", [](py::tuple t, const WeightSpec& w, int q, std::uint64_t seed) {
        return random_series(window_of(t), w, q, seed);
      },
      py::arg("window"), py::arg("w"), py::arg("q"), py::arg("seed"));
  m.def("monomial_ratio", &monomial_ratio, py::arg("w"), py::arg("n"), py::arg("m"), py::arg("p"), py::arg("q"));
  m.def(
      "demonstrate_schwartz_failure",
      [](int p, int q, double target) {
        const auto r = demonstrate_schwartz_failure(p, q, target);
        return py::make_tuple(r.k, r.ratio);
      },
      py::arg("p"), py::arg("q"), py::arg("target"));
  m.def("zhang_partial", &zhang_partial, py::arg("d"), py::arg("K"));

  m.def("kalman_observable", &kalman_observable, py::arg("ce"), py::arg("ae"));
  m.def(
      "eval_realization",
      [](const std::string& real, const Series& f) {
        return dump_canonical(to_json(eval_realization(realization_from_json(Json::parse(real)), f)));
      },
      py::arg("realization_json"), py::arg("f"));

  m.def("hermite_poly", &hermite_poly, py::arg("n"), py::arg("z"));
  m.def("hermite_fn", &hermite_fn, py::arg("n"), py::arg("z"));
  m.def(
      "mehler_check",
      [](Complex u, Complex v, Complex s, unsigned terms) {
        const auto r = mehler_check(u, v, s, terms);
        return py::make_tuple(r.lhs, r.rhs, r.abs_err);
      },
      py::arg("u"), py::arg("v"), py::arg("s"), py::arg("terms") = 200);
  m.def(
      "strip_radius",
      [](const std::function<double(std::size_t)>& f, std::size_t n_max, double cap) {
        return strip_radius(f, n_max, cap).tau;
      },
      py::arg("log_coeff"), py::arg("n_max"), py::arg("cap") = 10.0);
  m.def(
      "gp_integral_norm", [](const std::vector<Complex>& c, int p) { return gp_integral_norm(c, p).integral; },
      py::arg("coeffs"), py::arg("p"));
}
