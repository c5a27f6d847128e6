#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/geometry.hpp"
#include "gausshardy/io.hpp"
#include "gausshardy/kernels.hpp"
#include "gausshardy/riesz.hpp"
#include "gausshardy/semigroup.hpp"
#include "gausshardy/verify.hpp"

namespace py = pybind11;
using namespace gh;

namespace {

// chaos coefficients cross the boundary as {tuple(beta): float}
ChaosExpansion to_expansion(int dim, const py::dict& coeffs) {
  ChaosExpansion c;
  c.dimension = dim;
  for (auto item : coeffs)
    c.add(MultiIndex(item.first.cast<std::vector<int>>()), item.second.cast<double>());
  return c;
}

py::dict from_expansion(const ChaosExpansion& c) {
  py::dict out;
  for (const auto& [beta, v] : c.coefficients)
    out[py::tuple(py::cast(beta.entries()))] = v;
  return out;
}

}  // namespace

PYBIND11_MODULE(_gausshardy, m) {
  m.doc() = "Hermite-chaos calculus, Mehler kernels and Hardy-space "
            "functionals for the Ornstein-Uhlenbeck semigroup";

  m.def("hermite_eval",
        [](const std::vector<int>& beta, const std::vector<double>& x) {
          return hermite_eval(MultiIndex(beta), x);
        },
        py::arg("beta"), py::arg("x"),
        "orthonormal Hermite polynomial h_beta(x) under the gaussian measure");

  m.def("gauss_hermite_rule",
        [](int order) {
          const QuadratureRule& r = gauss_hermite_rule(order);
          return std::make_pair(r.nodes, r.weights);
        },
        py::arg("order"), "Golub-Welsch nodes and weights for weight exp(-x^2)");

  m.def("tensor_grid",
        [](int dim, int order) {
          GridFunction g = tensor_grid_function(dim, order);
          return std::make_pair(g.points, g.weights);
        },
        py::arg("dim"), py::arg("order"),
        "tensor Gauss-Hermite nodes (flattened) and gamma-normalized weights");

  m.def("analyze",
        [](int dim, int order, const std::vector<double>& values, int max_degree) {
          GridFunction g = tensor_grid_function(dim, order);
          if (values.size() != g.count())
            throw std::invalid_argument("values must match the tensor grid size");
          g.values = values;
          return from_expansion(analyze(g, max_degree));
        },
        py::arg("dim"), py::arg("order"), py::arg("values"), py::arg("max_degree"),
        "chaos coefficients of samples on the tensor grid");

  m.def("synthesize",
        [](int dim, const py::dict& coeffs, const std::vector<double>& points) {
          return synthesize(to_expansion(dim, coeffs), points).values;
        },
        py::arg("dim"), py::arg("coeffs"), py::arg("points"));

  m.def("apply_semigroup",
        [](int dim, const py::dict& coeffs, double t, int N, double alpha) {
          SemigroupQuery q{t, N, alpha};
          if (alpha <= 0.0) q = SemigroupQuery::heat(t);
          return from_expansion(apply_semigroup(to_expansion(dim, coeffs), q));
        },
        py::arg("dim"), py::arg("coeffs"), py::arg("t"), py::arg("N") = 0,
        py::arg("alpha") = 0.0,
        "spectral action of (t^2 L)^N e^{(t^2/alpha) L}; plain e^{tL} when alpha <= 0");

  m.def("riesz",
        [](int dim, const py::dict& coeffs, int axis, const std::string& variant) {
          RieszQuery q;
          q.axis = axis;
          q.variant = variant == "S" ? RieszVariant::S : RieszVariant::R;
          return from_expansion(riesz_apply(to_expansion(dim, coeffs), q));
        },
        py::arg("dim"), py::arg("coeffs"), py::arg("axis") = 0, py::arg("variant") = "R");

  m.def("mehler",
        [](double t, const std::vector<double>& x, const std::vector<double>& y) {
          return mehler(t, x, y);
        },
        py::arg("t"), py::arg("x"), py::arg("y"));

  m.def("admissibility",
        [](const std::vector<double>& x) { return admissibility(x); }, py::arg("x"));

  m.def("gaussian_ball_measure",
        [](const std::vector<double>& center, double radius) {
          return gaussian_ball_measure(center, radius);
        },
        py::arg("center"), py::arg("radius"));

  m.def("reproducing_constant", &reproducing_constant, py::arg("N"), py::arg("a"),
        py::arg("alpha"));

  m.def("h1_norms",
        [](int dim, const py::dict& coeffs, double a, double a_prime) {
          ConeSpec spec;
          GridFunction grid = tensor_grid_function(dim, 14);
          H1Norms n = h1_norms(to_expansion(dim, coeffs), a, a_prime, spec, grid);
          return std::make_tuple(n.quad, n.max, n.ratio);
        },
        py::arg("dim"), py::arg("coeffs"), py::arg("a") = 2.0, py::arg("a_prime") = 2.0,
        "(h1_quad, h1_max, ratio) of a finite expansion");

  m.def("run_suite",
        [](const std::string& name, std::uint64_t seed, double scale) {
          SuiteConfig cfg;
          cfg.seed = seed;
          cfg.scale = scale;
          SuiteResult r = run_suite(name, cfg);
          py::dict out;
          out["name"] = r.name;
          out["violations"] = r.violations;
          out["hard_pass"] = r.hard_pass;
          out["fitted_constants"] = r.fitted_constants;
          out["summary"] = r.summary;
          return out;
        },
        py::arg("name"), py::arg("seed") = 1, py::arg("scale") = 1.0);

  m.def("suite_names", [] { return suite_names(); });
}
