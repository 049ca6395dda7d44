#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rkit/layer_cake.hpp"
#include "rkit/minimize.hpp"
#include "rkit/rearrange.hpp"
#include "rkit/verify.hpp"

namespace py = pybind11;
using namespace rkit;

namespace {
// Python side passes plain value lists on a centered grid of spacing h.
Field1D field(std::vector<double> v, double h) {
    const auto n = v.size();
    return Field1D(Grid1D::centered(n, h), std::move(v));
}
}  // namespace

PYBIND11_MODULE(_rkit, m) {
    m.doc() = "coupled rearrangement toolkit";

    py::register_exception<Error>(m, "RkitError");

    m.def("lp_norm", [](std::vector<double> v, double h, double p) { return lp_norm(field(std::move(v), h), p); },
          py::arg("values"), py::arg("h"), py::arg("p"));
    m.def("gradient_seminorm",
          [](std::vector<double> v, double h, double p) { return gradient_seminorm(field(std::move(v), h), p); },
          py::arg("values"), py::arg("h"), py::arg("p"));
    m.def("decreasing_rearrangement",
          [](std::vector<double> v, double h) { return decreasing_rearrangement(field(std::move(v), h)).values; },
          py::arg("values"), py::arg("h") = 1.0);
    m.def("symmetric_rearrangement",
          [](std::vector<double> v, double h) { return symmetric_rearrangement_1d(field(std::move(v), h)).values; },
          py::arg("values"), py::arg("h") = 1.0);
    m.def("coupled_rearrangement",
          [](std::vector<double> u, std::vector<double> v, double h) {
              return coupled_rearrangement(field(std::move(u), h), field(std::move(v), h)).values;
          },
          py::arg("u"), py::arg("v"), py::arg("h") = 1.0);
    m.def("duff_integrals",
          [](std::vector<double> f, double h, double p) {
              const Grid1D g(0.0, h, f.size());
              const auto d = duff_integrals(Field1D(g, std::move(f)), p);
              return py::make_tuple(d.lhs, d.rhs);
          },
          py::arg("samples"), py::arg("h"), py::arg("p"));
    m.def("ground_state_energy",
          [](double p, double alpha, double h) {
              return minimize_scalar_auto(NonlinearitySpec::power(p, 1), {alpha}, h).energy.total;
          },
          py::arg("p"), py::arg("alpha"), py::arg("h") = 0.05);
    m.def("verify",
          [](std::vector<std::string> suites, std::uint64_t seed, int jobs) {
              SuiteConfig cfg;
              cfg.suites = std::move(suites);
              cfg.seed = seed;
              cfg.jobs = jobs;
              SuiteResult r;
              {
                  py::gil_scoped_release release;
                  r = run_all(cfg);
              }
              return py::make_tuple(r.all_pass, reports_to_json(r.reports));
          },
          py::arg("suites") = std::vector<std::string>{}, py::arg("seed") = 7, py::arg("jobs") = 1,
          "Runs the check suites; returns (all_pass, reports as JSON text).");
}
