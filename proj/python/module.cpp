#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "modflow/commands.hpp"
#include "modflow/config.hpp"
#include "modflow/filter.hpp"

namespace py = pybind11;
using namespace modflow;

namespace {

std::string render(void (*cmd)(const ExperimentConfig&, std::ostream&),
                   const std::string& config_text) {
    std::ostringstream out;
    cmd(parse_config_text(config_text), out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_modflow, m) {
    m.doc() = "information-driven signal filtering, pricing and observer asymmetry";

    py::class_<SignalLaw>(m, "SignalLaw")
        .def_static("from_atoms", &SignalLaw::from_atoms, py::arg("atoms"),
                    py::arg("weights"))
        .def_static("gaussian", &SignalLaw::gaussian, py::arg("mean"), py::arg("sd"),
                    py::arg("n_quad") = 129)
        .def_property_readonly("atoms",
                               [](const SignalLaw& s) { return s.atoms(); })
        .def_property_readonly("weights",
                               [](const SignalLaw& s) { return s.weights(); })
        .def("mean", &SignalLaw::mean)
        .def("variance", &SignalLaw::variance);

    m.def("kernel_h", &kernel_h, py::arg("x"), py::arg("y"), py::arg("t"),
          py::arg("sigma"),
          "conditioning kernel exp{(x*y - t*x^2/2) / (sigma^2 (1-t))}");

    m.def(
        "posterior_weights",
        [](const SignalLaw& prior, double t, double xi_hat, double sigma_hat) {
            EffectiveState eff{t, sigma_hat > 0.0 ? 1u : 0u, xi_hat, sigma_hat};
            return posterior(prior, eff, {}).weights();
        },
        py::arg("prior"), py::arg("t"), py::arg("xi_hat"), py::arg("sigma_hat"),
        "atom weights of the signal law conditioned on the effective observation");

    m.def(
        "simulate_csv",
        [](const std::string& cfg) { return render(&cmd_simulate, cfg); },
        py::arg("config_text"));
    m.def(
        "price_csv", [](const std::string& cfg) { return render(&cmd_price, cfg); },
        py::arg("config_text"));
    m.def(
        "asymmetry_csv",
        [](const std::string& cfg) { return render(&cmd_asymmetry, cfg); },
        py::arg("config_text"));
    m.def(
        "verify_report",
        [](const std::string& cfg) {
            std::ostringstream out;
            const int rc = cmd_verify(parse_config_text(cfg), out);
            return py::make_tuple(rc == 0, out.str());
        },
        py::arg("config_text"), "runs the oracle suites; returns (ok, report_text)");
}
