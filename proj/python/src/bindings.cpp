#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levyqsd/error.hpp"
#include "levyqsd/expansion.hpp"
#include "levyqsd/exponent.hpp"
#include "levyqsd/io.hpp"
#include "levyqsd/qsim.hpp"
#include "levyqsd/transform_lab.hpp"

namespace py = pybind11;
using namespace levyqsd;

namespace {

py::dict critical_dict(const CriticalData& c) {
    py::dict d;
    d["theta_star"] = c.theta_star;
    d["zeta_star"] = c.zeta_star;
    d["psi_second"] = c.psi_dd;
    d["psi_third"] = c.psi_d3;
    d["psi_fourth"] = c.psi_d4;
    return d;
}

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["n_effective"] = e.n_effective;
    d["replications"] = e.replications;
    d["seed"] = e.seed;
    return d;
}

InversionConfig inversion(int terms, double precision_target, unsigned threads) {
    InversionConfig cfg;
    cfg.terms = terms;
    cfg.precision_target = precision_target;
    cfg.threads = threads;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quasi-stationary analysis of spectrally one-sided Levy-driven queues";

    static py::exception<Error> error(m, "LevyQsdError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::enum_<Kind>(m, "Kind")
        .value("SpectrallyNegative", Kind::SpectrallyNegative)
        .value("SpectrallyPositive", Kind::SpectrallyPositive);

    py::class_<LevyModel>(m, "LevyModel")
        .def_static("cp_erlang", &LevyModel::cp_erlang, py::arg("lam"), py::arg("shape"), py::arg("nu"))
        .def_static("brownian", &LevyModel::brownian, py::arg("kind"), py::arg("sigma"), py::arg("c"))
        .def_static(
            "from_json", [](const std::string& text) { return io::model_from_json(io::json::parse(text)); },
            py::arg("text"))
        .def_property_readonly("kind", &LevyModel::kind)
        .def("describe", &LevyModel::describe)
        .def("__repr__", &LevyModel::describe);

    m.def("psi", py::overload_cast<const LevyModel&, double, int>(&psi_eval), py::arg("model"), py::arg("eta"),
          py::arg("order") = 0);
    m.def("phi", py::overload_cast<const LevyModel&, double>(&phi_right_inverse), py::arg("model"), py::arg("s"));
    m.def("critical_point", [](const LevyModel& model) { return critical_dict(critical_point(model)); });
    m.def("check_assumptions", [](const LevyModel& model) {
        const AssumptionReport r = check_assumptions(model);
        py::dict d;
        d["stable"] = r.stable;
        d["exponent_finite_on_window"] = r.exponent_finite_on_window;
        d["interior_minimum"] = r.interior_minimum;
        d["minimum_negative"] = r.minimum_negative;
        d["analyticity_documented"] = r.analyticity_documented;
        d["certified"] = r.certified();
        d["messages"] = r.messages;
        return d;
    });

    py::class_<AnalyticModel>(m, "AnalyticModel")
        .def(py::init<LevyModel>(), py::arg("model"))
        .def_property_readonly("critical", [](const AnalyticModel& am) { return critical_dict(am.critical()); })
        .def_property_readonly("series_constants",
                               [](const AnalyticModel& am) {
                                   const auto& k = am.constants();
                                   return std::vector<double>{k.c1, k.c2, k.c3};
                               })
        .def(
            "coeffs",
            [](const AnalyticModel& am, double a, double b) {
                const JointExpansion j = joint_coeffs(am, a, b);
                return std::vector<double>{j.c0, j.c1, j.c2, j.c3};
            },
            py::arg("alpha"), py::arg("beta"))
        .def(
            "mu_tilde", [](const AnalyticModel& am, double a, double b) { return mu_tilde(am, a, b); },
            py::arg("alpha"), py::arg("beta"))
        .def(
            "xi_tilde", [](const AnalyticModel& am, double a, double b) { return xi_tilde(am, a, b); },
            py::arg("alpha"), py::arg("beta"))
        .def(
            "transform",
            [](const AnalyticModel& am, Complex theta, double a, double b) { return master_L(am, theta, a, b); },
            py::arg("theta"), py::arg("alpha") = 0.0, py::arg("beta") = 0.0)
        .def(
            "invert_time",
            [](const AnalyticModel& am, double a, double b, const std::vector<double>& times, int terms,
               double target, unsigned threads) {
                const TransformGrid g = invert_time(am, a, b, times, inversion(terms, target, threads));
                py::dict d;
                d["t"] = g.times;
                d["raw"] = g.raw;
                d["survival"] = g.survival;
                d["conditional"] = g.conditional;
                d["raw_error"] = g.raw_error;
                d["survival_error"] = g.survival_error;
                return d;
            },
            py::arg("alpha"), py::arg("beta"), py::arg("times"), py::arg("terms") = 41,
            py::arg("precision_target") = 1e-8, py::arg("threads") = 1)
        .def(
            "tauberian_tail",
            [](const AnalyticModel& am, double a, double b, double t) { return tauberian_tail(am, a, b, t); },
            py::arg("alpha"), py::arg("beta"), py::arg("t"))
        .def(
            "rate_profile",
            [](const AnalyticModel& am, double a, double b, const std::vector<double>& times) {
                const RateProfile rp = rate_profile(am, a, b, times, InversionConfig{});
                std::vector<double> profile;
                for (const auto& p : rp.points) profile.push_back(p.profile);
                py::dict d;
                d["t"] = times;
                d["profile"] = profile;
                d["mu_tilde"] = rp.mu_tilde;
                d["xi_tilde"] = rp.xi_tilde;
                d["predicted_limit"] = rp.predicted_limit;
                d["published_limit"] = rp.published_limit;
                return d;
            },
            py::arg("alpha"), py::arg("beta"), py::arg("times"))
        .def(
            "density",
            [](const AnalyticModel& am, const std::string& which, const std::vector<double>& x,
               const std::vector<double>& y, unsigned threads) {
                if (which != "mu" && which != "xi") throw py::value_error("which must be 'mu' or 'xi'");
                const DensityGrid g = invert_2d_density(am, which == "mu" ? DensityKind::Mu : DensityKind::Xi, x,
                                                        y, inversion(41, 1e-8, threads));
                std::vector<std::vector<double>> rows(x.size(), std::vector<double>(y.size()));
                for (std::size_t i = 0; i < x.size(); ++i) {
                    for (std::size_t j = 0; j < y.size(); ++j) rows[i][j] = g.at(i, j);
                }
                return rows;
            },
            py::arg("which"), py::arg("x"), py::arg("y"), py::arg("threads") = 1);

    m.def(
        "estimate_survival",
        [](const LevyModel& model, double t, std::uint64_t replications, std::uint64_t seed, bool tilt,
           double brownian_step, unsigned threads) {
            SimConfig cfg{model, t, replications, seed, tilt ? Tilt::ThetaStar : Tilt::None,
                          brownian_step > 0.0 ? brownian_step : t / 100.0};
            cfg.threads = threads;
            return estimate_dict(estimate_survival(cfg));
        },
        py::arg("model"), py::arg("t"), py::arg("replications") = 100000, py::arg("seed") = 1,
        py::arg("tilt") = true, py::arg("brownian_step") = 0.0, py::arg("threads") = 1);
}
