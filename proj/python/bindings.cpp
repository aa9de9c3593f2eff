#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mrc/mrc.hpp"

namespace py = pybind11;

namespace {

mrc::LoadVector to_loads(const std::vector<double>& x) { return mrc::LoadVector(x); }

py::object sum_peak_to_python(const mrc::SumPeak& peak) {
    if (std::holds_alternative<mrc::Monotone>(peak)) return py::none();
    return py::float_(std::get<double>(peak));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-receiver MRC wireless power transfer: circuit model, load optimisation, distributed protocol";

    py::register_exception<mrc::InvalidScenario>(m, "InvalidScenario", PyExc_ValueError);
    py::register_exception<mrc::ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<mrc::NoFeasibleTrials>(m, "NoFeasibleTrials", PyExc_RuntimeError);
    py::register_exception<mrc::SingularMatrix>(m, "SingularMatrix", PyExc_ArithmeticError);

    py::class_<mrc::TransmitterSpec>(m, "TransmitterSpec")
        .def(py::init([](double v_mag, double r, double l, double v_phase) {
                 return mrc::TransmitterSpec{v_mag, v_phase, r, l};
             }),
             py::arg("v_mag"), py::arg("r"), py::arg("l"), py::arg("v_phase") = 0.0)
        .def_readonly("v_mag", &mrc::TransmitterSpec::v_mag)
        .def_readonly("v_phase", &mrc::TransmitterSpec::v_phase)
        .def_readonly("r", &mrc::TransmitterSpec::r)
        .def_readonly("l", &mrc::TransmitterSpec::l);

    py::class_<mrc::ReceiverSpec>(m, "ReceiverSpec")
        .def(py::init([](double r, double l, double h, double x_min, double x_max, double p_min,
                         std::optional<double> x_nominal) {
                 return mrc::ReceiverSpec{r, l, h, x_min, x_max, p_min, x_nominal};
             }),
             py::arg("r"), py::arg("l"), py::arg("h"), py::arg("x_min"), py::arg("x_max"), py::arg("p_min"),
             py::arg("x_nominal") = py::none())
        .def_readonly("r", &mrc::ReceiverSpec::r)
        .def_readonly("l", &mrc::ReceiverSpec::l)
        .def_readonly("h", &mrc::ReceiverSpec::h)
        .def_readonly("x_min", &mrc::ReceiverSpec::x_min)
        .def_readonly("x_max", &mrc::ReceiverSpec::x_max)
        .def_readonly("p_min", &mrc::ReceiverSpec::p_min)
        .def_readonly("x_nominal", &mrc::ReceiverSpec::x_nominal);

    py::class_<mrc::SystemScenario>(m, "SystemScenario")
        .def(py::init<double, mrc::TransmitterSpec, std::vector<mrc::ReceiverSpec>>(), py::arg("omega"),
             py::arg("transmitter"), py::arg("receivers"))
        .def_property_readonly("omega", &mrc::SystemScenario::omega)
        .def_property_readonly("transmitter", &mrc::SystemScenario::transmitter)
        .def_property_readonly("receivers", [](const mrc::SystemScenario& s) {
            return std::vector<mrc::ReceiverSpec>(s.receivers().begin(), s.receivers().end());
        })
        .def("__len__", &mrc::SystemScenario::size)
        .def("nominal_loads", [](const mrc::SystemScenario& s) {
            const auto x = s.nominal_loads();
            return std::vector<double>(x.values().begin(), x.values().end());
        })
        .def("with_p_min", &mrc::SystemScenario::with_p_min, py::arg("n"), py::arg("p_min"))
        .def("to_json", &mrc::serialize_scenario);

    m.def("load_scenario", &mrc::load_scenario, py::arg("path"),
          "Read a scenario JSON file, or a bundled scenario by name");
    m.def("parse_scenario", [](const std::string& text) { return mrc::parse_scenario(text); }, py::arg("text"));
    m.def("bundled_scenario", [](const std::string& name) { return mrc::bundled_scenario(name); }, py::arg("name"));

    py::class_<mrc::PowerReport>(m, "PowerReport")
        .def_readonly("i_tx", &mrc::PowerReport::i_tx)
        .def_readonly("i", &mrc::PowerReport::i)
        .def_readonly("p_tx", &mrc::PowerReport::p_tx)
        .def_readonly("p", &mrc::PowerReport::p)
        .def_readonly("p_sum", &mrc::PowerReport::p_sum);

    m.def("impedance_matrix", [](const mrc::SystemScenario& s, const std::vector<double>& x) {
        return mrc::impedance_matrix(s, to_loads(x));
    });
    m.def("impedance_determinant", [](const mrc::SystemScenario& s, const std::vector<double>& x) {
        return mrc::impedance_determinant(s, to_loads(x));
    });
    m.def("solve_closed_form", [](const mrc::SystemScenario& s, const std::vector<double>& x) {
        return mrc::solve_closed_form(s, to_loads(x));
    });
    m.def("solve_oracle", [](const mrc::SystemScenario& s, const std::vector<double>& x) {
        return mrc::solve_oracle(s, to_loads(x));
    });

    m.def("peak_load", [](const mrc::SystemScenario& s, const std::vector<double>& x, std::size_t n) {
        return mrc::peak_load(s, to_loads(x), n);
    }, py::arg("scenario"), py::arg("loads"), py::arg("n"));
    m.def("sum_peak_load", [](const mrc::SystemScenario& s, const std::vector<double>& x, std::size_t n) {
        return sum_peak_to_python(mrc::sum_peak_load(s, to_loads(x), n));
    }, py::arg("scenario"), py::arg("loads"), py::arg("n"), "Peak of p_sum over x_n, or None when monotone");
    m.def("sweep", [](const mrc::SystemScenario& s, const std::vector<double>& x, std::size_t n,
                      const std::vector<double>& grid) {
        // Columns: x_n, p_tx, p_1..p_N, p_sum.
        const auto rows = mrc::sweep(s, to_loads(x), n, grid);
        Eigen::MatrixXd table(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(s.size() + 3));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto i = static_cast<Eigen::Index>(r);
            table(i, 0) = rows[r].x;
            table(i, 1) = rows[r].report.p_tx;
            for (std::size_t k = 0; k < s.size(); ++k) table(i, static_cast<Eigen::Index>(k + 2)) = rows[r].report.p[k];
            table(i, table.cols() - 1) = rows[r].report.p_sum;
        }
        return table;
    }, py::arg("scenario"), py::arg("loads"), py::arg("n"), py::arg("grid"));

    py::class_<mrc::ReceiverWindow>(m, "ReceiverWindow")
        .def_readonly("alpha", &mrc::ReceiverWindow::alpha)
        .def_readonly("c1", &mrc::ReceiverWindow::c1)
        .def_readonly("c2", &mrc::ReceiverWindow::c2)
        .def_readonly("x_lower", &mrc::ReceiverWindow::x_lower)
        .def_readonly("x_upper", &mrc::ReceiverWindow::x_upper);

    py::class_<mrc::FeasibilityVerdict>(m, "FeasibilityVerdict")
        .def_readonly("z", &mrc::FeasibilityVerdict::z)
        .def_readonly("receivers", &mrc::FeasibilityVerdict::receivers)
        .def_readonly("c3", &mrc::FeasibilityVerdict::c3)
        .def_property_readonly("feasible", &mrc::FeasibilityVerdict::feasible);

    m.def("check_feasibility", &mrc::check_feasibility, py::arg("scenario"), py::arg("z"));

    py::class_<mrc::OptimizationResult>(m, "OptimizationResult")
        .def_property_readonly("optimal", [](const mrc::OptimizationResult& r) {
            return r.status == mrc::OptimizationStatus::optimal;
        })
        .def_readonly("z_star", &mrc::OptimizationResult::z_star)
        .def_readonly("p_tx", &mrc::OptimizationResult::p_tx)
        .def_property_readonly("loads", [](const mrc::OptimizationResult& r) {
            const auto x = r.loads.values();
            return std::vector<double>(x.begin(), x.end());
        })
        .def_readonly("report", &mrc::OptimizationResult::report)
        .def_readonly("iterations", &mrc::OptimizationResult::iterations);

    m.def("minimize_ptx", &mrc::minimize_ptx, py::arg("scenario"), py::arg("dz") = 1e-3);

    py::class_<mrc::ProtocolConfig>(m, "ProtocolConfig")
        .def(py::init([](double dx, std::size_t k_max, std::uint64_t seed) {
                 return mrc::ProtocolConfig{dx, k_max, seed};
             }),
             py::arg("dx") = 1e-3, py::arg("k_max") = 100000, py::arg("seed") = 0)
        .def_readwrite("dx", &mrc::ProtocolConfig::dx)
        .def_readwrite("k_max", &mrc::ProtocolConfig::k_max)
        .def_readwrite("seed", &mrc::ProtocolConfig::seed);

    py::class_<mrc::ProtocolTrace>(m, "ProtocolTrace")
        .def_readonly("converged", &mrc::ProtocolTrace::converged)
        .def_readonly("feasible", &mrc::ProtocolTrace::feasible)
        .def_readonly("cycle_rounds", &mrc::ProtocolTrace::cycle_rounds)
        .def_readonly("final_report", &mrc::ProtocolTrace::final_report)
        .def_property_readonly("iterations", [](const mrc::ProtocolTrace& t) { return t.records.size(); })
        .def_property_readonly("final_loads", [](const mrc::ProtocolTrace& t) {
            const auto x = t.final_loads.values();
            return std::vector<double>(x.begin(), x.end());
        })
        .def_property_readonly("cases", [](const mrc::ProtocolTrace& t) {
            std::vector<int> cases;
            cases.reserve(t.records.size());
            for (const auto& r : t.records) cases.push_back(static_cast<int>(r.update));
            return cases;
        });

    m.def("run_protocol", &mrc::run_protocol, py::arg("scenario"), py::arg("config"));
    m.def("audit_violations", [](const mrc::SystemScenario& s, const mrc::ProtocolTrace& t) {
        return mrc::audit_trace(s, t).violations();
    });

    py::class_<mrc::BatchSummary>(m, "BatchSummary")
        .def_readonly("trials", &mrc::BatchSummary::trials)
        .def_readonly("feasible", &mrc::BatchSummary::feasible)
        .def_readonly("infeasible", &mrc::BatchSummary::infeasible)
        .def_readonly("non_converged", &mrc::BatchSummary::non_converged)
        .def_readonly("mean_p_tx", &mrc::BatchSummary::mean_p_tx);

    m.def("batch_run", [](const mrc::SystemScenario& s, const mrc::ProtocolConfig& c, std::size_t trials,
                          bool until_feasible) {
        mrc::BatchOptions options;
        options.until_feasible = until_feasible;
        py::gil_scoped_release release;
        return mrc::batch_run(s, c, trials, options);
    }, py::arg("scenario"), py::arg("config"), py::arg("trials"), py::arg("until_feasible") = false);

    m.def("verify", [](const mrc::SystemScenario& s, std::size_t trials, std::uint64_t seed) {
        mrc::VerifyOptions options;
        options.seed = seed;
        return mrc::verify_scenario(s, trials, options).to_json();
    }, py::arg("scenario"), py::arg("trials") = 1000, py::arg("seed") = 0, "Property report as a JSON string");
}
