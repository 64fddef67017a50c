#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "edl/cli.hpp"
#include "edl/dynamics.hpp"
#include "edl/equilibrium.hpp"
#include "edl/infodyn.hpp"
#include "edl/integrate.hpp"
#include "edl/output.hpp"
#include "edl/presets.hpp"
#include "edl/scenario.hpp"
#include "edl/sweep.hpp"

namespace py = pybind11;

namespace {

py::dict trajectory_dict(const edl::Trajectory& t) {
    std::vector<double> H, Q, M, A, S;
    for (std::size_t i = 0; i < t.size(); ++i) {
        H.push_back(t.states[i].H);
        Q.push_back(t.states[i].Q);
        M.push_back(t.states[i].M);
        A.push_back(t.signals[i].A);
        S.push_back(t.signals[i].S);
    }
    py::dict d;
    d["t"] = t.times;
    d["H"] = H;
    d["Q"] = Q;
    d["M"] = M;
    d["A"] = A;
    d["S"] = S;
    d["clamp_events"] = t.clamp_events;
    return d;
}

edl::Trajectory trajectory_from(const py::dict& d) {
    edl::Trajectory t;
    t.times = d["t"].cast<std::vector<double>>();
    const auto H = d["H"].cast<std::vector<double>>();
    const auto Q = d["Q"].cast<std::vector<double>>();
    const auto M = d["M"].cast<std::vector<double>>();
    for (std::size_t i = 0; i < t.times.size(); ++i) t.states.push_back({H.at(i), Q.at(i), M.at(i)});
    return t;
}

}  // namespace

PYBIND11_MODULE(_edl, m) {
    m.doc() = "Coupled human cognition / data quality / model capability dynamics";
    m.attr("__version__") = EDL_VERSION_STRING;

    py::register_exception<edl::Error>(m, "Error");
    py::register_exception<edl::ValidationError>(m, "ValidationError", m.attr("Error"));
    py::register_exception<edl::SingularEquilibriumError>(m, "SingularEquilibriumError", m.attr("Error"));
    py::register_exception<edl::NumericalError>(m, "NumericalError", m.attr("Error"));

    py::class_<edl::StateVec>(m, "StateVec")
        .def(py::init<>())
        .def(py::init([](double H, double Q, double M) { return edl::StateVec{H, Q, M}; }), py::arg("H"),
             py::arg("Q"), py::arg("M"))
        .def_readwrite("H", &edl::StateVec::H)
        .def_readwrite("Q", &edl::StateVec::Q)
        .def_readwrite("M", &edl::StateVec::M)
        .def("as_tuple", [](const edl::StateVec& x) { return py::make_tuple(x.H, x.Q, x.M); })
        .def("__eq__", [](const edl::StateVec& a, const edl::StateVec& b) { return a == b; })
        .def("__repr__", [](const edl::StateVec& x) {
            return "StateVec(H=" + edl::io::format_real(x.H) + ", Q=" + edl::io::format_real(x.Q) +
                   ", M=" + edl::io::format_real(x.M) + ")";
        });

    py::class_<edl::SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("a", &edl::SystemParams::a)
        .def_readwrite("b", &edl::SystemParams::b)
        .def_readwrite("c", &edl::SystemParams::c)
        .def_readwrite("d", &edl::SystemParams::d)
        .def_readwrite("e", &edl::SystemParams::e)
        .def_readwrite("f", &edl::SystemParams::f)
        .def_readwrite("r_H", &edl::SystemParams::r_H)
        .def_readwrite("r_Q", &edl::SystemParams::r_Q)
        .def_readwrite("r_M", &edl::SystemParams::r_M);

    py::class_<edl::ControlParams>(m, "ControlParams")
        .def(py::init<>())
        .def(py::init([](double alpha, double beta, double u) { return edl::ControlParams{alpha, beta, u}; }),
             py::arg("alpha"), py::arg("beta"), py::arg("u"))
        .def_readwrite("alpha", &edl::ControlParams::alpha)
        .def_readwrite("beta", &edl::ControlParams::beta)
        .def_readwrite("u", &edl::ControlParams::u);

    py::enum_<edl::Method>(m, "Method").value("Euler", edl::Method::Euler).value("RK4", edl::Method::RK4);
    py::enum_<edl::Stability>(m, "Stability")
        .value("StableNode", edl::Stability::StableNode)
        .value("StableSpiralMixed", edl::Stability::StableSpiralMixed)
        .value("Unstable", edl::Stability::Unstable)
        .value("Marginal", edl::Stability::Marginal);
    py::enum_<edl::Regime>(m, "Regime")
        .value("Enhancement", edl::Regime::Enhancement)
        .value("Equilibrium", edl::Regime::Equilibrium)
        .value("Degeneration", edl::Regime::Degeneration)
        .value("Unclassified", edl::Regime::Unclassified);

    py::class_<edl::IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("method", &edl::IntegratorConfig::method)
        .def_readwrite("h", &edl::IntegratorConfig::h)
        .def_readwrite("T", &edl::IntegratorConfig::T)
        .def_readwrite("clamp_nonneg", &edl::IntegratorConfig::clamp_nonneg)
        .def_readwrite("max_steps", &edl::IntegratorConfig::max_steps)
        .def_readwrite("stride", &edl::IntegratorConfig::stride);

    m.def("validate", [](const edl::SystemParams& p, const edl::ControlParams& c) {
        std::vector<std::string> out;
        for (const auto& v : edl::validate(p, c).violations()) out.push_back(v.message());
        return out;
    }, "List of invariant violations (empty when valid)");
    m.def("control_signals", [](const edl::StateVec& x, const edl::ControlParams& c) {
        const auto s = edl::control_signals(x, c);
        return py::make_tuple(s.A, s.S);
    });
    m.def("derivative", &edl::derivative);
    m.def("euler_step", &edl::euler_step, py::arg("x"), py::arg("params"), py::arg("control"), py::arg("h"),
          py::arg("clamp") = true);
    m.def("rk4_step", &edl::rk4_step, py::arg("x"), py::arg("params"), py::arg("control"), py::arg("h"),
          py::arg("clamp") = true);
    m.def("integrate", [](const edl::StateVec& init, const edl::SystemParams& p, const edl::ControlParams& c,
                          const edl::IntegratorConfig& cfg) { return trajectory_dict(edl::integrate(init, p, c, cfg)); });

    m.def("fixed_point", &edl::fixed_point);
    m.def("jacobian", &edl::jacobian);
    m.def("eigenvalues", [](const edl::Mat3& J) {
        const auto ev = edl::eigenvalues(J);
        return std::vector<std::complex<double>>(ev.begin(), ev.end());
    });
    m.def("classify_stability", [](const std::vector<std::complex<double>>& ev) {
        if (ev.size() != 3) throw std::invalid_argument("need exactly 3 eigenvalues");
        return edl::classify_stability({ev[0], ev[1], ev[2]});
    });
    m.def("classify_regime", [](const py::dict& traj, const edl::SystemParams& p, const edl::ControlParams& c) {
        return edl::classify_regime(trajectory_from(traj), p, c).label;
    });

    m.def("sweep_u", [](const edl::SystemParams& p, double alpha, double beta, const std::vector<double>& grid,
                        bool simulated) {
        edl::SweepOptions opt;
        opt.mode = simulated ? edl::SweepMode::Simulated : edl::SweepMode::Analytic;
        const auto r = edl::sweep_u(p, alpha, beta, grid, opt);
        py::dict d;
        std::vector<py::tuple> steady;
        for (const auto& x : r.steady_states) steady.push_back(py::make_tuple(x.H, x.Q, x.M));
        d["u_grid"] = r.u_grid;
        d["steady_states"] = steady;
        d["max_re_lambda"] = r.max_re_lambda;
        d["stability"] = r.stability;
        d["regimes"] = r.regimes;
        d["u_c"] = r.threshold.u_c;
        d["transition_band"] = r.threshold.band;
        return d;
    }, py::arg("params"), py::arg("alpha"), py::arg("beta"), py::arg("u_grid"), py::arg("simulated") = false);
    m.def("detect_threshold", [](const std::vector<double>& u, const std::vector<double>& q, double band_fraction) {
        const auto r = edl::detect_threshold(u, q, band_fraction);
        return py::make_tuple(r.u_c, r.band);
    }, py::arg("u_grid"), py::arg("q_star"), py::arg("band_fraction") = 0.5);
    m.def("compare_interventions", [](const edl::SystemParams& p, const edl::ControlParams& c, double dr_H,
                                      double dr_Q, double dr_M) {
        const auto rep = edl::compare_interventions(p, c, {dr_H, dr_Q, dr_M});
        py::dict d;
        d["baseline"] = rep.baseline;
        for (const auto& o : rep.outcomes) d[py::str(o.channel)] = py::make_tuple(o.steady, o.delta);
        return d;
    }, py::arg("params"), py::arg("control"), py::arg("dr_H") = 0.0, py::arg("dr_Q") = 0.0, py::arg("dr_M") = 0.0);

    auto dist = [](const std::vector<double>& p) { return edl::info::Dist(p); };
    m.def("shannon_entropy", [dist](const std::vector<double>& p) { return edl::info::shannon_entropy(dist(p)); });
    m.def("kl_divergence", [dist](const std::vector<double>& p, const std::vector<double>& q, double smoothing) {
        return edl::info::kl_divergence(dist(p), dist(q), smoothing);
    }, py::arg("p"), py::arg("q"), py::arg("smoothing") = 1e-12);
    m.def("mutual_information", [](const std::vector<std::vector<double>>& joint) {
        edl::info::Joint j{joint.size(), {}};
        for (const auto& row : joint) {
            if (row.size() != joint.size()) throw std::invalid_argument("joint must be square");
            j.cells.insert(j.cells.end(), row.begin(), row.end());
        }
        return edl::info::mutual_information(j);
    });
    m.def("consecutive_mi", [dist](const std::vector<double>& prev, const std::vector<double>& next, double kappa) {
        edl::info::InfoConfig cfg;
        cfg.kappa = kappa;
        return edl::info::consecutive_mi(dist(prev), dist(next), cfg);
    }, py::arg("prev"), py::arg("next"), py::arg("kappa") = 0.5);
    m.def("run_generations", [](double u, int generations, std::size_t K, std::optional<double> lambda,
                                std::optional<double> tau, double epsilon_tail, double kappa) {
        edl::info::InfoConfig cfg;
        cfg.u = u;
        cfg.lambda = lambda;
        cfg.tau = tau;
        cfg.epsilon_tail = epsilon_tail;
        cfg.kappa = kappa;
        py::list rows;
        for (const auto& r : edl::info::run_generations(edl::info::initial_state(K), cfg, generations)) {
            py::dict d;
            d["gen"] = r.generation;
            d["H_human"] = r.entropy_human;
            d["H_model"] = r.entropy_model;
            d["kl_model_human"] = r.kl_model_human;
            d["kl_model_world"] = r.kl_model_world;
            d["tail_support"] = r.tail_support;
            d["mi_consecutive"] = r.mi_consecutive;
            rows.append(d);
        }
        return rows;
    }, py::arg("u") = 0.9, py::arg("generations") = 20, py::arg("K") = 64, py::arg("lambda_") = py::none(),
       py::arg("tau") = py::none(), py::arg("epsilon_tail") = 1e-4, py::arg("kappa") = 0.5);

    m.def("preset_names", [] {
        std::vector<std::string> out;
        for (const auto& p : edl::bundled_presets()) out.emplace_back(p.name);
        return out;
    });
    m.def("preset_text", [](const std::string& name) {
        const auto p = edl::find_preset(name);
        if (!p) throw edl::Error("unknown preset '" + name + "'");
        return std::string(p->text);
    });
    m.def("normalize_config", [](const std::string& text) { return edl::serialize_config(edl::parse_config(text)); },
          "Parse a scenario and return its canonical text form");
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = edl::cli::run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "Run a CLI command in-process; returns (exit_code, stdout, stderr)");
}
