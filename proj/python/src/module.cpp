#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cmath>

#include "anthracnose/config.hpp"
#include "anthracnose/discrete.hpp"
#include "anthracnose/grid.hpp"
#include "anthracnose/pipeline.hpp"
#include "anthracnose/predictor.hpp"

namespace py = pybind11;
using namespace anthracnose;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict series_dict(const FilterSeries& s) {
    py::dict d;
    d["times"] = to_array(s.times);
    d["mean"] = to_array(s.mean);
    d["variance"] = to_array(s.variance);
    d["log_zeta"] = to_array(s.log_zeta);
    return d;
}

Scenario single(const ScenarioConfig& cfg) {
    cfg.validate();
    return simulate_scenario(cfg, CellSpec{0, cfg.sim.theta0, cfg.sim.v0, cfg.sim.rho0, cfg.sim.seed});
}

py::dict simulate(const ScenarioConfig& cfg) {
    const Scenario sc = single(cfg);
    py::dict d;
    d["times"] = to_array(sc.truth.times);
    d["theta"] = to_array(sc.truth.theta);
    d["v"] = to_array(sc.truth.v);
    d["rho"] = to_array(sc.truth.rho);
    d["X"] = to_array(sc.obs.x);
    d["Y"] = to_array(sc.obs.y);
    d["Xbar"] = to_array(sc.obs.xbar);
    d["Ybar"] = to_array(sc.obs.ybar);
    d["clamped_fraction"] = sc.truth.clamp.clamped_fraction();
    return d;
}

py::dict run(const ScenarioConfig& cfg, const std::string& method) {
    const Method m = parse_method(method);
    const Scenario sc = single(cfg);
    py::dict d = series_dict(run_method(sc, cfg, m));
    d["theta_true"] = to_array(sc.truth.theta);
    return d;
}

py::dict predict_at(const ScenarioConfig& cfg, double tau, double horizon) {
    if (horizon < 0.0) throw ValidationError("horizon", "must be >= 0");
    const Scenario sc = single(cfg);
    const auto it = std::lower_bound(sc.obs.times.begin(), sc.obs.times.end(), tau - 1e-9);
    if (it == sc.obs.times.end() || std::abs(*it - tau) > 1e-9)
        throw ValidationError("tau", "not an observation record time");
    const auto stop = static_cast<std::size_t>(it - sc.obs.times.begin());
    const Grid g = cfg.filter.grid.grid();
    const GridFilterCheckpoint cp = run_grid_filter_until(sc.obs, cfg.params, cfg.filter.grid, stop);
    const GridDensity out =
        predict(g, PredictionRequest{*it, horizon, cp.state}, cfg.sim.dt, cfg.params, cfg.filter.grid.step);
    py::dict d;
    d["x"] = to_array(g.nodes);
    d["posterior"] = to_array(normalize(g, cp.state.density).pi.values);
    d["predicted"] = to_array(out.values);
    return d;
}

py::list compare(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    const CompareSummary s = run_compare(cfg, out_dir);
    py::list rows;
    for (const auto& r : s.rows) {
        py::dict d;
        d["cell"] = r.cell.index;
        d["theta0"] = r.cell.theta0;
        d["v0"] = r.cell.v0;
        d["rho0"] = r.cell.rho0;
        d["seed"] = r.cell.seed;
        d["method"] = method_name(r.method);
        d["mae"] = r.error.mae;
        d["max_err"] = r.error.max_err;
        d["mae_vs_oracle"] = r.mae_vs_oracle ? py::cast(*r.mae_vs_oracle) : py::none();
        d["file"] = (out_dir / r.file).string();
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlinear filtering for the lumped anthracnose model.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
    py::register_exception<FilterCollapse>(m, "FilterCollapse", PyExc_ArithmeticError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("v_max", &ModelParams::v_max)
        .def_readwrite("epsilon", &ModelParams::epsilon)
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("kappa", &ModelParams::kappa)
        .def_readwrite("b1", &ModelParams::b1)
        .def_readwrite("b2", &ModelParams::b2)
        .def_readwrite("b3", &ModelParams::b3)
        .def_readwrite("c1", &ModelParams::c1)
        .def_readwrite("c2", &ModelParams::c2)
        .def_readwrite("c3", &ModelParams::c3)
        .def_readwrite("d1", &ModelParams::d1)
        .def_readwrite("d2", &ModelParams::d2)
        .def_readwrite("d3", &ModelParams::d3)
        .def_readwrite("omega1", &ModelParams::omega1)
        .def_readwrite("omega2", &ModelParams::omega2)
        .def_readwrite("phi1", &ModelParams::phi1)
        .def_readwrite("phi2", &ModelParams::phi2)
        .def_readwrite("delta1", &ModelParams::delta1)
        .def_readwrite("delta2", &ModelParams::delta2)
        .def_readwrite("delta3", &ModelParams::delta3)
        .def_readwrite("eta", &ModelParams::eta_value)
        .def_readwrite("p1", &ModelParams::p1_value)
        .def_readwrite("p2", &ModelParams::p2_value)
        .def("derive_from_scale", &ModelParams::derive_from_scale)
        .def("validate", &ModelParams::validate);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("theta0", &SimConfig::theta0)
        .def_readwrite("v0", &SimConfig::v0)
        .def_readwrite("rho0", &SimConfig::rho0)
        .def_readwrite("record_stride", &SimConfig::record_stride)
        .def_readwrite("vartheta", &SimConfig::vartheta);

    py::class_<GridFilterSettings>(m, "GridSettings")
        .def(py::init<>())
        .def_readwrite("x_min", &GridFilterSettings::x_min)
        .def_readwrite("x_max", &GridFilterSettings::x_max)
        .def_readwrite("dx", &GridFilterSettings::dx)
        .def_readwrite("prior_mean", &GridFilterSettings::prior_mean)
        .def_readwrite("prior_sd", &GridFilterSettings::prior_sd);

    py::class_<FilterConfig>(m, "FilterConfig")
        .def(py::init<>())
        .def_readwrite("grid", &FilterConfig::grid)
        .def_property(
            "methods",
            [](const FilterConfig& f) {
                std::vector<std::string> names;
                for (Method x : f.methods) names.push_back(method_name(x));
                return names;
            },
            [](FilterConfig& f, const std::vector<std::string>& names) {
                std::vector<Method> ms;
                for (const auto& n : names) ms.push_back(parse_method(n));
                f.methods = std::move(ms);
            })
        .def_property(
            "vartheta", [](const FilterConfig& f) { return f.scheme.vartheta; },
            [](FilterConfig& f, double v) { f.scheme.vartheta = v; })
        .def_property(
            "quad_order", [](const FilterConfig& f) { return f.scheme.quad_order; },
            [](FilterConfig& f, int n) { f.scheme.quad_order = n; })
        .def_readwrite("dtau", &FilterConfig::dtau)
        .def_readwrite("particles", &FilterConfig::particles)
        .def_readwrite("tau", &FilterConfig::tau)
        .def_readwrite("horizon", &FilterConfig::horizon);

    py::class_<ScenarioMatrix>(m, "ScenarioMatrix")
        .def(py::init<>())
        .def_readwrite("theta0", &ScenarioMatrix::theta0)
        .def_readwrite("v0", &ScenarioMatrix::v0)
        .def_readwrite("rho0", &ScenarioMatrix::rho0)
        .def("__len__", &ScenarioMatrix::size);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("params", &ScenarioConfig::params)
        .def_readwrite("sim", &ScenarioConfig::sim)
        .def_readwrite("filter", &ScenarioConfig::filter)
        .def_readwrite("matrix", &ScenarioConfig::matrix)
        .def_readwrite("threads", &ScenarioConfig::threads)
        .def("validate", &ScenarioConfig::validate);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_keys", &config_keys);

    m.def("simulate", &simulate, py::arg("config"),
          "Truth and observation paths of the scenario given by config.sim.");
    m.def("run_filter", &run, py::arg("config"), py::arg("method") = "zakai",
          "Posterior mean, variance and log normalizer; method is zakai, ks, discrete or oracle.");
    m.def("predict", &predict_at, py::arg("config"), py::arg("tau"), py::arg("horizon"),
          "Filtered density at tau and its prediction tau + horizon ahead.");
    m.def("compare", &compare, py::arg("config"), py::arg("out_dir"),
          "Runs every scenario cell and method, writing CSVs into out_dir. Returns the summary rows.");
}
