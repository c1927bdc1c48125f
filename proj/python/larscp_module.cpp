#include "larscp/dataset.hpp"
#include "larscp/diagnostics.hpp"
#include "larscp/dimension.hpp"
#include "larscp/error.hpp"
#include "larscp/lars.hpp"
#include "larscp/report.hpp"
#include "larscp/stress.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace larscp;

namespace {

py::object as_python(const json& value) {
    return py::module_::import("json").attr("loads")(value.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "LARS paths with Cp selection, per-case Cp diagnostics, SIR and stress tests";

    static py::exception<Error> error_type(m, "LarsCpError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error_type, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](std::vector<std::string> names, Matrix X, Vector y, std::string response) {
                 return make_dataset(std::move(names), std::move(X), std::move(y),
                                     std::move(response));
             }),
             py::arg("predictor_names"), py::arg("X"), py::arg("y"), py::arg("response_name") = "y")
        .def_readonly("predictor_names", &Dataset::predictor_names)
        .def_readonly("X", &Dataset::X)
        .def_readonly("y", &Dataset::y)
        .def_readonly("response_name", &Dataset::response_name)
        .def_readonly("provenance", &Dataset::provenance)
        .def_property_readonly("n", &Dataset::rows)
        .def_property_readonly("m", &Dataset::cols);

    m.def("load_csv", [](const std::string& path, const std::string& response) {
        return load_csv(path, response);
    }, py::arg("path"), py::arg("response"));

    py::class_<FullModelInfo>(m, "FullModelInfo")
        .def_readonly("y_hat", &FullModelInfo::y_hat)
        .def_readonly("hat_diagonals", &FullModelInfo::hat_diagonals)
        .def_readonly("sigma_hat_sq", &FullModelInfo::sigma_hat_sq)
        .def_readonly("m", &FullModelInfo::m)
        .def_readonly("n", &FullModelInfo::n)
        .def_readonly("rank", &FullModelInfo::rank);

    py::class_<LarsStep>(m, "LarsStep")
        .def_readonly("step_index", &LarsStep::step_index)
        .def_readonly("entered", &LarsStep::entered)
        .def_readonly("dropped", &LarsStep::dropped)
        .def_readonly("active_set", &LarsStep::active_set)
        .def_readonly("coefficients_std", &LarsStep::coefficients_std)
        .def_readonly("coefficients_orig", &LarsStep::coefficients_orig)
        .def_readonly("intercept_orig", &LarsStep::intercept_orig)
        .def_readonly("mu_hat", &LarsStep::mu_hat)
        .def_readonly("max_abs_corr", &LarsStep::max_abs_corr)
        .def_readonly("step_length", &LarsStep::step_length)
        .def_readonly("subset_leverage", &LarsStep::subset_leverage)
        .def_readonly("cp", &LarsStep::cp)
        .def_readonly("df_surrogate", &LarsStep::df_surrogate);

    py::class_<LarsPath>(m, "LarsPath")
        .def_readonly("steps", &LarsPath::steps)
        .def_readonly("predictor_names", &LarsPath::predictor_names)
        .def_readonly("entry_order", &LarsPath::entry_order)
        .def_readonly("warnings", &LarsPath::warnings)
        .def_readonly("full_model", &LarsPath::full_model)
        .def_property_readonly("mode", [](const LarsPath& p) { return std::string(to_string(p.mode)); })
        .def("to_dict", [](const LarsPath& p) { return as_python(to_json(p)); });

    py::class_<SelectionResult>(m, "SelectionResult")
        .def_readonly("selected", &SelectionResult::selected)
        .def_readonly("coefficients", &SelectionResult::coefficients)
        .def_readonly("intercept", &SelectionResult::intercept)
        .def_readonly("criterion_value", &SelectionResult::criterion_value)
        .def_readonly("chosen_step", &SelectionResult::chosen_step);

    m.def("lars_path", [](const Dataset& d, const std::string& mode, std::optional<Index> max_steps) {
        return lars_path(d, parse_lars_mode(mode), max_steps);
    }, py::arg("dataset"), py::arg("mode") = "plain", py::arg("max_steps") = py::none());
    m.def("select_by_cp", &select_by_cp, py::arg("path"));
    m.def("full_model_info", [](const Dataset& d) { return full_model_info(d); }, py::arg("dataset"));
    m.def("cp_total", &cp_total, py::arg("mu_hat"), py::arg("df_surrogate"), py::arg("info"));
    m.def("case_cp", [](const LarsStep& step, const FullModelInfo& info) {
        return as_python(to_json(case_cp(step, info), info));
    }, py::arg("step"), py::arg("info"));

    m.def("simulate_cov", [](const Dataset& d, Index step_count, Index replicates, std::uint64_t seed,
                             double noise_sd, const std::string& generator,
                             std::optional<Vector> beta, double intercept) {
        CovSimulationConfig cfg;
        if (generator != "fixed-beta" && generator != "fitted-beta") {
            throw Error(ErrorKind::invalid_argument, "unknown generator '" + generator + "'");
        }
        cfg.generator = generator == "fixed-beta" ? NoiseGenerator::fixed_beta
                                                  : NoiseGenerator::fitted_beta;
        if (beta) cfg.beta = *beta;
        cfg.intercept = intercept;
        cfg.noise_sd = noise_sd;
        cfg.step_count = step_count;
        cfg.replicates = replicates;
        cfg.seed = seed;
        const CovSimulation sim = simulate_cov(d, cfg);
        py::dict out;
        out["estimates"] = sim.estimates;
        out["standard_errors"] = sim.standard_errors;
        out["used"] = sim.used;
        out["excluded"] = sim.excluded;
        out["rng_algorithm"] = sim.rng_algorithm;
        out["seed"] = sim.seed;
        return out;
    }, py::arg("dataset"), py::arg("step_count"), py::arg("replicates") = 1000,
       py::arg("seed") = 20040201, py::arg("noise_sd") = 1.0, py::arg("generator") = "fitted-beta",
       py::arg("beta") = py::none(), py::arg("intercept") = 0.0);

    m.def("sir", [](const Dataset& d, Index slices, double level) {
        return as_python(to_json(sir(d, slices, level), d.predictor_names));
    }, py::arg("dataset"), py::arg("slices") = 10, py::arg("level") = 0.05);
    m.def("chi_sq_upper_tail", &chi_sq_upper_tail, py::arg("statistic"), py::arg("df"));

    m.def("round_augment", &round_augment, py::arg("dataset"), py::arg("factor") = 2.2,
          py::arg("exclude") = std::vector<std::string>{}, py::arg("prefix") = "r");
    m.def("stress_round", [](const Dataset& d, double factor, const std::vector<std::string>& exclude) {
        return as_python(to_json(run_round_stress(d, factor, exclude)));
    }, py::arg("dataset"), py::arg("factor") = 2.2, py::arg("exclude") = std::vector<std::string>{});
    m.def("stress_scale", [](const Dataset& d, const std::vector<std::string>& exclusions) {
        return as_python(to_json(scale_order_audit(d, exclusions)));
    }, py::arg("dataset"), py::arg("quadratic_exclusions") = std::vector<std::string>{});
    m.def("stress_marginal", [](const Dataset& d, const std::string& first, const std::string& second,
                                double target_corr, Index replicates, std::uint64_t seed) {
        return as_python(to_json(marginal_shift_stress(d, first, second, target_corr, replicates, seed)));
    }, py::arg("dataset"), py::arg("first"), py::arg("second"), py::arg("target_corr"),
       py::arg("replicates") = 200, py::arg("seed") = 20040201);

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
