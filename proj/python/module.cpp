#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hermcalc/coeffs.hpp"
#include "hermcalc/errors.hpp"
#include "hermcalc/experiments.hpp"
#include "hermcalc/hermite_eval.hpp"
#include "hermcalc/ito.hpp"
#include "hermcalc/levy.hpp"
#include "hermcalc/operators.hpp"
#include "hermcalc/paths.hpp"
#include "hermcalc/rng.hpp"

namespace py = pybind11;
using namespace hermcalc;

namespace {

// one-path probe of the jump-SPDE identities, handy from notebooks/tests
py::dict levy_identity_probe(const std::string& preset, int base_level, std::uint64_t seed,
                             int path, int N_big, int N_eval, double p) {
    LevyModel model = levy_preset(preset);
    model.base_steps = 1 << base_level;
    RngStream rng(seed, stream_id(StreamKind::LevyIdentity, base_level, path));
    TranslationCache cache(model.phi, N_big);
    CoefficientFunctions cf(model, cache);
    const LevySimResult sim = simulate_fd_sde(model, rng, cf);
    const SpdeReport spde = spde_residual(model, sim, cache, cf, p, N_eval);
    const ItoReport ito =
        ito_residual(cache, sim.bundle.X, {sim.bundle.dec.bracket_of(0, 0)}, p, N_eval);
    double gap = 0.0;
    for (size_t k = 0; k < ito.residual.size(); ++k)
        gap = std::max(gap, std::abs(ito.residual[k] - spde.report.residual[k]));
    py::dict out;
    out["rearrangement_gap"] = spde.rearrangement_gap;
    out["spde_ito_gap"] = gap;
    out["residual_T"] = spde.report.residual_at_end();
    out["steps"] = static_cast<int>(sim.bundle.X.times.size()) - 1;
    out["retention_min"] =
        spde.report.retention.empty() ? 1.0 : spde.report.retention.back();
    return out;
}

}  // namespace

PYBIND11_MODULE(hermcalc_py, m) {
    m.doc() = "Hermite-basis calculus for distribution-valued paths: operators, "
              "stochastic integrals, change-of-variable residuals";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<NumericError>(m, "NumericError");

    // ------------------------------------------------ basis and coefficients
    m.def("basis_size", &basis_size, py::arg("d"), py::arg("N"),
          "number of multi-indices with |n| <= N in dimension d");
    m.def("hermite_values", py::overload_cast<double, int>(&hermite_values), py::arg("x"),
          py::arg("K"), "orthonormal Hermite function values h_0(x)..h_K(x)");

    py::class_<HermiteCoeffs>(m, "HermiteCoeffs")
        .def(py::init<int, int, std::string>(), py::arg("d"), py::arg("N"),
             py::arg("label") = "")
        .def_readwrite("d", &HermiteCoeffs::d)
        .def_readwrite("N", &HermiteCoeffs::N)
        .def_readwrite("c", &HermiteCoeffs::c)
        .def_readwrite("label", &HermiteCoeffs::label)
        .def("__repr__", [](const HermiteCoeffs& f) {
            return "<HermiteCoeffs d=" + std::to_string(f.d) + " N=" + std::to_string(f.N) +
                   " size=" + std::to_string(f.c.size()) + ">";
        });

    m.def("delta_coeffs", &delta_coeffs, py::arg("x"), py::arg("d"), py::arg("N"),
          "point-evaluation functional truncated to cap N");
    m.def("pairing", &pairing, py::arg("f"), py::arg("g"), "coefficient-side L^2 pairing");
    m.def("norm_p", &norm_p, py::arg("f"), py::arg("p"),
          "weighted norm sqrt(sum (2|n|+d)^(2p) c_n^2)");
    m.def("recap", &recap, py::arg("f"), py::arg("N_new"), "re-truncate or zero-pad to a new cap");

    // ------------------------------------------------------------- operators
    m.def("apply_derivative", &apply_derivative, py::arg("f"), py::arg("axis"),
          "distributional derivative along an axis (cap grows by one)");
    m.def("apply_translation", &apply_translation, py::arg("f"), py::arg("x"),
          "translation by x at fixed cap");
    m.def(
        "derivative_matrix",
        [](int d, int axis, int N) { return derivative_matrix(d, axis, N).m; }, py::arg("d"),
        py::arg("axis"), py::arg("N"), "derivative operator as a dense matrix");
    m.def(
        "translation_matrix",
        [](const std::vector<double>& x, int N) { return translation_matrix(x, N).m; },
        py::arg("x"), py::arg("N"), "translation operator as a dense matrix");

    // ------------------------------------------------------------------- rng
    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("master_seed"),
             py::arg("stream_id"))
        .def("next_u64", &RngStream::next_u64)
        .def("uniform01", &RngStream::uniform01)
        .def("gaussian", &RngStream::gaussian)
        .def("exponential", &RngStream::exponential);

    // ------------------------------------------------------- paths and Ito
    py::class_<JumpRecord>(m, "JumpRecord")
        .def_readonly("index", &JumpRecord::index)
        .def_readonly("left", &JumpRecord::left)
        .def_readonly("jump", &JumpRecord::jump);

    py::class_<RcllPath>(m, "RcllPath")
        .def_readonly("d", &RcllPath::d)
        .def_readonly("times", &RcllPath::times)
        .def_readonly("values", &RcllPath::values)
        .def_readonly("jumps", &RcllPath::jumps);

    py::class_<SemimartingaleDecomposition>(m, "SemimartingaleDecomposition")
        .def_readonly("M", &SemimartingaleDecomposition::M)
        .def_readonly("A", &SemimartingaleDecomposition::A)
        .def_readonly("bracket", &SemimartingaleDecomposition::bracket);

    py::class_<PathBundle>(m, "PathBundle")
        .def_readonly("X", &PathBundle::X)
        .def_readonly("dec", &PathBundle::dec);

    m.def("uniform_grid", &uniform_grid, py::arg("T"), py::arg("steps"));
    m.def("simulate_brownian", &simulate_brownian, py::arg("d"), py::arg("grid"), py::arg("rng"));

    py::class_<TranslationCache>(m, "TranslationCache")
        .def(py::init<HermiteCoeffs, int>(), py::arg("phi"), py::arg("N_big"))
        .def("size", &TranslationCache::size);

    py::class_<ItoReport>(m, "ItoReport")
        .def_readonly("times", &ItoReport::times)
        .def_readonly("residual", &ItoReport::residual)
        .def_readonly("first_order", &ItoReport::first_order)
        .def_readonly("second_order", &ItoReport::second_order)
        .def_readonly("jump_term", &ItoReport::jump_term)
        .def_readonly("retention", &ItoReport::retention)
        .def("max_residual", &ItoReport::max_residual)
        .def("residual_at_end", &ItoReport::residual_at_end);

    m.def("ito_residual", &ito_residual, py::arg("cache"), py::arg("X"), py::arg("qv_cont"),
          py::arg("p"), py::arg("N_eval"), py::arg("retention_floor") = 0.999,
          "residual of the translated-state change-of-variable identity on a path");

    // ------------------------------------------------------------------ levy
    m.def("levy_preset_names", &levy_preset_names);
    m.def("levy_identity_probe", &levy_identity_probe, py::arg("preset") = "default",
          py::arg("base_level") = 7, py::arg("seed") = 20260814ull, py::arg("path") = 0,
          py::arg("N_big") = 34, py::arg("N_eval") = 18, py::arg("p") = 1.0,
          "simulate one jump-SPDE path and report the identity gaps");

    // --------------------------------------------------------- orchestration
    m.def("run_config", &run_config, py::arg("config_path"),
          "run an experiment config; returns the CLI exit status (0 = all PASS)");
    m.def("summarize_dir", &summarize_dir, py::arg("dir"));
    m.def("list_presets_text", &list_presets_text);
}
