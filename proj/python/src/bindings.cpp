#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flp/acceptance.hpp"
#include "flp/bundled.hpp"
#include "flp/io.hpp"
#include "flp/periodic.hpp"
#include "flp/scenarios.hpp"

namespace py = pybind11;
using namespace flp;

namespace {

py::tuple orbit_samples(const std::string& spec_text, double x0, double y0, bool backward, std::size_t budget,
                        std::size_t per_segment) {
    const SystemSpec spec = parse_spec(spec_text);
    const auto [sys, tf] = normalize_to_y_axis(spec.raw);
    OrbitOptions o;
    o.budget = budget;
    o.backward = backward;
    const Orbit orb = filippov_orbit(sys, tf.to_axis_frame({x0, y0}), o);
    py::list rows;
    for (const auto& s : sample_orbit(sys, orb, per_segment)) {
        const Vec2 z = tf.to_raw_frame(s.z);
        rows.append(py::make_tuple(s.t, z.x, z.y, std::string(to_string(s.kind))));
    }
    return py::make_tuple(rows, std::string(to_string(orb.terminal.kind)));
}

py::list displacement_rows(const std::string& spec_text, const std::vector<double>& ys) {
    const SystemSpec spec = parse_spec(spec_text);
    const HalfMapContext ctx = HalfMapContext::make(to_canonical(normalize_to_y_axis(spec.raw).first).params);
    auto value = [](auto&& f) -> py::object {
        try {
            return py::float_(f());
        } catch (const Error&) {
            return py::none();
        }
    };
    py::list rows;
    for (double y : ys) {
        rows.append(py::make_tuple(y, value([&] { return P_R(y, ctx); }), value([&] { return P_L_inv(y, ctx); }),
                                   value([&] { return displacement(y, ctx); })));
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Planar piecewise-linear Filippov systems";
    m.attr("__version__") = std::string(kToolVersion);
    m.attr("DEFAULT_SEED") = kDefaultSeed;

    static py::exception<Error> exc(m, "FilippovError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::handle(exc)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(exc.ptr(), inst.ptr());
        }
    });

    m.def("normalize_spec", [](const std::string& text) { return serialize_spec(parse_spec(text)); },
          "Parse and re-serialize a spec; raises FilippovError(MalformedInput) on bad input.");
    m.def("classification_report", [](const std::string& text) { return classification_report(parse_spec(text)); });
    m.def("canonical_report", [](const std::string& text) { return canonical_report(parse_spec(text)); });
    m.def("analysis_report", [](const std::string& text, std::uint64_t seed) { return analysis_report(parse_spec(text), seed); },
          py::arg("spec"), py::arg("seed") = kDefaultSeed);
    m.def("orbit_samples", &orbit_samples, py::arg("spec"), py::arg("x0"), py::arg("y0"), py::arg("backward") = false,
          py::arg("budget") = 200, py::arg("per_segment") = 64);
    m.def("displacement_rows", &displacement_rows, py::arg("spec"), py::arg("ys"));

    m.def("bundled_names", [] {
        std::vector<std::string> out;
        for (const auto& s : bundled_examples()) out.push_back(s.name);
        return out;
    });
    m.def("bundled_spec", [](const std::string& name) {
        const auto s = bundled_example(name);
        if (!s) throw py::key_error(name);
        return serialize_spec(*s);
    });

    m.def("t_star", &t_star);
    m.def("beta0", &beta0);
    m.def("solve_rho_c", &solve_rho_c, py::arg("alpha"));
    m.def("solve_eta_c", &solve_eta_c, py::arg("gamma1"));

    m.def(
        "run_criterion",
        [](int id, std::uint64_t seed, std::size_t sweep_systems) {
            AcceptanceOptions o = default_acceptance_options();
            o.seed = seed;
            o.sweep_systems = sweep_systems;
            CriterionResult r;
            {
                py::gil_scoped_release release;
                r = run_criterion(id, o);
            }
            return py::make_tuple(r.id, r.name, r.pass, r.detail);
        },
        py::arg("id"), py::arg("seed") = kDefaultSeed, py::arg("sweep_systems") = 10000);
}
