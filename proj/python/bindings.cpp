#include "hole_energy/energy.hpp"
#include "hole_energy/errors.hpp"
#include "hole_energy/geometry.hpp"
#include "hole_energy/montecarlo.hpp"
#include "hole_energy/potential.hpp"
#include "hole_energy/radial_solver.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>

namespace py = pybind11;
using namespace hole;

namespace {

py::tuple samples_of(const RadialPotential& u) {
    py::list t, v, q;
    for (const auto& p : u.pieces())
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            t.append(p.t[i]);
            v.append(p.value[i]);
            q.append(p.flux[i]);
        }
    return py::make_tuple(t, v, q);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minimal hole energies and SU(2) hole probabilities";

    static py::exception<Error> error_type(m, "HoleEnergyError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object cls = error_type;
            py::object err = cls(std::string(to_string(e.kind())) + ": " + e.what());
            err.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type.ptr(), err.ptr());
        }
    });

    py::class_<ChartMetric>(m, "ChartMetric")
        .def_static("flat", &ChartMetric::flat, py::arg("alpha"), py::arg("extent") = 10.0)
        .def_static("fubini_study", &ChartMetric::fubini_study, py::arg("extent") = 10.0)
        .def_static("radial_polynomial", &ChartMetric::radial_polynomial, py::arg("coefficients"), py::arg("extent"))
        .def_property_readonly("extent", &ChartMetric::extent)
        .def_property_readonly("center_density", &ChartMetric::center_density)
        .def("density", &ChartMetric::density, py::arg("z"))
        .def("radial_density", &ChartMetric::radial_density, py::arg("t"))
        .def("disc_mass", &ChartMetric::disc_mass, py::arg("t"));

    py::class_<RadialPotential>(m, "RadialPotential")
        .def_property_readonly("hole_radius", &RadialPotential::hole_radius)
        .def_property_readonly("free_radius", &RadialPotential::free_radius)
        .def_property_readonly("gamma", &RadialPotential::gamma)
        .def_property_readonly("boundary_charge", &RadialPotential::boundary_charge)
        .def("value_at", &RadialPotential::value_at, py::arg("t"))
        .def("samples", &samples_of, "Node arrays (t, U, t U').");

    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("integral_against_omega", &EnergyReport::integral_against_omega)
        .def_readonly("integral_against_mu", &EnergyReport::integral_against_mu)
        .def_readonly("total", &EnergyReport::total);

    py::class_<MinEnergyResult>(m, "MinEnergyResult")
        .def_readonly("r_geodesic", &MinEnergyResult::geodesic_radius)
        .def_readonly("r_chart", &MinEnergyResult::chart_radius)
        .def_readonly("report", &MinEnergyResult::report)
        .def_readonly("gamma", &MinEnergyResult::gamma)
        .def_readonly("free_radius", &MinEnergyResult::free_radius)
        .def_readonly("boundary_charge", &MinEnergyResult::boundary_charge)
        .def_readonly("method", &MinEnergyResult::method)
        .def_property_readonly("min_energy", [](const MinEnergyResult& r) { return r.report.total; });

    py::class_<Psi2Report>(m, "Psi2Report")
        .def_property_readonly("R", [](const Psi2Report& r) { return r.construction.R; })
        .def_property_readonly("epsilon", [](const Psi2Report& r) { return r.construction.epsilon; })
        .def_readonly("omega_part", &Psi2Report::omega_part)
        .def_readonly("measure_part", &Psi2Report::measure_part)
        .def_readonly("value", &Psi2Report::value)
        .def_readonly("closed_form", &Psi2Report::closed_form)
        .def_readonly("chain_bound", &Psi2Report::chain_bound)
        .def_readonly("flat_value", &Psi2Report::flat_value);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("r_geodesic", &SweepRow::r_geodesic)
        .def_readonly("r_chart", &SweepRow::r_chart)
        .def_readonly("min_energy", &SweepRow::min_energy)
        .def_readonly("used_in_fit", &SweepRow::used_in_fit);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("fitted", &SweepResult::fitted)
        .def_readonly("exponent", &SweepResult::exponent)
        .def_readonly("c_fit", &SweepResult::c_fit)
        .def_readonly("c_formula", &SweepResult::c_formula)
        .def_readonly("monotone", &SweepResult::monotone);

    py::class_<HoleEstimate>(m, "HoleEstimate")
        .def_readonly("n", &HoleEstimate::n)
        .def_readonly("r_chart", &HoleEstimate::r_chart)
        .def_readonly("samples", &HoleEstimate::samples)
        .def_readonly("p_hat", &HoleEstimate::p_hat)
        .def_readonly("wilson_lo", &HoleEstimate::wilson_lo)
        .def_readonly("wilson_hi", &HoleEstimate::wilson_hi)
        .def_readonly("rate", &HoleEstimate::rate)
        .def_readonly("seed", &HoleEstimate::seed);

    m.def("chart_to_geodesic", &chart_to_geodesic, py::arg("rho"), py::arg("omega0"));
    m.def("geodesic_to_chart", &geodesic_to_chart, py::arg("r"), py::arg("omega0"));
    m.def(
        "sandwich_bounds",
        [](double r, const ChartMetric& omega0, double varrho) {
            const auto b = sandwich_bounds(r, omega0, varrho);
            return std::make_tuple(b.inner, b.outer);
        },
        py::arg("r"), py::arg("omega0"), py::arg("varrho"));

    m.def("flat_minimizer", &flat_minimizer, py::arg("alpha"), py::arg("r"), py::arg("intervals") = 4096);
    m.def(
        "radial_minimizer",
        [](const ChartMetric& metric, double r, int intervals) {
            return radial_minimizer(RadialWeight(metric), r, intervals);
        },
        py::arg("metric"), py::arg("r"), py::arg("intervals") = 4096);
    m.def(
        "energy", [](const RadialPotential& u, const ChartMetric& metric) { return energy(u, RadialWeight(metric)); },
        py::arg("u"), py::arg("metric"));
    m.def(
        "min_energy",
        [](const ChartMetric& omega, const ChartMetric& omega0, double r) { return min_energy(omega, omega0, r); },
        py::arg("omega"), py::arg("omega0"), py::arg("r"));
    m.def("solve_equa_R", &solve_equa_R, py::arg("epsilon"), py::arg("r"));
    m.def(
        "solve_kappa_R",
        [](double kappa, double r) {
            const auto k = solve_kappa_R(kappa, r);
            return std::make_tuple(k.R, k.below_two_r);
        },
        py::arg("kappa"), py::arg("r"));
    m.def("psi2_energy", &psi2_energy, py::arg("alpha"), py::arg("rho"), py::arg("r"), py::arg("intervals") = 4096);
    m.def("psi2_energy_eps", &psi2_energy_eps, py::arg("alpha"), py::arg("epsilon"), py::arg("r"),
          py::arg("intervals") = 4096);
    m.def(
        "scaling_sweep",
        [](const ChartMetric& omega, const ChartMetric& omega0, const std::vector<double>& radii, int jobs) {
            SweepOptions opts;
            opts.jobs = jobs;
            py::gil_scoped_release release;
            return scaling_sweep(omega, omega0, radii, opts);
        },
        py::arg("omega"), py::arg("omega0"), py::arg("radii"), py::arg("jobs") = 0);
    m.def("count_zeros_in_disc", &count_zeros_in_disc, py::arg("coefficients"), py::arg("rho"));
    m.def(
        "hole_probability",
        [](int n, double rho, std::size_t samples, std::uint64_t seed, int jobs) {
            const auto spec = EnsembleSpec::su2(n, seed, samples);
            py::gil_scoped_release release;
            return hole_probability_chart(spec, rho, jobs);
        },
        py::arg("n"), py::arg("rho"), py::arg("samples") = 10000, py::arg("seed") = 1, py::arg("jobs") = 0);
}
