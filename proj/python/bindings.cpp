#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chiralforce/errors.hpp"
#include "chiralforce/force.hpp"
#include "chiralforce/sweep.hpp"
#include "chiralforce/waveguide.hpp"

namespace py = pybind11;
namespace cf = chiralforce;

namespace {

py::object cell(const cf::Cell& c)
{
    if (const double* v = std::get_if<double>(&c))
        return py::float_(*v);
    if (const auto* s = std::get_if<std::string>(&c))
        return py::str(*s);
    return py::none();
}

py::dict to_dict(const cf::Table& t)
{
    py::dict meta;
    for (const auto& [k, v] : t.metadata)
        meta[py::str(k)] = cell(v);
    py::list rows;
    for (const auto& row : t.rows) {
        py::list r;
        for (const auto& c : row)
            r.append(cell(c));
        rows.append(r);
    }
    py::dict d;
    d["metadata"] = meta;
    d["columns"] = t.columns;
    d["rows"] = rows;
    return d;
}

// Keyword names and units follow the command-line flags.
cf::SweepParameters params(double radius_nm, double wavelength_nm, double n1, double n2,
                           const std::vector<std::string>& modes, const std::string& pol, double power_pW,
                           double detuning_MHz, double gamma0_MHz, const std::string& dipole,
                           std::optional<double> rmin_nm, std::optional<double> rmax_nm, int points,
                           double distance_nm, unsigned threads)
{
    if (pol != "x" && pol != "y")
        throw cf::DomainError("pol must be 'x' or 'y'");
    cf::SweepParameters p;
    p.radius = radius_nm * 1e-9;
    p.wavelength = wavelength_nm * 1e-9;
    p.n1 = n1;
    p.n2 = n2;
    for (const auto& m : modes)
        p.modes.push_back(cf::parse_mode_kind(m));
    p.polarization = pol[0];
    p.power = power_pW * 1e-12;
    p.detuning = 2.0 * cf::phys::pi * detuning_MHz * 1e6;
    p.gamma0 = 2.0 * cf::phys::pi * gamma0_MHz * 1e6;
    p.dipole = cf::parse_dipole(dipole);
    if (rmin_nm)
        p.grid_min = *rmin_nm * 1e-9;
    if (rmax_nm)
        p.grid_max = *rmax_nm * 1e-9;
    p.points = points;
    p.distance = distance_nm * 1e-9;
    p.rates.threads = threads;
    return p;
}

template <class Run>
auto scenario(Run run)
{
    return [run](double radius_nm, double wavelength_nm, double n1, double n2, const std::vector<std::string>& modes,
                 const std::string& pol, double power_pW, double detuning_MHz, double gamma0_MHz,
                 const std::string& dipole, std::optional<double> rmin_nm, std::optional<double> rmax_nm, int points,
                 double distance_nm, unsigned threads, const std::string& format) -> py::object {
        const auto p = params(radius_nm, wavelength_nm, n1, n2, modes, pol, power_pW, detuning_MHz, gamma0_MHz,
                              dipole, rmin_nm, rmax_nm, points, distance_nm, threads);
        cf::Table t;
        {
            py::gil_scoped_release release;
            t = run(p);
        }
        if (format == "csv")
            return py::str(cf::format_csv(t));
        if (format == "json")
            return py::str(cf::format_json(t));
        if (format == "dict")
            return to_dict(t);
        throw cf::DomainError("format must be 'dict', 'csv' or 'json'");
    };
}

auto scenario_args()
{
    return std::make_tuple(py::kw_only(), py::arg("radius_nm") = 350.0, py::arg("wavelength_nm") = 780.0,
                           py::arg("n1") = 1.4537, py::arg("n2") = 1.0,
                           py::arg("modes") = std::vector<std::string>{}, py::arg("pol") = "x",
                           py::arg("power_pW") = 1.0, py::arg("detuning_MHz") = 0.0, py::arg("gamma0_MHz") = 6.065,
                           py::arg("dipole") = "sigma+", py::arg("rmin_nm") = py::none(),
                           py::arg("rmax_nm") = py::none(), py::arg("points") = 20, py::arg("distance_nm") = 20.0,
                           py::arg("threads") = 0u, py::arg("format") = "dict");
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Axial force of guided nanofiber light on a two-level atom";
    m.attr("__version__") = cf::version();

    py::register_exception<cf::DomainError>(m, "DomainError", PyExc_ValueError);
    auto physics = py::register_exception<cf::PhysicsError>(m, "PhysicsError", PyExc_RuntimeError);
    py::register_exception<cf::NotGuidedError>(m, "NotGuidedError", physics.ptr());
    py::register_exception<cf::ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

    std::apply([&](auto... a) { m.def("modes", scenario(cf::list_modes), a...,
                                      "Guided modes at the transition wavelength."); }, scenario_args());
    std::apply([&](auto... a) { m.def("radial_sweep", scenario(cf::run_radial_sweep), a...,
                                      "Forces, asymmetry and rates versus atom radius."); }, scenario_args());
    std::apply([&](auto... a) { m.def("radius_sweep", scenario(cf::run_radius_sweep), a...,
                                      "Forces and asymmetry versus fiber radius at fixed r - a."); }, scenario_args());

    m.def("cutoff_radius_nm", [](const std::string& mode, double wavelength_nm, double n1, double n2) {
        return cf::cutoff_radius(cf::parse_mode_kind(mode), wavelength_nm * 1e-9, n1, n2) * 1e9;
    }, py::arg("mode"), py::arg("wavelength_nm") = 780.0, py::arg("n1") = 1.4537, py::arg("n2") = 1.0);

    m.def("eta_infinity", &cf::eta_infinity, py::arg("beta"), py::arg("q"),
          "Far-field asymmetry limit 2 beta q / (beta^2 + q^2).");
    m.def("eta_infinity_bound", &cf::eta_infinity_bound, py::arg("n1"), py::arg("n2"));

    m.def("steady_state", [](std::complex<double> omega, double delta, double gamma) {
        const auto s = cf::steady_state(omega, delta, gamma);
        return py::make_tuple(s.rho_ee, s.rho_eg);
    }, py::arg("rabi"), py::arg("detuning"), py::arg("gamma"),
       "(rho_ee, rho_eg) of the driven two-level atom; rates in rad/s.");
}
