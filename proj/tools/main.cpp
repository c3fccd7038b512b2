#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chiralforce/errors.hpp"
#include "chiralforce/sweep.hpp"

namespace cf = chiralforce;

namespace {

enum Exit { Ok = 0, Usage = 1, Physics = 2, Numerics = 3 };

unsigned threads_from_env()
{
    const char* env = std::getenv("CHIRALFORCE_THREADS");
    if (env == nullptr || *env == '\0')
        return 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1)
        throw cf::DomainError("CHIRALFORCE_THREADS must be a positive integer");
    return static_cast<unsigned>(n);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Axial force of guided nanofiber light on a two-level atom", "chiralforce"};
    app.set_version_flag("--version", std::string(cf::version()));
    app.set_config("--config", "", "Flat key=value file; keys are the long option names");
    app.require_subcommand(1);

    double radius_nm = 350, wavelength_nm = 780, n1 = 1.4537, n2 = 1.0;
    std::vector<std::string> mode_labels;
    std::string pol = "x", dipole = "sigma+", format = "csv", out_path;
    double power_pW = 1, detuning_MHz = 0, gamma0_MHz = 6.065, distance_nm = 20;
    std::optional<double> rmin_nm, rmax_nm;
    int points = 20;

    app.add_option("--radius-nm", radius_nm, "Fiber radius a")->capture_default_str();
    app.add_option("--wavelength-nm", wavelength_nm, "Transition wavelength")->capture_default_str();
    app.add_option("--n1", n1, "Core index")->capture_default_str();
    app.add_option("--n2", n2, "Cladding index")->capture_default_str();
    app.add_option("--mode", mode_labels, "Drive mode, repeatable (default HE11, TM01, HE21)");
    app.add_option("--pol", pol, "Quasi-linear polarization of HE/EH drives")
        ->check(CLI::IsMember({"x", "y"}))
        ->capture_default_str();
    app.add_option("--power-pW", power_pW, "Drive power")->capture_default_str();
    app.add_option("--detuning-MHz", detuning_MHz, "Detuning (omega_L - omega0) / 2pi")->capture_default_str();
    app.add_option("--gamma0-MHz", gamma0_MHz, "Free-space linewidth / 2pi")->capture_default_str();
    app.add_option("--dipole", dipole, "Dipole orientation")
        ->check(CLI::IsMember({"sigma+", "sigma-", "linear-x"}))
        ->capture_default_str();
    app.add_option("--rmin-nm", rmin_nm, "Sweep start: r (radial-sweep) or a (radius-sweep)");
    app.add_option("--rmax-nm", rmax_nm, "Sweep end");
    app.add_option("--points", points, "Grid points, endpoints included")->capture_default_str();
    app.add_option("--distance-nm", distance_nm, "r - a in radius sweeps")->capture_default_str();
    app.add_option("--out", out_path, "Output file (default stdout)");
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* modes = app.add_subcommand("modes", "List guided modes at the transition wavelength")->fallthrough();
    auto* radial = app.add_subcommand("radial-sweep", "Force versus atom position at fixed a")->fallthrough();
    auto* radius = app.add_subcommand("radius-sweep", "Force versus fiber radius at fixed r - a")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        cf::SweepParameters p;
        p.radius = radius_nm * 1e-9;
        p.wavelength = wavelength_nm * 1e-9;
        p.n1 = n1;
        p.n2 = n2;
        for (const auto& label : mode_labels)
            p.modes.push_back(cf::parse_mode_kind(label));
        p.polarization = pol[0];
        p.power = power_pW * 1e-12;
        p.detuning = 2.0 * cf::phys::pi * detuning_MHz * 1e6;
        p.gamma0 = 2.0 * cf::phys::pi * gamma0_MHz * 1e6;
        p.dipole = cf::parse_dipole(dipole);
        p.distance = distance_nm * 1e-9;
        if (rmin_nm)
            p.grid_min = *rmin_nm * 1e-9;
        if (rmax_nm)
            p.grid_max = *rmax_nm * 1e-9;
        p.points = points;
        p.rates.threads = threads_from_env();

        cf::Table table;
        if (modes->parsed())
            table = cf::list_modes(p);
        else if (radial->parsed())
            table = cf::run_radial_sweep(p);
        else
            table = cf::run_radius_sweep(p);
        const std::string text = format == "json" ? cf::format_json(table) : cf::format_csv(table);

        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << text;
            if (!out) {
                std::cerr << "error: cannot write " << out_path << '\n';
                return Usage;
            }
        }
        return Ok;
    } catch (const cf::DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    } catch (const cf::PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << '\n';
        return Physics;
    } catch (const cf::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << '\n';
        return Numerics;
    } catch (const cf::OverflowError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return Numerics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Usage;
    }
}
