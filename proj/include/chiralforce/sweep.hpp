#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "chiralforce/constants.hpp"
#include "chiralforce/coupling.hpp"
#include "chiralforce/waveguide.hpp"

namespace chiralforce {

/// Library version string, reported in every output header.
const char* version();

enum class DipoleChoice { SigmaPlus, SigmaMinus, LinearX };

/// "sigma+", "sigma-", "linear-x"
DipoleChoice parse_dipole(std::string_view text);
std::string dipole_label(DipoleChoice d);
Vec3c dipole_vector(DipoleChoice d);

/// Parameters shared by all scenarios, SI units throughout.
struct SweepParameters {
    double radius = 350e-9;       // fiber radius for radial sweeps and mode lists, m
    double wavelength = 780e-9;   // atomic transition wavelength, m
    double n1 = 1.4537;
    double n2 = 1.0;
    std::vector<ModeKind> modes;  // drive modes, in output order
    char polarization = 'x';      // 'x' or 'y' for HE/EH drives
    double power = 1e-12;         // W
    double detuning = 0.0;        // omega_L - omega0, rad/s
    double gamma0 = 2.0 * phys::pi * 6.065e6;  // free-space linewidth, rad/s
    DipoleChoice dipole = DipoleChoice::SigmaPlus;
    double distance = 20e-9;      // r - a in radius sweeps, m
    std::optional<double> grid_min, grid_max;  // r (radial) or a (radius), m
    int points = 20;
    RateOptions rates;
};

/// Default drive modes when none are requested.
std::vector<ModeKind> default_drive_modes();

/// A table cell: absent (mode below cutoff), a number, or a text value.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::pair<std::string, Cell>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Guided modes at the transition wavelength with beta, beta/k, q, beta' and cutoff radius.
Table list_modes(const SweepParameters& params);

/// Force pair, asymmetry and rates at each atom radius r for every drive mode.
/// Throws PhysicsError if a drive mode is not guided or the grid reaches into the fiber.
Table run_radial_sweep(const SweepParameters& params);

/// Force pair and asymmetry at fixed r - a for each fiber radius; modes below
/// cutoff give absent cells and their cutoff radii are listed in the metadata.
Table run_radius_sweep(const SweepParameters& params);

/// 9 significant digits, shortest exponent form of printf %.9g.
std::string format_number(double v);

/// '#'-prefixed "key: value" metadata lines, a header row, then data rows.
/// Absent cells print as NA.
std::string format_csv(const Table& table);

/// {"metadata": {...}, "columns": [...], "rows": [[...], ...]} with the same
/// 9-digit numbers; absent cells are null.
std::string format_json(const Table& table);

}  // namespace chiralforce
