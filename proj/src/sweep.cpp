#include "chiralforce/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chiralforce/detail/parallel.hpp"
#include "chiralforce/errors.hpp"
#include "chiralforce/force.hpp"

#ifndef CHIRALFORCE_VERSION
#define CHIRALFORCE_VERSION "unknown"
#endif

namespace chiralforce {

namespace {

constexpr double kNm = 1e-9;
constexpr double kPw = 1e-12;
constexpr double kMHz = 2.0 * phys::pi * 1e6;  // rad/s per MHz of omega / 2 pi

std::string join_modes(const std::vector<ModeKind>& modes)
{
    std::string s;
    for (const auto& m : modes)
        s += (s.empty() ? "" : ",") + m.label();
    return s;
}

void validate(const SweepParameters& p)
{
    if (!(p.radius > 0.0) || !(p.wavelength > 0.0))
        throw DomainError("fiber radius and wavelength must be positive");
    if (!(p.n2 >= 1.0) || !(p.n1 >= p.n2))
        throw DomainError("indices must satisfy n1 >= n2 >= 1");
    if (p.polarization != 'x' && p.polarization != 'y')
        throw DomainError("polarization must be x or y");
    if (!(p.power >= 0.0))
        throw DomainError("drive power must be non-negative");
    if (!(p.gamma0 > 0.0))
        throw DomainError("gamma0 must be positive");
    if (!(p.distance > 0.0))
        throw DomainError("atom distance from the surface must be positive");
    if (!std::isfinite(p.detuning))
        throw DomainError("detuning must be finite");
}

std::vector<double> grid(double lo, double hi, int points)
{
    if (points < 2)
        throw DomainError("a sweep grid needs at least 2 points");
    if (!(lo < hi))
        throw DomainError("sweep grid requires min < max");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
    return g;
}

std::vector<ModeKind> drive_modes(const SweepParameters& p)
{
    return p.modes.empty() ? default_drive_modes() : p.modes;
}

Cell cutoff_cell(const ModeKind& kind, const SweepParameters& p)
{
    if (kind == ModeKind(ModeFamily::HE, 1, 1))
        return std::monostate{};
    return cutoff_radius(kind, p.wavelength, p.n1, p.n2) / kNm;
}

void common_metadata(Table& t, const char* scenario, const SweepParameters& p)
{
    t.metadata = {
        {"tool", std::string("chiralforce")},
        {"version", std::string(version())},
        {"scenario", std::string(scenario)},
        {"units", std::string("lengths nm, forces N, rates rad/s, beta and q rad/m")},
        {"wavelength_nm", p.wavelength / kNm},
        {"n1", p.n1},
        {"n2", p.n2},
    };
}

void drive_metadata(Table& t, const SweepParameters& p, const std::vector<ModeKind>& modes)
{
    const double d = dipole_from_linewidth(p.gamma0, p.wavelength);
    t.metadata.insert(t.metadata.end(), {
        {"modes", join_modes(modes)},
        {"pol", std::string(1, p.polarization)},
        {"power_pW", p.power / kPw},
        {"detuning_MHz", p.detuning / kMHz},
        {"gamma0_MHz", p.gamma0 / kMHz},
        {"dipole", dipole_label(p.dipole)},
        {"dipole_moment_Cm", d},
        {"atom_phi_rad", 0.0},
        {"rate_tolerance", p.rates.tolerance},
    });
}

struct PointResult {
    EmissionRates rates;
    std::vector<std::optional<std::pair<ForceResult, ForceResult>>> forces;  // per mode, empty if not guided
};

PointResult evaluate(const SweepParameters& p, const FiberSpec& fiber, double r, const std::vector<ModeKind>& modes,
                     bool allow_absent)
{
    const auto atom = AtomConfig::with_linewidth(r, 0.0, dipole_vector(p.dipole), p.wavelength, p.gamma0);
    RateOptions opts = p.rates;
    opts.threads = 1;
    PointResult out{emission_rates(atom, fiber, opts), {}};
    const double orientation = p.polarization == 'x' ? 0.0 : 0.5 * phys::pi;
    const double omega_l = atom.omega0() + p.detuning;
    for (const auto& kind : modes) {
        if (!solve_dispersion(fiber, kind, omega_l)) {
            if (!allow_absent)
                throw NotGuidedError(kind.label() + " is not guided at the drive frequency for a = "
                                     + format_number(fiber.a / kNm) + " nm");
            out.forces.emplace_back();
            continue;
        }
        const DriveConfig fwd{kind, orientation, Direction::Forward, p.power, p.detuning};
        DriveConfig bwd = fwd;
        bwd.f = Direction::Backward;
        out.forces.emplace_back(std::in_place, axial_force(atom, fwd, fiber, out.rates),
                                axial_force(atom, bwd, fiber, out.rates));
    }
    return out;
}

Cell eta_cell(const ForceResult& plus, const ForceResult& minus)
{
    const auto eta = asymmetry(plus.F_z, minus.F_z);
    if (!eta)
        return std::string("undefined");
    return *eta;
}

std::vector<PointResult> evaluate_all(const SweepParameters& p, const std::vector<double>& xs, bool radius_sweep,
                                      const std::vector<ModeKind>& modes)
{
    std::vector<std::optional<PointResult>> results(xs.size());
    detail::parallel_for(xs.size(), p.rates.threads, [&](std::size_t i) {
        if (radius_sweep) {
            const FiberSpec fiber(xs[i], p.n1, p.n2);
            results[i] = evaluate(p, fiber, xs[i] + p.distance, modes, true);
        } else {
            results[i] = evaluate(p, FiberSpec(p.radius, p.n1, p.n2), xs[i], modes, false);
        }
    });
    std::vector<PointResult> out;
    for (auto& r : results)
        out.push_back(std::move(*r));
    return out;
}

void quadrature_metadata(Table& t, const std::vector<PointResult>& pts)
{
    int lmax = 0, nmin = 0, nmax = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        lmax = std::max(lmax, pts[i].rates.l_max);
        nmin = i == 0 ? pts[i].rates.beta_nodes : std::min(nmin, pts[i].rates.beta_nodes);
        nmax = std::max(nmax, pts[i].rates.beta_nodes);
    }
    t.metadata.insert(t.metadata.end(), {
        {"l_max", static_cast<double>(lmax)},
        {"beta_nodes_min", static_cast<double>(nmin)},
        {"beta_nodes_max", static_cast<double>(nmax)},
    });
}

void force_columns(Table& t, const std::string& m, bool with_eta_inf)
{
    for (const char* c : {"_Fz_plus_N", "_Fz_minus_N", "_absFz_plus_N", "_absFz_minus_N", "_eta"})
        t.columns.push_back(m + c);
    if (with_eta_inf)
        t.columns.push_back(m + "_eta_inf");
    t.columns.push_back(m + "_rho_ee_plus");
    t.columns.push_back(m + "_rho_ee_minus");
}

void force_cells(std::vector<Cell>& row, const std::optional<std::pair<ForceResult, ForceResult>>& f,
                 bool with_eta_inf)
{
    if (!f) {
        row.insert(row.end(), with_eta_inf ? 8 : 7, std::monostate{});
        return;
    }
    const auto& [plus, minus] = *f;
    row.insert(row.end(), {plus.F_z, minus.F_z, std::abs(plus.F_z), std::abs(minus.F_z), eta_cell(plus, minus)});
    if (with_eta_inf)
        row.push_back(eta_infinity(plus.beta_L, plus.q_L));
    row.push_back(plus.rho_ee);
    row.push_back(minus.rho_ee);
}

void rate_cells(std::vector<Cell>& row, const EmissionRates& r)
{
    row.insert(row.end(), {r.Gamma, r.gamma_g, r.gamma_r, static_cast<double>(r.l_max),
                           static_cast<double>(r.beta_nodes)});
}

void rate_columns(Table& t)
{
    for (const char* c : {"Gamma_rad_s", "gamma_g_rad_s", "gamma_r_rad_s", "l_max", "beta_nodes"})
        t.columns.emplace_back(c);
}

}  // namespace

const char* version() { return CHIRALFORCE_VERSION; }

DipoleChoice parse_dipole(std::string_view text)
{
    if (text == "sigma+")
        return DipoleChoice::SigmaPlus;
    if (text == "sigma-")
        return DipoleChoice::SigmaMinus;
    if (text == "linear-x")
        return DipoleChoice::LinearX;
    throw DomainError("unknown dipole '" + std::string(text) + "' (sigma+, sigma-, linear-x)");
}

std::string dipole_label(DipoleChoice d)
{
    switch (d) {
    case DipoleChoice::SigmaPlus: return "sigma+";
    case DipoleChoice::SigmaMinus: return "sigma-";
    case DipoleChoice::LinearX: return "linear-x";
    }
    return "";
}

Vec3c dipole_vector(DipoleChoice d)
{
    switch (d) {
    case DipoleChoice::SigmaPlus: return dipole_sigma_plus();
    case DipoleChoice::SigmaMinus: return dipole_sigma_minus();
    case DipoleChoice::LinearX: return dipole_linear_x();
    }
    return dipole_linear_x();
}

std::vector<ModeKind> default_drive_modes()
{
    return {ModeKind(ModeFamily::HE, 1, 1), ModeKind(ModeFamily::TM, 0, 1), ModeKind(ModeFamily::HE, 2, 1)};
}

Table list_modes(const SweepParameters& p)
{
    validate(p);
    const FiberSpec fiber(p.radius, p.n1, p.n2);
    const double omega = phys::omega_from_wavelength(p.wavelength);
    const auto modes = guided_modes(fiber, omega);
    Table t;
    common_metadata(t, "modes", p);
    t.metadata.insert(t.metadata.begin() + 4, {"radius_nm", p.radius / kNm});
    t.metadata.push_back({"v_number", v_number(fiber, p.wavelength)});
    t.metadata.push_back({"guided_modes", static_cast<double>(modes.size())});
    t.columns = {"mode", "beta_rad_m", "beta_over_k", "q_rad_m", "beta_prime_s_m", "cutoff_radius_nm"};
    const double k = omega / phys::c;
    for (const auto& m : modes)
        t.rows.push_back({m.kind.label(), m.beta, m.beta / k, m.q, m.beta_prime, cutoff_cell(m.kind, p)});
    return t;
}

Table run_radial_sweep(const SweepParameters& p)
{
    validate(p);
    const double a = p.radius;
    const double lo = p.grid_min.value_or(a + 5.0 * kNm);
    const double hi = p.grid_max.value_or(a + 600.0 * kNm);
    if (!(lo > a))
        throw PhysicsError("radial sweep must start outside the fiber (r > a)");
    const auto rs = grid(lo, hi, p.points);
    const auto modes = drive_modes(p);
    const FiberSpec fiber(a, p.n1, p.n2);
    const double omega_l = phys::omega_from_wavelength(p.wavelength) + p.detuning;

    Table t;
    common_metadata(t, "radial-sweep", p);
    t.metadata.insert(t.metadata.begin() + 4, {"radius_nm", a / kNm});
    drive_metadata(t, p, modes);
    t.metadata.insert(t.metadata.end(), {{"rmin_nm", lo / kNm}, {"rmax_nm", hi / kNm},
                                         {"points", static_cast<double>(p.points)}});
    for (const auto& kind : modes) {
        const auto m = solve_dispersion(fiber, kind, omega_l);
        if (!m)
            throw NotGuidedError(kind.label() + " is not guided at the drive frequency for a = "
                                 + format_number(a / kNm) + " nm");
        const std::string L = kind.label();
        t.metadata.push_back({L + "_cutoff_radius_nm", cutoff_cell(kind, p)});
        t.metadata.push_back({L + "_beta_L_rad_m", m->beta});
        t.metadata.push_back({L + "_q_L_rad_m", m->q});
        t.metadata.push_back({L + "_eta_inf", eta_infinity(m->beta, m->q)});
    }

    const auto pts = evaluate_all(p, rs, false, modes);
    quadrature_metadata(t, pts);
    t.columns.push_back("r_nm");
    for (const auto& kind : modes)
        force_columns(t, kind.label(), false);
    rate_columns(t);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        std::vector<Cell> row{rs[i] / kNm};
        for (const auto& f : pts[i].forces)
            force_cells(row, f, false);
        rate_cells(row, pts[i].rates);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_radius_sweep(const SweepParameters& p)
{
    validate(p);
    const double lo = p.grid_min.value_or(250.0 * kNm);
    const double hi = p.grid_max.value_or(600.0 * kNm);
    if (!(lo > 0.0))
        throw DomainError("fiber radius grid must be positive");
    const auto as = grid(lo, hi, p.points);
    const auto modes = drive_modes(p);

    Table t;
    common_metadata(t, "radius-sweep", p);
    drive_metadata(t, p, modes);
    t.metadata.insert(t.metadata.end(), {{"distance_nm", p.distance / kNm}, {"amin_nm", lo / kNm},
                                         {"amax_nm", hi / kNm}, {"points", static_cast<double>(p.points)}});
    for (const auto& kind : modes)
        t.metadata.push_back({kind.label() + "_cutoff_radius_nm", cutoff_cell(kind, p)});

    const auto pts = evaluate_all(p, as, true, modes);
    quadrature_metadata(t, pts);
    t.columns = {"a_nm", "r_nm"};
    for (const auto& kind : modes)
        force_columns(t, kind.label(), true);
    rate_columns(t);
    for (std::size_t i = 0; i < as.size(); ++i) {
        std::vector<Cell> row{as[i] / kNm, (as[i] + p.distance) / kNm};
        for (const auto& f : pts[i].forces)
            force_cells(row, f, true);
        rate_cells(row, pts[i].rates);
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string format_number(double v)
{
    if (v == 0.0)
        return "0";  // no signed zero in output
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string csv_cell(const Cell& c)
{
    if (std::holds_alternative<std::monostate>(c))
        return "NA";
    if (const double* v = std::get_if<double>(&c))
        return format_number(*v);
    return std::get<std::string>(c);
}

nlohmann::ordered_json json_cell(const Cell& c)
{
    if (std::holds_alternative<std::monostate>(c))
        return nullptr;
    if (const double* v = std::get_if<double>(&c))
        return std::strtod(format_number(*v).c_str(), nullptr);
    return std::get<std::string>(c);
}

}  // namespace

std::string format_csv(const Table& t)
{
    std::ostringstream out;
    for (const auto& [key, value] : t.metadata)
        out << "# " << key << ": " << csv_cell(value) << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
    return out.str();
}

std::string format_json(const Table& t)
{
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.metadata)
        doc["metadata"][key] = json_cell(value);
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row)
            r.push_back(json_cell(c));
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

}  // namespace chiralforce
