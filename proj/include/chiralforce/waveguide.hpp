#pragma once

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chiralforce {

using cplx = std::complex<double>;

/// Step-index fiber: core radius a (m), core index n1, cladding index n2.
/// n1 == n2 is accepted and describes the fiber-free limit.
struct FiberSpec {
    double a;
    double n1;
    double n2;

    FiberSpec(double radius, double n_core, double n_clad);
};

enum class ModeFamily { HE, EH, TE, TM };

struct ModeKind {
    ModeFamily family;
    int l;  // azimuthal order, 0 for TE/TM
    int m;  // radial order, >= 1

    ModeKind(ModeFamily fam, int az, int rad);

    std::string label() const;
    bool operator==(const ModeKind&) const = default;
};

/// Parses "HE11", "TM01", "EH_12_3" (underscore form for multi-digit orders).
ModeKind parse_mode_kind(std::string_view text);

enum class Direction : int { Forward = 1, Backward = -1 };
enum class Circulation : int { Plus = 1, Minus = -1 };
enum class Normalization { Quantum, Power };
enum class Side { Auto, Core, Cladding };

inline int sign(Direction f) { return static_cast<int>(f); }
inline int sign(Circulation p) { return static_cast<int>(p); }

/// Six field components in the cylindrical basis (r, phi, z).
struct VectorField {
    cplx e_r, e_phi, e_z;
    cplx h_r, h_phi, h_z;
};

/// Axial-field amplitudes: E_z = A J_l(hr), H_z = B J_l(hr) in the core,
/// E_z = C K_l(qr), H_z = D K_l(qr) in the cladding. Fixed by the boundary
/// conditions up to one overall constant; the phase is chosen so that e_r is
/// real and positive just outside the surface at phi = 0 (e_phi for TE).
struct FieldCoefficients {
    cplx core_ez, core_hz, clad_ez, clad_hz;
};

/// A solved guided mode of the fiber at one frequency.
struct GuidedMode {
    FiberSpec fiber;
    ModeKind kind;
    double omega;       // rad/s
    double beta;        // rad/m
    double h;           // core transverse wavenumber, rad/m
    double q;           // cladding decay parameter, rad/m
    double beta_prime;  // d beta / d omega, s/m
    FieldCoefficients coeffs;
    double norm_quantum;  // scale giving  int n^2 |e|^2 dA = 1
    double norm_power;    // scale giving 1 W of axial Poynting flux
    double residual;      // characteristic-equation residual, normalized units
    bool beta_prime_degraded = false;  // one-sided difference was used near cutoff

    double k() const;
    double u() const { return h * fiber.a; }
    double w() const { return q * fiber.a; }
};

/// (2 pi / lambda) a sqrt(n1^2 - n2^2)
double v_number(const FiberSpec& fiber, double lambda);

/// Exact guided mode of the requested kind at angular frequency omega, or
/// nullopt when the mode is below cutoff. Throws ConvergenceError if a
/// bracketed root cannot be refined.
std::optional<GuidedMode> solve_dispersion(const FiberSpec& fiber, const ModeKind& kind, double omega);

/// All guided modes at omega, ordered by decreasing beta.
std::vector<GuidedMode> guided_modes(const FiberSpec& fiber, double omega);

/// Smallest fiber radius at which the mode is guided. Throws DomainError for
/// HE11, which has no cutoff.
double cutoff_radius(const ModeKind& kind, double lambda, double n1, double n2);

/// Cutoff V-number of the mode (0 for HE11).
double cutoff_v_number(const ModeKind& kind, double n1, double n2);

/// Field of the quasicircular mode with direction f and circulation p at
/// (r, phi, z = 0), including the exp(i p l phi) factor. Only Side::Core /
/// Side::Cladding override the r <= a choice, for interface checks.
VectorField mode_profile(const GuidedMode& mode, double r, double phi, Direction f, Circulation p,
                         Normalization norm, Side side = Side::Auto);

/// d beta / d omega by a Richardson-extrapolated centered difference.
double group_slowness(const GuidedMode& mode);

/// Quasilinearly polarized guided field carrying power P (W) in direction f.
/// For HE/EH modes `orientation` is the polarization angle (0 = x); TE/TM
/// ignore it.
VectorField quasilinear_drive_field(const GuidedMode& mode, double orientation, Direction f, double power,
                                    double r, double phi);

/// Normalized characteristic-equation residual at an arbitrary beta in
/// (n2 k, n1 k), for diagnostics and tests.
double characteristic_residual(const FiberSpec& fiber, const ModeKind& kind, double omega, double beta);

}  // namespace chiralforce
