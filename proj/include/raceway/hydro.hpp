#ifndef RACEWAY_HYDRO_HPP
#define RACEWAY_HYDRO_HPP

/// Steady 1D shallow-water state of the raceway.
///
/// The water height h(x) is the design variable (Fourier series in x); the
/// velocity follows from the constant discharge h u = Q0 and the topography is
/// recovered from the Bernoulli constant
///
///     M0 = Q0^2/(2 h^2) + g (h + z_b).
///
/// Only smooth subcritical states (Froude number u/sqrt(g h) < 1 everywhere)
/// are admissible.  Lagrangian depth trajectories and the light they capture
/// are derived quantities.

#include <vector>

#include "raceway/errors.hpp"

namespace raceway::hydro {

enum class LightMode {
    fixed_extinction,    ///< eps given (e.g. from the 1%-bottom-light rule)
    areal_compensation,  ///< eps = ln(I_s/I_zb)/a0, tied to the mean depth
};

/// Raceway geometry, discharge, boundary values and grid resolution.
struct HydroConfig {
    double L   = 100.0;   ///< raceway length (m)
    double Q0  = 0.04;    ///< discharge (m^2 s^-1)
    double g   = 9.81;    ///< gravity (m s^-2)
    double h0  = 0.4;     ///< water height at x=0 (m)
    double zb0 = -0.4;    ///< topography at x=0 (m)
    int Nx     = 10000;   ///< number of space cells (nodes 0..Nx)
    double I_s = 2000.0;  ///< surface light (umol m^-2 s^-1)

    LightMode mode = LightMode::fixed_extinction;
    double eps     = 11.512925464970229;  ///< extinction (m^-1), fixed mode
    double I_zb    = 0.0;                 ///< compensation intensity, areal mode

    double dx() const { return L / Nx; }

    void validate() const {
        if (L <= 0 || Q0 <= 0 || g <= 0 || h0 <= 0 || Nx <= 0)
            throw UnitViolation("HydroConfig: L, Q0, g, h0, Nx must be positive");
    }
};

/// Truncated Fourier parameterization of the water height,
/// h(x) = a0 + sum_n a[n-1] sin(2 n pi x / L).  h(0) = a0 always.
struct FourierShape {
    double a0 = 0.4;        ///< mean height (m); equals h(0)
    std::vector<double> a;  ///< coefficients a_1..a_N (m)
};

/// Gridded steady flow state.  Invariants (enforced by flow_from_height):
/// h u = Q0 at every node, Bernoulli residual 0 to machine precision,
/// eta = h + z_b, Fr < 1 pointwise.
struct FlowField {
    std::vector<double> x;    ///< grid nodes (m)
    std::vector<double> h;    ///< water height (m)
    std::vector<double> u;    ///< velocity (m s^-1)
    std::vector<double> eta;  ///< free surface (m)
    std::vector<double> zb;   ///< topography (m)
    std::vector<double> fr;   ///< Froude numbers (-)
    double M0 = 0.0;          ///< Bernoulli constant (m^2 s^-2)
    double g  = 9.81;
    double dx = 0.0;
    double L  = 0.0;
    double Q0 = 0.0;

    int nodes() const { return static_cast<int>(h.size()); }
};

/// Per-trajectory depth fractions, depths and captured light.
/// q[i] = (i+1/2)/Nz counts from the surface; z[i][n] and I[i][n] are over the
/// grid with I_i(x) = I_s exp(-eps q_i h(x)).
struct TrajectoryBundle {
    int Nz = 0;
    double eps = 0.0;  ///< extinction actually used (resolved per mode)
    std::vector<double> q;
    std::vector<std::vector<double>> z;
    std::vector<std::vector<double>> I;
};

/// h(x_n) on the uniform node-centered grid (validity is checked separately).
std::vector<double> height_profile(const FourierShape& shape, const HydroConfig& cfg);

/// Critical height h_c = (Q0^2/g)^(1/3); Fr = 1 exactly at h = h_c.
double critical_height(const HydroConfig& cfg);

/// Extinction coefficient per light mode; a0 is the current mean depth (only
/// used in areal mode, where eps = ln(I_s/I_zb)/a0).
double extinction_coefficient(const HydroConfig& cfg, double a0);

/// Build the full flow state from a height profile.  Throws NonPositiveHeight
/// if any h <= 0 and SupercriticalFlow if min h <= h_c.
FlowField flow_from_height(const std::vector<double>& h, const HydroConfig& cfg);

/// Subcritical admissibility test used by the optimizer's guard.
bool subcritical(const std::vector<double>& h, const HydroConfig& cfg);

/// Lagrangian trajectories z_i(x) = eta(x) + (u(0)/u(x))(z_i(0) - eta(0)) with
/// z_i(0) = eta(0) - q_i h(0), and captured light I_i(x) = I_s exp(-eps q_i h(x)).
TrajectoryBundle trajectories(const FlowField& flow, int Nz, const HydroConfig& cfg);

/// Vertical velocity w(x,z) = (M0/g - 3u^2/(2g) - z) u'(x); u' by centered
/// differences (one-sided at the ends), linear interpolation off-node.
/// Diagnostic only; not on the optimization path.
double vertical_velocity(const FlowField& flow, double x, double z);

}  // namespace raceway::hydro

#endif  // RACEWAY_HYDRO_HPP
