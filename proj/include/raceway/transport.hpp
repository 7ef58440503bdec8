#ifndef RACEWAY_TRANSPORT_HPP
#define RACEWAY_TRANSPORT_HPP

/// Forward transport of the photoinhibition state C along trajectories.
///
/// The time-free dynamics C' = (beta(I_i(x)) - alpha(I_i(x)) C)/u(x) are
/// integrated with Heun's method (explicit trapezoidal).  Because the right
/// hand side is linear in C, each step is an affine map
///
///     C_{n+1} = A_n C_n + B_n,
///
/// whose coefficients are precomputed per trajectory; the adjoint module
/// transposes exactly this recursion.  Periodic and paddle-wheel problems are
/// fixed points of the lap map, solved by Picard iteration (the map is a
/// contraction with factor <= exp(-k_r L / ||u||_inf)).

#include <optional>
#include <vector>

#include "raceway/han.hpp"
#include "raceway/hydro.hpp"

namespace raceway::transport {

enum class Variant { single, multi, periodic, paddle, areal };

/// Heun step coefficients for one trajectory: node arrays a = alpha(I)/u,
/// b = beta(I)/u and per-step affine coefficients A, B.
struct StepOperator {
    std::vector<double> a;  ///< nodes 0..Nx
    std::vector<double> b;  ///< nodes 0..Nx
    std::vector<double> A;  ///< steps 0..Nx-1
    std::vector<double> B;  ///< steps 0..Nx-1
    double dx = 0.0;
};

StepOperator build_step_operator(const hydro::FlowField& flow,
                                 const hydro::TrajectoryBundle& bundle, int i,
                                 const han::HanParams& p);

/// Gridded inhibition states per lap per trajectory, plus fixed-point
/// telemetry when produced by one of the periodic solvers.
struct StateField {
    int laps = 1;
    std::vector<std::vector<std::vector<double>>> C;  ///< [lap][traj][node]
    std::vector<std::vector<double>> C0;              ///< [lap][traj]
    int fp_iterations = 0;
    std::vector<double> fp_residuals;  ///< max-norm residual per Picard sweep
};

/// Paddle-wheel mixing model: a permutation of trajectory indices applied at
/// every lap boundary (including the wrap-around).  perm[i] = pi(i).
struct PaddleWheel {
    std::vector<int> perm;
    int laps = 2;

    static PaddleWheel identity(int Nz, int laps = 2);
    static PaddleWheel anti_diagonal(int Nz, int laps = 2);
    std::vector<int> inverse() const;
    bool is_identity() const;
    void validate(int Nz) const;  ///< throws DimensionMismatch unless a bijection
};

struct ObjectiveReport {
    double value = 0.0;  ///< d^-1 for mu-type, loading-scaled for areal
    Variant variant = Variant::periodic;
    std::vector<double> per_trajectory;  ///< value = mean(per_trajectory)
};

struct FixedPointOptions {
    double fp_tol = 1e-12;   ///< residual bound asserted on the result
    double target = 1e-15;   ///< internal iteration target (stops earlier on stagnation)
    int max_iters = 100;
    std::optional<double> initial_c0;  ///< override C0 guess (default C*(I_i(0)))
};

/// One Heun sweep of trajectory i from C_init; returns C at all nodes.
std::vector<double> integrate_c(const hydro::FlowField& flow,
                                const hydro::TrajectoryBundle& bundle, int i,
                                double C_init, const han::HanParams& p);

/// Non-periodic states: every trajectory integrated from the given initial
/// values (one per trajectory).
StateField states_from_initial(const hydro::FlowField& flow,
                               const hydro::TrajectoryBundle& bundle,
                               const std::vector<double>& C0,
                               const han::HanParams& p);

/// Lap-periodic states C(L) = C(0), per trajectory, by Picard iteration on
/// C0 -> C(L).  Throws FixedPointDivergence if fp_tol is not met.
StateField periodic_solve(const hydro::FlowField& flow,
                          const hydro::TrajectoryBundle& bundle,
                          const han::HanParams& p, FixedPointOptions opts = {});

/// Multi-lap periodic states with the paddle permutation applied between laps
/// and at the wrap-around: C^{j+1}(0) = P C^j(L), C^1(0) = P C^laps(L).
StateField paddle_periodic_solve(const hydro::FlowField& flow,
                                 const hydro::TrajectoryBundle& bundle,
                                 const PaddleWheel& wheel, const han::HanParams& p,
                                 FixedPointOptions opts = {});

/// Average net specific growth rate, reported in d^-1:
///
///     value = 86400 (Q0/a0) (1/(L Nz laps)) sum_{j,i} int (-gamma C + zeta)/u dx
///
/// (trapezoidal on the Heun grid).  The Q0/a0 factor converts the per-lap
/// integral to the lap-time average; at fixed a0 it is shape-independent.
ObjectiveReport objective_mu_delta(const hydro::FlowField& flow,
                                   const hydro::TrajectoryBundle& bundle,
                                   const StateField& states,
                                   const han::HanParams& p, Variant variant);

/// Per-lap areal production objective (variable-volume problem):
///
///     value = 86400 ((alpha2 - alpha3 a0)/(L Nz)) sum_i int (-gamma C + zeta)/u dx.
///
/// Throws NegativeBiomass if alpha2 - alpha3 a0 < 0.
ObjectiveReport objective_areal(const hydro::FlowField& flow,
                                const hydro::TrajectoryBundle& bundle,
                                const StateField& states, const han::HanParams& p,
                                const han::ArealParams& ap, double a0);

}  // namespace raceway::transport

#endif  // RACEWAY_TRANSPORT_HPP
