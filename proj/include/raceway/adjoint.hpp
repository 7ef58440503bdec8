#ifndef RACEWAY_ADJOINT_HPP
#define RACEWAY_ADJOINT_HPP

/// Discrete adjoint solves and gradient assembly (first discretize, then
/// optimize).
///
/// The forward Heun recursion C_{n+1} = A_n C_n + B_n is transposed exactly:
/// the multiplier satisfies p_n = A_n p_{n+1} + sigma_n with source
/// sigma_n = -weight w_n gamma(I_n)/u_n (w_n the trapezoid weight of the
/// objective quadrature).  Gradients are the exact derivatives of the
/// discrete objective, so central finite differences of the pipeline agree to
/// the truncation level of the differencing itself.
///
/// Boundary conditions by variant:
///  - non-periodic: p(L) carries only its own quadrature source;
///  - periodic:     p(L) = p(0), found by Picard iteration (the backward map
///                  contracts exactly like the forward one);
///  - paddle:       p^j_i(L) = p^{j+1}_{pi^-1(i)}(0) across laps (wrapping
///                  j = laps back to 1).

#include <vector>

#include "raceway/transport.hpp"

namespace raceway::adjoint {

using transport::StateField;
using transport::Variant;

struct AdjointField {
    int laps = 1;
    std::vector<std::vector<std::vector<double>>> p;  ///< [lap][traj][node]
    int fp_iterations = 0;
    std::vector<double> fp_residuals;
};

/// Analytic shape sensitivities.  Column layout: when has_a0 is set, column 0
/// is the mean-depth direction (dh = 1), followed by the sine coefficients
/// (dh = sin(2 n pi x / L)).  du = -(Q0/h^2) dh.  The light sensitivity
/// factorizes per trajectory as dI[col][i][n] = -q_i I_i(n) * dI_log[col][n],
/// with dI_log = eps * dh in fixed-extinction mode and, for the areal a0
/// column, eps * (1 - h/a0) (the extinction's own a0 dependence).
struct ShapeSensitivities {
    bool has_a0 = false;
    double eps = 0.0;
    double a0 = 0.0;
    int n_coeffs = 0;
    std::vector<std::vector<double>> dh;
    std::vector<std::vector<double>> du;
    std::vector<std::vector<double>> dI_log;

    int cols() const { return (has_a0 ? 1 : 0) + n_coeffs; }

    double dI(int col, int i, int n, const hydro::TrajectoryBundle& b) const {
        return -b.q[i] * b.I[i][n] * dI_log[col][n];
    }
};

ShapeSensitivities shape_sensitivities(const hydro::FlowField& flow,
                                       const hydro::TrajectoryBundle& bundle,
                                       const hydro::FourierShape& shape,
                                       const hydro::HydroConfig& cfg,
                                       bool include_a0);

/// Backward sweep for trajectory i: p(L) = terminal_p plus the terminal
/// quadrature source, then the exact transpose recursion down to x=0.
/// weight is the full objective prefactor in front of the trajectory's
/// integral (variant, lap count and unit scaling included).
std::vector<double> adjoint_integrate(const hydro::FlowField& flow,
                                      const hydro::TrajectoryBundle& bundle,
                                      const StateField& states, int i,
                                      double terminal_p, double weight,
                                      const han::HanParams& p);

/// Periodic adjoint: fixed point of the backward lap map in p(L).  The stored
/// node-0 value is the wrap multiplier, so |p(L) - p(0)| <= fp_tol on return.
AdjointField adjoint_periodic_solve(const hydro::FlowField& flow,
                                    const hydro::TrajectoryBundle& bundle,
                                    const StateField& states, double weight,
                                    const han::HanParams& p,
                                    transport::FixedPointOptions opts = {});

/// Paddle adjoint: multi-lap backward fixed point with permutation-transposed
/// couplings p^j_i(L) = p^{j+1}_{pi^-1(i)}(0).
AdjointField adjoint_paddle_solve(const hydro::FlowField& flow,
                                  const hydro::TrajectoryBundle& bundle,
                                  const StateField& states,
                                  const transport::PaddleWheel& wheel,
                                  double weight, const han::HanParams& p,
                                  transport::FixedPointOptions opts = {});

/// Objective prefactor per trajectory-lap integral (shared by the adjoint
/// sources and the gradient assembly so the two stay exactly consistent).
double objective_prefactor(Variant variant, const hydro::FlowField& flow,
                           const hydro::TrajectoryBundle& bundle, int laps,
                           const han::ArealParams* ap, double a0);

/// Assemble the gradient of the discrete objective: the two direct quadrature
/// terms plus the exact-transpose step terms sum_{n} p_{n+1} (dA_n C_n + dB_n),
/// summed over trajectories and laps; the areal variant appends the loading
/// derivative to the a0 component.  Throws DimensionMismatch on inconsistent
/// field shapes.
std::vector<double> gradient(const hydro::FlowField& flow,
                             const hydro::TrajectoryBundle& bundle,
                             const StateField& states, const AdjointField& adjoints,
                             const ShapeSensitivities& sens, Variant variant,
                             const han::HanParams& p,
                             const han::ArealParams* ap = nullptr, double a0 = 0.0);

}  // namespace raceway::adjoint

#endif  // RACEWAY_ADJOINT_HPP
