#include "raceway/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace raceway::adjoint {

using transport::build_step_operator;
using transport::StepOperator;

namespace {

/// Trapezoid weight of node n in the objective quadrature.
inline double trap_w(int n, int last, double dx) {
    return (n == 0 || n == last) ? 0.5 * dx : dx;
}

/// sigma_{i,n} = -weight * w_n * gamma(I_i(n))/u_n for all nodes.
std::vector<double> source_terms(const hydro::FlowField& flow,
                                 const hydro::TrajectoryBundle& bundle, int i,
                                 double weight, const han::HanParams& p) {
    const int last = flow.nodes() - 1;
    std::vector<double> s(flow.nodes());
    for (int n = 0; n <= last; ++n)
        s[n] = -weight * trap_w(n, last, flow.dx) *
               han::gamma(bundle.I[i][n], p) / flow.u[n];
    return s;
}

/// March p_n = A_n p_{n+1} + sigma_n from p_last = terminal down to node 0.
void march_back(const StepOperator& op, const std::vector<double>& sigma,
                double terminal, std::vector<double>& out) {
    const int last = static_cast<int>(op.a.size()) - 1;
    out.resize(op.a.size());
    out[last] = terminal;
    for (int n = last - 1; n >= 0; --n) out[n] = op.A[n] * out[n + 1] + sigma[n];
}

void check_states(const hydro::TrajectoryBundle& bundle, const StateField& states,
                  int n_nodes) {
    if (static_cast<int>(states.C.size()) != states.laps)
        throw DimensionMismatch("adjoint: state lap count mismatch");
    for (const auto& lap : states.C) {
        if (static_cast<int>(lap.size()) != bundle.Nz)
            throw DimensionMismatch("adjoint: state trajectory count != Nz");
        for (const auto& c : lap)
            if (static_cast<int>(c.size()) != n_nodes)
                throw DimensionMismatch("adjoint: state node count mismatch");
    }
}

}  // namespace

std::vector<double> adjoint_integrate(const hydro::FlowField& flow,
                                      const hydro::TrajectoryBundle& bundle,
                                      const StateField& states, int i,
                                      double terminal_p, double weight,
                                      const han::HanParams& p) {
    check_states(bundle, states, flow.nodes());
    const StepOperator op = build_step_operator(flow, bundle, i, p);
    const std::vector<double> sigma = source_terms(flow, bundle, i, weight, p);
    std::vector<double> out;
    march_back(op, sigma, terminal_p + sigma.back(), out);
    return out;
}

AdjointField adjoint_periodic_solve(const hydro::FlowField& flow,
                                    const hydro::TrajectoryBundle& bundle,
                                    const StateField& states, double weight,
                                    const han::HanParams& p,
                                    transport::FixedPointOptions opts) {
    check_states(bundle, states, flow.nodes());
    const int Nz = bundle.Nz;
    AdjointField adj;
    adj.laps = 1;
    adj.p.assign(1, std::vector<std::vector<double>>(Nz));

    for (int i = 0; i < Nz; ++i) {
        const StepOperator op = build_step_operator(flow, bundle, i, p);
        const std::vector<double> sigma = source_terms(flow, bundle, i, weight, p);
        double t = opts.initial_c0 ? *opts.initial_c0 : 0.0;
        std::vector<double> pv;
        double best_res = std::numeric_limits<double>::infinity();
        double best_t = t;
        double prev_res = std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_iters; ++it) {
            march_back(op, sigma, t, pv);
            const double wrap = pv[0] + sigma.back();
            const double res = std::abs(wrap - t);
            if (i == 0) {
                adj.fp_residuals.push_back(res);
                ++adj.fp_iterations;
            }
            if (res < best_res) {
                best_res = res;
                best_t = t;
            }
            if (res <= opts.target || res >= prev_res) break;
            prev_res = res;
            t = wrap;
        }
        if (!(best_res <= opts.fp_tol))
            throw FixedPointDivergence("adjoint_periodic_solve: residual " +
                                       std::to_string(best_res) + " exceeds fp_tol");
        march_back(op, sigma, best_t, adj.p[0][i]);
        // Node 0 stores the wrap multiplier, making p(0) = p(L) within fp_tol.
        adj.p[0][i][0] += sigma.back();
    }
    return adj;
}

AdjointField adjoint_paddle_solve(const hydro::FlowField& flow,
                                  const hydro::TrajectoryBundle& bundle,
                                  const StateField& states,
                                  const transport::PaddleWheel& wheel,
                                  double weight, const han::HanParams& p,
                                  transport::FixedPointOptions opts) {
    check_states(bundle, states, flow.nodes());
    wheel.validate(bundle.Nz);
    const int Nz = bundle.Nz;
    const int laps = wheel.laps;
    const std::vector<int> inv = wheel.inverse();

    std::vector<StepOperator> ops(Nz);
    std::vector<std::vector<double>> sigma(Nz);
    for (int i = 0; i < Nz; ++i) {
        ops[i] = build_step_operator(flow, bundle, i, p);
        sigma[i] = source_terms(flow, bundle, i, weight, p);
    }

    // Terminal values t[j][i] = p^j_i(L); update rule
    //   t[j][i] <- sigma_i(L) + p^{j+1}_{inv[i]}(0)
    // with lap index wrapping laps -> 1.
    std::vector<std::vector<double>> t(laps, std::vector<double>(Nz, 0.0));
    std::vector<std::vector<double>> p0(laps, std::vector<double>(Nz, 0.0));
    std::vector<double> tmp;

    AdjointField adj;
    adj.laps = laps;
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best_t = t;
    double prev_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
        for (int j = 0; j < laps; ++j)
            for (int i = 0; i < Nz; ++i) {
                march_back(ops[i], sigma[i], t[j][i], tmp);
                p0[j][i] = tmp[0];
            }
        double res = 0.0;
        std::vector<std::vector<double>> tn(laps, std::vector<double>(Nz));
        for (int j = 0; j < laps; ++j)
            for (int i = 0; i < Nz; ++i) {
                tn[j][i] = sigma[i].back() + p0[(j + 1) % laps][inv[i]];
                res = std::max(res, std::abs(tn[j][i] - t[j][i]));
            }
        adj.fp_residuals.push_back(res);
        ++adj.fp_iterations;
        if (res < best_res) {
            best_res = res;
            best_t = t;
        }
        if (res <= opts.target || res >= prev_res) break;
        prev_res = res;
        t = tn;
    }
    if (!(best_res <= opts.fp_tol))
        throw FixedPointDivergence("adjoint_paddle_solve: residual " +
                                   std::to_string(best_res) + " exceeds fp_tol");

    adj.p.assign(laps, std::vector<std::vector<double>>(Nz));
    for (int j = 0; j < laps; ++j)
        for (int i = 0; i < Nz; ++i) {
            march_back(ops[i], sigma[i], best_t[j][i], adj.p[j][i]);
            adj.p[j][i][0] += sigma[i].back();  // wrap-consistent node 0
        }
    return adj;
}

ShapeSensitivities shape_sensitivities(const hydro::FlowField& flow,
                                       const hydro::TrajectoryBundle& bundle,
                                       const hydro::FourierShape& shape,
                                       const hydro::HydroConfig& cfg,
                                       bool include_a0) {
    ShapeSensitivities s;
    s.has_a0 = include_a0;
    s.a0 = shape.a0;
    s.eps = bundle.eps;
    s.n_coeffs = static_cast<int>(shape.a.size());
    const int n_nodes = flow.nodes();
    const int ncols = s.cols();
    s.dh.assign(ncols, std::vector<double>(n_nodes));
    s.du.assign(ncols, std::vector<double>(n_nodes));
    s.dI_log.assign(ncols, std::vector<double>(n_nodes));

    int col = 0;
    if (include_a0) {
        for (int n = 0; n < n_nodes; ++n) {
            s.dh[col][n] = 1.0;
            s.du[col][n] = -flow.Q0 / (flow.h[n] * flow.h[n]);
            s.dI_log[col][n] =
                (cfg.mode == hydro::LightMode::areal_compensation)
                    ? s.eps * (1.0 - flow.h[n] / shape.a0)
                    : s.eps;
        }
        ++col;
    }
    for (int kc = 1; kc <= s.n_coeffs; ++kc, ++col) {
        const double freq = 2.0 * kc * std::numbers::pi / cfg.L;
        for (int n = 0; n < n_nodes; ++n) {
            const double sn = std::sin(freq * flow.x[n]);
            s.dh[col][n] = sn;
            s.du[col][n] = -flow.Q0 / (flow.h[n] * flow.h[n]) * sn;
            s.dI_log[col][n] = s.eps * sn;
        }
    }
    return s;
}

double objective_prefactor(Variant variant, const hydro::FlowField& flow,
                           const hydro::TrajectoryBundle& bundle, int laps,
                           const han::ArealParams* ap, double a0) {
    if (variant == Variant::areal) {
        if (ap == nullptr)
            throw DimensionMismatch("objective_prefactor: areal params required");
        return han::seconds_per_day * ap->loading(a0) / (flow.L * bundle.Nz);
    }
    return han::seconds_per_day * (flow.Q0 / flow.h[0]) / (flow.L * bundle.Nz * laps);
}

std::vector<double> gradient(const hydro::FlowField& flow,
                             const hydro::TrajectoryBundle& bundle,
                             const StateField& states, const AdjointField& adjoints,
                             const ShapeSensitivities& sens, Variant variant,
                             const han::HanParams& p,
                             const han::ArealParams* ap, double a0) {
    check_states(bundle, states, flow.nodes());
    if (adjoints.laps != states.laps)
        throw DimensionMismatch("gradient: adjoint/state lap count mismatch");
    if (sens.has_a0 && variant != Variant::areal)
        throw DimensionMismatch("gradient: a0 column only valid for the areal variant");
    const int n_nodes = flow.nodes();
    const int last = n_nodes - 1;
    const int Nz = bundle.Nz;
    const double dx = flow.dx;
    const double pref =
        objective_prefactor(variant, flow, bundle, states.laps, ap, a0);

    // Per-node reductions over trajectories and laps: rowI multiplies the
    // dI_log columns, rowU the du columns.
    std::vector<double> rowI(n_nodes, 0.0), rowU(n_nodes, 0.0);
    std::vector<double> Pa(n_nodes), Pb(n_nodes);

    for (int i = 0; i < Nz; ++i) {
        const StepOperator op = build_step_operator(flow, bundle, i, p);
        for (int j = 0; j < states.laps; ++j) {
            const std::vector<double>& C = states.C[j][i];
            const std::vector<double>& pv = adjoints.p[j][i];
            if (static_cast<int>(pv.size()) != n_nodes)
                throw DimensionMismatch("gradient: adjoint node count mismatch");
            std::fill(Pa.begin(), Pa.end(), 0.0);
            std::fill(Pb.begin(), Pb.end(), 0.0);
            for (int n = 0; n < last; ++n) {
                const double pc = pv[n + 1];
                Pa[n] += pc * C[n] * (-0.5 * dx + 0.5 * dx * dx * op.a[n + 1]);
                Pa[n + 1] += pc * (C[n] * (-0.5 * dx + 0.5 * dx * dx * op.a[n]) -
                                   0.5 * dx * dx * op.b[n]);
                Pb[n] += pc * (0.5 * dx - 0.5 * dx * dx * op.a[n + 1]);
                Pb[n + 1] += pc * 0.5 * dx;
            }
            for (int n = 0; n < n_nodes; ++n) {
                const double I = bundle.I[i][n];
                const double u = flow.u[n];
                const double w = trap_w(n, last, dx);
                const double gp = han::gamma_prime(I, p);
                const double bp = han::beta_prime(I, p);
                const double F1 = pref * w * (-gp * C[n] + gp) / u;
                const double F2 = -pref * w *
                                  (-han::gamma(I, p) * C[n] + han::zeta(I, p)) /
                                  (u * u);
                const double WI = F1 + (Pa[n] + Pb[n]) * bp / u;
                const double WU = F2 - (Pa[n] * han::alpha(I, p) +
                                        Pb[n] * han::beta(I, p)) /
                                           (u * u);
                rowI[n] += -bundle.q[i] * I * WI;
                rowU[n] += WU;
            }
        }
    }

    std::vector<double> grad(sens.cols(), 0.0);
    for (int col = 0; col < sens.cols(); ++col) {
        double acc = 0.0;
        for (int n = 0; n < n_nodes; ++n)
            acc += rowI[n] * sens.dI_log[col][n] + rowU[n] * sens.du[col][n];
        grad[col] = acc;
    }

    // Areal variant: the loading alpha2 - alpha3 a0 multiplies the objective,
    // adding -alpha3/L int ... to the a0 component.
    if (variant == Variant::areal && sens.has_a0) {
        if (ap == nullptr)
            throw DimensionMismatch("gradient: areal params required");
        const double base = han::seconds_per_day / (flow.L * Nz);
        double acc = 0.0;
        for (int i = 0; i < Nz; ++i)
            for (int j = 0; j < states.laps; ++j)
                for (int n = 0; n < n_nodes; ++n) {
                    const double I = bundle.I[i][n];
                    acc += trap_w(n, last, dx) *
                           (-han::gamma(I, p) * states.C[j][i][n] +
                            han::zeta(I, p)) /
                           flow.u[n];
                }
        grad[0] += -ap->alpha3() * base * acc / states.laps;
    }
    return grad;
}

}  // namespace raceway::adjoint
