#include "raceway/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace raceway::transport {

StepOperator build_step_operator(const hydro::FlowField& flow,
                                 const hydro::TrajectoryBundle& bundle, int i,
                                 const han::HanParams& p) {
    const int n_nodes = flow.nodes();
    StepOperator op;
    op.dx = flow.dx;
    op.a.resize(n_nodes);
    op.b.resize(n_nodes);
    op.A.resize(n_nodes - 1);
    op.B.resize(n_nodes - 1);
    for (int n = 0; n < n_nodes; ++n) {
        const double I = bundle.I[i][n];
        op.a[n] = han::alpha(I, p) / flow.u[n];
        op.b[n] = han::beta(I, p) / flow.u[n];
    }
    const double dx = op.dx;
    for (int n = 0; n + 1 < n_nodes; ++n) {
        op.A[n] = 1.0 - 0.5 * dx * (op.a[n] + op.a[n + 1]) +
                  0.5 * dx * dx * op.a[n] * op.a[n + 1];
        op.B[n] = 0.5 * dx * (op.b[n] + op.b[n + 1]) -
                  0.5 * dx * dx * op.a[n + 1] * op.b[n];
    }
    return op;
}

namespace {

void propagate(const StepOperator& op, double c0, std::vector<double>& out) {
    out.resize(op.a.size());
    out[0] = c0;
    for (std::size_t n = 0; n + 1 < out.size(); ++n)
        out[n + 1] = op.A[n] * out[n] + op.B[n];
}

double lap_end(const StepOperator& op, double c0) {
    double c = c0;
    for (std::size_t n = 0; n < op.A.size(); ++n) c = op.A[n] * c + op.B[n];
    return c;
}

}  // namespace

std::vector<double> integrate_c(const hydro::FlowField& flow,
                                const hydro::TrajectoryBundle& bundle, int i,
                                double C_init, const han::HanParams& p) {
    const StepOperator op = build_step_operator(flow, bundle, i, p);
    std::vector<double> c;
    propagate(op, C_init, c);
    return c;
}

StateField states_from_initial(const hydro::FlowField& flow,
                               const hydro::TrajectoryBundle& bundle,
                               const std::vector<double>& C0,
                               const han::HanParams& p) {
    if (static_cast<int>(C0.size()) != bundle.Nz)
        throw DimensionMismatch("states_from_initial: C0 size != Nz");
    StateField s;
    s.laps = 1;
    s.C0 = {C0};
    s.C.assign(1, std::vector<std::vector<double>>(bundle.Nz));
    for (int i = 0; i < bundle.Nz; ++i) {
        const StepOperator op = build_step_operator(flow, bundle, i, p);
        propagate(op, C0[i], s.C[0][i]);
    }
    return s;
}

StateField periodic_solve(const hydro::FlowField& flow,
                          const hydro::TrajectoryBundle& bundle,
                          const han::HanParams& p, FixedPointOptions opts) {
    const int Nz = bundle.Nz;
    std::vector<StepOperator> ops(Nz);
    for (int i = 0; i < Nz; ++i) ops[i] = build_step_operator(flow, bundle, i, p);

    std::vector<double> c0(Nz);
    for (int i = 0; i < Nz; ++i)
        c0[i] = opts.initial_c0 ? *opts.initial_c0
                                : han::steady_state_c(bundle.I[i][0], p);

    StateField s;
    s.laps = 1;
    std::vector<double> cL(Nz);
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<double> best_c0 = c0;
    double prev_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
        double res = 0.0;
        for (int i = 0; i < Nz; ++i) {
            cL[i] = lap_end(ops[i], c0[i]);
            res = std::max(res, std::abs(cL[i] - c0[i]));
        }
        s.fp_residuals.push_back(res);
        ++s.fp_iterations;
        if (res < best_res) {
            best_res = res;
            best_c0 = c0;
        }
        if (res <= opts.target || res >= prev_res) break;
        prev_res = res;
        c0 = cL;
    }
    if (!(best_res <= opts.fp_tol))
        throw FixedPointDivergence("periodic_solve: residual " +
                                   std::to_string(best_res) + " exceeds fp_tol");
    s.C0 = {best_c0};
    s.C.assign(1, std::vector<std::vector<double>>(Nz));
    for (int i = 0; i < Nz; ++i) propagate(ops[i], best_c0[i], s.C[0][i]);
    return s;
}

PaddleWheel PaddleWheel::identity(int Nz, int laps) {
    PaddleWheel w;
    w.laps = laps;
    w.perm.resize(Nz);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    return w;
}

PaddleWheel PaddleWheel::anti_diagonal(int Nz, int laps) {
    PaddleWheel w;
    w.laps = laps;
    w.perm.resize(Nz);
    for (int i = 0; i < Nz; ++i) w.perm[i] = Nz - 1 - i;
    return w;
}

std::vector<int> PaddleWheel::inverse() const {
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    return inv;
}

bool PaddleWheel::is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != static_cast<int>(i)) return false;
    return true;
}

void PaddleWheel::validate(int Nz) const {
    if (static_cast<int>(perm.size()) != Nz)
        throw DimensionMismatch("PaddleWheel: permutation size != Nz");
    if (laps < 1) throw DimensionMismatch("PaddleWheel: laps must be >= 1");
    std::vector<char> seen(Nz, 0);
    for (int v : perm) {
        if (v < 0 || v >= Nz || seen[v])
            throw DimensionMismatch("PaddleWheel: permutation is not a bijection");
        seen[v] = 1;
    }
}

StateField paddle_periodic_solve(const hydro::FlowField& flow,
                                 const hydro::TrajectoryBundle& bundle,
                                 const PaddleWheel& wheel, const han::HanParams& p,
                                 FixedPointOptions opts) {
    wheel.validate(bundle.Nz);
    const int Nz = bundle.Nz;
    const int laps = wheel.laps;
    std::vector<StepOperator> ops(Nz);
    for (int i = 0; i < Nz; ++i) ops[i] = build_step_operator(flow, bundle, i, p);

    std::vector<double> c0(Nz);
    for (int i = 0; i < Nz; ++i)
        c0[i] = opts.initial_c0 ? *opts.initial_c0
                                : han::steady_state_c(bundle.I[i][0], p);

    // One full cycle: propagate each lap, permuting end states into the next
    // lap's start (and back into lap 1 at the wrap).
    auto cycle = [&](const std::vector<double>& start) {
        std::vector<double> c = start, next(Nz);
        for (int j = 0; j < laps; ++j) {
            for (int i = 0; i < Nz; ++i) c[i] = lap_end(ops[i], c[i]);
            for (int i = 0; i < Nz; ++i) next[i] = c[wheel.perm[i]];
            c = next;
        }
        return c;
    };

    StateField s;
    s.laps = laps;
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<double> best_c0 = c0;
    double prev_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iters; ++it) {
        const std::vector<double> cw = cycle(c0);
        double res = 0.0;
        for (int i = 0; i < Nz; ++i) res = std::max(res, std::abs(cw[i] - c0[i]));
        s.fp_residuals.push_back(res);
        ++s.fp_iterations;
        if (res < best_res) {
            best_res = res;
            best_c0 = c0;
        }
        if (res <= opts.target || res >= prev_res) break;
        prev_res = res;
        c0 = cw;
    }
    if (!(best_res <= opts.fp_tol))
        throw FixedPointDivergence("paddle_periodic_solve: residual " +
                                   std::to_string(best_res) + " exceeds fp_tol");

    s.C.assign(laps, std::vector<std::vector<double>>(Nz));
    s.C0.assign(laps, std::vector<double>(Nz));
    std::vector<double> start = best_c0;
    for (int j = 0; j < laps; ++j) {
        s.C0[j] = start;
        for (int i = 0; i < Nz; ++i) propagate(ops[i], start[i], s.C[j][i]);
        std::vector<double> next(Nz);
        for (int i = 0; i < Nz; ++i) next[i] = s.C[j][i][flow.nodes() - 1];
        for (int i = 0; i < Nz; ++i) start[i] = next[wheel.perm[i]];
    }
    return s;
}

namespace {

/// Trapezoidal (1/L) int (-gamma(I_i) C_i + zeta(I_i))/u dx for one lap/traj.
double lap_integral(const hydro::FlowField& flow, const hydro::TrajectoryBundle& bundle,
                    const std::vector<double>& C, int i, const han::HanParams& p) {
    const int n_nodes = flow.nodes();
    double acc = 0.0;
    for (int n = 0; n < n_nodes; ++n) {
        const double I = bundle.I[i][n];
        const double integrand =
            (-han::gamma(I, p) * C[n] + han::zeta(I, p)) / flow.u[n];
        const double w = (n == 0 || n == n_nodes - 1) ? 0.5 * flow.dx : flow.dx;
        acc += w * integrand;
    }
    return acc / flow.L;
}

void check_states(const hydro::TrajectoryBundle& bundle, const StateField& states,
                  int n_nodes) {
    if (static_cast<int>(states.C.size()) != states.laps)
        throw DimensionMismatch("StateField: lap count mismatch");
    for (const auto& lap : states.C) {
        if (static_cast<int>(lap.size()) != bundle.Nz)
            throw DimensionMismatch("StateField: trajectory count != Nz");
        for (const auto& c : lap)
            if (static_cast<int>(c.size()) != n_nodes)
                throw DimensionMismatch("StateField: node count mismatch");
    }
}

}  // namespace

ObjectiveReport objective_mu_delta(const hydro::FlowField& flow,
                                   const hydro::TrajectoryBundle& bundle,
                                   const StateField& states,
                                   const han::HanParams& p, Variant variant) {
    check_states(bundle, states, flow.nodes());
    ObjectiveReport rep;
    rep.variant = variant;
    rep.per_trajectory.assign(bundle.Nz, 0.0);
    const double scale = han::seconds_per_day * flow.Q0 / flow.h[0];
    for (int i = 0; i < bundle.Nz; ++i) {
        double acc = 0.0;
        for (int j = 0; j < states.laps; ++j)
            acc += lap_integral(flow, bundle, states.C[j][i], i, p);
        rep.per_trajectory[i] = scale * acc / states.laps;
    }
    rep.value = std::accumulate(rep.per_trajectory.begin(), rep.per_trajectory.end(),
                                0.0) /
                bundle.Nz;
    return rep;
}

ObjectiveReport objective_areal(const hydro::FlowField& flow,
                                const hydro::TrajectoryBundle& bundle,
                                const StateField& states, const han::HanParams& p,
                                const han::ArealParams& ap, double a0) {
    check_states(bundle, states, flow.nodes());
    const double load = ap.loading(a0);
    if (load < 0.0)
        throw NegativeBiomass("objective_areal: alpha2 - alpha3 a0 < 0");
    ObjectiveReport rep;
    rep.variant = Variant::areal;
    rep.per_trajectory.assign(bundle.Nz, 0.0);
    const double scale = han::seconds_per_day * load;
    for (int i = 0; i < bundle.Nz; ++i) {
        double acc = 0.0;
        for (int j = 0; j < states.laps; ++j)
            acc += lap_integral(flow, bundle, states.C[j][i], i, p);
        rep.per_trajectory[i] = scale * acc / states.laps;
    }
    rep.value = std::accumulate(rep.per_trajectory.begin(), rep.per_trajectory.end(),
                                0.0) /
                bundle.Nz;
    return rep;
}

}  // namespace raceway::transport
