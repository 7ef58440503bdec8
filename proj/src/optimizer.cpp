#include "raceway/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace raceway::opt {

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::subcritical_boundary: return "subcritical_boundary";
        case Termination::max_iters: return "max_iters";
    }
    return "?";
}

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double min_height(const hydro::FourierShape& shape, const Problem& problem) {
    const auto h = hydro::height_profile(shape, problem.config_for(shape));
    return *std::min_element(h.begin(), h.end());
}

hydro::FourierShape stepped(const hydro::FourierShape& shape,
                            const std::vector<double>& grad, double rho,
                            bool with_a0) {
    hydro::FourierShape out = shape;
    std::size_t k = 0;
    if (with_a0) out.a0 += rho * grad[k++];
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += rho * grad[k++];
    return out;
}

}  // namespace

std::pair<hydro::FourierShape, OptimizationTrace> optimize(
    const hydro::FourierShape& init, const OptimizerConfig& ocfg,
    const Problem& problem) {
    ocfg.validate();
    if (!problem.admissible(init))
        throw InvalidInitialShape("optimize: initial shape violates subcriticality");

    const bool with_a0 = ocfg.optimize_a0 && problem.variant == Variant::areal;
    hydro::FourierShape a = init;
    OptimizationTrace trace;

    Problem::Evaluation ev = problem.evaluate(a, true, with_a0);
    for (int iter = 0;; ++iter) {
        const double gn = norm2(ev.grad);
        trace.records.push_back({iter, ev.value, gn, min_height(a, problem), a});
        if (gn <= ocfg.tol) {
            trace.termination = Termination::converged;
            break;
        }
        if (iter >= ocfg.max_iters) {
            trace.termination = Termination::max_iters;
            break;
        }

        double rho = ocfg.rho;
        hydro::FourierShape cand = stepped(a, ev.grad, rho, with_a0);
        bool accepted = false;
        if (ocfg.backtracking) {
            // Armijo on the ascent: halve until admissible and increasing.
            const double slope = gn * gn;
            for (int bt = 0; bt <= ocfg.max_backtracks; ++bt) {
                if (problem.admissible(cand)) {
                    Problem::Evaluation trial = problem.evaluate(cand, true, with_a0);
                    if (trial.value >= ev.value + 1e-4 * rho * slope) {
                        a = cand;
                        ev = std::move(trial);
                        accepted = true;
                        break;
                    }
                }
                rho *= 0.5;
                cand = stepped(a, ev.grad, rho, with_a0);
            }
        } else if (problem.admissible(cand)) {
            a = cand;
            ev = problem.evaluate(a, true, with_a0);
            accepted = true;
        }
        if (!accepted) {
            trace.termination = Termination::subcritical_boundary;
            break;
        }
    }
    return {a, trace};
}

std::vector<double> fd_gradient(const hydro::FourierShape& shape,
                                const Problem& problem, double eta,
                                bool include_a0) {
    std::vector<double> g;
    if (include_a0) {
        hydro::FourierShape up = shape, dn = shape;
        up.a0 += eta;
        dn.a0 -= eta;
        g.push_back((problem.objective(up) - problem.objective(dn)) / (2.0 * eta));
    }
    for (std::size_t k = 0; k < shape.a.size(); ++k) {
        hydro::FourierShape up = shape, dn = shape;
        up.a[k] += eta;
        dn.a[k] -= eta;
        g.push_back((problem.objective(up) - problem.objective(dn)) / (2.0 * eta));
    }
    return g;
}

CriticalityReport criticality_check(const hydro::FourierShape& shape,
                                    const Problem& problem, double tol,
                                    bool include_a0) {
    const Problem::Evaluation ev = problem.evaluate(shape, true, include_a0);
    CriticalityReport rep;
    rep.tol = tol;
    for (double gk : ev.grad) rep.grad_inf_norm = std::max(rep.grad_inf_norm, std::abs(gk));
    rep.pass = rep.grad_inf_norm <= tol;
    return rep;
}

double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

hydro::FourierShape random_subcritical_shape(double a0, int N, double amp,
                                             std::mt19937_64& rng,
                                             const Problem& problem) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        hydro::FourierShape s;
        s.a0 = a0;
        s.a.resize(N);
        for (int k = 0; k < N; ++k) s.a[k] = amp * (2.0 * uniform01(rng()) - 1.0);
        if (problem.admissible(s)) return s;
    }
    throw InvalidInitialShape("random_subcritical_shape: rejection sampling failed");
}

}  // namespace raceway::opt
