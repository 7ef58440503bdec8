#ifndef RACEWAY_OPTIMIZER_HPP
#define RACEWAY_OPTIMIZER_HPP

/// Fixed-step gradient ascent over the Fourier coefficients with the
/// subcritical admissibility guard, plus the verification utilities
/// (finite-difference oracle, criticality check).

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "raceway/problem.hpp"

namespace raceway::opt {

struct OptimizerConfig {
    double rho = 0.1;       ///< ascent step (on the d^-1-scaled objective)
    double tol = 1e-10;     ///< gradient Euclidean-norm tolerance
    int max_iters = 500;
    int N = 5;              ///< Fourier truncation order (used by drivers)
    std::uint64_t seed = 42;
    bool optimize_a0 = false;  ///< include the mean depth (areal variant)
    bool backtracking = false;  ///< opt-in Armijo halving
    int max_backtracks = 20;

    void validate() const {
        if (rho <= 0 || tol <= 0) throw UnitViolation("OptimizerConfig: rho, tol > 0");
        if (max_iters < 1) throw UnitViolation("OptimizerConfig: max_iters >= 1");
    }
};

enum class Termination { converged, subcritical_boundary, max_iters };

const char* termination_name(Termination t);

struct TraceRecord {
    int iter = 0;
    double objective = 0.0;
    double grad_norm = 0.0;
    double min_h = 0.0;
    hydro::FourierShape shape;
};

struct OptimizationTrace {
    std::vector<TraceRecord> records;
    Termination termination = Termination::converged;
    int iterations() const { return static_cast<int>(records.size()) - 1; }
};

/// Gradient ascent a <- a + rho grad J until ||grad J|| <= tol, the
/// subcritical boundary blocks the step, or max_iters.  Throws
/// InvalidInitialShape if the initial shape is inadmissible.
std::pair<hydro::FourierShape, OptimizationTrace> optimize(
    const hydro::FourierShape& init, const OptimizerConfig& ocfg,
    const Problem& problem);

/// Coordinate-wise central differences of the discrete objective; the
/// independent oracle for the adjoint gradient.  Includes the a0 coordinate
/// first when include_a0 is set.  Inadmissible perturbed shapes propagate
/// SupercriticalFlow.
std::vector<double> fd_gradient(const hydro::FourierShape& shape,
                                const Problem& problem, double eta,
                                bool include_a0 = false);

struct CriticalityReport {
    double grad_inf_norm = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Evaluates ||grad J||_inf at the shape and compares against tol.
CriticalityReport criticality_check(const hydro::FourierShape& shape,
                                    const Problem& problem, double tol,
                                    bool include_a0 = false);

/// Uniform double in [0, 1) from the top 53 bits of a mt19937_64 draw.
/// (std::uniform_real_distribution is implementation-defined; this keeps
/// seeded runs reproducible across standard libraries.)
double uniform01(std::uint64_t raw);

/// Random shape with coefficients uniform in [-amp, amp], rejection-sampled
/// to satisfy the subcritical condition.  (The mt19937_64 output sequence is
/// standardized, so seeded runs are reproducible across platforms.)
hydro::FourierShape random_subcritical_shape(double a0, int N, double amp,
                                             std::mt19937_64& rng,
                                             const Problem& problem);

}  // namespace raceway::opt

#endif  // RACEWAY_OPTIMIZER_HPP
