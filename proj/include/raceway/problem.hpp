#ifndef RACEWAY_PROBLEM_HPP
#define RACEWAY_PROBLEM_HPP

/// Ties one problem variant together: builds the flow, trajectories and
/// states for a shape, evaluates the objective, and assembles its adjoint
/// gradient.  Both the optimizer and the finite-difference oracle go through
/// the same evaluation path, so differencing the objective probes exactly the
/// function whose gradient is assembled.

#include <optional>
#include <vector>

#include "raceway/adjoint.hpp"
#include "raceway/transport.hpp"

namespace raceway {

using transport::Variant;

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

struct Problem {
    hydro::HydroConfig hydro_cfg;
    han::HanParams han_params;
    han::ArealParams areal_params;  ///< used by the areal variant only
    Variant variant = Variant::periodic;
    int Nz = 50;
    /// Initial condition for the non-periodic variants; nullopt means the
    /// per-trajectory steady state C*(I_i(0)).
    std::optional<double> c0_fixed = 0.1;
    transport::PaddleWheel wheel;  ///< paddle variant; sized on demand

    struct Evaluation {
        double value = 0.0;
        transport::ObjectiveReport report;
        transport::StateField states;
        std::vector<double> grad;  ///< empty unless requested
    };

    int trajectory_count() const { return variant == Variant::single ? 1 : Nz; }

    /// Shape admissibility: h > 0 and min h > h_c on the grid.
    bool admissible(const hydro::FourierShape& shape) const;

    /// Full evaluation; include_a0 adds the mean-depth gradient component
    /// (areal variant only).
    Evaluation evaluate(const hydro::FourierShape& shape, bool want_gradient,
                        bool include_a0 = false) const;

    double objective(const hydro::FourierShape& shape) const {
        return evaluate(shape, false).value;
    }

    /// HydroConfig with h0 tracking the shape's a0 (h(0) = a0 always).
    hydro::HydroConfig config_for(const hydro::FourierShape& shape) const;
};

}  // namespace raceway

#endif  // RACEWAY_PROBLEM_HPP
