#include "raceway/problem.hpp"

#include <string>

namespace raceway {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::single: return "single";
        case Variant::multi: return "multi";
        case Variant::periodic: return "periodic";
        case Variant::paddle: return "paddle";
        case Variant::areal: return "areal";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    if (name == "single") return Variant::single;
    if (name == "multi") return Variant::multi;
    if (name == "periodic") return Variant::periodic;
    if (name == "paddle") return Variant::paddle;
    if (name == "areal") return Variant::areal;
    return std::nullopt;
}

hydro::HydroConfig Problem::config_for(const hydro::FourierShape& shape) const {
    hydro::HydroConfig cfg = hydro_cfg;
    cfg.h0 = shape.a0;
    if (variant == Variant::areal) {
        cfg.mode = hydro::LightMode::areal_compensation;
        cfg.I_zb = areal_params.I_zb;
    }
    return cfg;
}

bool Problem::admissible(const hydro::FourierShape& shape) const {
    const hydro::HydroConfig cfg = config_for(shape);
    const std::vector<double> h = hydro::height_profile(shape, cfg);
    for (double v : h)
        if (v <= 0.0) return false;
    return hydro::subcritical(h, cfg);
}

Problem::Evaluation Problem::evaluate(const hydro::FourierShape& shape,
                                      bool want_gradient, bool include_a0) const {
    const hydro::HydroConfig cfg = config_for(shape);
    const int nz = trajectory_count();
    const hydro::FlowField flow =
        hydro::flow_from_height(hydro::height_profile(shape, cfg), cfg);
    const hydro::TrajectoryBundle bundle = hydro::trajectories(flow, nz, cfg);

    Evaluation ev;
    transport::PaddleWheel w = wheel;
    switch (variant) {
        case Variant::single:
        case Variant::multi: {
            std::vector<double> c0(nz);
            for (int i = 0; i < nz; ++i)
                c0[i] = c0_fixed ? *c0_fixed
                                 : han::steady_state_c(bundle.I[i][0], han_params);
            ev.states = transport::states_from_initial(flow, bundle, c0, han_params);
            break;
        }
        case Variant::periodic:
        case Variant::areal:
            ev.states = transport::periodic_solve(flow, bundle, han_params);
            break;
        case Variant::paddle: {
            if (w.perm.empty()) w = transport::PaddleWheel::anti_diagonal(nz);
            ev.states = transport::paddle_periodic_solve(flow, bundle, w, han_params);
            break;
        }
    }

    if (variant == Variant::areal)
        ev.report = transport::objective_areal(flow, bundle, ev.states, han_params,
                                               areal_params, shape.a0);
    else
        ev.report =
            transport::objective_mu_delta(flow, bundle, ev.states, han_params, variant);
    ev.value = ev.report.value;

    if (!want_gradient) return ev;

    const bool areal = variant == Variant::areal;
    const double weight = adjoint::objective_prefactor(
        variant, flow, bundle, ev.states.laps, areal ? &areal_params : nullptr,
        shape.a0);

    adjoint::AdjointField adj;
    switch (variant) {
        case Variant::single:
        case Variant::multi: {
            adj.laps = 1;
            adj.p.assign(1, std::vector<std::vector<double>>(nz));
            for (int i = 0; i < nz; ++i)
                adj.p[0][i] = adjoint::adjoint_integrate(flow, bundle, ev.states, i,
                                                         0.0, weight, han_params);
            break;
        }
        case Variant::periodic:
        case Variant::areal:
            adj = adjoint::adjoint_periodic_solve(flow, bundle, ev.states, weight,
                                                  han_params);
            break;
        case Variant::paddle:
            adj = adjoint::adjoint_paddle_solve(flow, bundle, ev.states, w, weight,
                                                han_params);
            break;
    }

    const adjoint::ShapeSensitivities sens = adjoint::shape_sensitivities(
        flow, bundle, shape, cfg, areal && include_a0);
    ev.grad = adjoint::gradient(flow, bundle, ev.states, adj, sens, variant,
                                han_params, areal ? &areal_params : nullptr,
                                shape.a0);
    return ev;
}

}  // namespace raceway
