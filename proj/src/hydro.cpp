#include "raceway/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace raceway::hydro {

std::vector<double> height_profile(const FourierShape& shape, const HydroConfig& cfg) {
    const int n_nodes = cfg.Nx + 1;
    const double dx = cfg.dx();
    std::vector<double> h(n_nodes, shape.a0);
    for (std::size_t kc = 0; kc < shape.a.size(); ++kc) {
        const double ak = shape.a[kc];
        if (ak == 0.0) continue;
        const double freq = 2.0 * (kc + 1) * std::numbers::pi / cfg.L;
        for (int n = 0; n < n_nodes; ++n) h[n] += ak * std::sin(freq * n * dx);
    }
    return h;
}

double critical_height(const HydroConfig& cfg) {
    return std::cbrt(cfg.Q0 * cfg.Q0 / cfg.g);
}

double extinction_coefficient(const HydroConfig& cfg, double a0) {
    if (cfg.mode == LightMode::fixed_extinction) return cfg.eps;
    return std::log(cfg.I_s / cfg.I_zb) / a0;
}

bool subcritical(const std::vector<double>& h, const HydroConfig& cfg) {
    const double hc = critical_height(cfg);
    return std::all_of(h.begin(), h.end(), [hc](double v) { return v > hc; });
}

FlowField flow_from_height(const std::vector<double>& h, const HydroConfig& cfg) {
    const int n_nodes = static_cast<int>(h.size());
    for (double v : h)
        if (v <= 0.0) throw NonPositiveHeight("flow_from_height: h <= 0");
    const double hc = critical_height(cfg);
    const double hmin = *std::min_element(h.begin(), h.end());
    if (hmin <= hc)
        throw SupercriticalFlow("flow_from_height: min h <= h_c, flow not subcritical");

    FlowField f;
    f.h = h;
    f.g = cfg.g;
    f.dx = cfg.dx();
    f.L = cfg.L;
    f.Q0 = cfg.Q0;
    f.M0 = cfg.Q0 * cfg.Q0 / (2.0 * cfg.h0 * cfg.h0) + cfg.g * (cfg.h0 + cfg.zb0);
    f.x.resize(n_nodes);
    f.u.resize(n_nodes);
    f.eta.resize(n_nodes);
    f.zb.resize(n_nodes);
    f.fr.resize(n_nodes);
    for (int n = 0; n < n_nodes; ++n) {
        f.x[n] = n * f.dx;
        f.u[n] = cfg.Q0 / h[n];
        f.zb[n] = f.M0 / cfg.g - cfg.Q0 * cfg.Q0 / (2.0 * cfg.g * h[n] * h[n]) - h[n];
        f.eta[n] = h[n] + f.zb[n];
        f.fr[n] = f.u[n] / std::sqrt(cfg.g * h[n]);
    }
    return f;
}

TrajectoryBundle trajectories(const FlowField& flow, int Nz, const HydroConfig& cfg) {
    TrajectoryBundle b;
    b.Nz = Nz;
    b.eps = extinction_coefficient(cfg, flow.h[0]);
    b.q.resize(Nz);
    b.z.assign(Nz, std::vector<double>(flow.nodes()));
    b.I.assign(Nz, std::vector<double>(flow.nodes()));
    const double u0 = flow.u[0];
    const double eta0 = flow.eta[0];
    const double h0 = flow.h[0];
    for (int i = 0; i < Nz; ++i) {
        const double q = (i + 0.5) / Nz;
        b.q[i] = q;
        const double z0 = eta0 - q * h0;
        for (int n = 0; n < flow.nodes(); ++n) {
            b.z[i][n] = flow.eta[n] + (u0 / flow.u[n]) * (z0 - eta0);
            b.I[i][n] = cfg.I_s * std::exp(-b.eps * q * flow.h[n]);
        }
    }
    return b;
}

double vertical_velocity(const FlowField& flow, double x, double z) {
    const int last = flow.nodes() - 1;
    auto du_at = [&](int n) {
        if (n == 0) {
            return (-3.0 * flow.u[0] + 4.0 * flow.u[1] - flow.u[2]) / (2.0 * flow.dx);
        }
        if (n == last) {
            return (3.0 * flow.u[last] - 4.0 * flow.u[last - 1] + flow.u[last - 2]) /
                   (2.0 * flow.dx);
        }
        return (flow.u[n + 1] - flow.u[n - 1]) / (2.0 * flow.dx);
    };
    const double s = std::clamp(x / flow.dx, 0.0, static_cast<double>(last));
    const int n0 = std::min(static_cast<int>(s), last - 1);
    const double t = s - n0;
    const double u = (1.0 - t) * flow.u[n0] + t * flow.u[n0 + 1];
    const double du = (1.0 - t) * du_at(n0) + t * du_at(n0 + 1);
    return (flow.M0 / flow.g - 1.5 * u * u / flow.g - z) * du;
}

}  // namespace raceway::hydro
