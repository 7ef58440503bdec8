#ifndef RACEWAY_HAN_HPP
#define RACEWAY_HAN_HPP

/// Reduced Han photosystem kinetics and the derived growth-rate closed forms.
///
/// The three-state (open/closed/inhibited) photosystem model collapses, after
/// a fast-slow reduction, to a single ODE for the inhibited fraction C:
///
///     dC/dt = -alpha(I) C + beta(I),
///
/// with beta(I) = k_d tau (sigma I)^2 / (tau sigma I + 1) and
/// alpha(I) = beta(I) + k_r.  The net specific growth rate is
/// mu(C, I) = -gamma(I) C + zeta(I), gamma(I) = k sigma I / (tau sigma I + 1),
/// zeta(I) = gamma(I) - R.
///
/// Everything here is a pure stateless function of (I, params); all rates are
/// in s^-1 and light intensities in umol m^-2 s^-1.  Reporting layers convert
/// to d^-1 with seconds_per_day.

#include <cmath>

#include "raceway/errors.hpp"

namespace raceway::han {

constexpr double seconds_per_day = 86400.0;

/// Han model constants plus the respiration rate (all strictly positive).
struct HanParams {
    double k_r   = 6.8e-3;    ///< repair rate (s^-1)
    double k_d   = 2.99e-4;   ///< damage ratio (-)
    double tau   = 0.25;      ///< turnover time (s)
    double sigma = 0.047;     ///< specific photon absorption (m^2 umol^-1)
    double k     = 8.7e-6;    ///< energy-to-growth factor (-)
    double R     = 1.389e-7;  ///< respiration rate (s^-1)

    void validate() const {
        if (k_r <= 0 || k_d <= 0 || tau <= 0 || sigma <= 0 || k <= 0 || R <= 0)
            throw UnitViolation("HanParams: all fields must be strictly positive");
    }
};

/// Photoinhibition damage rate beta(I) = k_d tau (sigma I)^2 / (tau sigma I + 1).
inline double beta(double I, const HanParams& p) {
    const double s = p.sigma * I;
    return p.k_d * p.tau * s * s / (p.tau * s + 1.0);
}

/// d beta / d I (analytic; used by the adjoint gradient assembly).
inline double beta_prime(double I, const HanParams& p) {
    const double s = p.sigma * I;
    const double d = p.tau * s + 1.0;
    return p.k_d * p.tau * p.sigma * s * (p.tau * s + 2.0) / (d * d);
}

/// alpha(I) = beta(I) + k_r.
inline double alpha(double I, const HanParams& p) { return beta(I, p) + p.k_r; }

inline double alpha_prime(double I, const HanParams& p) { return beta_prime(I, p); }

/// Photon-capture rate gamma(I) = k sigma I / (tau sigma I + 1).
inline double gamma(double I, const HanParams& p) {
    const double s = p.sigma * I;
    return p.k * s / (p.tau * s + 1.0);
}

inline double gamma_prime(double I, const HanParams& p) {
    const double d = p.tau * p.sigma * I + 1.0;
    return p.k * p.sigma / (d * d);
}

/// zeta(I) = gamma(I) - R; negative at low light (respiration dominates).
inline double zeta(double I, const HanParams& p) { return gamma(I, p) - p.R; }

inline double zeta_prime(double I, const HanParams& p) { return gamma_prime(I, p); }

/// Net specific growth rate mu(C, I) = -gamma(I) C + zeta(I).
inline double growth_rate(double C, double I, const HanParams& p) {
    return -gamma(I, p) * C + zeta(I, p);
}

/// Steady-state inhibited fraction C*(I) = beta(I)/alpha(I), in [0, 1).
inline double steady_state_c(double I, const HanParams& p) {
    return beta(I, p) / alpha(I, p);
}

/// Steady-state growth rate mu(I) = mu(C*(I), I).
inline double steady_growth(double I, const HanParams& p) {
    return growth_rate(steady_state_c(I, p), I, p);
}

/// Compensation intensity: the light level I_zb at which steady growth exactly
/// balances respiration, mu(I_zb) = 0.  Root of
///
///     k_d tau R (sigma I)^2 + (k_r tau sigma R - k_r k sigma) I + k_r R = 0.
///
/// Returns the smaller positive root (the larger one, ~1.2e5 for the default
/// constants, is beyond physical light levels).  Throws NoCompensationRoot if
/// no root lies in (0, I_s).
inline double compensation_intensity(const HanParams& p, double I_s) {
    const double qa = p.k_d * p.tau * p.R * p.sigma * p.sigma;
    const double qb = p.k_r * p.sigma * (p.tau * p.R - p.k);
    const double qc = p.k_r * p.R;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0)
        throw NoCompensationRoot("compensation quadratic has no real root");
    // Citardauq-style split avoids cancellation for the small root.
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (qb + (qb >= 0.0 ? sq : -sq));
    double r1 = qq / qa;
    double r2 = (qq != 0.0) ? qc / qq : r1;
    if (r1 > r2) std::swap(r1, r2);
    double root = 0.0;
    if (r1 > 0.0 && r1 < I_s)
        root = r1;
    else if (r2 > 0.0 && r2 < I_s)
        root = r2;
    else
        throw NoCompensationRoot("no compensation root in (0, I_s)");
    if (std::abs(steady_growth(root, p)) > 1e-12)
        throw NoCompensationRoot("compensation root fails mu(I_zb)=0 check");
    return root;
}

/// Extinction model constants for the variable-volume (areal) problem.
/// epsilon(X) = alpha0 X + alpha1; the compensation condition at mean depth a0
/// gives epsilon a0 = ln(I_s / I_zb).
struct ArealParams {
    double alpha0 = 0.2;     ///< specific extinction of the species (m^2 gC^-1)
    double alpha1 = 10.0;    ///< background turbidity (m^-1)
    double I_s    = 2000.0;  ///< surface light (umol m^-2 s^-1)
    double I_zb   = 0.0;     ///< compensation intensity (umol m^-2 s^-1)

    /// alpha2 = ln(I_s/I_zb)/alpha0 (gC m^-2): areal loading at vanishing depth.
    double alpha2() const { return std::log(I_s / I_zb) / alpha0; }
    /// alpha3 = alpha1/alpha0 (gC m^-3).
    double alpha3() const { return alpha1 / alpha0; }
    /// Areal biomass loading X(a0) V/S = alpha2 - alpha3 a0.
    double loading(double a0) const { return alpha2() - alpha3() * a0; }

    void validate() const {
        if (alpha0 <= 0) throw UnitViolation("ArealParams: alpha0 must be positive");
        if (alpha1 < 0) throw UnitViolation("ArealParams: alpha1 must be nonnegative");
        if (!(I_zb > 0 && I_zb < I_s))
            throw UnitViolation("ArealParams: requires 0 < I_zb < I_s");
    }
};

/// Biomass concentration sustaining the compensation condition at mean depth
/// a0:  X(a0) = ((1/a0) ln(I_s/I_zb) - alpha1) / alpha0.
/// Throws NegativeBiomass when the depth is too large for compensation.
inline double biomass_concentration(double a0, const ArealParams& ap) {
    const double x = (std::log(ap.I_s / ap.I_zb) / a0 - ap.alpha1) / ap.alpha0;
    if (x < 0.0)
        throw NegativeBiomass("depth too large: compensation requires negative biomass");
    return x;
}

/// Mean depth maximizing per-lap areal production: a0* = alpha2 / (2 alpha3).
inline double optimal_mean_depth(const ArealParams& ap) {
    return ap.alpha2() / (2.0 * ap.alpha3());
}

}  // namespace raceway::han

#endif  // RACEWAY_HAN_HPP
