#ifndef RACEWAY_CONFIG_HPP
#define RACEWAY_CONFIG_HPP

/// Plain-text configuration: one `key = value` per line, `#` comments.
/// Unknown keys are rejected; absent keys fall back to the reference defaults
/// (Han constants, raceway geometry, light model, optimizer settings).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "raceway/optimizer.hpp"
#include "raceway/problem.hpp"

namespace raceway::io {

struct ExperimentConfig {
    // Han kinetics
    double k_r = 6.8e-3;
    double k_d = 2.99e-4;
    double tau = 0.25;
    double sigma = 0.047;
    double k = 8.7e-6;
    double R = 1.389e-7;
    // Raceway / light
    double L = 100.0;
    double Q0 = 0.04;
    double a0 = 0.4;
    double zb0 = -0.4;
    double g = 9.81;
    double I_s = 2000.0;
    double I_b = 20.0;  ///< bottom light; defaults to 0.01 I_s when not set
    double dx = 0.01;
    int Nz = 50;
    // Areal extinction model
    double alpha0 = 0.2;
    double alpha1 = 10.0;
    // Optimization
    double tol = 1e-10;
    double rho = 0.1;
    int max_iters = 500;
    int N = 5;
    std::uint64_t seed = 42;
    bool optimize_a0 = true;    ///< areal driver: include mean depth
    bool backtracking = false;
    // Problem variant
    std::string variant = "multi";
    std::string C0 = "0.1";  ///< number or "steady" (per-trajectory C*(I_i(0)))
    int laps = 2;
    // Drivers
    std::vector<double> a;        ///< initial Fourier coefficients
    std::vector<int> n_values = {0, 5, 10, 15, 20};
    std::vector<int> nz_values;   ///< default: 1..100 step 3 plus 10, 50, 100
    int n_guesses = 20;
    double guess_amp = 0.0;       ///< default a0/10 when left at 0
    double eta_fd = 1e-6;

    bool i_b_explicit = false;  ///< I_b given, else tracks 0.01 I_s

    void validate() const;  ///< throws UnitViolation

    han::HanParams han_params() const;
    hydro::HydroConfig hydro_config() const;  ///< fixed-extinction mode
    opt::OptimizerConfig optimizer_config() const;
    /// Full problem per `variant`; resolves I_zb for the areal variant.
    Problem problem() const;
    hydro::FourierShape initial_shape() const;
    std::vector<int> resolved_nz_values() const;
    double resolved_guess_amp() const { return guess_amp > 0 ? guess_amp : a0 / 10.0; }
};

/// Parse a config file.  Throws ParseError (with line number), UnknownKey or
/// UnitViolation.  An empty file yields the reference defaults.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_stream(std::istream& in, const std::string& name);

/// Emit the resolved configuration in the same key=value format;
/// parse(emit(cfg)) reproduces cfg exactly.
void emit_config(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace raceway::io

#endif  // RACEWAY_CONFIG_HPP
