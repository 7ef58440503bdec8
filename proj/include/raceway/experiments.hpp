#ifndef RACEWAY_EXPERIMENTS_HPP
#define RACEWAY_EXPERIMENTS_HPP

/// Experiment drivers behind the CLI subcommands, CSV emission and the run
/// manifest.  Every driver writes its outputs plus `config.echo.cfg` (a
/// re-parseable echo of the resolved configuration) and `manifest.json`
/// listing every file it produced.

#include <string>
#include <vector>

#include "raceway/config.hpp"

namespace raceway::io {

extern const char* const tool_version;

struct RunManifest {
    std::string experiment;
    std::uint64_t seed = 0;
    double wall_clock_s = 0.0;
    std::string termination;  ///< empty when not an optimization run
    const ExperimentConfig* config = nullptr;
    std::vector<std::string> files;

    void write(const std::string& out_dir) const;
};

/// Profile CSV: x,h,u,eta,zb then per-trajectory z_i, I_i, C_i columns
/// (lap 1); full-precision scientific notation, header mandatory.
void emit_profile_csv(const hydro::FlowField& flow,
                      const hydro::TrajectoryBundle& bundle,
                      const transport::StateField& states, const std::string& path);

/// Trace CSV: iter,objective_d1,grad_norm,min_h.
void emit_trace_csv(const opt::OptimizationTrace& trace, const std::string& path);

/// Per-lap state CSV: x then C_i columns for the given lap.
void emit_states_csv(const hydro::FlowField& flow,
                     const transport::StateField& states, int lap,
                     const std::string& path);

/// Run one named experiment; returns the files written (relative names).
/// Experiments: simulate, optimize, gradcheck, sweep-nz, sweep-N, paddle,
/// areal.  Throws ConfigError for an unknown name.
std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        const std::string& experiment,
                                        const std::string& out_dir);

}  // namespace raceway::io

#endif  // RACEWAY_EXPERIMENTS_HPP
