#include "raceway/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace raceway::io {

namespace fs = std::filesystem;

const char* const tool_version = "1.0.0";

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

struct Run {
    const ExperimentConfig& cfg;
    std::string out_dir;
    RunManifest manifest;
    std::chrono::steady_clock::time_point start;

    Run(const ExperimentConfig& c, const std::string& experiment,
        const std::string& dir)
        : cfg(c), out_dir(dir), start(std::chrono::steady_clock::now()) {
        fs::create_directories(out_dir);
        manifest.experiment = experiment;
        manifest.seed = cfg.seed;
        manifest.config = &cfg;
    }

    std::string path(const std::string& name) {
        manifest.files.push_back(name);
        return out_dir + "/" + name;
    }

    std::vector<std::string> finish() {
        {
            std::ofstream echo = open_out(path("config.echo.cfg"));
            emit_config(cfg, echo);
        }
        manifest.wall_clock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        manifest.write(out_dir);
        return manifest.files;
    }
};

transport::StateField solve_states(const Problem& pr,
                                   const hydro::FlowField& flow,
                                   const hydro::TrajectoryBundle& bundle) {
    switch (pr.variant) {
        case Variant::single:
        case Variant::multi: {
            std::vector<double> c0(bundle.Nz);
            for (int i = 0; i < bundle.Nz; ++i)
                c0[i] = pr.c0_fixed
                            ? *pr.c0_fixed
                            : han::steady_state_c(bundle.I[i][0], pr.han_params);
            return transport::states_from_initial(flow, bundle, c0, pr.han_params);
        }
        case Variant::paddle: {
            transport::PaddleWheel w = pr.wheel;
            if (w.perm.empty())
                w = transport::PaddleWheel::anti_diagonal(bundle.Nz);
            return transport::paddle_periodic_solve(flow, bundle, w, pr.han_params);
        }
        default:
            return transport::periodic_solve(flow, bundle, pr.han_params);
    }
}

void write_profile_for(Run& run, const Problem& pr, const hydro::FourierShape& shape,
                       const std::string& name) {
    const hydro::HydroConfig cfg = pr.config_for(shape);
    const hydro::FlowField flow =
        hydro::flow_from_height(hydro::height_profile(shape, cfg), cfg);
    const hydro::TrajectoryBundle bundle =
        hydro::trajectories(flow, pr.trajectory_count(), cfg);
    const transport::StateField states = solve_states(pr, flow, bundle);
    emit_profile_csv(flow, bundle, states, run.path(name));
    for (int j = 1; j < states.laps; ++j)
        emit_states_csv(flow, states, j,
                        run.path("states_lap" + std::to_string(j + 1) + ".csv"));
}

void write_shape_csv(Run& run, const hydro::FourierShape& shape,
                     const std::string& name) {
    std::ofstream out = open_out(run.path(name));
    out << "k,a_k\n";
    out << 0 << "," << num(shape.a0) << "\n";
    for (std::size_t i = 0; i < shape.a.size(); ++i)
        out << (i + 1) << "," << num(shape.a[i]) << "\n";
}

std::vector<std::string> drive_simulate(Run& run) {
    const Problem pr = run.cfg.problem();
    const hydro::FourierShape shape = run.cfg.initial_shape();
    const Problem::Evaluation ev = pr.evaluate(shape, false);
    write_profile_for(run, pr, shape, "profile.csv");
    std::cout << "simulate: variant=" << variant_name(pr.variant)
              << " objective=" << ev.value
              << (pr.variant == Variant::areal ? "" : " d^-1") << "\n";
    return run.finish();
}

std::vector<std::string> drive_optimize(Run& run) {
    const Problem pr = run.cfg.problem();
    const opt::OptimizerConfig ocfg = run.cfg.optimizer_config();
    const hydro::FourierShape init = run.cfg.initial_shape();
    auto [best, trace] = opt::optimize(init, ocfg, pr);
    run.manifest.termination = opt::termination_name(trace.termination);
    emit_trace_csv(trace, run.path("trace.csv"));
    write_shape_csv(run, best, "optimal_shape.csv");
    write_profile_for(run, pr, best, "profile.csv");
    std::cout << "optimize: variant=" << variant_name(pr.variant)
              << " iters=" << trace.iterations()
              << " objective=" << trace.records.back().objective
              << " grad_norm=" << trace.records.back().grad_norm << " ("
              << opt::termination_name(trace.termination) << ")\n";
    return run.finish();
}

std::vector<std::string> drive_gradcheck(Run& run) {
    const Problem pr = run.cfg.problem();
    const bool with_a0 = pr.variant == Variant::areal && run.cfg.optimize_a0;
    std::mt19937_64 rng(run.cfg.seed);
    std::ofstream out = open_out(run.path("gradcheck.csv"));
    out << "shape,coeff,analytic,fd,rel_err\n";
    double worst = 0.0;
    for (int s = 0; s < run.cfg.n_guesses; ++s) {
        const hydro::FourierShape shape = opt::random_subcritical_shape(
            run.cfg.a0, run.cfg.N, run.cfg.resolved_guess_amp(), rng, pr);
        const Problem::Evaluation ev = pr.evaluate(shape, true, with_a0);
        const std::vector<double> fd =
            opt::fd_gradient(shape, pr, run.cfg.eta_fd, with_a0);
        double gmax = 0.0;
        for (double v : ev.grad) gmax = std::max(gmax, std::abs(v));
        for (std::size_t c = 0; c < fd.size(); ++c) {
            const double denom = std::max(std::abs(ev.grad[c]), 1e-3 * gmax);
            const double rel = std::abs(ev.grad[c] - fd[c]) / denom;
            worst = std::max(worst, rel);
            out << s << "," << c << "," << num(ev.grad[c]) << "," << num(fd[c])
                << "," << num(rel) << "\n";
        }
    }
    std::cout << "gradcheck: variant=" << variant_name(pr.variant)
              << " shapes=" << run.cfg.n_guesses << " max_rel_err=" << worst
              << "\n";
    return run.finish();
}

std::vector<std::string> drive_sweep_nz(Run& run) {
    Problem pr = run.cfg.problem();
    std::mt19937_64 rng(run.cfg.seed);
    std::vector<hydro::FourierShape> guesses;
    for (int i = 0; i < run.cfg.n_guesses; ++i)
        guesses.push_back(opt::random_subcritical_shape(
            run.cfg.a0, run.cfg.N, run.cfg.resolved_guess_amp(), rng, pr));
    const hydro::FourierShape flat{run.cfg.a0, std::vector<double>(run.cfg.N, 0.0)};

    std::ofstream out = open_out(run.path("nz_sweep.csv"));
    out << "nz,mu_flat,mu_mean_random\n";
    for (int nz : run.cfg.resolved_nz_values()) {
        pr.Nz = nz;
        const double mu_flat = pr.objective(flat);
        double acc = 0.0;
        for (const auto& gshape : guesses) acc += pr.objective(gshape);
        out << nz << "," << num(mu_flat) << "," << num(acc / guesses.size())
            << "\n";
    }
    std::cout << "sweep-nz: " << run.cfg.resolved_nz_values().size()
              << " Nz values, " << run.cfg.n_guesses << " random shapes\n";
    return run.finish();
}

std::vector<std::string> drive_sweep_n(Run& run) {
    const Problem pr = run.cfg.problem();
    opt::OptimizerConfig ocfg = run.cfg.optimizer_config();
    std::ofstream out = open_out(run.path("n_sweep.csv"));
    out << "N,iters,objective_d1,log10_grad_norm,termination\n";
    for (int n : run.cfg.n_values) {
        hydro::FourierShape init{run.cfg.a0, std::vector<double>(n, 0.0)};
        ocfg.N = n;
        auto [best, trace] = opt::optimize(init, ocfg, pr);
        const auto& last = trace.records.back();
        out << n << "," << trace.iterations() << "," << num(last.objective) << ","
            << (last.grad_norm > 0 ? num(std::log10(last.grad_norm)) : "-inf")
            << "," << opt::termination_name(trace.termination) << "\n";
        std::cout << "sweep-N: N=" << n << " iters=" << trace.iterations()
                  << " objective=" << last.objective << "\n";
    }
    return run.finish();
}

std::vector<std::string> drive_paddle(Run& run) {
    ExperimentConfig cfg = run.cfg;
    cfg.variant = "paddle";
    const Problem pr = cfg.problem();
    const opt::OptimizerConfig ocfg = cfg.optimizer_config();
    const hydro::FourierShape flat{cfg.a0, std::vector<double>(cfg.N, 0.0)};

    auto [best, trace] = opt::optimize(flat, ocfg, pr);
    run.manifest.termination = opt::termination_name(trace.termination);
    emit_trace_csv(trace, run.path("trace.csv"));
    write_shape_csv(run, best, "optimal_shape.csv");
    write_profile_for(run, pr, best, "profile.csv");

    const double j_opt = trace.records.back().objective;
    const double j_flat_perm = pr.objective(flat);
    Problem no_perm = pr;
    no_perm.variant = Variant::periodic;
    const double j_flat_noperm = no_perm.objective(flat);

    std::ofstream out = open_out(run.path("paddle_summary.csv"));
    out << "objective_opt,objective_flat_perm,objective_flat_noperm,"
           "gain_vs_flat_perm,gain_vs_flat_noperm\n";
    out << num(j_opt) << "," << num(j_flat_perm) << "," << num(j_flat_noperm)
        << "," << num((j_opt - j_flat_perm) / j_flat_perm) << ","
        << num((j_opt - j_flat_noperm) / j_flat_noperm) << "\n";
    std::cout << "paddle: opt=" << j_opt << " flat(perm)=" << j_flat_perm
              << " flat(no perm)=" << j_flat_noperm << " gain="
              << 100.0 * (j_opt - j_flat_perm) / j_flat_perm << "%\n";
    return run.finish();
}

std::vector<std::string> drive_areal(Run& run) {
    ExperimentConfig cfg = run.cfg;
    cfg.variant = "areal";
    const Problem pr = cfg.problem();
    const opt::OptimizerConfig ocfg = cfg.optimizer_config();
    const hydro::FourierShape init = cfg.initial_shape();

    auto [best, trace] = opt::optimize(init, ocfg, pr);
    run.manifest.termination = opt::termination_name(trace.termination);
    emit_trace_csv(trace, run.path("trace.csv"));
    write_shape_csv(run, best, "optimal_shape.csv");
    write_profile_for(run, pr, best, "profile.csv");

    const double a0_analytic = han::optimal_mean_depth(pr.areal_params);
    std::ofstream out = open_out(run.path("areal_summary.csv"));
    out << "a0_opt,a0_analytic,I_zb,alpha2,alpha3,objective,biomass\n";
    out << num(best.a0) << "," << num(a0_analytic) << ","
        << num(pr.areal_params.I_zb) << "," << num(pr.areal_params.alpha2()) << ","
        << num(pr.areal_params.alpha3()) << ","
        << num(trace.records.back().objective) << ","
        << num(han::biomass_concentration(best.a0, pr.areal_params)) << "\n";
    std::cout << "areal: a0*=" << best.a0 << " (analytic " << a0_analytic
              << "), I_zb=" << pr.areal_params.I_zb << "\n";
    return run.finish();
}

}  // namespace

void RunManifest::write(const std::string& out_dir) const {
    nlohmann::json j;
    j["tool"] = "raceway";
    j["version"] = tool_version;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["wall_clock_s"] = wall_clock_s;
    if (!termination.empty()) j["termination"] = termination;
    if (config != nullptr) {
        std::ostringstream echo;
        emit_config(*config, echo);
        nlohmann::json jc;
        std::istringstream in(echo.str());
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trimmed = [](std::string s) {
                const auto b = s.find_first_not_of(' ');
                const auto e = s.find_last_not_of(' ');
                return b == std::string::npos ? "" : s.substr(b, e - b + 1);
            };
            jc[trimmed(line.substr(0, eq))] = trimmed(line.substr(eq + 1));
        }
        j["config"] = jc;
    }
    j["files"] = files;
    std::ofstream out(out_dir + "/manifest.json");
    if (!out) throw IoError("cannot write manifest in " + out_dir);
    out << j.dump(2) << "\n";
}

void emit_profile_csv(const hydro::FlowField& flow,
                      const hydro::TrajectoryBundle& bundle,
                      const transport::StateField& states,
                      const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,h,u,eta,zb";
    for (int i = 1; i <= bundle.Nz; ++i) out << ",z_" << i;
    for (int i = 1; i <= bundle.Nz; ++i) out << ",I_" << i;
    for (int i = 1; i <= bundle.Nz; ++i) out << ",C_" << i;
    out << "\n";
    for (int n = 0; n < flow.nodes(); ++n) {
        out << num(flow.x[n]) << "," << num(flow.h[n]) << "," << num(flow.u[n])
            << "," << num(flow.eta[n]) << "," << num(flow.zb[n]);
        for (int i = 0; i < bundle.Nz; ++i) out << "," << num(bundle.z[i][n]);
        for (int i = 0; i < bundle.Nz; ++i) out << "," << num(bundle.I[i][n]);
        for (int i = 0; i < bundle.Nz; ++i) out << "," << num(states.C[0][i][n]);
        out << "\n";
    }
}

void emit_trace_csv(const opt::OptimizationTrace& trace, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "iter,objective_d1,grad_norm,min_h\n";
    for (const auto& r : trace.records)
        out << r.iter << "," << num(r.objective) << "," << num(r.grad_norm) << ","
            << num(r.min_h) << "\n";
}

void emit_states_csv(const hydro::FlowField& flow,
                     const transport::StateField& states, int lap,
                     const std::string& path) {
    std::ofstream out = open_out(path);
    const int nz = static_cast<int>(states.C[lap].size());
    out << "x";
    for (int i = 1; i <= nz; ++i) out << ",C_" << i;
    out << "\n";
    for (int n = 0; n < flow.nodes(); ++n) {
        out << num(flow.x[n]);
        for (int i = 0; i < nz; ++i) out << "," << num(states.C[lap][i][n]);
        out << "\n";
    }
}

std::vector<std::string> run_experiment(const ExperimentConfig& cfg,
                                        const std::string& experiment,
                                        const std::string& out_dir) {
    Run run(cfg, experiment, out_dir);
    if (experiment == "simulate") return drive_simulate(run);
    if (experiment == "optimize") return drive_optimize(run);
    if (experiment == "gradcheck") return drive_gradcheck(run);
    if (experiment == "sweep-nz") return drive_sweep_nz(run);
    if (experiment == "sweep-N") return drive_sweep_n(run);
    if (experiment == "paddle") return drive_paddle(run);
    if (experiment == "areal") return drive_areal(run);
    throw ConfigError("unknown experiment: " + experiment);
}

}  // namespace raceway::io
