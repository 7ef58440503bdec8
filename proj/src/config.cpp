#include "raceway/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace raceway::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_items(const std::string& s) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

double parse_double(const std::string& v, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError(ctx + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, const std::string& ctx) {
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError(ctx + ": expected an integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, const std::string& ctx) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ParseError(ctx + ": expected true/false, got '" + v + "'");
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

ExperimentConfig parse_config_stream(std::istream& in, const std::string& name) {
    ExperimentConfig cfg;
    using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                      const std::string&)>;
    auto dbl = [](double ExperimentConfig::* f) {
        return Setter([f](ExperimentConfig& c, const std::string& v,
                          const std::string& ctx) { c.*f = parse_double(v, ctx); });
    };
    auto integer = [](int ExperimentConfig::* f) {
        return Setter([f](ExperimentConfig& c, const std::string& v,
                          const std::string& ctx) {
            c.*f = static_cast<int>(parse_int(v, ctx));
        });
    };
    auto boolean = [](bool ExperimentConfig::* f) {
        return Setter([f](ExperimentConfig& c, const std::string& v,
                          const std::string& ctx) { c.*f = parse_bool(v, ctx); });
    };

    const std::map<std::string, Setter> table = {
        {"k_r", dbl(&ExperimentConfig::k_r)},
        {"k_d", dbl(&ExperimentConfig::k_d)},
        {"tau", dbl(&ExperimentConfig::tau)},
        {"sigma", dbl(&ExperimentConfig::sigma)},
        {"k", dbl(&ExperimentConfig::k)},
        {"R", dbl(&ExperimentConfig::R)},
        {"L", dbl(&ExperimentConfig::L)},
        {"Q0", dbl(&ExperimentConfig::Q0)},
        {"a0", dbl(&ExperimentConfig::a0)},
        {"zb0", dbl(&ExperimentConfig::zb0)},
        {"g", dbl(&ExperimentConfig::g)},
        {"I_s", dbl(&ExperimentConfig::I_s)},
        {"I_b",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
             c.I_b = parse_double(v, ctx);
             c.i_b_explicit = true;
         })},
        {"dx", dbl(&ExperimentConfig::dx)},
        {"Nz", integer(&ExperimentConfig::Nz)},
        {"alpha0", dbl(&ExperimentConfig::alpha0)},
        {"alpha1", dbl(&ExperimentConfig::alpha1)},
        {"tol", dbl(&ExperimentConfig::tol)},
        {"rho", dbl(&ExperimentConfig::rho)},
        {"max_iters", integer(&ExperimentConfig::max_iters)},
        {"N", integer(&ExperimentConfig::N)},
        {"seed",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
             c.seed = static_cast<std::uint64_t>(parse_int(v, ctx));
         })},
        {"optimize_a0", boolean(&ExperimentConfig::optimize_a0)},
        {"backtracking", boolean(&ExperimentConfig::backtracking)},
        {"variant",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string&) {
             c.variant = v;
         })},
        {"C0",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string&) {
             c.C0 = v;
         })},
        {"laps", integer(&ExperimentConfig::laps)},
        {"a",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
             c.a.clear();
             for (const auto& item : split_items(v))
                 c.a.push_back(parse_double(item, ctx));
         })},
        {"n_values",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
             c.n_values.clear();
             for (const auto& item : split_items(v))
                 c.n_values.push_back(static_cast<int>(parse_int(item, ctx)));
         })},
        {"nz_values",
         Setter([](ExperimentConfig& c, const std::string& v, const std::string& ctx) {
             c.nz_values.clear();
             for (const auto& item : split_items(v))
                 c.nz_values.push_back(static_cast<int>(parse_int(item, ctx)));
         })},
        {"n_guesses", integer(&ExperimentConfig::n_guesses)},
        {"guess_amp", dbl(&ExperimentConfig::guess_amp)},
        {"eta_fd", dbl(&ExperimentConfig::eta_fd)},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string ctx = name + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(ctx + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(ctx + ": empty key");
        const auto it = table.find(key);
        if (it == table.end()) throw UnknownKey(ctx + ": unknown key '" + key + "'");
        it->second(cfg, value, ctx);
    }
    if (!cfg.i_b_explicit) cfg.I_b = 0.01 * cfg.I_s;
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open config file");
    return parse_config_stream(in, path);
}

void ExperimentConfig::validate() const {
    han_params().validate();
    auto positive = [](double v, const char* nm) {
        if (!(v > 0))
            throw UnitViolation(std::string(nm) + " must be positive");
    };
    positive(L, "L");
    positive(Q0, "Q0");
    positive(a0, "a0");
    positive(g, "g");
    positive(I_s, "I_s");
    positive(dx, "dx");
    positive(tol, "tol");
    positive(rho, "rho");
    positive(eta_fd, "eta_fd");
    if (!(I_b > 0 && I_b < I_s)) throw UnitViolation("I_b must lie in (0, I_s)");
    if (Nz < 1) throw UnitViolation("Nz must be >= 1");
    if (alpha0 <= 0) throw UnitViolation("alpha0 must be positive");
    if (alpha1 < 0) throw UnitViolation("alpha1 must be nonnegative");
    if (max_iters < 1) throw UnitViolation("max_iters must be >= 1");
    if (N < 0) throw UnitViolation("N must be >= 0");
    if (laps < 1) throw UnitViolation("laps must be >= 1");
    if (n_guesses < 1) throw UnitViolation("n_guesses must be >= 1");
    if (guess_amp < 0) throw UnitViolation("guess_amp must be nonnegative");
    for (int v : n_values)
        if (v < 0) throw UnitViolation("n_values entries must be >= 0");
    for (int v : nz_values)
        if (v < 1) throw UnitViolation("nz_values entries must be >= 1");
    if (!variant_from_name(variant))
        throw UnitViolation("variant must be one of single/multi/periodic/paddle/areal");
    if (C0 != "steady") {
        const double c = parse_double(C0, "C0");
        if (c < 0.0 || c > 1.0) throw UnitViolation("C0 must lie in [0, 1]");
    }
}

han::HanParams ExperimentConfig::han_params() const {
    return {k_r, k_d, tau, sigma, k, R};
}

hydro::HydroConfig ExperimentConfig::hydro_config() const {
    hydro::HydroConfig h;
    h.L = L;
    h.Q0 = Q0;
    h.g = g;
    h.h0 = a0;
    h.zb0 = zb0;
    h.Nx = static_cast<int>(std::llround(L / dx));
    h.I_s = I_s;
    h.mode = hydro::LightMode::fixed_extinction;
    h.eps = std::log(I_s / I_b) / a0;
    return h;
}

opt::OptimizerConfig ExperimentConfig::optimizer_config() const {
    opt::OptimizerConfig oc;
    oc.rho = rho;
    oc.tol = tol;
    oc.max_iters = max_iters;
    oc.N = N;
    oc.seed = seed;
    oc.optimize_a0 = optimize_a0;
    oc.backtracking = backtracking;
    return oc;
}

Problem ExperimentConfig::problem() const {
    Problem pr;
    pr.hydro_cfg = hydro_config();
    pr.han_params = han_params();
    pr.variant = *variant_from_name(variant);
    pr.Nz = Nz;
    pr.c0_fixed = (C0 == "steady") ? std::nullopt
                                   : std::optional<double>(parse_double(C0, "C0"));
    if (pr.variant == Variant::paddle)
        pr.wheel = transport::PaddleWheel::anti_diagonal(Nz, laps);
    if (pr.variant == Variant::areal) {
        pr.areal_params.alpha0 = alpha0;
        pr.areal_params.alpha1 = alpha1;
        pr.areal_params.I_s = I_s;
        pr.areal_params.I_zb = han::compensation_intensity(pr.han_params, I_s);
        pr.areal_params.validate();
        pr.hydro_cfg.mode = hydro::LightMode::areal_compensation;
        pr.hydro_cfg.I_zb = pr.areal_params.I_zb;
    }
    return pr;
}

hydro::FourierShape ExperimentConfig::initial_shape() const {
    hydro::FourierShape s;
    s.a0 = a0;
    s.a = a;
    if (static_cast<int>(s.a.size()) < N) s.a.resize(N, 0.0);
    return s;
}

std::vector<int> ExperimentConfig::resolved_nz_values() const {
    if (!nz_values.empty()) return nz_values;
    std::vector<int> v;
    for (int nz = 1; nz <= 100; nz += 3) v.push_back(nz);
    for (int extra : {10, 50, 100})
        if (std::find(v.begin(), v.end(), extra) == v.end()) v.push_back(extra);
    std::sort(v.begin(), v.end());
    return v;
}

void emit_config(const ExperimentConfig& cfg, std::ostream& out) {
    auto kv = [&out](const char* key, const std::string& v) {
        out << key << " = " << v << "\n";
    };
    kv("k_r", fmt(cfg.k_r));
    kv("k_d", fmt(cfg.k_d));
    kv("tau", fmt(cfg.tau));
    kv("sigma", fmt(cfg.sigma));
    kv("k", fmt(cfg.k));
    kv("R", fmt(cfg.R));
    kv("L", fmt(cfg.L));
    kv("Q0", fmt(cfg.Q0));
    kv("a0", fmt(cfg.a0));
    kv("zb0", fmt(cfg.zb0));
    kv("g", fmt(cfg.g));
    kv("I_s", fmt(cfg.I_s));
    kv("I_b", fmt(cfg.I_b));
    kv("dx", fmt(cfg.dx));
    kv("Nz", std::to_string(cfg.Nz));
    kv("alpha0", fmt(cfg.alpha0));
    kv("alpha1", fmt(cfg.alpha1));
    kv("tol", fmt(cfg.tol));
    kv("rho", fmt(cfg.rho));
    kv("max_iters", std::to_string(cfg.max_iters));
    kv("N", std::to_string(cfg.N));
    kv("seed", std::to_string(cfg.seed));
    kv("optimize_a0", cfg.optimize_a0 ? "true" : "false");
    kv("backtracking", cfg.backtracking ? "true" : "false");
    kv("variant", cfg.variant);
    kv("C0", cfg.C0);
    kv("laps", std::to_string(cfg.laps));
    if (!cfg.a.empty()) {
        std::string s;
        for (double v : cfg.a) s += (s.empty() ? "" : ", ") + fmt(v);
        kv("a", s);
    }
    {
        std::string s;
        for (int v : cfg.n_values) s += (s.empty() ? "" : ", ") + std::to_string(v);
        kv("n_values", s);
    }
    if (!cfg.nz_values.empty()) {
        std::string s;
        for (int v : cfg.nz_values) s += (s.empty() ? "" : ", ") + std::to_string(v);
        kv("nz_values", s);
    }
    kv("n_guesses", std::to_string(cfg.n_guesses));
    if (cfg.guess_amp > 0) kv("guess_amp", fmt(cfg.guess_amp));
    kv("eta_fd", fmt(cfg.eta_fd));
}

}  // namespace raceway::io
