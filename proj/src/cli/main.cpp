#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hslra/completion.hpp"
#include "hslra/errors.hpp"
#include "hslra/experiment.hpp"
#include "hslra/hankel.hpp"
#include "hslra/io.hpp"
#include "hslra/parallel.hpp"
#include "hslra/signals.hpp"
#include "hslra/slra.hpp"

namespace {

using hslra::ArgumentError;
using nlohmann::json;

std::string env_of(const std::string& flag) {
    std::string s = "HSLRA_";
    for (char c : flag)
        s += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

// Attach the conventional environment variable to every option we add.
template <typename T>
CLI::Option* add_opt(CLI::App* sub, const std::string& name, T& var, const std::string& desc) {
    return sub->add_option("--" + name, var, desc)->envname(env_of(name));
}

CLI::Option* add_flag(CLI::App* sub, const std::string& name, bool& var,
                      const std::string& desc) {
    return sub->add_flag("--" + name, var, desc)->envname(env_of(name));
}

// Layering: explicit flag > environment variable > config file > default.
// The config file is JSON whose keys are long flag names; each key becomes a
// "--key=value" token unless the flag or its environment variable is already
// present.
std::vector<std::string> apply_config_file(const CLI::App& app, std::vector<std::string> tokens) {
    std::string sub_name;
    for (const std::string& t : tokens)
        if (!t.empty() && t[0] != '-') {
            sub_name = t;
            break;
        }

    std::string config_path;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] == "--config" && i + 1 < tokens.size()) config_path = tokens[i + 1];
        else if (tokens[i].rfind("--config=", 0) == 0) config_path = tokens[i].substr(9);
    }
    if (config_path.empty())
        if (const char* e = std::getenv("HSLRA_CONFIG")) config_path = e;
    if (config_path.empty() || sub_name.empty()) return tokens;

    const CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(sub_name);
    } catch (const CLI::OptionNotFound&) {
        return tokens; // let the parser report the bad subcommand
    }

    std::vector<std::string> known;
    for (const CLI::Option* o : sub->get_options())
        for (const std::string& l : o->get_lnames()) known.push_back(l);

    json j;
    try {
        j = json::parse(hslra::read_text(config_path));
    } catch (const json::exception& e) {
        throw hslra::IoError("config file " + config_path + ": " + e.what());
    }
    if (!j.is_object()) throw ArgumentError("config file must hold a JSON object");

    for (const auto& [key, val] : j.items()) {
        if (key == "config") throw ArgumentError("config files cannot nest 'config'");
        bool ok = false;
        for (const std::string& k : known)
            if (k == key) ok = true;
        if (!ok)
            throw ArgumentError("config key '" + key + "' is not a flag of '" + sub_name + "'");
        bool present = false;
        for (const std::string& t : tokens)
            if (t == "--" + key || t.rfind("--" + key + "=", 0) == 0) present = true;
        if (present || std::getenv(env_of(key).c_str()) != nullptr) continue;

        std::string value;
        if (val.is_string()) value = val.get<std::string>();
        else if (val.is_boolean()) value = val.get<bool>() ? "true" : "false";
        else if (val.is_number()) value = val.dump();
        else throw ArgumentError("config key '" + key + "' must be a scalar");
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

std::string path_in(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

void write_report(const std::string& dir, const json& report) {
    hslra::write_text(path_in(dir, "report.json"), report.dump(2) + "\n");
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    int n = 20;
    double damping = 0.05;
    double frequency = 0.2;
    double phase = 0.0;
    std::string noise = "white";
    double sigma = 0.3;
    double c = 0.2;
    double alpha = 0.5;
    std::uint64_t seed = 1;
    std::string out = "simulated.csv";
    std::string config;
};

int run_simulate(const SimulateArgs& a) {
    hslra::DampedSinusoidModel model;
    model.terms.push_back(hslra::DampedTerm{{1.0}, a.damping, a.frequency, a.phase});
    const hslra::TimeSeries signal = hslra::generate_damped(model, static_cast<std::size_t>(a.n));

    std::vector<double> noise(signal.length(), 0.0);
    if (a.noise != "none") {
        hslra::NoiseModel nm;
        nm.sigma = a.sigma;
        nm.c = a.c;
        nm.alpha = a.alpha;
        nm.seed = a.seed;
        if (a.noise == "white") nm.kind = hslra::NoiseKind::white;
        else if (a.noise == "alternating") nm.kind = hslra::NoiseKind::alternating;
        else if (a.noise == "red") nm.kind = hslra::NoiseKind::red;
        else throw ArgumentError("noise must be one of none, white, alternating, red");
        noise = hslra::generate_noise(nm, signal.length()).values();
    }

    std::vector<double> sum(signal.length());
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = signal[i] + noise[i];
    hslra::write_csv(a.out, {"signal", "noise", "sum"}, {signal.values(), noise, sum});
    std::cout << "wrote " << a.out << " (" << signal.length() << " rows)\n";
    return 0;
}

// -------------------------------------------------------------- approximate

struct ApproximateArgs {
    std::string input;
    std::string column = "0";
    std::string method = "cadzow";
    int rank = 3;
    std::size_t window = 10;
    std::size_t max_iters = 500;
    double stop_tol = 1e-9;
    bool final_correction = false;
    std::size_t trajectories = 10;
    double start_spread = 0.1;
    double start_noise_sd = -1.0;
    double backtrack = 0.1;
    double mutation = -1.0;
    double decay = 0.9;
    std::size_t cutoff = 30;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = ".";
    std::string config;
};

json approximate_config(const ApproximateArgs& a) {
    json c;
    c["input"] = a.input;
    c["column"] = a.column;
    c["method"] = a.method;
    c["rank"] = a.rank;
    c["window"] = a.window;
    c["max-iters"] = a.max_iters;
    c["stop-tol"] = a.stop_tol;
    c["final-correction"] = a.final_correction;
    c["trajectories"] = a.trajectories;
    c["start-spread"] = a.start_spread;
    c["start-noise-sd"] = a.start_noise_sd;
    c["backtrack"] = a.backtrack;
    c["mutation"] = a.mutation;
    c["decay"] = a.decay;
    c["cutoff"] = a.cutoff;
    c["seed"] = a.seed;
    return c;
}

int run_approximate(const ApproximateArgs& a) {
    const hslra::TimeSeries p(hslra::read_series_csv(a.input, a.column));

    hslra::SlraConfig cfg;
    cfg.rank = a.rank;
    cfg.window = a.window;
    cfg.max_iters = a.method == "ssa" ? 1 : a.max_iters;
    cfg.stop_tol = a.stop_tol;
    cfg.apply_final_correction = a.final_correction;

    hslra::SolveReport rep = [&] {
        if (a.method == "apbr") {
            hslra::ApbrConfig ac;
            ac.base = cfg;
            ac.trajectories = a.trajectories;
            ac.start_spread = a.start_spread;
            ac.start_noise_sd = a.start_noise_sd;
            ac.backtrack0 = a.backtrack;
            ac.mutation0 = a.mutation;
            ac.decay = a.decay;
            ac.cutoff = a.cutoff;
            ac.seed = a.seed;
            ac.threads = a.threads;
            return hslra::apbr(p, ac);
        }
        return hslra::cadzow(p, cfg); // cadzow or ssa
    }();

    hslra::write_csv(path_in(a.out, "approximant.csv"), {"approximant"},
                     {rep.approximant.values()});

    double l2 = 0.0;
    for (std::size_t i = 0; i < p.length(); ++i) {
        const double d = p[i] - rep.approximant[i];
        l2 += d * d;
    }

    json report;
    report["schema_version"] = 1;
    report["command"] = "approximate";
    report["config"] = approximate_config(a);
    report["results"] = {{"objective", rep.objective},
                         {"rank_residual", rep.rank_residual},
                         {"iterations", rep.iterations_used},
                         {"converged", rep.converged},
                         {"l2_distance", std::sqrt(l2)}};
    write_report(a.out, report);
    std::cout << "objective " << hslra::fmt_double(rep.objective) << ", "
              << rep.iterations_used << " iterations, "
              << (rep.converged ? "converged" : "not converged") << "\n";
    return 0;
}

// ----------------------------------------------------------------- forecast

struct ForecastArgs {
    std::string input;
    std::string column = "0";
    std::size_t train_len = 0; // 0 = all rows
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::string mode = "regularized";
    int rank = 2;
    double tau = 0.0;
    double gamma = 1.0;
    std::string loss = "unsquared";
    std::string weights = "unit";
    double a = 1.0;
    double l = 0.0;
    double rho = 1.0;
    std::size_t admm_iters = 2000;
    double admm_tol = 1e-7;
    double a_min = 1e-4, a_max = 1e-1;
    std::size_t a_count = 1;
    double l_min = 0.0, l_max = 0.05;
    std::size_t l_count = 1;
    double gamma_min = 1e-2, gamma_max = 1e2;
    std::size_t gamma_count = 1;
    int threads = 1;
    std::string out = ".";
    std::string config;
};

json forecast_config(const ForecastArgs& a) {
    json c;
    c["input"] = a.input;
    c["column"] = a.column;
    c["train-len"] = a.train_len;
    c["horizon"] = a.horizon;
    c["window"] = a.window;
    c["mode"] = a.mode;
    c["rank"] = a.rank;
    c["tau"] = a.tau;
    c["gamma"] = a.gamma;
    c["loss"] = a.loss;
    c["weights"] = a.weights;
    c["a"] = a.a;
    c["l"] = a.l;
    c["rho"] = a.rho;
    c["admm-iters"] = a.admm_iters;
    c["admm-tol"] = a.admm_tol;
    c["a-min"] = a.a_min;
    c["a-max"] = a.a_max;
    c["a-count"] = a.a_count;
    c["l-min"] = a.l_min;
    c["l-max"] = a.l_max;
    c["l-count"] = a.l_count;
    c["gamma-min"] = a.gamma_min;
    c["gamma-max"] = a.gamma_max;
    c["gamma-count"] = a.gamma_count;
    return c;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || hi < lo) throw ArgumentError("need 0 < min <= max for a log grid");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = count == 1 ? lo
                          : lo * std::pow(hi / lo, static_cast<double>(i) /
                                                       static_cast<double>(count - 1));
    return g;
}

std::vector<double> lin_spaced(double lo, double hi, std::size_t count) {
    if (hi < lo) throw ArgumentError("need min <= max for a linear grid");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = count == 1 ? lo
                          : lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(count - 1);
    return g;
}

int run_forecast(const ForecastArgs& a) {
    const std::vector<double> raw = hslra::read_series_csv(a.input, a.column);
    const std::size_t n = a.train_len == 0 ? raw.size() : a.train_len;
    if (n < 2 || n > raw.size())
        throw ArgumentError("train-len must be in [2, rows]");
    const std::size_t m = a.horizon;
    const bool have_truth = m >= 1 && raw.size() >= n + m;

    hslra::CompletionProblem prob;
    prob.known = hslra::TimeSeries(std::vector<double>(raw.begin(), raw.begin() + n));
    prob.horizon = m;
    prob.window = a.window;

    hslra::WeightScheme ws;
    if (a.weights == "unit") ws.kind = hslra::WeightScheme::Kind::unit;
    else if (a.weights == "frobenius") ws.kind = hslra::WeightScheme::Kind::hankel_frobenius;
    else if (a.weights == "exponential") ws.kind = hslra::WeightScheme::Kind::exponential;
    else throw ArgumentError("weights must be one of unit, frobenius, exponential");
    ws.a = a.a;
    ws.l = a.l;
    prob.weights = ws.build(n, a.window);

    const hslra::FitLoss loss =
        a.loss == "squared" ? hslra::FitLoss::squared : hslra::FitLoss::unsquared;
    if (a.loss != "squared" && a.loss != "unsquared")
        throw ArgumentError("loss must be squared or unsquared");

    hslra::AdmmOptions opts;
    opts.rho = a.rho;
    opts.max_iters = a.admm_iters;
    opts.tol = a.admm_tol;

    auto rmse_of = [&](const hslra::TimeSeries& completed) -> std::optional<double> {
        if (!have_truth) return std::nullopt;
        const hslra::TimeSeries truth(
            std::vector<double>(raw.begin(), raw.begin() + (n + m)));
        return hslra::forecast_rmse(truth, completed, m);
    };

    const bool sweep_al = a.a_count > 1 || a.l_count > 1;
    const bool sweep_gamma = a.gamma_count > 1;
    if (sweep_al && sweep_gamma)
        throw ArgumentError("choose one sweep: (a, l) or gamma");

    json report;
    report["schema_version"] = 1;
    report["command"] = "forecast";
    report["config"] = forecast_config(a);

    if (sweep_al || sweep_gamma) {
        if (a.mode != "regularized")
            throw ArgumentError("grid sweeps require --mode regularized");
        if (!have_truth)
            throw ArgumentError("grid sweeps need held-out samples: rows >= train-len + horizon");

        struct Cell {
            double a = 0.0, l = 0.0, gamma = 0.0, rmse = 0.0;
            bool converged = false;
            hslra::CompletionReport rep;
        };
        std::vector<Cell> cells;
        if (sweep_al) {
            for (double av : log_spaced(a.a_min, a.a_max, a.a_count))
                for (double lv : lin_spaced(a.l_min, a.l_max, a.l_count)) {
                    Cell c;
                    c.a = av;
                    c.l = lv;
                    c.gamma = a.gamma;
                    cells.push_back(c);
                }
        } else {
            for (double gv : log_spaced(a.gamma_min, a.gamma_max, a.gamma_count)) {
                Cell c;
                c.a = a.a;
                c.l = a.l;
                c.gamma = gv;
                cells.push_back(c);
            }
        }

        hslra::parallel_for(cells.size(), a.threads, [&](std::size_t i) {
            Cell& c = cells[i];
            hslra::CompletionProblem cp = prob;
            if (sweep_al) {
                hslra::WeightScheme w;
                w.kind = hslra::WeightScheme::Kind::exponential;
                w.a = c.a;
                w.l = c.l;
                cp.weights = w.build(n, a.window);
            }
            cp.mode = hslra::CompletionMode::regularized;
            c.rep = hslra::nn_complete_regularized(cp, c.gamma, loss, opts);
            c.rmse = *rmse_of(c.rep.completed);
            c.converged = c.rep.converged;
        });

        std::string csv = sweep_al ? "a,l,rmse\n" : "gamma,rmse\n";
        for (const Cell& c : cells) {
            if (sweep_al)
                csv += hslra::fmt_double(c.a) + "," + hslra::fmt_double(c.l) + "," +
                       hslra::fmt_double(c.rmse) + "\n";
            else
                csv += hslra::fmt_double(c.gamma) + "," + hslra::fmt_double(c.rmse) + "\n";
        }
        hslra::write_text(path_in(a.out, "grid.csv"), csv);

        const Cell* best = nullptr;
        std::size_t conv = 0;
        for (const Cell& c : cells) {
            if (!c.converged) continue;
            ++conv;
            if (!best || c.rmse < best->rmse) best = &c;
        }
        report["results"] = {{"grid_cells", cells.size()}, {"grid_converged", conv}};
        if (best) {
            report["results"]["best"] = {{"a", best->a},
                                         {"l", best->l},
                                         {"gamma", best->gamma},
                                         {"rmse", best->rmse},
                                         {"iterations", best->rep.iterations}};
            report["results"]["converged"] = true;
            hslra::write_csv(path_in(a.out, "completed.csv"), {"completed"},
                             {best->rep.completed.values()});
            if (m >= 1)
                hslra::write_csv(path_in(a.out, "forecast.csv"), {"forecast"},
                                 {best->rep.forecast});
            write_report(a.out, report);
            std::cout << "best rmse " << hslra::fmt_double(best->rmse) << " at ("
                      << hslra::fmt_double(best->a) << ", " << hslra::fmt_double(best->l)
                      << ", gamma " << hslra::fmt_double(best->gamma) << ")\n";
            return 0;
        }
        report["results"]["best"] = nullptr;
        report["results"]["converged"] = false;
        write_report(a.out, report);
        std::cerr << "no grid cell converged\n";
        return 3;
    }

    // single solve
    hslra::CompletionReport rep;
    if (a.mode == "exact") {
        prob.mode = hslra::CompletionMode::exact_constraint;
        const hslra::TimeSeries completed = hslra::exact_complete(prob, a.rank);
        rep.completed = completed;
        rep.forecast.assign(completed.values().end() - static_cast<long>(m),
                            completed.values().end());
        rep.converged = true;
    } else if (a.mode == "exactfit") {
        prob.mode = hslra::CompletionMode::exact_constraint;
        rep = hslra::nn_complete_exactfit(prob, opts);
    } else if (a.mode == "tolerance") {
        prob.mode = hslra::CompletionMode::tolerance;
        rep = hslra::nn_complete_tolerance(prob, a.tau, opts);
    } else if (a.mode == "regularized") {
        prob.mode = hslra::CompletionMode::regularized;
        rep = hslra::nn_complete_regularized(prob, a.gamma, loss, opts);
    } else {
        throw ArgumentError("mode must be one of exact, exactfit, tolerance, regularized");
    }

    hslra::write_csv(path_in(a.out, "completed.csv"), {"completed"},
                     {rep.completed.values()});
    if (m >= 1)
        hslra::write_csv(path_in(a.out, "forecast.csv"), {"forecast"}, {rep.forecast});

    json results;
    results["converged"] = rep.converged;
    results["iterations"] = rep.iterations;
    if (a.mode != "exact") {
        results["nuclear_final"] = rep.nuclear_final;
        results["primal_residual"] = rep.primal_residual;
        results["dual_residual"] = rep.dual_residual;
        results["gamma_used"] = rep.gamma_used;
    }
    if (const std::optional<double> r = rmse_of(rep.completed)) results["rmse"] = *r;
    else results["rmse"] = nullptr;
    results["forecast"] = rep.forecast;
    report["results"] = results;
    write_report(a.out, report);

    std::cout << (rep.converged ? "converged" : "not converged") << " after "
              << rep.iterations << " iterations\n";
    return rep.converged ? 0 : 3;
}

// --------------------------------------------------------------- experiment

struct ExperimentArgs {
    hslra::ExperimentConfig cfg;
    std::string config;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    const hslra::ExperimentOutcome out = hslra::run_experiment(a.cfg);
    for (const std::string& f : out.files) std::cout << "wrote " << f << "\n";
    return 0;
}

// -------------------------------------------------------------- rankprofile

struct RankProfileArgs {
    std::string input;
    std::string column = "0";
    double tol = 1e-8;
    std::string out = ".";
    std::string config;
};

int run_rankprofile(const RankProfileArgs& a) {
    const hslra::TimeSeries p(hslra::read_series_csv(a.input, a.column));
    const std::vector<int> ranks = hslra::rank_profile(p, a.tol);
    const std::size_t nn = p.length();

    std::string csv = "window,rank\n";
    for (std::size_t i = 0; i < ranks.size(); ++i)
        csv += std::to_string(i + 1) + "," + std::to_string(ranks[i]) + "\n";
    hslra::write_text(path_in(a.out, "profile.csv"), csv);

    int d = 0;
    for (int r : ranks) d = std::max(d, r);
    bool plateau = true;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        const int window = static_cast<int>(i + 1);
        const int cols = static_cast<int>(nn) - window + 1;
        if (ranks[i] != std::min({window, cols, d})) plateau = false;
    }
    // full-rank data also matches min(window, cols, d) with d = max min(L, K);
    // a believable plateau needs d strictly below that ceiling
    if (2 * static_cast<std::size_t>(d) >= nn) plateau = false;

    json report;
    report["schema_version"] = 1;
    report["command"] = "rankprofile";
    report["config"] = {{"input", a.input}, {"column", a.column}, {"tol", a.tol}};
    report["results"] = {{"plateau_detected", plateau},
                         {"rank", plateau ? json(d) : json(nullptr)}};
    write_report(a.out, report);
    if (plateau) std::cout << "plateau rank " << d << "\n";
    else std::cout << "no plateau\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hankel low-rank approximation and forecasting toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* s = app.add_subcommand("simulate", "Generate a damped sinusoid plus noise");
    add_opt(s, "n", sim.n, "series length")->check(CLI::PositiveNumber);
    add_opt(s, "damping", sim.damping, "exponent per sample");
    add_opt(s, "frequency", sim.frequency, "cycles per sample, in [0, 0.5]");
    add_opt(s, "phase", sim.phase, "phase offset in radians");
    add_opt(s, "noise", sim.noise, "none | white | alternating | red")
        ->check(CLI::IsMember({"none", "white", "alternating", "red"}));
    add_opt(s, "sigma", sim.sigma, "noise scale");
    add_opt(s, "c", sim.c, "alternating amplitude");
    add_opt(s, "alpha", sim.alpha, "red-noise AR coefficient, |alpha| < 1");
    add_opt(s, "seed", sim.seed, "random seed");
    add_opt(s, "out", sim.out, "output CSV path");
    add_opt(s, "config", sim.config, "JSON config file (keys = flag names)");

    ApproximateArgs ap;
    CLI::App* c = app.add_subcommand("approximate", "Rank-r approximation of a series");
    add_opt(c, "input", ap.input, "input CSV")->required();
    add_opt(c, "column", ap.column, "column index or header name");
    add_opt(c, "method", ap.method, "cadzow | apbr | ssa")
        ->check(CLI::IsMember({"cadzow", "apbr", "ssa"}));
    add_opt(c, "rank", ap.rank, "target rank");
    add_opt(c, "window", ap.window, "embedding window L");
    add_opt(c, "max-iters", ap.max_iters, "iteration cap");
    add_opt(c, "stop-tol", ap.stop_tol, "relative change stopping tolerance");
    add_flag(c, "final-correction", ap.final_correction, "rescale the result optimally");
    add_opt(c, "trajectories", ap.trajectories, "multistart trajectory count");
    add_opt(c, "start-spread", ap.start_spread, "randomized start mixing weight");
    add_opt(c, "start-noise-sd", ap.start_noise_sd, "start noise sd (negative: rms of input)");
    add_opt(c, "backtrack", ap.backtrack, "initial pull toward the data");
    add_opt(c, "mutation", ap.mutation, "initial mutation sd (negative: 0.1 rms)");
    add_opt(c, "decay", ap.decay, "schedule decay factor");
    add_opt(c, "cutoff", ap.cutoff, "iteration at which schedules stop");
    add_opt(c, "seed", ap.seed, "random seed");
    add_opt(c, "threads", ap.threads, "worker threads");
    add_opt(c, "out", ap.out, "output directory");
    add_opt(c, "config", ap.config, "JSON config file (keys = flag names)");

    ForecastArgs fc;
    CLI::App* f = app.add_subcommand("forecast", "Complete a series beyond its known prefix");
    add_opt(f, "input", fc.input, "input CSV")->required();
    add_opt(f, "column", fc.column, "column index or header name");
    add_opt(f, "train-len", fc.train_len, "known prefix length (0 = all rows)");
    add_opt(f, "horizon", fc.horizon, "samples to forecast");
    add_opt(f, "window", fc.window, "embedding window over the completed length")->required();
    add_opt(f, "mode", fc.mode, "exact | exactfit | tolerance | regularized")
        ->check(CLI::IsMember({"exact", "exactfit", "tolerance", "regularized"}));
    add_opt(f, "rank", fc.rank, "recurrence order for exact mode");
    add_opt(f, "tau", fc.tau, "fit tolerance for tolerance mode");
    add_opt(f, "gamma", fc.gamma, "nuclear-norm weight for regularized mode");
    add_opt(f, "loss", fc.loss, "unsquared | squared")
        ->check(CLI::IsMember({"unsquared", "squared"}));
    add_opt(f, "weights", fc.weights, "unit | frobenius | exponential")
        ->check(CLI::IsMember({"unit", "frobenius", "exponential"}));
    add_opt(f, "a", fc.a, "exponential weight scale");
    add_opt(f, "l", fc.l, "exponential weight rate");
    add_opt(f, "rho", fc.rho, "splitting penalty");
    add_opt(f, "admm-iters", fc.admm_iters, "solver iteration cap");
    add_opt(f, "admm-tol", fc.admm_tol, "solver tolerance");
    add_opt(f, "a-min", fc.a_min, "sweep: smallest a");
    add_opt(f, "a-max", fc.a_max, "sweep: largest a");
    add_opt(f, "a-count", fc.a_count, "sweep: a grid size (log-spaced)");
    add_opt(f, "l-min", fc.l_min, "sweep: smallest l");
    add_opt(f, "l-max", fc.l_max, "sweep: largest l");
    add_opt(f, "l-count", fc.l_count, "sweep: l grid size (linear)");
    add_opt(f, "gamma-min", fc.gamma_min, "sweep: smallest gamma");
    add_opt(f, "gamma-max", fc.gamma_max, "sweep: largest gamma");
    add_opt(f, "gamma-count", fc.gamma_count, "sweep: gamma grid size (log-spaced)");
    add_opt(f, "threads", fc.threads, "worker threads");
    add_opt(f, "out", fc.out, "output directory");
    add_opt(f, "config", fc.config, "JSON config file (keys = flag names)");

    ExperimentArgs ex;
    CLI::App* e = app.add_subcommand("experiment", "Run a named reproduction study");
    add_opt(e, "name", ex.cfg.name,
            "example1-white | example1-deterministic | example1-red | example2-cowtemp")
        ->required();
    add_opt(e, "trials", ex.cfg.trials, "trials per noise level");
    add_opt(e, "seed", ex.cfg.seed, "base seed");
    add_opt(e, "threads", ex.cfg.threads, "worker threads");
    add_opt(e, "out", ex.cfg.out_dir, "output directory");
    add_opt(e, "n", ex.cfg.n, "series length");
    add_opt(e, "window", ex.cfg.window, "embedding window");
    add_opt(e, "rank", ex.cfg.rank, "target rank");
    add_opt(e, "damping", ex.cfg.damping, "signal damping");
    add_opt(e, "frequency", ex.cfg.frequency, "signal frequency");
    add_opt(e, "max-iters", ex.cfg.max_iters, "solver iteration cap");
    add_opt(e, "stop-tol", ex.cfg.stop_tol, "solver stopping tolerance");
    add_opt(e, "trajectories", ex.cfg.trajectories, "multistart trajectory count");
    add_opt(e, "data", ex.cfg.data, "forecasting dataset CSV");
    add_opt(e, "column", ex.cfg.column, "dataset column");
    add_opt(e, "train-len", ex.cfg.train_len, "known prefix length");
    add_opt(e, "horizon", ex.cfg.horizon, "forecast length");
    add_opt(e, "forecast-window", ex.cfg.forecast_window, "embedding window for forecasting");
    add_opt(e, "gamma", ex.cfg.gamma, "nuclear-norm weight");
    add_opt(e, "a-min", ex.cfg.a_min, "weight sweep: smallest a");
    add_opt(e, "a-max", ex.cfg.a_max, "weight sweep: largest a");
    add_opt(e, "a-count", ex.cfg.a_count, "weight sweep: a grid size");
    add_opt(e, "l-min", ex.cfg.l_min, "weight sweep: smallest l");
    add_opt(e, "l-max", ex.cfg.l_max, "weight sweep: largest l");
    add_opt(e, "l-count", ex.cfg.l_count, "weight sweep: l grid size");
    add_opt(e, "admm-iters", ex.cfg.admm_iters, "solver iteration cap");
    add_opt(e, "admm-tol", ex.cfg.admm_tol, "solver tolerance");
    add_opt(e, "config", ex.config, "JSON config file (keys = flag names)");

    RankProfileArgs rp;
    CLI::App* r = app.add_subcommand("rankprofile", "Numerical rank for every window size");
    add_opt(r, "input", rp.input, "input CSV")->required();
    add_opt(r, "column", rp.column, "column index or header name");
    add_opt(r, "tol", rp.tol, "relative singular value threshold");
    add_opt(r, "out", rp.out, "output directory");
    add_opt(r, "config", rp.config, "JSON config file (keys = flag names)");

    try {
        std::vector<std::string> tokens(argv + 1, argv + argc);
        tokens = apply_config_file(app, std::move(tokens));
        std::vector<const char*> ptrs;
        ptrs.push_back(argv[0]);
        for (const std::string& t : tokens) ptrs.push_back(t.c_str());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());

        if (s->parsed()) return run_simulate(sim);
        if (c->parsed()) return run_approximate(ap);
        if (f->parsed()) return run_forecast(fc);
        if (e->parsed()) return run_experiment_cmd(ex);
        if (r->parsed()) return run_rankprofile(rp);
        return 1;
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        app.exit(err);
        return 1;
    } catch (const hslra::IoError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const hslra::NumericalError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const ArgumentError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const hslra::RankMismatchError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const hslra::NonContinuableError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
