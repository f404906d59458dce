#include "hslra/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hslra/completion.hpp"
#include "hslra/errors.hpp"
#include "hslra/hankel.hpp"
#include "hslra/io.hpp"
#include "hslra/parallel.hpp"
#include "hslra/rng.hpp"
#include "hslra/signals.hpp"
#include "hslra/slra.hpp"

namespace hslra {

namespace {

using nlohmann::json;

constexpr double kCValues[4] = {0.2, 0.4, 0.6, 0.8};
constexpr double kSigmas[3] = {0.3, 0.6, 0.9};

json config_json(const ExperimentConfig& c) {
    // threads and out-dir deliberately left out: neither affects the numbers.
    json j;
    j["name"] = c.name;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["n"] = c.n;
    j["window"] = c.window;
    j["rank"] = c.rank;
    j["damping"] = c.damping;
    j["frequency"] = c.frequency;
    j["max-iters"] = c.max_iters;
    j["stop-tol"] = c.stop_tol;
    j["trajectories"] = c.trajectories;
    j["data"] = c.data;
    j["column"] = c.column;
    j["train-len"] = c.train_len;
    j["horizon"] = c.horizon;
    j["forecast-window"] = c.forecast_window;
    j["gamma"] = c.gamma;
    j["a-min"] = c.a_min;
    j["a-max"] = c.a_max;
    j["a-count"] = c.a_count;
    j["l-min"] = c.l_min;
    j["l-max"] = c.l_max;
    j["l-count"] = c.l_count;
    j["admm-iters"] = c.admm_iters;
    j["admm-tol"] = c.admm_tol;
    return j;
}

std::string file_in(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

TimeSeries base_signal(const ExperimentConfig& c) {
    DampedSinusoidModel model;
    model.terms.push_back(DampedTerm{{1.0}, c.damping, c.frequency, 0.0});
    return generate_damped(model, static_cast<std::size_t>(c.n));
}

TimeSeries add(const TimeSeries& a, const TimeSeries& b) {
    std::vector<double> v(a.length());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return TimeSeries(std::move(v));
}

double l2_dist(const TimeSeries& a, const TimeSeries& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.length(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// ||S(a) - S(b)||_F via the antidiagonal multiplicities.
double embedded_dist(const TimeSeries& a, const TimeSeries& b, std::size_t window) {
    const AntidiagWeights w = antidiag_weights(HankelStructure(a.length(), window));
    double s = 0.0;
    for (std::size_t i = 0; i < a.length(); ++i) {
        const double d = a[i] - b[i];
        s += static_cast<double>(w.kappa[i]) * d * d;
    }
    return std::sqrt(s);
}

SlraConfig solver_config(const ExperimentConfig& c) {
    SlraConfig s;
    s.rank = c.rank;
    s.window = static_cast<std::size_t>(c.window);
    s.max_iters = static_cast<std::size_t>(c.max_iters);
    s.stop_tol = c.stop_tol;
    return s;
}

ApbrConfig apbr_config(const ExperimentConfig& c, std::uint64_t seed) {
    ApbrConfig a;
    a.base = solver_config(c);
    a.trajectories = static_cast<std::size_t>(c.trajectories);
    a.seed = seed;
    a.threads = 1; // trial-level parallelism already covers the cores
    return a;
}

struct TrialRow {
    double key = 0.0; // c or sigma
    int trial = 0;
    std::string method;
    double l2 = 0.0;
    double l2sq = 0.0;
    double emb = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

void append_csv_row(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    out += '\n';
}

bool within_half_percent(const std::vector<double>& got, const double (&ref)[4]) {
    for (int i = 0; i < 4; ++i)
        if (std::abs(got[static_cast<std::size_t>(i)] - ref[i]) > 0.005 * ref[i]) return false;
    return true;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

ExperimentOutcome run_deterministic(const ExperimentConfig& cfg) {
    const TimeSeries signal = base_signal(cfg);
    std::vector<TrialRow> rows(8); // 4 c values x {cadzow, apbr}

    parallel_for(4, cfg.threads, [&](std::size_t ci) {
        NoiseModel nm;
        nm.kind = NoiseKind::alternating;
        nm.c = kCValues[ci];
        const TimeSeries p = add(signal, generate_noise(nm, signal.length()));

        const SolveReport cad = cadzow(p, solver_config(cfg));
        const std::uint64_t apbr_seed = Rng::stream(cfg.seed, (ci << 1) | 1u);
        const SolveReport ap = apbr(p, apbr_config(cfg, apbr_seed));

        const SolveReport* reports[2] = {&cad, &ap};
        const char* names[2] = {"cadzow", "apbr"};
        for (int m = 0; m < 2; ++m) {
            TrialRow& r = rows[ci * 2 + static_cast<std::size_t>(m)];
            r.key = kCValues[ci];
            r.method = names[m];
            r.l2 = l2_dist(p, reports[m]->approximant);
            r.l2sq = r.l2 * r.l2;
            r.emb = embedded_dist(p, reports[m]->approximant,
                                  static_cast<std::size_t>(cfg.window));
            r.iterations = reports[m]->iterations_used;
            r.converged = reports[m]->converged;
        }
    });

    ExperimentOutcome out;
    out.c_values.assign(kCValues, kCValues + 4);

    std::string csv = "c,method,l2,l2_squared,hankel_weighted,iterations,converged\n";
    for (const TrialRow& r : rows)
        append_csv_row(csv, {fmt_double(r.key), r.method, fmt_double(r.l2),
                             fmt_double(r.l2sq), fmt_double(r.emb),
                             std::to_string(r.iterations), r.converged ? "1" : "0"});
    const std::string trials_path = file_in(cfg.out_dir, "trials.csv");
    write_text(trials_path, csv);
    out.files.push_back(trials_path);

    json table;
    for (const char* m : {"cadzow", "apbr"}) {
        std::vector<double> l2v, sqv, embv;
        std::vector<std::size_t> iters;
        std::vector<bool> conv;
        for (const TrialRow& r : rows)
            if (r.method == m) {
                l2v.push_back(r.l2);
                sqv.push_back(r.l2sq);
                embv.push_back(r.emb);
                iters.push_back(r.iterations);
                conv.push_back(r.converged);
            }
        out.l2[m] = l2v;
        out.l2_squared[m] = sqv;
        out.hankel_weighted[m] = embv;
        table[m] = {{"l2", l2v},
                    {"l2_squared", sqv},
                    {"hankel_weighted", embv},
                    {"iterations", iters},
                    {"converged", conv}};
    }

    out.matched_norm = "none";
    if (within_half_percent(out.l2["cadzow"], reference::cadzow_by_c))
        out.matched_norm = "l2";
    else if (within_half_percent(out.l2_squared["cadzow"], reference::cadzow_by_c))
        out.matched_norm = "l2_squared";
    else if (within_half_percent(out.hankel_weighted["cadzow"], reference::cadzow_by_c))
        out.matched_norm = "hankel_weighted";

    out.apbr_leq_cadzow = true;
    for (std::size_t i = 0; i < 4; ++i)
        if (out.l2["apbr"][i] > out.l2["cadzow"][i] + 1e-12) out.apbr_leq_cadzow = false;
    out.cadzow_increasing = strictly_increasing(out.l2["cadzow"]);
    out.apbr_increasing = strictly_increasing(out.l2["apbr"]);

    json agg;
    agg["schema_version"] = 1;
    agg["experiment"] = cfg.name;
    agg["config"] = config_json(cfg);
    agg["c_values"] = out.c_values;
    agg["results"] = table;
    agg["reference"] = {
        {"cadzow", std::vector<double>(reference::cadzow_by_c, reference::cadzow_by_c + 4)},
        {"apbr", std::vector<double>(reference::apbr_by_c, reference::apbr_by_c + 4)}};
    agg["matched_norm"] = out.matched_norm;
    agg["qualitative"] = {{"apbr_leq_cadzow", out.apbr_leq_cadzow},
                          {"cadzow_strictly_increasing", out.cadzow_increasing},
                          {"apbr_strictly_increasing", out.apbr_increasing}};
    const std::string agg_path = file_in(cfg.out_dir, "aggregate.json");
    write_text(agg_path, agg.dump(2) + "\n");
    out.files.push_back(agg_path);
    return out;
}

ExperimentOutcome run_stochastic(const ExperimentConfig& cfg, NoiseKind kind) {
    if (cfg.trials < 1) throw ArgumentError("trials must be >= 1");
    const TimeSeries signal = base_signal(cfg);
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t cells = 3 * trials;
    std::vector<TrialRow> rows(cells * 2);

    parallel_for(cells, cfg.threads, [&](std::size_t cell) {
        const std::size_t si = cell / trials;
        const std::size_t t = cell % trials;

        NoiseModel nm;
        nm.kind = kind;
        nm.sigma = kSigmas[si];
        if (kind == NoiseKind::red) nm.alpha = 0.5;
        nm.seed = Rng::stream(cfg.seed, (static_cast<std::uint64_t>(cell) << 1) | 0u);
        const TimeSeries p = add(signal, generate_noise(nm, signal.length()));

        const SolveReport cad = cadzow(p, solver_config(cfg));
        const std::uint64_t apbr_seed =
            Rng::stream(cfg.seed, (static_cast<std::uint64_t>(cell) << 1) | 1u);
        const SolveReport ap = apbr(p, apbr_config(cfg, apbr_seed));

        const SolveReport* reports[2] = {&cad, &ap};
        const char* names[2] = {"cadzow", "apbr"};
        for (int m = 0; m < 2; ++m) {
            TrialRow& r = rows[cell * 2 + static_cast<std::size_t>(m)];
            r.key = kSigmas[si];
            r.trial = static_cast<int>(t);
            r.method = names[m];
            r.l2 = l2_dist(p, reports[m]->approximant);
            r.emb = embedded_dist(p, reports[m]->approximant,
                                  static_cast<std::size_t>(cfg.window));
            r.iterations = reports[m]->iterations_used;
            r.converged = reports[m]->converged;
        }
    });

    ExperimentOutcome out;
    out.sigmas.assign(kSigmas, kSigmas + 3);

    std::string csv = "sigma,trial,method,l2,hankel_weighted,iterations,converged\n";
    for (const TrialRow& r : rows)
        append_csv_row(csv, {fmt_double(r.key), std::to_string(r.trial), r.method,
                             fmt_double(r.l2), fmt_double(r.emb),
                             std::to_string(r.iterations), r.converged ? "1" : "0"});
    const std::string trials_path = file_in(cfg.out_dir, "trials.csv");
    write_text(trials_path, csv);
    out.files.push_back(trials_path);

    std::string qcsv = "sigma,method,min,q1,median,q3,max\n";
    json med, med_w;
    for (int mi = 0; mi < 2; ++mi) {
        const char* m = mi == 0 ? "cadzow" : "apbr";
        std::vector<double> med_by_sigma, medw_by_sigma;
        for (std::size_t si = 0; si < 3; ++si) {
            std::vector<double> vals, wvals;
            for (std::size_t t = 0; t < trials; ++t) {
                const TrialRow& r = rows[(si * trials + t) * 2 + static_cast<std::size_t>(mi)];
                vals.push_back(r.l2);
                wvals.push_back(r.emb);
            }
            append_csv_row(qcsv, {fmt_double(kSigmas[si]), m, fmt_double(quantile(vals, 0.0)),
                                  fmt_double(quantile(vals, 0.25)),
                                  fmt_double(quantile(vals, 0.5)),
                                  fmt_double(quantile(vals, 0.75)),
                                  fmt_double(quantile(vals, 1.0))});
            med_by_sigma.push_back(quantile(vals, 0.5));
            medw_by_sigma.push_back(quantile(wvals, 0.5));
        }
        out.medians[m] = med_by_sigma;
        out.medians_weighted[m] = medw_by_sigma;
        med[m] = med_by_sigma;
        med_w[m] = medw_by_sigma;
    }
    const std::string q_path = file_in(cfg.out_dir, "quantiles.csv");
    write_text(q_path, qcsv);
    out.files.push_back(q_path);

    json agg;
    agg["schema_version"] = 1;
    agg["experiment"] = cfg.name;
    agg["config"] = config_json(cfg);
    agg["sigmas"] = out.sigmas;
    agg["medians"] = med;
    agg["medians_hankel_weighted"] = med_w;
    json flags;
    std::vector<bool> leq, leq_w;
    for (std::size_t si = 0; si < 3; ++si) {
        leq.push_back(out.medians["apbr"][si] <= out.medians["cadzow"][si]);
        leq_w.push_back(out.medians_weighted["apbr"][si] <= out.medians_weighted["cadzow"][si]);
    }
    flags["apbr_median_leq_cadzow"] = leq;
    flags["apbr_median_leq_cadzow_weighted"] = leq_w;
    flags["cadzow_median_increasing_in_sigma"] = strictly_increasing(out.medians["cadzow"]);
    flags["apbr_median_increasing_in_sigma"] = strictly_increasing(out.medians["apbr"]);
    agg["qualitative"] = flags;
    const std::string agg_path = file_in(cfg.out_dir, "aggregate.json");
    write_text(agg_path, agg.dump(2) + "\n");
    out.files.push_back(agg_path);
    return out;
}

struct GridRow {
    double a = 0.0, l = 0.0, rmse = 0.0, deviation = 0.0, nuclear = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

ExperimentOutcome run_cowtemp(const ExperimentConfig& cfg) {
    if (cfg.a_count < 1 || cfg.l_count < 1) throw ArgumentError("grid counts must be >= 1");
    if (cfg.a_min <= 0.0 || cfg.a_max < cfg.a_min)
        throw ArgumentError("need 0 < a-min <= a-max");
    const std::vector<double> raw = read_series_csv(cfg.data, cfg.column);
    const std::size_t n = static_cast<std::size_t>(cfg.train_len);
    const std::size_t m = static_cast<std::size_t>(cfg.horizon);
    if (raw.size() < n + m) throw ArgumentError("data shorter than train-len + horizon");
    const TimeSeries truth(std::vector<double>(raw.begin(), raw.begin() + (n + m)));
    const TimeSeries known(std::vector<double>(raw.begin(), raw.begin() + n));

    std::vector<double> a_grid(static_cast<std::size_t>(cfg.a_count));
    for (std::size_t i = 0; i < a_grid.size(); ++i)
        a_grid[i] = a_grid.size() == 1
                        ? cfg.a_min
                        : cfg.a_min * std::pow(cfg.a_max / cfg.a_min,
                                               static_cast<double>(i) /
                                                   static_cast<double>(a_grid.size() - 1));
    std::vector<double> l_grid(static_cast<std::size_t>(cfg.l_count));
    for (std::size_t i = 0; i < l_grid.size(); ++i)
        l_grid[i] = l_grid.size() == 1
                        ? cfg.l_min
                        : cfg.l_min + (cfg.l_max - cfg.l_min) * static_cast<double>(i) /
                                          static_cast<double>(l_grid.size() - 1);

    AdmmOptions opts;
    opts.max_iters = static_cast<std::size_t>(cfg.admm_iters);
    opts.tol = cfg.admm_tol;

    auto solve_cell = [&](const std::vector<double>& w, GridRow& r) {
        CompletionProblem prob;
        prob.known = known;
        prob.horizon = m;
        prob.window = static_cast<std::size_t>(cfg.forecast_window);
        prob.weights = w;
        prob.mode = CompletionMode::regularized;
        const CompletionReport rep =
            nn_complete_regularized(prob, cfg.gamma, FitLoss::squared, opts);
        r.rmse = forecast_rmse(truth, rep.completed, m);
        double dev = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double d = rep.completed[k] - known[k];
            dev += w[k] * d * d;
        }
        r.deviation = std::sqrt(dev);
        r.nuclear = rep.nuclear_final;
        r.iterations = rep.iterations;
        r.converged = rep.converged;
    };

    const std::size_t cells = a_grid.size() * l_grid.size();
    std::vector<GridRow> rows(cells);
    parallel_for(cells, cfg.threads, [&](std::size_t cell) {
        const std::size_t ai = cell / l_grid.size();
        const std::size_t li = cell % l_grid.size();
        GridRow& r = rows[cell];
        r.a = a_grid[ai];
        r.l = l_grid[li];
        WeightScheme ws;
        ws.kind = WeightScheme::Kind::exponential;
        ws.a = r.a;
        ws.l = r.l;
        solve_cell(ws.build(n, static_cast<std::size_t>(cfg.forecast_window)), r);
    });

    GridRow w1, w2;
    {
        WeightScheme ws;
        ws.kind = WeightScheme::Kind::unit;
        solve_cell(ws.build(n, static_cast<std::size_t>(cfg.forecast_window)), w1);
        ws.kind = WeightScheme::Kind::hankel_frobenius;
        solve_cell(ws.build(n, static_cast<std::size_t>(cfg.forecast_window)), w2);
    }

    ExperimentOutcome out;
    out.ssa_reference = reference::ssa_forecast_rmse;
    out.grid_cells = static_cast<int>(cells);

    std::string csv = "a,l,rmse,deviation,nuclear,iterations,converged\n";
    for (const GridRow& r : rows)
        append_csv_row(csv, {fmt_double(r.a), fmt_double(r.l), fmt_double(r.rmse),
                             fmt_double(r.deviation), fmt_double(r.nuclear),
                             std::to_string(r.iterations), r.converged ? "1" : "0"});
    const std::string grid_path = file_in(cfg.out_dir, "grid.csv");
    write_text(grid_path, csv);
    out.files.push_back(grid_path);

    const GridRow* best = nullptr;
    for (const GridRow& r : rows) {
        if (!r.converged) continue;
        ++out.grid_converged;
        if (!best || r.rmse < best->rmse) best = &r;
    }
    if (best) {
        out.best_rmse = best->rmse;
        out.best_a = best->a;
        out.best_l = best->l;
    }

    json agg;
    agg["schema_version"] = 1;
    agg["experiment"] = cfg.name;
    agg["config"] = config_json(cfg);
    agg["grid"] = {{"cells", out.grid_cells}, {"converged", out.grid_converged}};
    if (best)
        agg["best"] = {{"a", best->a}, {"l", best->l}, {"rmse", best->rmse},
                       {"iterations", best->iterations}};
    else
        agg["best"] = nullptr;
    agg["unit_weights_rmse"] = w1.rmse;
    agg["frobenius_weights_rmse"] = w2.rmse;
    agg["ssa_reference_rmse"] = reference::ssa_forecast_rmse;
    agg["reference_best_rmse"] = reference::best_forecast_rmse;
    agg["beats_ssa"] = best != nullptr && out.best_rmse <= reference::ssa_forecast_rmse;
    agg["within_10pct_of_reference"] =
        best != nullptr &&
        std::abs(out.best_rmse - reference::best_forecast_rmse) <=
            0.1 * reference::best_forecast_rmse;
    const std::string agg_path = file_in(cfg.out_dir, "aggregate.json");
    write_text(agg_path, agg.dump(2) + "\n");
    out.files.push_back(agg_path);
    return out;
}

} // namespace

double quantile(std::vector<double> data, double q) {
    if (data.empty()) throw ArgumentError("quantile of empty data");
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("quantile level must be in [0, 1]");
    std::sort(data.begin(), data.end());
    const double h = q * static_cast<double>(data.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, data.size() - 1);
    return data[lo] + (h - static_cast<double>(lo)) * (data[hi] - data[lo]);
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    if (cfg.name == "example1-deterministic") return run_deterministic(cfg);
    if (cfg.name == "example1-white") return run_stochastic(cfg, NoiseKind::white);
    if (cfg.name == "example1-red") return run_stochastic(cfg, NoiseKind::red);
    if (cfg.name == "example2-cowtemp") return run_cowtemp(cfg);
    throw ArgumentError("unknown experiment '" + cfg.name +
                        "'; valid names: example1-white, example1-deterministic, "
                        "example1-red, example2-cowtemp");
}

} // namespace hslra
