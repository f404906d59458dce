// Compares the serial path (threads = 1) against the OpenMP path for the two
// parallel kernels: multistart trajectories and completion grid sweeps. Also
// verifies that both paths produce identical bytes before timing them.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hslra/completion.hpp"
#include "hslra/io.hpp"
#include "hslra/parallel.hpp"
#include "hslra/rng.hpp"
#include "hslra/signals.hpp"
#include "hslra/slra.hpp"

namespace {

using namespace hslra;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

TimeSeries noisy_signal(std::size_t n, std::uint64_t seed) {
    DampedSinusoidModel model;
    model.terms.push_back(DampedTerm{{1.0}, 0.05, 0.2, 0.0});
    const TimeSeries s = generate_damped(model, n);
    NoiseModel nm;
    nm.kind = NoiseKind::white;
    nm.sigma = 0.3;
    nm.seed = seed;
    const TimeSeries e = generate_noise(nm, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = s[i] + e[i];
    return TimeSeries(std::move(v));
}

std::string fingerprint(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += fmt_double(x) + ",";
    return s;
}

void bench_apbr(int threads) {
    const TimeSeries p = noisy_signal(60, 7);
    ApbrConfig cfg;
    cfg.base.rank = 3;
    cfg.base.window = 30;
    cfg.base.max_iters = 300;
    cfg.trajectories = 24;
    cfg.seed = 11;

    cfg.threads = 1;
    double t0 = now_seconds();
    const SolveReport serial = apbr(p, cfg);
    const double t_serial = now_seconds() - t0;

    cfg.threads = threads;
    t0 = now_seconds();
    const SolveReport parallel = apbr(p, cfg);
    const double t_parallel = now_seconds() - t0;

    const bool same =
        fingerprint(serial.approximant.values()) == fingerprint(parallel.approximant.values());
    std::printf("apbr 24 trajectories   serial %.3fs  %d threads %.3fs  speedup %.2fx  %s\n",
                t_serial, threads, t_parallel, t_serial / t_parallel,
                same ? "identical" : "MISMATCH");
}

void bench_grid(int threads) {
    const std::vector<double> raw =
        read_series_csv(std::string(HSLRA_DATA_DIR) + "/cowtemp.csv", "temperature");
    const TimeSeries known(std::vector<double>(raw.begin(), raw.begin() + 61));

    auto sweep = [&](int nthreads, std::vector<double>& rmses) {
        const std::size_t cells = 16;
        rmses.assign(cells, 0.0);
        parallel_for(cells, nthreads, [&](std::size_t i) {
            WeightScheme ws;
            ws.kind = WeightScheme::Kind::exponential;
            ws.a = 0.01;
            ws.l = 0.003 * static_cast<double>(i);
            CompletionProblem prob;
            prob.known = known;
            prob.horizon = 14;
            prob.window = 28;
            prob.weights = ws.build(61, 28);
            prob.mode = CompletionMode::regularized;
            AdmmOptions opts;
            opts.max_iters = 1500;
            opts.tol = 1e-8;
            const CompletionReport rep =
                nn_complete_regularized(prob, 0.5, FitLoss::squared, opts);
            const TimeSeries truth(std::vector<double>(raw.begin(), raw.begin() + 75));
            rmses[i] = forecast_rmse(truth, rep.completed, 14);
        });
    };

    std::vector<double> serial_rmse, parallel_rmse;
    double t0 = now_seconds();
    sweep(1, serial_rmse);
    const double t_serial = now_seconds() - t0;
    t0 = now_seconds();
    sweep(threads, parallel_rmse);
    const double t_parallel = now_seconds() - t0;

    const bool same = fingerprint(serial_rmse) == fingerprint(parallel_rmse);
    std::printf("forecast grid 16 cells serial %.3fs  %d threads %.3fs  speedup %.2fx  %s\n",
                t_serial, threads, t_parallel, t_serial / t_parallel,
                same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    int threads = omp_get_max_threads();
    if (argc > 1) threads = std::atoi(argv[1]);
    if (threads < 1) threads = 1;
    std::printf("timing with %d threads\n", threads);
    bench_apbr(threads);
    bench_grid(threads);
    return 0;
}
