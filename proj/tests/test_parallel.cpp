#include "doctest.h"

#include <atomic>
#include <vector>

#include "hslra/parallel.hpp"
#include "hslra/rng.hpp"
#include "hslra/signals.hpp"
#include "hslra/slra.hpp"

using namespace hslra;

namespace {

std::vector<double> slot_results(int threads) {
    std::vector<double> out(64, 0.0);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        Rng rng(Rng::stream(99, i));
        double acc = 0.0;
        for (int k = 0; k < 100; ++k) acc += rng.gaussian();
        out[i] = acc;
    });
    return out;
}

} // namespace

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h.store(0);
    parallel_for(hits.size(), 0, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (auto& h : hits) CHECK(h.load() == 1);
    parallel_for(0, 4, [&](std::size_t) { CHECK(false); });
}

TEST_CASE("slot-indexed work is bit-identical across thread counts") {
    const std::vector<double> serial = slot_results(1);
    for (int threads : {2, 4, 0}) {
        const std::vector<double> par = slot_results(threads);
        for (std::size_t i = 0; i < serial.size(); ++i) CHECK(par[i] == serial[i]);
    }
}

TEST_CASE("nested calls fall back to the serial loop") {
    std::vector<int> inner_ok(8, 0);
    parallel_for(8, 0, [&](std::size_t i) {
        // a nested parallel_for must not spawn a second level of threads
        std::vector<std::size_t> order;
        parallel_for(4, 4, [&](std::size_t j) { order.push_back(j); });
        inner_ok[i] = order == std::vector<std::size_t>{0, 1, 2, 3} ? 1 : 0;
    });
    for (int ok : inner_ok) CHECK(ok == 1);
}

TEST_CASE("multistart search returns the same bytes for any thread count") {
    DampedSinusoidModel m;
    m.terms.push_back(DampedTerm{{1.0}, 0.05, 0.2, 0.0});
    const TimeSeries s = generate_damped(m, 24);
    NoiseModel nm;
    nm.sigma = 0.5;
    nm.seed = 7;
    const TimeSeries e = generate_noise(nm, 24);
    std::vector<double> v(24);
    for (std::size_t i = 0; i < 24; ++i) v[i] = s[i] + e[i];
    const TimeSeries p(std::move(v));

    ApbrConfig cfg;
    cfg.base.rank = 3;
    cfg.base.window = 12;
    cfg.trajectories = 6;
    cfg.seed = 3;

    cfg.threads = 1;
    const SolveReport serial = apbr(p, cfg);
    cfg.threads = 4;
    const SolveReport par = apbr(p, cfg);

    CHECK(par.objective == serial.objective);
    CHECK(par.iterations_used == serial.iterations_used);
    for (std::size_t i = 0; i < 24; ++i) CHECK(par.approximant[i] == serial.approximant[i]);
}
