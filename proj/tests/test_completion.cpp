#include "doctest.h"

#include <cmath>
#include <vector>

#include "hslra/completion.hpp"
#include "hslra/errors.hpp"
#include "hslra/signals.hpp"

using namespace hslra;

namespace {

CompletionProblem make_problem(std::vector<double> known, std::size_t m, std::size_t window,
                               CompletionMode mode) {
    CompletionProblem pr;
    pr.known = TimeSeries(std::move(known));
    pr.horizon = m;
    pr.window = window;
    pr.weights = WeightScheme{}.build(pr.known.length(), window);
    pr.mode = mode;
    return pr;
}

double weighted_deviation(const CompletionReport& rep, const CompletionProblem& pr) {
    double s = 0.0;
    for (std::size_t k = 0; k < pr.known.length(); ++k) {
        const double d = rep.completed[k] - pr.known[k];
        s += pr.weights[k] * d * d;
    }
    return std::sqrt(s);
}

TimeSeries noisy_series(std::size_t n, double sigma, std::uint64_t seed) {
    DampedSinusoidModel m;
    m.terms.push_back(DampedTerm{{1.0}, 0.03, 0.17, 0.2});
    const TimeSeries s = generate_damped(m, n);
    NoiseModel nm;
    nm.sigma = sigma;
    nm.seed = seed;
    const TimeSeries e = generate_noise(nm, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = s[i] + e[i];
    return TimeSeries(std::move(v));
}

} // namespace

TEST_CASE("weight schemes over the known samples") {
    WeightScheme unit;
    const std::vector<double> u = unit.build(5, 3);
    CHECK(u == std::vector<double>(5, 1.0));

    WeightScheme frob;
    frob.kind = WeightScheme::Kind::hankel_frobenius;
    const std::vector<double> f = frob.build(7, 3);
    CHECK(f == std::vector<double>{1, 2, 3, 3, 3, 2, 1});
    CHECK_THROWS_AS(frob.build(2, 3), ArgumentError);

    WeightScheme expo;
    expo.kind = WeightScheme::Kind::exponential;
    expo.a = 2.0;
    expo.l = 0.1;
    const std::vector<double> e = expo.build(4, 2);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(e[j] == doctest::Approx(2.0 * std::exp(0.1 * static_cast<double>(j + 1))));
    expo.a = 0.0;
    CHECK_THROWS_AS(expo.build(4, 2), ArgumentError);
}

TEST_CASE("problem validation") {
    CompletionProblem pr = make_problem({1, 2, 3, 4}, 2, 3, CompletionMode::exact_constraint);

    pr.window = 0;
    CHECK_THROWS_AS(nn_complete_exactfit(pr), ArgumentError);
    pr.window = 7; // > n + m
    CHECK_THROWS_AS(nn_complete_exactfit(pr), ArgumentError);
    pr.window = 3;
    pr.weights = {1.0, 1.0};
    CHECK_THROWS_AS(nn_complete_exactfit(pr), ArgumentError);
    pr.weights = {1.0, 1.0, -1.0, 1.0};
    CHECK_THROWS_AS(nn_complete_exactfit(pr), ArgumentError);

    pr.weights = std::vector<double>(4, 1.0);
    CHECK_THROWS_AS(nn_complete_regularized(pr, 1.0), ArgumentError); // wrong mode
    pr.mode = CompletionMode::regularized;
    CHECK_THROWS_AS(nn_complete_regularized(pr, 0.0), ArgumentError);
    CHECK_THROWS_AS(nn_complete_exactfit(pr), ArgumentError);
    CHECK_THROWS_AS(nn_complete_tolerance(pr, 0.1), ArgumentError);
    pr.mode = CompletionMode::tolerance;
    CHECK_THROWS_AS(nn_complete_tolerance(pr, -0.1), ArgumentError);
}

TEST_CASE("recurrence extension forecasts the Fibonacci tail") {
    CompletionProblem pr =
        make_problem({1, 1, 2, 3, 5, 8}, 2, 4, CompletionMode::exact_constraint);
    const TimeSeries out = exact_complete(pr, 2);
    CHECK(out.length() == 8);
    CHECK(out[6] == doctest::Approx(13.0).epsilon(1e-10));
    CHECK(out[7] == doctest::Approx(21.0).epsilon(1e-10));

    CHECK_THROWS_AS(exact_complete(pr, 0), ArgumentError);
    CHECK_THROWS_AS(exact_complete(pr, 4), ArgumentError); // > min(L-1, K-1, n/2)

    pr.horizon = 0;
    pr.weights = WeightScheme{}.build(6, 4);
    const TimeSeries same = exact_complete(pr, 2);
    for (std::size_t i = 0; i < 6; ++i) CHECK(same[i] == pr.known[i]);
}

TEST_CASE("exact-fit completion pins the knowns and handles a zero horizon") {
    CompletionProblem pr = make_problem({4, 2, 1, 0.5, 0.25, 0.125}, 0, 3,
                                        CompletionMode::exact_constraint);
    const CompletionReport rep = nn_complete_exactfit(pr);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(rep.forecast.empty());
    for (std::size_t i = 0; i < 6; ++i) CHECK(rep.completed[i] == pr.known[i]);
    CHECK(rep.nuclear_final > 0.0);

    pr.horizon = 2;
    AdmmOptions opts;
    opts.max_iters = 4000;
    opts.tol = 1e-9;
    const CompletionReport ext = nn_complete_exactfit(pr, opts);
    CHECK(ext.converged);
    CHECK(ext.completed.length() == 8);
    CHECK(ext.forecast.size() == 2);
    for (std::size_t i = 0; i < 6; ++i) CHECK(ext.completed[i] == pr.known[i]);
    for (std::size_t i = 0; i < 2; ++i) CHECK(ext.forecast[i] == ext.completed[6 + i]);
}

TEST_CASE("nuclear-norm completion matches the recurrence for fast-decaying series") {
    // p_k = 2^(10-k): a geometric series with ratio 1/2
    std::vector<double> known(10);
    for (std::size_t k = 0; k < 10; ++k) known[k] = std::ldexp(1.0, 9 - static_cast<int>(k));
    CompletionProblem pr = make_problem(known, 2, 5, CompletionMode::exact_constraint);

    const TimeSeries exact = exact_complete(pr, 1);
    AdmmOptions opts;
    opts.max_iters = 6000;
    opts.tol = 1e-10;
    const CompletionReport rep = nn_complete_exactfit(pr, opts);
    CHECK(rep.converged);
    CHECK(std::abs(rep.completed[10] - exact[10]) < 1e-3);
    CHECK(std::abs(rep.completed[11] - exact[11]) < 1e-3);
}

TEST_CASE("regularized completion interpolates between fit and flatness") {
    const TimeSeries noisy = noisy_series(20, 0.5, 11);
    CompletionProblem pr = make_problem(noisy.values(), 0, 10, CompletionMode::regularized);

    AdmmOptions opts;
    opts.max_iters = 4000;
    opts.tol = 1e-8;

    // tiny gamma: the fit term dominates and the solution stays near the data
    const CompletionReport tight = nn_complete_regularized(pr, 1e-6, FitLoss::squared, opts);
    CHECK(tight.converged);
    CHECK(weighted_deviation(tight, pr) < 1e-3);

    // larger gamma trades fit for a smaller nuclear norm
    const CompletionReport loose = nn_complete_regularized(pr, 5.0, FitLoss::squared, opts);
    CHECK(loose.converged);
    CHECK(weighted_deviation(loose, pr) > weighted_deviation(tight, pr));
    CHECK(loose.nuclear_final < tight.nuclear_final);
    CHECK(loose.gamma_used == doctest::Approx(5.0));
    CHECK(loose.iterations == loose.objective_trace.size());

    // the unsquared loss accepts the same problem
    const CompletionReport uns = nn_complete_regularized(pr, 0.5, FitLoss::unsquared, opts);
    CHECK(uns.converged);

    pr.weights[3] = 0.0;
    CHECK_THROWS_AS(nn_complete_regularized(pr, 0.5, FitLoss::unsquared, opts), ArgumentError);
}

TEST_CASE("tolerance completion activates the deviation budget") {
    const TimeSeries noisy = noisy_series(20, 0.5, 12);
    CompletionProblem pr = make_problem(noisy.values(), 0, 10, CompletionMode::tolerance);

    AdmmOptions opts;
    opts.max_iters = 4000;
    opts.tol = 1e-8;

    CompletionProblem exact_pr = pr;
    exact_pr.mode = CompletionMode::exact_constraint;
    const CompletionReport zero = nn_complete_tolerance(pr, 0.0, opts);
    const CompletionReport pinned = nn_complete_exactfit(exact_pr, opts);
    for (std::size_t i = 0; i < 20; ++i) CHECK(zero.completed[i] == pinned.completed[i]);

    const double tau = 1.0;
    const CompletionReport rep = nn_complete_tolerance(pr, tau, opts);
    CHECK(rep.converged);
    const double dev = weighted_deviation(rep, pr);
    CHECK(dev <= tau * (1.0 + 1e-9));
    CHECK(dev >= 0.985 * tau);
}

TEST_CASE("forecast rmse over the horizon") {
    const TimeSeries truth({0, 0, 1, 2});
    const TimeSeries completed({5, 9, 2, 4});
    CHECK(forecast_rmse(truth, completed, 2) == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(forecast_rmse(truth, completed, 0), ArgumentError);
    CHECK_THROWS_AS(forecast_rmse(truth, completed, 5), ArgumentError);
    CHECK_THROWS_AS(forecast_rmse(truth, TimeSeries({1, 2}), 1), ArgumentError);
}
