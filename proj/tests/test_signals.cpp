#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hslra/errors.hpp"
#include "hslra/hankel.hpp"
#include "hslra/rng.hpp"
#include "hslra/signals.hpp"

using namespace hslra;

TEST_CASE("apply_lrr runs the recurrence forward") {
    SUBCASE("Fibonacci") {
        const TimeSeries out =
            apply_lrr(TimeSeries({1, 1, 2, 3, 5, 8}), LrrCoefficients({1, 1, -1}), 2);
        REQUIRE(out.length() == 8);
        CHECK(out[6] == doctest::Approx(13.0).epsilon(1e-12));
        CHECK(out[7] == doctest::Approx(21.0).epsilon(1e-12));
    }

    SUBCASE("constant") {
        const TimeSeries out =
            apply_lrr(TimeSeries({4, 4, 4}), LrrCoefficients({1, -1}), 3);
        for (std::size_t i = 0; i < 6; ++i) CHECK(out[i] == doctest::Approx(4.0));
    }

    SUBCASE("geometric decay matches the closed form") {
        std::vector<double> v(10);
        for (int k = 1; k <= 10; ++k) v[k - 1] = std::pow(0.5, k);
        const TimeSeries out = apply_lrr(TimeSeries(v), LrrCoefficients({0.5, -1}), 5);
        for (int k = 11; k <= 15; ++k)
            CHECK(out[static_cast<std::size_t>(k - 1)] ==
                  doctest::Approx(std::pow(0.5, k)).epsilon(1e-10));
    }

    SUBCASE("trailing zero coefficient cannot be continued") {
        CHECK_THROWS_AS(apply_lrr(TimeSeries({1, 2, 3}), LrrCoefficients({1, 0}), 1),
                        NonContinuableError);
    }

    SUBCASE("prefix shorter than the order") {
        CHECK_THROWS_AS(apply_lrr(TimeSeries({1, 2}), LrrCoefficients({1, 1, 1, -1}), 1),
                        ArgumentError);
    }
}

TEST_CASE("generate_damped evaluates the model") {
    DampedSinusoidModel m;
    m.terms.push_back(DampedTerm{{1.0}, 0.05, 0.2, 0.0});
    const TimeSeries s = generate_damped(m, 20);
    REQUIRE(s.length() == 20);
    CHECK(s[0] == doctest::Approx(std::exp(0.05) * std::sin(0.4 * M_PI)).epsilon(1e-14));
    CHECK(s[9] ==
          doctest::Approx(std::exp(0.5) * std::sin(4.0 * M_PI)).epsilon(1e-10).scale(1.0));

    DampedSinusoidModel zero;
    zero.terms.push_back(DampedTerm{{0.0}, 0.1, 0.2, 0.5});
    for (std::size_t i = 0; i < 5; ++i) CHECK(generate_damped(zero, 5)[i] == 0.0);

    DampedSinusoidModel bad;
    bad.terms.push_back(DampedTerm{{1.0}, 0.0, 0.7, 0.0});
    CHECK_THROWS_AS(generate_damped(bad, 5), ArgumentError);
}

TEST_CASE("canonical generator handles transients and exponentials") {
    SUBCASE("head delta only") {
        const CanonicalModel m({1.0}, {}, {});
        const TimeSeries p = generate_canonical(m, 5);
        CHECK(p[0] == 1.0);
        for (std::size_t i = 1; i < 5; ++i) CHECK(p[i] == 0.0);
    }

    SUBCASE("tail delta only") {
        const CanonicalModel m({}, {1.0}, {});
        const TimeSeries p = generate_canonical(m, 5);
        for (std::size_t i = 0; i < 4; ++i) CHECK(p[i] == 0.0);
        CHECK(p[4] == 1.0);
    }

    SUBCASE("head, tail and a constant exponential superpose") {
        const CanonicalModel m({1.0}, {1.0}, {CanonicalTerm{{1.0, 0.0}, {{1.0, 0.0}}}});
        const TimeSeries p = generate_canonical(m, 5);
        CHECK(p[0] == doctest::Approx(2.0));
        CHECK(p[1] == doctest::Approx(1.0));
        CHECK(p[2] == doctest::Approx(1.0));
        CHECK(p[3] == doctest::Approx(1.0));
        CHECK(p[4] == doctest::Approx(2.0));
    }

    SUBCASE("rank counts all three parts") {
        const CanonicalModel m({1.0}, {2.0}, {CanonicalTerm{{0.9, 0.0}, {{1.0, 0.0}}}});
        CHECK(m.rank() == 3);
        const std::vector<int> prof = rank_profile(generate_canonical(m, 15));
        int peak = 0;
        for (int r : prof) peak = std::max(peak, r);
        CHECK(peak == 3);
        for (std::size_t i = 0; i < prof.size(); ++i) {
            const int window = static_cast<int>(i) + 1;
            CHECK(prof[i] == std::min({window, 15 - window + 1, 3}));
        }
    }

    SUBCASE("complex poles demand their conjugates") {
        CHECK_THROWS_AS(
            CanonicalModel({}, {}, {CanonicalTerm{{0.3, 0.4}, {{1.0, 0.0}}}}),
            ArgumentError);
        const CanonicalModel ok({}, {},
                                {CanonicalTerm{{0.3, 0.4}, {{1.0, -0.5}}},
                                 CanonicalTerm{{0.3, -0.4}, {{1.0, 0.5}}}});
        const TimeSeries p = generate_canonical(ok, 8);
        CHECK(p.length() == 8); // real output by construction
    }

    SUBCASE("trailing zero transient coefficients are rejected") {
        CHECK_THROWS_AS(CanonicalModel({1.0, 0.0}, {}, {}), ArgumentError);
        CHECK_THROWS_AS(
            CanonicalModel({}, {}, {CanonicalTerm{{0.0, 0.0}, {{1.0, 0.0}}}}),
            ArgumentError);
    }
}

TEST_CASE("noise models") {
    SUBCASE("alternating starts negative") {
        NoiseModel m;
        m.kind = NoiseKind::alternating;
        m.c = 0.2;
        const TimeSeries e = generate_noise(m, 4);
        CHECK(e[0] == doctest::Approx(-0.2));
        CHECK(e[1] == doctest::Approx(0.2));
        CHECK(e[2] == doctest::Approx(-0.2));
        CHECK(e[3] == doctest::Approx(0.2));
    }

    SUBCASE("white noise with zero sigma is silent") {
        NoiseModel m;
        m.sigma = 0.0;
        const TimeSeries e = generate_noise(m, 6);
        for (std::size_t i = 0; i < 6; ++i) CHECK(e[i] == 0.0);
    }

    SUBCASE("fixed seeds reproduce bit for bit") {
        NoiseModel m;
        m.sigma = 1.3;
        m.seed = 99;
        const TimeSeries a = generate_noise(m, 50);
        const TimeSeries b = generate_noise(m, 50);
        for (std::size_t i = 0; i < 50; ++i) CHECK(a[i] == b[i]);
    }

    SUBCASE("red noise matches AR(1) stationary moments") {
        NoiseModel m;
        m.kind = NoiseKind::red;
        m.sigma = 1.0;
        m.alpha = 0.5;
        m.seed = 12345;
        const std::size_t n = 100000;
        const TimeSeries e = generate_noise(m, n);
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += e[i];
        mean /= static_cast<double>(n);
        double var = 0.0, lag1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) var += (e[i] - mean) * (e[i] - mean);
        var /= static_cast<double>(n);
        for (std::size_t i = 1; i < n; ++i) lag1 += (e[i] - mean) * (e[i - 1] - mean);
        lag1 /= static_cast<double>(n - 1) * var;
        CHECK(var == doctest::Approx(1.0).epsilon(0.03));
        CHECK(lag1 == doctest::Approx(0.5).epsilon(0.04));
    }

    SUBCASE("parameter validation") {
        NoiseModel m;
        m.sigma = -1.0;
        CHECK_THROWS_AS(generate_noise(m, 5), ArgumentError);
        NoiseModel r;
        r.kind = NoiseKind::red;
        r.alpha = 1.0;
        CHECK_THROWS_AS(generate_noise(r, 5), ArgumentError);
    }
}

TEST_CASE("generated finite-rank series obey their own recurrence") {
    DampedSinusoidModel m;
    m.terms.push_back(DampedTerm{{1.0}, 0.05, 0.2, 0.0}); // rank 2
    const TimeSeries full = generate_damped(m, 24);
    const TimeSeries prefix(std::vector<double>(full.values().begin(),
                                                full.values().begin() + 16));
    const LrrCoefficients q = minimal_lrr(prefix, 2);
    const TimeSeries extended = apply_lrr(prefix, q, 8);
    for (std::size_t i = 16; i < 24; ++i)
        CHECK(extended[i] == doctest::Approx(full[i]).epsilon(1e-8));

    const CanonicalModel cm({0.7}, {-1.2},
                            {CanonicalTerm{{0.85, 0.0}, {{1.0, 0.0}, {0.2, 0.0}}}});
    const TimeSeries cp = generate_canonical(cm, 17);
    CHECK(cm.rank() == 4);
    const std::vector<int> prof = rank_profile(cp);
    int peak = 0;
    for (int r : prof) peak = std::max(peak, r);
    CHECK(peak == 4);
}

TEST_CASE("recurrence roots recover the exponential bases") {
    // p_k = 0.9^k + 2 * 0.5^k + (-0.7)^k has the minimal recurrence whose
    // characteristic polynomial has exactly these roots
    std::vector<double> v(16);
    for (int k = 1; k <= 16; ++k)
        v[k - 1] = std::pow(0.9, k) + 2.0 * std::pow(0.5, k) + std::pow(-0.7, k);
    const LrrCoefficients q = minimal_lrr(TimeSeries(v), 3);
    const std::vector<double> a = q.monic(); // p_{k+3} = a2 p_{k+2} + a1 p_{k+1} + a0 p_k
    Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
    companion(0, 2) = a[0];
    companion(1, 2) = a[1];
    companion(2, 2) = a[2];
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    std::vector<double> roots;
    for (const auto& ev : companion.eigenvalues()) {
        CHECK(std::abs(ev.imag()) < 1e-6);
        roots.push_back(ev.real());
    }
    std::sort(roots.begin(), roots.end());
    CHECK(roots[0] == doctest::Approx(-0.7).epsilon(1e-6));
    CHECK(roots[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(roots[2] == doctest::Approx(0.9).epsilon(1e-6));
}
