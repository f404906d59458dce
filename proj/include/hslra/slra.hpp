#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hslra/hankel.hpp"
#include "hslra/matrix.hpp"
#include "hslra/series.hpp"

namespace hslra {

// Rank-r approximation settings. Empty weights means the plain Frobenius
// objective; otherwise the weighted matrix norm drives both projections.
struct SlraConfig {
    int rank = 1;
    std::size_t window = 0;
    std::optional<QrWeights> weights;
    std::size_t max_iters = 500;
    double stop_tol = 1e-9; // relative l2 change of the series between iterations
    bool apply_final_correction = false;
};

struct SolveReport {
    TimeSeries approximant;
    std::size_t iterations_used = 0;
    double objective = 0.0;      // ||S(p_hat) - S(p0)|| in the configured matrix norm
    double rank_residual = 0.0;  // sigma_{r+1} / sigma_1 of the final embedding
    bool converged = false;
    std::vector<double> objective_trace; // one entry per iteration
};

// Alternate rank truncation and Hankel projection from S(p0). Stops when the
// relative series change drops below stop_tol. With apply_final_correction the
// optimal rescaling is applied to the result (it preserves both rank and
// structure).
SolveReport cadzow(const TimeSeries& p0, const SlraConfig& cfg);

// Optimal scale c = argmin_b ||target - b z|| (Frobenius, or the weighted norm
// when weights are given); returns (c, c*z). Never increases the distance to
// target.
std::pair<double, Matrix> scalar_correction(const Matrix& z, const Matrix& target,
                                            const QrWeights* weights = nullptr);

// Multistart randomized search. Each trajectory starts from a spread around
// p0, iterates truncation + projection with a decaying pull back toward the
// data (backtrack) and a decaying additive Hankel mutation, applies the scale
// correction every iteration, and after the cutoff runs plain corrected
// iterations to convergence. The best trajectory by final objective wins.
struct ApbrConfig {
    SlraConfig base;
    std::size_t trajectories = 10; // M
    double start_spread = 0.1;     // s0: start = (1-s0) p0 + s0 * xi
    double start_noise_sd = -1.0;  // sd of xi; negative means rms(p0)
    double backtrack0 = 0.1;       // delta_0
    double mutation0 = -1.0;       // sigma_0; negative means 0.1 * rms(p0)
    double decay = 0.9;            // rho: delta_i = delta_0 rho^i, sigma_i = sigma_0 rho^i
    std::size_t cutoff = 30;       // schedules are zero from this iteration on
    std::uint64_t seed = 0;        // trajectory j uses seed + j
    int threads = 1;               // trajectories may run in parallel
};

SolveReport apbr(const TimeSeries& p0, const ApbrConfig& cfg);

} // namespace hslra
