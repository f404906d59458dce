#pragma once

#include <cstddef>
#include <vector>

#include "hslra/series.hpp"

namespace hslra {

enum class CompletionMode { exact_constraint, tolerance, regularized };

// Known prefix of length n plus m trailing unknowns; the embedding window L
// spans the full length N = n + m, so exactly the last m antidiagonals contain
// unknown entries. weights apply to the n known samples.
struct CompletionProblem {
    TimeSeries known;
    std::size_t horizon = 0;
    std::size_t window = 0;
    std::vector<double> weights;
    CompletionMode mode = CompletionMode::exact_constraint;
};

// Fit-weight generators over the known samples: unit weights, the
// antidiagonal multiplicities of the known block, or w_j = a * exp(l * j).
struct WeightScheme {
    enum class Kind { unit, hankel_frobenius, exponential };
    Kind kind = Kind::unit;
    double a = 1.0;
    double l = 0.0;
    std::vector<double> build(std::size_t n, std::size_t window) const;
};

struct CompletionReport {
    TimeSeries completed;         // length n + m
    std::vector<double> forecast; // the last m values
    std::vector<double> objective_trace;
    double nuclear_final = 0.0;   // nuclear norm of the final embedding
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    double gamma_used = 0.0;
};

// Operator-splitting settings shared by the nuclear-norm solvers. Convergence
// requires primal < tol * scale and dual < 10 * tol * scale, with scale the
// larger of the two split variables' norms (at least 1). The penalty rho is
// rebalanced every 10 iterations while the residual ratio exceeds 10.
struct AdmmOptions {
    double rho = 1.0;
    std::size_t max_iters = 2000;
    double tol = 1e-7;
    bool adapt_rho = true;
};

enum class FitLoss { unsquared, squared };

// Minimal-rank extension: extract the order-r recurrence of the known prefix
// and run it forward over the horizon.
TimeSeries exact_complete(const CompletionProblem& problem, int r, double tol = 1e-8);

// Minimize the nuclear norm of the embedding with the known samples pinned.
CompletionReport nn_complete_exactfit(const CompletionProblem& problem,
                                      const AdmmOptions& opts = {});

// Minimize ||p_known - p0||_W + gamma * ||S(p)||_* (or the squared-loss
// variant) over all N samples.
CompletionReport nn_complete_regularized(const CompletionProblem& problem, double gamma,
                                         FitLoss loss = FitLoss::unsquared,
                                         const AdmmOptions& opts = {});

// Minimize the nuclear norm subject to ||p_known - p0||_W <= tau, by
// bisection over gamma in the regularized problem until the constraint is
// active within 1%. tau = 0 pins the knowns exactly.
CompletionReport nn_complete_tolerance(const CompletionProblem& problem, double tau,
                                       const AdmmOptions& opts = {});

// Root mean square error over the last m samples.
double forecast_rmse(const TimeSeries& truth, const TimeSeries& completed, std::size_t m);

} // namespace hslra
