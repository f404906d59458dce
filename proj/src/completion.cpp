#include "hslra/completion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hslra/hankel.hpp"
#include "hslra/lrr.hpp"
#include "hslra/signals.hpp"

namespace hslra {

namespace {

enum class PMode { exactfit, squared, unsquared };

void validate_problem(const CompletionProblem& pr) {
    const std::size_t n = pr.known.length();
    const std::size_t total = n + pr.horizon;
    if (pr.window < 1 || pr.window > total)
        throw ArgumentError("window must lie in [1, n + m]");
    if (pr.weights.size() != n)
        throw ArgumentError("need one fit weight per known sample");
    for (double w : pr.weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ArgumentError("fit weights must be nonnegative and finite");
}

void embed_into(Eigen::MatrixXd& a, const std::vector<double>& p, std::size_t l) {
    const std::size_t k = p.size() - l + 1;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < k; ++j) a(i, j) = p[i + j];
}

std::vector<double> adiag_sums(const Eigen::MatrixXd& a) {
    const auto l = static_cast<std::size_t>(a.rows());
    const auto k = static_cast<std::size_t>(a.cols());
    std::vector<double> s(l + k - 1, 0.0);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < k; ++j) s[i + j] += a(i, j);
    return s;
}

double fit_value(PMode mode, const std::vector<double>& p, const std::vector<double>& p0,
                 const std::vector<double>& w) {
    if (mode == PMode::exactfit) return 0.0;
    double s = 0.0;
    for (std::size_t k = 0; k < p0.size(); ++k) {
        const double d = p[k] - p0[k];
        s += w[k] * d * d;
    }
    return mode == PMode::squared ? s : std::sqrt(s);
}

CompletionReport admm_solve(const CompletionProblem& pr, PMode mode, double gamma,
                            const AdmmOptions& opts, double gamma_used) {
    validate_problem(pr);
    if (mode == PMode::unsquared)
        for (double w : pr.weights)
            if (w <= 0.0)
                throw ArgumentError("the unsquared loss requires strictly positive weights");

    const std::size_t n = pr.known.length();
    const std::size_t m = pr.horizon;
    const std::size_t total = n + m;
    const std::size_t l = pr.window;
    const std::size_t kk = total - l + 1;
    const std::vector<double>& p0 = pr.known.values();
    const std::vector<double>& w = pr.weights;

    std::vector<double> kap(total);
    {
        AntidiagWeights aw = antidiag_weights(HankelStructure(total, l));
        for (std::size_t j = 0; j < total; ++j) kap[j] = aw.kappa[j];
    }

    std::vector<double> p(p0);
    p.resize(total, p0.back()); // unknown tail repeats the last known value

    if (mode == PMode::exactfit && m == 0) {
        Eigen::MatrixXd sp(l, kk);
        embed_into(sp, p, l);
        Eigen::JacobiSVD<Eigen::MatrixXd> dec(sp);
        return CompletionReport{TimeSeries(p), {}, {}, dec.singularValues().sum(),
                                0.0,           0.0, true, 0, gamma_used};
    }

    Eigen::MatrixXd sp(l, kk), z(l, kk), u(l, kk), zold(l, kk), work(l, kk);
    embed_into(sp, p, l);
    z = sp;
    u.setZero();

    double rho = opts.rho;
    double rpri = 0.0, rdua = 0.0;
    bool converged = false;
    std::size_t iters = 0;
    std::vector<double> trace;
    trace.reserve(std::min<std::size_t>(opts.max_iters, 8192));

    for (std::size_t it = 0; it < opts.max_iters; ++it) {
        zold = z;
        work = sp + u;
        Eigen::JacobiSVD<Eigen::MatrixXd> dec(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXd sv = dec.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i) sv(i) = std::max(sv(i) - gamma / rho, 0.0);
        z.noalias() = dec.matrixU() * sv.asDiagonal() * dec.matrixV().transpose();
        const double nuclear_z = sv.sum();

        work = z - u;
        std::vector<double> s = adiag_sums(work);
        switch (mode) {
        case PMode::exactfit:
            for (std::size_t k = 0; k < n; ++k) p[k] = p0[k];
            for (std::size_t k = n; k < total; ++k) p[k] = s[k] / kap[k];
            break;
        case PMode::squared:
            for (std::size_t k = 0; k < n; ++k)
                p[k] = (2.0 * w[k] * p0[k] + rho * s[k]) / (2.0 * w[k] + rho * kap[k]);
            for (std::size_t k = n; k < total; ++k) p[k] = s[k] / kap[k];
            break;
        case PMode::unsquared: {
            // prox of the weighted l2 norm against the separable quadratic:
            // v minimizes ||v||_w + (rho/2) sum_k kap_k (v_k - u_k)^2
            std::vector<double> uv(n);
            double c2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                uv[k] = s[k] / kap[k] - p0[k];
                c2 += kap[k] * kap[k] * uv[k] * uv[k] / w[k];
            }
            if (rho * std::sqrt(c2) <= 1.0) {
                for (std::size_t k = 0; k < n; ++k) p[k] = p0[k];
            } else {
                auto g = [&](double t) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double v = kap[k] * uv[k] / (kap[k] + t * w[k]);
                        acc += w[k] * v * v;
                    }
                    return std::sqrt(acc);
                };
                double lo = 0.0, hi = 1.0;
                while (hi * g(hi) < 1.0 / rho) hi *= 2.0;
                for (int b = 0; b < 200; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    (mid * g(mid) < 1.0 / rho ? lo : hi) = mid;
                }
                const double t = 0.5 * (lo + hi);
                for (std::size_t k = 0; k < n; ++k)
                    p[k] = p0[k] + kap[k] * uv[k] / (kap[k] + t * w[k]);
            }
            for (std::size_t k = n; k < total; ++k) p[k] = s[k] / kap[k];
            break;
        }
        }
        embed_into(sp, p, l);
        u += sp - z;

        rpri = (sp - z).norm();
        {
            work = z - zold;
            std::vector<double> dz = adiag_sums(work);
            double acc = 0.0;
            for (double x : dz) acc += x * x;
            rdua = rho * std::sqrt(acc);
        }
        trace.push_back(fit_value(mode, p, p0, w) + gamma * nuclear_z);
        iters = it + 1;

        const double scale = std::max({sp.norm(), z.norm(), 1.0});
        if (rpri < opts.tol * scale && rdua < 10.0 * opts.tol * scale) {
            converged = true;
            break;
        }
        if (opts.adapt_rho && (it + 1) % 10 == 0) {
            if (rpri > 10.0 * rdua) {
                rho *= 2.0;
                u *= 0.5;
            } else if (rdua > 10.0 * rpri) {
                rho *= 0.5;
                u *= 2.0;
            }
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> fin(sp);
    CompletionReport rep{TimeSeries(p),
                         std::vector<double>(p.begin() + static_cast<long>(n), p.end()),
                         std::move(trace),
                         fin.singularValues().sum(),
                         rpri,
                         rdua,
                         converged,
                         iters,
                         gamma_used};
    return rep;
}

} // namespace

std::vector<double> WeightScheme::build(std::size_t n, std::size_t window) const {
    switch (kind) {
    case Kind::unit:
        return std::vector<double>(n, 1.0);
    case Kind::hankel_frobenius: {
        if (window > n) throw ArgumentError("window exceeds the known length");
        AntidiagWeights aw = antidiag_weights(HankelStructure(n, window));
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = aw.kappa[j];
        return w;
    }
    case Kind::exponential: {
        if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(l))
            throw ArgumentError("exponential weights need a > 0 and finite parameters");
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = a * std::exp(l * static_cast<double>(j + 1));
        return w;
    }
    }
    throw ArgumentError("unknown weight scheme");
}

TimeSeries exact_complete(const CompletionProblem& problem, int r, double tol) {
    validate_problem(problem);
    const std::size_t n = problem.known.length();
    const HankelStructure hs(n + problem.horizon, problem.window);
    const std::size_t cap =
        std::min({hs.window - 1, hs.cols - 1, n / 2});
    if (r < 1 || static_cast<std::size_t>(r) > cap)
        throw ArgumentError("rank must satisfy 1 <= r <= min(L-1, K-1, n/2)");
    LrrCoefficients lrr = minimal_lrr(problem.known, r, tol);
    return apply_lrr(problem.known, lrr, problem.horizon);
}

CompletionReport nn_complete_exactfit(const CompletionProblem& problem, const AdmmOptions& opts) {
    if (problem.mode != CompletionMode::exact_constraint)
        throw ArgumentError("problem mode must be exact_constraint");
    return admm_solve(problem, PMode::exactfit, 1.0, opts, 0.0);
}

CompletionReport nn_complete_regularized(const CompletionProblem& problem, double gamma,
                                         FitLoss loss, const AdmmOptions& opts) {
    if (problem.mode != CompletionMode::regularized)
        throw ArgumentError("problem mode must be regularized");
    if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
    return admm_solve(problem, loss == FitLoss::squared ? PMode::squared : PMode::unsquared,
                      gamma, opts, gamma);
}

CompletionReport nn_complete_tolerance(const CompletionProblem& problem, double tau,
                                       const AdmmOptions& opts) {
    if (problem.mode != CompletionMode::tolerance)
        throw ArgumentError("problem mode must be tolerance");
    if (tau < 0.0) throw ArgumentError("tau must be nonnegative");
    if (tau == 0.0) {
        CompletionReport rep = admm_solve(problem, PMode::exactfit, 1.0, opts, 0.0);
        return rep;
    }
    const std::vector<double>& w = problem.weights;
    const std::vector<double>& p0 = problem.known.values();
    auto deviation = [&](const CompletionReport& rep) {
        double s = 0.0;
        for (std::size_t k = 0; k < p0.size(); ++k) {
            const double d = rep.completed[k] - p0[k];
            s += w[k] * d * d;
        }
        return std::sqrt(s);
    };

    double hi = 1.0;
    CompletionReport rep = admm_solve(problem, PMode::unsquared, hi, opts, hi);
    double dev = deviation(rep);
    int grow = 0;
    while (dev < 0.99 * tau && grow < 60) {
        hi *= 4.0;
        rep = admm_solve(problem, PMode::unsquared, hi, opts, hi);
        dev = deviation(rep);
        ++grow;
    }
    if (dev <= tau) return rep; // active within 1%, or saturated below tau
    double lo = 0.0;
    for (int b = 0; b < 60; ++b) {
        const double mid = 0.5 * (lo + hi);
        rep = admm_solve(problem, PMode::unsquared, mid, opts, mid);
        dev = deviation(rep);
        if (dev > tau)
            hi = mid;
        else if (dev < 0.99 * tau)
            lo = mid;
        else
            return rep;
    }
    rep.converged = false; // bracket exhausted; report carries the achieved deviation
    return rep;
}

double forecast_rmse(const TimeSeries& truth, const TimeSeries& completed, std::size_t m) {
    if (m == 0) throw ArgumentError("horizon must be positive");
    if (truth.length() != completed.length() || truth.length() < m)
        throw ArgumentError("series lengths do not cover the horizon");
    double s = 0.0;
    const std::size_t off = truth.length() - m;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = truth[off + k] - completed[off + k];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(m));
}

} // namespace hslra
