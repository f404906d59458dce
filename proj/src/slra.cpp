#include "hslra/slra.hpp"

#include <algorithm>
#include <cmath>

#include "hslra/parallel.hpp"
#include "hslra/rng.hpp"

namespace hslra {

namespace {

enum class Correction { none, final_only, per_iteration };

struct Schedule {
    double delta0 = 0.0;
    double sigma0 = 0.0;
    double decay = 0.9;
    std::size_t cutoff = 0;
    bool active() const { return delta0 > 0.0 || sigma0 > 0.0; }
};

void validate(const TimeSeries& p0, const SlraConfig& cfg) {
    const HankelStructure hs(p0.length(), cfg.window);
    const std::size_t mindim = std::min(hs.window, hs.cols);
    if (cfg.rank < 1 || static_cast<std::size_t>(cfg.rank) >= mindim)
        throw ArgumentError("rank must satisfy 1 <= r < min(L, K)");
    if (cfg.max_iters < 1) throw ArgumentError("iteration budget must be positive");
    if (!(cfg.stop_tol > 0.0)) throw ArgumentError("stopping tolerance must be positive");
    if (cfg.weights &&
        (cfg.weights->q().rows() != hs.window || cfg.weights->r().rows() != hs.cols))
        throw ArgumentError("weight dimensions do not match the embedding");
}

double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double rms(const TimeSeries& p) { return p.l2_norm() / std::sqrt(double(p.length())); }

// ||S(a) - S(b)|| in the configured matrix norm; the Frobenius case uses the
// antidiagonal-multiplicity identity instead of forming matrices.
double matrix_objective(const std::vector<double>& a, const TimeSeries& b,
                        const HankelStructure& hs, const std::vector<int>& kap,
                        const std::optional<QrWeights>& w) {
    if (!w) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double d = a[j] - b[j];
            s += kap[j] * d * d;
        }
        return std::sqrt(s);
    }
    Matrix diff = embed(TimeSeries(a), hs) - embed(b, hs);
    return qr_norm(diff, *w);
}

SolveReport engine(const TimeSeries& p0, const SlraConfig& cfg, Correction corr,
                   std::vector<double> start, const Schedule* sched, Rng* rng) {
    const HankelStructure hs(p0.length(), cfg.window);
    const std::vector<int> kap = antidiag_weights(hs).kappa;
    const std::size_t n = p0.length();
    const Matrix target = embed(p0, hs);

    std::vector<double> p = std::move(start);
    std::vector<double> trace;
    trace.reserve(std::min<std::size_t>(cfg.max_iters, 4096));
    std::size_t iters = 0;
    bool converged = false;
    double delta_i = sched ? sched->delta0 : 0.0;
    double sigma_i = sched ? sched->sigma0 : 0.0;
    const bool randomized = sched && sched->active();

    for (std::size_t i = 0; i < cfg.max_iters; ++i) {
        Matrix emb = embed(TimeSeries(p), hs);
        Matrix low = cfg.weights ? qr_lra(emb, cfg.rank, *cfg.weights)
                                 : truncated_lra(emb, cfg.rank);
        TimeSeries y = cfg.weights ? project_hankel_weighted(low, *cfg.weights)
                                   : project_hankel(low);
        std::vector<double> b = y.values();
        if (sched && i < sched->cutoff) {
            if (delta_i > 0.0)
                for (std::size_t j = 0; j < n; ++j)
                    b[j] = (1.0 - delta_i) * b[j] + delta_i * p0[j];
            if (sigma_i > 0.0 && rng)
                for (std::size_t j = 0; j < n; ++j) b[j] += sigma_i * rng->gaussian();
            delta_i *= sched->decay;
            sigma_i *= sched->decay;
        }
        if (corr == Correction::per_iteration) {
            Matrix zb = embed(TimeSeries(b), hs);
            double den = cfg.weights ? qr_norm(zb, *cfg.weights) : zb.frobenius_norm();
            if (den > 1e-150) {
                auto [c, unused] =
                    scalar_correction(zb, target, cfg.weights ? &*cfg.weights : nullptr);
                (void)unused;
                for (double& x : b) x *= c;
            }
        }
        trace.push_back(matrix_objective(b, p0, hs, kap, cfg.weights));
        std::vector<double> diff(n);
        for (std::size_t j = 0; j < n; ++j) diff[j] = b[j] - p[j];
        const double rel = l2(diff) / std::max(l2(p), 1e-300);
        p = std::move(b);
        iters = i + 1;
        const bool may_stop = !randomized || i >= sched->cutoff;
        if (may_stop && rel < cfg.stop_tol) {
            converged = true;
            break;
        }
    }

    if (corr == Correction::final_only) {
        Matrix zp = embed(TimeSeries(p), hs);
        double den = cfg.weights ? qr_norm(zp, *cfg.weights) : zp.frobenius_norm();
        if (den > 1e-150) {
            auto [c, unused] =
                scalar_correction(zp, target, cfg.weights ? &*cfg.weights : nullptr);
            (void)unused;
            for (double& x : p) x *= c;
        }
    }

    const double objective = matrix_objective(p, p0, hs, kap, cfg.weights);
    TimeSeries result(p);
    std::vector<double> sv = singular_values(embed(result, hs));
    double rank_residual = 0.0;
    if (static_cast<std::size_t>(cfg.rank) < sv.size() && sv[0] > 0.0)
        rank_residual = sv[static_cast<std::size_t>(cfg.rank)] / sv[0];
    return SolveReport{std::move(result), iters, objective, rank_residual, converged,
                       std::move(trace)};
}

} // namespace

SolveReport cadzow(const TimeSeries& p0, const SlraConfig& cfg) {
    validate(p0, cfg);
    return engine(p0, cfg, cfg.apply_final_correction ? Correction::final_only : Correction::none,
                  p0.values(), nullptr, nullptr);
}

std::pair<double, Matrix> scalar_correction(const Matrix& z, const Matrix& target,
                                            const QrWeights* weights) {
    if (z.rows() != target.rows() || z.cols() != target.cols())
        throw ArgumentError("scale correction needs matching shapes");
    double num = 0.0, den = 0.0;
    if (!weights) {
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) {
                num += z(i, j) * target(i, j);
                den += z(i, j) * z(i, j);
            }
    } else {
        if (weights->q().rows() != z.rows() || weights->r().rows() != z.cols())
            throw ArgumentError("weight dimensions do not match matrix");
        Matrix qzr = weights->q() * z * weights->r();
        for (std::size_t i = 0; i < z.rows(); ++i)
            for (std::size_t j = 0; j < z.cols(); ++j) {
                num += qzr(i, j) * target(i, j);
                den += qzr(i, j) * z(i, j);
            }
    }
    if (!(den > 1e-300)) throw NumericalError("scale correction of a zero matrix is degenerate");
    const double c = num / den;
    return {c, z.scaled(c)};
}

SolveReport apbr(const TimeSeries& p0, const ApbrConfig& cfg) {
    validate(p0, cfg.base);
    if (cfg.trajectories < 1) throw ArgumentError("need at least one trajectory");
    if (cfg.start_spread < 0.0 || cfg.start_spread > 1.0)
        throw ArgumentError("start spread must lie in [0, 1]");
    if (cfg.backtrack0 < 0.0 || cfg.backtrack0 > 1.0)
        throw ArgumentError("backtrack schedule must start in [0, 1]");
    if (cfg.decay < 0.0 || cfg.decay >= 1.0)
        throw ArgumentError("schedule decay must lie in [0, 1)");

    const std::size_t n = p0.length();
    const double base_rms = rms(p0);
    const double start_sd = cfg.start_noise_sd < 0.0 ? base_rms : cfg.start_noise_sd;
    const double sigma0 = cfg.mutation0 < 0.0 ? 0.1 * base_rms : cfg.mutation0;

    Schedule sched;
    sched.delta0 = cfg.backtrack0;
    sched.sigma0 = sigma0;
    sched.decay = cfg.decay;
    sched.cutoff = cfg.cutoff;

    std::vector<SolveReport> runs;
    runs.reserve(cfg.trajectories);
    for (std::size_t j = 0; j < cfg.trajectories; ++j)
        runs.push_back(SolveReport{p0, 0, 0.0, 0.0, false, {}});

    parallel_for(cfg.trajectories, cfg.threads, [&](std::size_t j) {
        Rng rng(cfg.seed + j);
        std::vector<double> start = p0.values();
        if (cfg.start_spread > 0.0)
            for (std::size_t k = 0; k < n; ++k)
                start[k] = (1.0 - cfg.start_spread) * start[k] +
                           cfg.start_spread * start_sd * rng.gaussian();
        runs[j] = engine(p0, cfg.base, Correction::per_iteration, std::move(start), &sched, &rng);
    });

    std::size_t best = 0;
    for (std::size_t j = 1; j < runs.size(); ++j)
        if (runs[j].objective < runs[best].objective) best = j;
    return std::move(runs[best]);
}

} // namespace hslra
