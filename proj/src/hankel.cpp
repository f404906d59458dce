#include "hslra/hankel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

namespace hslra {

Matrix embed(const TimeSeries& p, const HankelStructure& s) {
    if (s.n_total != p.length())
        throw ArgumentError("embedding shape does not match series length");
    Matrix out(s.window, s.cols);
    for (std::size_t i = 0; i < s.window; ++i)
        for (std::size_t j = 0; j < s.cols; ++j) out(i, j) = p[i + j];
    return out;
}

AntidiagWeights antidiag_weights(const HankelStructure& s) {
    const auto n = static_cast<long>(s.n_total);
    const auto l = static_cast<long>(s.window);
    const auto k = static_cast<long>(s.cols);
    AntidiagWeights w;
    w.kappa.resize(s.n_total);
    for (long j = 1; j <= n; ++j)
        w.kappa[j - 1] = static_cast<int>(std::min(std::min(j, n - j + 1), std::min(l, k)));
    return w;
}

TimeSeries project_hankel(const Matrix& a) {
    const std::size_t l = a.rows(), k = a.cols(), n = l + k - 1;
    std::vector<double> sums(n, 0.0);
    std::vector<int> counts(n, 0);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            sums[i + j] += a(i, j);
            counts[i + j] += 1;
        }
    for (std::size_t t = 0; t < n; ++t) sums[t] /= counts[t];
    return TimeSeries(std::move(sums));
}

TimeSeries project_hankel_weighted(const Matrix& a, const QrWeights& w) {
    const std::size_t l = a.rows(), k = a.cols(), n = l + k - 1;
    if (w.q().rows() != l || w.r().rows() != k)
        throw ArgumentError("weight dimensions do not match matrix");
    const Matrix& b = w.q_sqrt();
    const Matrix& c = w.r_sqrt();
    // basis image for antidiagonal t: m_t = sum_{i+j=t} b.col(i) c.row(j)
    std::vector<Eigen::MatrixXd> basis(n, Eigen::MatrixXd::Zero(l, k));
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t i_lo = t >= k ? t - k + 1 : 0;
        const std::size_t i_hi = std::min(t, l - 1);
        for (std::size_t i = i_lo; i <= i_hi; ++i) {
            const std::size_t j = t - i;
            for (std::size_t r = 0; r < l; ++r)
                for (std::size_t s = 0; s < k; ++s) basis[t](r, s) += b(r, i) * c(j, s);
        }
    }
    Eigen::MatrixXd target(l, k);
    {
        Matrix bac = b * a * c;
        for (std::size_t r = 0; r < l; ++r)
            for (std::size_t s = 0; s < k; ++s) target(r, s) = bac(r, s);
    }
    Eigen::MatrixXd gram(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t t = 0; t < n; ++t) {
        rhs(t) = (basis[t].array() * target.array()).sum();
        for (std::size_t u = t; u < n; ++u) {
            const double g = (basis[t].array() * basis[u].array()).sum();
            gram(t, u) = g;
            gram(u, t) = g;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success)
        throw NumericalError("weighted projection normal equations are singular");
    Eigen::VectorXd p = solver.solve(rhs);
    return TimeSeries(std::vector<double>(p.data(), p.data() + p.size()));
}

std::vector<int> rank_profile(const TimeSeries& p, double tol) {
    if (tol <= 0.0 || tol >= 1.0) throw ArgumentError("rank tolerance must lie in (0, 1)");
    const std::size_t n = p.length();
    std::vector<int> profile(n, 0);
    for (std::size_t l = 1; l <= n; ++l) {
        std::vector<double> sv = singular_values(embed(p, HankelStructure(n, l)));
        if (sv.empty() || sv[0] <= 0.0) continue;
        int r = 0;
        for (double s : sv)
            if (s > tol * sv[0]) ++r;
        profile[l - 1] = r;
    }
    return profile;
}

LrrCoefficients minimal_lrr(const TimeSeries& p, int d, double tol) {
    if (d < 1) throw ArgumentError("recurrence order must be positive");
    const std::size_t n = p.length();
    const std::size_t rows = static_cast<std::size_t>(d) + 1;
    if (rows > n || n - static_cast<std::size_t>(d) < static_cast<std::size_t>(d))
        throw ArgumentError("series too short to isolate an order-" + std::to_string(d) +
                            " recurrence");
    SvdFactors f = svd(embed(p, HankelStructure(n, rows)));
    const std::vector<double>& sv = f.singular_values; // min(d+1, n-d) values
    const double s1 = sv[0];
    const double s_d = sv[static_cast<std::size_t>(d) - 1];
    const double s_d1 = sv.size() > static_cast<std::size_t>(d)
                            ? sv[static_cast<std::size_t>(d)]
                            : 0.0;
    if (s1 <= 0.0 || s_d1 > tol * s1 || s_d <= tol * s1)
        throw RankMismatchError("left kernel of the (d+1)-row embedding is not one-dimensional: "
                                "sigma_d = " + std::to_string(s_d) + ", sigma_{d+1} = " +
                                std::to_string(s_d1) + ", sigma_1 = " + std::to_string(s1),
                                s_d, s_d1);
    std::vector<double> theta(rows);
    for (std::size_t i = 0; i < rows; ++i) theta[i] = f.u(i, rows - 1);
    return LrrCoefficients(std::move(theta));
}

Matrix multiplication_matrix(const LrrCoefficients& q, int shift) {
    if (shift < 0) throw ArgumentError("shift must be nonnegative");
    const std::size_t d = q.order();
    const std::size_t rows = d + static_cast<std::size_t>(shift) + 1;
    const std::size_t cols = static_cast<std::size_t>(shift) + 1;
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = j; i <= j + d; ++i) m(i, j) = q.theta(i - j);
    return m;
}

} // namespace hslra
