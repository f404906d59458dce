#pragma once

#include <vector>

#include "hslra/lrr.hpp"
#include "hslra/matrix.hpp"
#include "hslra/series.hpp"

namespace hslra {

// Per-sample antidiagonal multiplicities kappa_j = min(j, L, K, N-j+1),
// 1-based j. They satisfy sum(kappa) = L*K and give the identity
// ||S(p) - S(p0)||_F^2 = sum_j kappa_j (p_j - p0_j)^2.
struct AntidiagWeights {
    std::vector<int> kappa;
};

// Hankel embedding: result(i,j) = p_{i+j-1} (1-based), window x cols.
Matrix embed(const TimeSeries& p, const HankelStructure& s);

AntidiagWeights antidiag_weights(const HankelStructure& s);

// Antidiagonal averaging: the closest Hankel matrix to a in Frobenius norm,
// returned as the series of antidiagonal means.
TimeSeries project_hankel(const Matrix& a);

// argmin_p of the weighted norm sqrt(trace(Q (S(p)-A) R (S(p)-A)^T)), solved
// as a linear least-squares problem over the N series values.
TimeSeries project_hankel_weighted(const Matrix& a, const QrWeights& w);

// Numerical rank of the L x K embedding for every window L = 1..N, counting
// singular values above tol * sigma_1.
std::vector<int> rank_profile(const TimeSeries& p, double tol = 1e-8);

// The order-d recurrence spanning the one-dimensional left kernel of the
// (d+1)-row embedding. Requires a clean gap: sigma_{d+1} <= tol * sigma_1 <
// sigma_d.
LrrCoefficients minimal_lrr(const TimeSeries& p, int d, double tol = 1e-8);

// Banded convolution matrix of shape (order + shift + 1) x (shift + 1) with
// entries m(i,j) = theta_{i-j}. Its columns span the left kernel of the
// (order + shift + 1)-row embedding of any series obeying the recurrence.
Matrix multiplication_matrix(const LrrCoefficients& q, int shift);

} // namespace hslra
