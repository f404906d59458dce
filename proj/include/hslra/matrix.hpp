#pragma once

#include <cstddef>
#include <vector>

#include "hslra/errors.hpp"

namespace hslra {

// Dense real matrix. Storage is row-major: entry (i,j) lives at data()[i*cols()+j].
// Public constructors reject non-finite entries.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols); // zero-filled
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const;
    double frobenius_norm() const;
    double max_abs() const;

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix scaled(double s) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Full SVD factors: u is rows x rows orthogonal, v is cols x cols orthogonal,
// singular_values has min(rows, cols) non-increasing entries.
struct SvdFactors {
    Matrix u;
    std::vector<double> singular_values;
    Matrix v;
};

// Pair of symmetric positive definite weight matrices with cached symmetric
// square roots and their inverses. Used for the weighted matrix norm
// sqrt(trace(Q X R X^T)).
class QrWeights {
public:
    QrWeights(Matrix q, Matrix r);
    static QrWeights identity(std::size_t rows, std::size_t cols);

    const Matrix& q() const { return q_; }
    const Matrix& r() const { return r_; }
    const Matrix& q_sqrt() const { return q_sqrt_; }
    const Matrix& r_sqrt() const { return r_sqrt_; }
    const Matrix& q_sqrt_inv() const { return q_sqrt_inv_; }
    const Matrix& r_sqrt_inv() const { return r_sqrt_inv_; }

private:
    Matrix q_, r_;
    Matrix q_sqrt_, r_sqrt_;
    Matrix q_sqrt_inv_, r_sqrt_inv_;
};

// Full SVD with a fixed sign convention: the first entry of each left singular
// vector whose magnitude exceeds 1e-12 is made nonnegative (the paired right
// vector is flipped along with it), so repeated runs produce identical factors.
SvdFactors svd(const Matrix& a);

// Singular values only, non-increasing.
std::vector<double> singular_values(const Matrix& a);

// Best rank-<=r approximation in any unitarily invariant norm: keep the r
// leading singular triplets.
Matrix truncated_lra(const Matrix& a, int r);

// Best rank-<=r approximation in the (Q,R)-norm: whiten with the square roots,
// truncate, unwhiten.
Matrix qr_lra(const Matrix& a, int r, const QrWeights& w);

// sqrt(trace(Q A R A^T)); equals the Frobenius norm for Q = R = I.
double qr_norm(const Matrix& a, const QrWeights& w);

// Sum of singular values.
double nuclear_norm(const Matrix& a);

// Singular value thresholding: U max(S - tau, 0) V^T, the proximal operator of
// tau * nuclear_norm.
Matrix svt(const Matrix& a, double tau);

} // namespace hslra
