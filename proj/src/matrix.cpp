#include "hslra/matrix.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace hslra {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) throw ArgumentError("matrix entries must be finite");
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
    Matrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return out;
}

// First entry of each column of u with magnitude > 1e-12 is made nonnegative.
// Columns with an SVD partner flip the partner too.
void fix_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v, Eigen::Index paired) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        double lead = 0.0;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            if (std::abs(u(i, c)) > 1e-12) {
                lead = u(i, c);
                break;
            }
        }
        if (lead < 0.0) {
            u.col(c) = -u.col(c);
            if (c < paired && c < v.cols()) v.col(c) = -v.col(c);
        }
    }
    for (Eigen::Index c = paired; c < v.cols(); ++c) {
        double lead = 0.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, c)) > 1e-12) {
                lead = v(i, c);
                break;
            }
        }
        if (lead < 0.0) v.col(c) = -v.col(c);
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw ArgumentError("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ArgumentError("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
        throw ArgumentError("entry count does not match rows * cols");
    check_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    if (d.empty()) throw ArgumentError("diagonal needs at least one entry");
    check_finite(d);
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) throw ArgumentError("matrix product dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ArgumentError("matrix sum dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw ArgumentError("matrix difference dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::scaled(double s) const {
    Matrix out = *this;
    for (double& x : out.data_) x *= s;
    return out;
}

SvdFactors svd(const Matrix& a) {
    if (a.empty()) throw ArgumentError("svd of empty matrix");
    Eigen::MatrixXd m = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (dec.info() != Eigen::Success) {
        double resid = std::numeric_limits<double>::quiet_NaN();
        throw NumericalError("svd did not converge, residual " + std::to_string(resid));
    }
    Eigen::MatrixXd u = dec.matrixU();
    Eigen::MatrixXd v = dec.matrixV();
    fix_signs(u, v, dec.singularValues().size());
    SvdFactors f;
    f.u = from_eigen(u);
    f.v = from_eigen(v);
    f.singular_values.assign(dec.singularValues().data(),
                             dec.singularValues().data() + dec.singularValues().size());
    return f;
}

Matrix truncated_lra(const Matrix& a, int r) {
    const std::size_t mindim = std::min(a.rows(), a.cols());
    if (r < 0 || static_cast<std::size_t>(r) > mindim)
        throw ArgumentError("truncation rank out of range");
    if (r == 0) return Matrix(a.rows(), a.cols());
    Eigen::MatrixXd m = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = dec.singularValues();
    for (Eigen::Index i = r; i < s.size(); ++i) s(i) = 0.0;
    Eigen::MatrixXd out = dec.matrixU() * s.asDiagonal() * dec.matrixV().transpose();
    return from_eigen(out);
}

QrWeights::QrWeights(Matrix q, Matrix r) : q_(std::move(q)), r_(std::move(r)) {
    auto factor = [](const Matrix& w, const char* name, Matrix& sqrt_out, Matrix& inv_out) {
        if (w.rows() != w.cols()) throw ArgumentError(std::string(name) + " weight must be square");
        const double scale = std::max(1.0, w.max_abs());
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = i + 1; j < w.cols(); ++j)
                if (std::abs(w(i, j) - w(j, i)) > 1e-12 * scale)
                    throw ArgumentError(std::string(name) + " weight must be symmetric");
        Eigen::MatrixXd e = to_eigen(w);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e);
        if (es.info() != Eigen::Success)
            throw NumericalError(std::string(name) + " weight eigendecomposition failed");
        const Eigen::VectorXd& lam = es.eigenvalues();
        const double lam_max = lam(lam.size() - 1);
        if (lam_max <= 0.0 || lam(0) <= 1e-12 * lam_max)
            throw ArgumentError(std::string(name) + " weight is not positive definite at working precision");
        Eigen::VectorXd rt = lam.array().sqrt();
        Eigen::MatrixXd vv = es.eigenvectors();
        sqrt_out = from_eigen(vv * rt.asDiagonal() * vv.transpose());
        inv_out = from_eigen(vv * rt.cwiseInverse().asDiagonal() * vv.transpose());
    };
    factor(q_, "row (Q)", q_sqrt_, q_sqrt_inv_);
    factor(r_, "column (R)", r_sqrt_, r_sqrt_inv_);
}

QrWeights QrWeights::identity(std::size_t rows, std::size_t cols) {
    return QrWeights(Matrix::identity(rows), Matrix::identity(cols));
}

Matrix qr_lra(const Matrix& a, int r, const QrWeights& w) {
    if (w.q().rows() != a.rows() || w.r().rows() != a.cols())
        throw ArgumentError("weight dimensions do not match matrix");
    Matrix whitened = w.q_sqrt() * a * w.r_sqrt();
    Matrix trunc = truncated_lra(whitened, r);
    return w.q_sqrt_inv() * trunc * w.r_sqrt_inv();
}

double qr_norm(const Matrix& a, const QrWeights& w) {
    if (w.q().rows() != a.rows() || w.r().rows() != a.cols())
        throw ArgumentError("weight dimensions do not match matrix");
    // trace(Q A R A^T) = sum((Q A R) .* A)
    Matrix qar = w.q() * a * w.r();
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += qar(i, j) * a(i, j);
    return std::sqrt(std::max(0.0, s));
}

double nuclear_norm(const Matrix& a) {
    Eigen::MatrixXd m = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m);
    return dec.singularValues().sum();
}

std::vector<double> singular_values(const Matrix& a) {
    Eigen::MatrixXd m = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m);
    const Eigen::VectorXd& s = dec.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

Matrix svt(const Matrix& a, double tau) {
    if (tau < 0.0) throw ArgumentError("threshold must be nonnegative");
    if (tau == 0.0) return a;
    Eigen::MatrixXd m = to_eigen(a);
    Eigen::JacobiSVD<Eigen::MatrixXd> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd s = dec.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - tau, 0.0);
    Eigen::MatrixXd out = dec.matrixU() * s.asDiagonal() * dec.matrixV().transpose();
    return from_eigen(out);
}

} // namespace hslra
