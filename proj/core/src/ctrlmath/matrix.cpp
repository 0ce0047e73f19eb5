#include "mfc/ctrlmath/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace mfc::ctrlmath {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    require(cols_ == rhs.rows_, "matrix product dimension mismatch");
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix sum dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix difference dimension mismatch");
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

Matrix Matrix::operator*(double s) const {
    Matrix out = *this;
    for (double& v : out.data_) v *= s;
    return out;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Matrix::asymmetry() const {
    if (!square()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst / std::max(1.0, max_abs());
}

std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
    if (!a.square() || a.rows() != b.size())
        throw std::invalid_argument("solve_dense needs square A and matching b");
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, a.max_abs());

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(perm[col], col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::abs(a(perm[r], col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best <= scale * 1e-13)
            throw SingularSystem("linear system is numerically rank-deficient");
        std::swap(perm[col], perm[pivot]);

        const double diag = a(perm[col], col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(perm[r], col) / diag;
            if (f == 0.0) continue;
            a(perm[r], col) = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a(perm[r], c) -= f * a(perm[col], c);
            b[perm[r]] -= f * b[perm[col]];
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[perm[ri]];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a(perm[ri], c) * x[c];
        x[ri] = acc / a(perm[ri], ri);
    }
    return x;
}

}  // namespace mfc::ctrlmath
