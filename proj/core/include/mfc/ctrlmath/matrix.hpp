#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfc::ctrlmath {

// Thrown when a linear solve encounters a numerically rank-deficient system.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small dense real matrix, row-major. Sized for control design work
// (n <= ~10); not a general linear-algebra library.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
        require(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
    }

    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> entries)
        : Matrix(rows, cols) {
        require(entries.size() == data_.size(), "entry count must equal rows*cols");
        std::size_t i = 0;
        for (double v : entries) data_[i++] = v;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix column(std::span<const double> v) {
        Matrix m(v.size(), 1);
        for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator*(double s) const;

    // Entrywise max-magnitude norm.
    double max_abs() const;
    bool all_finite() const;

    // Relative asymmetry max|A - A^T| / max(1, max|A|).
    double asymmetry() const;

private:
    static void require(bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(what);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Solves the square system A x = b by LU with partial pivoting.
// Throws SingularSystem when a pivot falls below a scale-relative threshold.
std::vector<double> solve_dense(Matrix a, std::vector<double> b);

}  // namespace mfc::ctrlmath
