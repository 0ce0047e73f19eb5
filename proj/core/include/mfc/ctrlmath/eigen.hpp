#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "mfc/ctrlmath/matrix.hpp"

namespace mfc::ctrlmath {

struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotHurwitz : std::domain_error {
    using std::domain_error::domain_error;
};

// All eigenvalues of a symmetric matrix, ascending. Closed form for n <= 2,
// cyclic Jacobi sweeps for n >= 3.
std::vector<double> symmetric_eigenvalues(const Matrix& p);

// (lambda_min, lambda_max) of a symmetric matrix.
// Throws NotSymmetric when the relative asymmetry exceeds 1e-12.
std::pair<double, double> sym_eig_extremes(const Matrix& p);

// All eigenvalues of a general real square matrix via Hessenberg reduction
// followed by Francis double-shift QR iteration.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

// True iff every eigenvalue satisfies Re(lambda) < -1e-12.
bool is_hurwitz(const Matrix& a);

}  // namespace mfc::ctrlmath
