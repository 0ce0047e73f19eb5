#pragma once

#include "mfc/ctrlmath/eigen.hpp"
#include "mfc/ctrlmath/matrix.hpp"

namespace mfc::ctrlmath {

// Solves A_cl^T P + P A_cl = -I for symmetric positive definite P.
//
// Uses the Kronecker vectorisation (n^2 x n^2 linear system) with
// symmetrisation of the result; adequate for the n <= 10 designs here.
// Throws NotHurwitz when A_cl has an eigenvalue with Re >= -1e-12 and
// SingularSystem when the solve degenerates or the residual check fails.
Matrix solve_lyapunov(const Matrix& a_cl);

// max-magnitude residual of A_cl^T P + P A_cl + I.
double lyapunov_residual(const Matrix& a_cl, const Matrix& p);

}  // namespace mfc::ctrlmath
