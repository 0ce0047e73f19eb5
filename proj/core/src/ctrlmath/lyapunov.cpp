#include "mfc/ctrlmath/lyapunov.hpp"

#include <cmath>
#include <sstream>

namespace mfc::ctrlmath {

double lyapunov_residual(const Matrix& a_cl, const Matrix& p) {
    const Matrix at_p = a_cl.transposed() * p;
    const Matrix r = at_p + p * a_cl + Matrix::identity(a_cl.rows());
    return r.max_abs();
}

Matrix solve_lyapunov(const Matrix& a_cl) {
    if (!a_cl.square()) throw std::invalid_argument("solve_lyapunov needs a square matrix");
    const std::size_t n = a_cl.rows();

    if (!is_hurwitz(a_cl)) {
        std::ostringstream msg;
        msg << "matrix is not Hurwitz; eigenvalues:";
        for (const auto& l : eigenvalues(a_cl))
            msg << " (" << l.real() << (l.imag() >= 0 ? "+" : "") << l.imag() << "i)";
        throw NotHurwitz(msg.str());
    }

    // vec(A^T P + P A) = (I (x) A^T + A^T (x) I) vec(P), column-stacked.
    const std::size_t n2 = n * n;
    Matrix kron(n2, n2);
    const Matrix at = a_cl.transposed();
    for (std::size_t col_j = 0; col_j < n; ++col_j) {
        for (std::size_t col_i = 0; col_i < n; ++col_i) {
            const std::size_t col = col_j * n + col_i;
            // I (x) A^T block: P column j maps through A^T.
            for (std::size_t row_i = 0; row_i < n; ++row_i)
                kron(col_j * n + row_i, col) += at(row_i, col_i);
            // A^T (x) I block: entry (j, col_j) of A^T scales the identity.
            for (std::size_t row_j = 0; row_j < n; ++row_j)
                kron(row_j * n + col_i, col) += at(row_j, col_j);
        }
    }

    std::vector<double> rhs(n2, 0.0);
    for (std::size_t i = 0; i < n; ++i) rhs[i * n + i] = -1.0;

    const std::vector<double> x = solve_dense(kron, rhs);

    Matrix p(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) p(i, j) = x[j * n + i];
    // Symmetrise; the exact solution is symmetric.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = p(j, i) = m;
        }

    const double res = lyapunov_residual(a_cl, p);
    if (!(res <= 1e-10 * std::max(1.0, p.max_abs())))
        throw SingularSystem("Lyapunov solve residual exceeds tolerance");
    const auto [lmin, lmax] = sym_eig_extremes(p);
    (void)lmax;
    if (!(lmin > 0.0)) throw SingularSystem("Lyapunov solution is not positive definite");
    return p;
}

}  // namespace mfc::ctrlmath
