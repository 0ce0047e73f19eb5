#include "mfc/ctrlmath/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfc::ctrlmath {
namespace {

constexpr double kTiny = std::numeric_limits<double>::epsilon();

// One cyclic Jacobi sweep; returns the off-diagonal Frobenius mass removed.
double jacobi_sweep(Matrix& a) {
    const std::size_t n = a.rows();
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            off += 2.0 * apq * apq;
            if (apq == 0.0) continue;
            const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            for (std::size_t k = 0; k < n; ++k) {
                const double akp = a(k, p), akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double apk = a(p, k), aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
        }
    }
    return off;
}

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
        norm = std::sqrt(norm);
        if (norm <= kTiny * std::max(1.0, a.max_abs())) {
            for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
            continue;
        }
        const double alpha = (a(k + 1, k) >= 0.0) ? -norm : norm;
        std::vector<double> v(n, 0.0);
        v[k + 1] = a(k + 1, k) - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
        double vtv = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vtv += v[i] * v[i];
        if (vtv == 0.0) continue;
        const double beta = 2.0 / vtv;
        // A <- (I - beta v v^T) A
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
            dot *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= dot * v[i];
        }
        // A <- A (I - beta v v^T)
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
            dot *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= dot * v[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

using cd = std::complex<double>;

// Eigenvalues of the complex 2x2 block [[a,b],[c,d]].
std::pair<cd, cd> eig2(cd a, cd b, cd c, cd d) {
    const cd tr = a + d;
    const cd disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
    return {0.5 * (tr + disc), 0.5 * (tr - disc)};
}

// Shifted QR with Givens rotations on a complex Hessenberg matrix.
// Sized for the n <= 10 design work in this project.
std::vector<cd> hessenberg_qr_eigenvalues(std::vector<std::vector<cd>> h) {
    const std::size_t n = h.size();
    std::vector<cd> eig(n);
    std::size_t hi = n;  // active block is rows/cols [0, hi)
    std::size_t iter_in_block = 0;

    auto subdiag_negligible = [&](std::size_t i) {
        return std::abs(h[i][i - 1]) <=
               kTiny * (std::abs(h[i - 1][i - 1]) + std::abs(h[i][i])) + 1e-300;
    };

    std::size_t total_iters = 0;
    const std::size_t max_total = 200 * std::max<std::size_t>(n, 1);
    while (hi > 0) {
        if (hi == 1) {
            eig[0] = h[0][0];
            break;
        }
        if (subdiag_negligible(hi - 1)) {
            eig[hi - 1] = h[hi - 1][hi - 1];
            --hi;
            iter_in_block = 0;
            continue;
        }
        if (hi == 2 || subdiag_negligible(hi - 2)) {
            const auto [l1, l2] =
                eig2(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
            eig[hi - 2] = l1;
            eig[hi - 1] = l2;
            hi -= 2;
            iter_in_block = 0;
            continue;
        }
        if (++total_iters > max_total)
            throw std::runtime_error("QR eigenvalue iteration failed to converge");

        // Find the start of the active block.
        std::size_t lo = hi - 1;
        while (lo > 0 && !subdiag_negligible(lo)) --lo;

        // Wilkinson shift from the trailing 2x2; exceptional shift on stagnation.
        cd shift;
        if (++iter_in_block % 16 == 0) {
            shift = cd(1.5 * std::abs(h[hi - 1][hi - 2]) + std::abs(h[hi - 1][hi - 1]), 0.0);
        } else {
            const auto [l1, l2] =
                eig2(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1]);
            const cd target = h[hi - 1][hi - 1];
            shift = (std::abs(l1 - target) < std::abs(l2 - target)) ? l1 : l2;
        }

        for (std::size_t i = lo; i < hi; ++i) h[i][i] -= shift;

        // QR factorisation of the active block by Givens rotations...
        std::vector<std::pair<cd, cd>> rot(hi - 1);
        for (std::size_t i = lo; i + 1 < hi; ++i) {
            const cd x = h[i][i], y = h[i + 1][i];
            const double r = std::hypot(std::abs(x), std::abs(y));
            cd c(1.0, 0.0), s(0.0, 0.0);
            if (r > 0.0) {
                c = x / r;
                s = y / r;
            }
            rot[i] = {c, s};
            for (std::size_t j = i; j < hi; ++j) {
                const cd hij = h[i][j], hkj = h[i + 1][j];
                h[i][j] = std::conj(c) * hij + std::conj(s) * hkj;
                h[i + 1][j] = -s * hij + c * hkj;
            }
        }
        // ...then RQ to complete the similarity transform.
        for (std::size_t i = lo; i + 1 < hi; ++i) {
            const auto [c, s] = rot[i];
            for (std::size_t r = lo; r <= std::min(i + 1, hi - 1); ++r) {
                const cd hri = h[r][i], hrk = h[r][i + 1];
                h[r][i] = hri * c + hrk * s;
                h[r][i + 1] = -hri * std::conj(s) + hrk * std::conj(c);
            }
        }
        for (std::size_t i = lo; i < hi; ++i) h[i][i] += shift;
    }
    return eig;
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& p) {
    if (!p.square()) throw std::invalid_argument("symmetric_eigenvalues needs a square matrix");
    const std::size_t n = p.rows();
    std::vector<double> out;
    if (n == 1) {
        out = {p(0, 0)};
    } else if (n == 2) {
        const double tr = p(0, 0) + p(1, 1);
        const double det = p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0);
        const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        out = {tr / 2.0 - disc, tr / 2.0 + disc};
    } else {
        Matrix a = p;
        // Symmetrise once so Jacobi rotations stay exact.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double m = 0.5 * (a(i, j) + a(j, i));
                a(i, j) = a(j, i) = m;
            }
        const double scale = std::max(1.0, a.max_abs());
        for (int sweep = 0; sweep < 64; ++sweep) {
            if (jacobi_sweep(a) <= (scale * scale) * 1e-30) break;
        }
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = a(i, i);
        std::sort(out.begin(), out.end());
    }
    return out;
}

std::pair<double, double> sym_eig_extremes(const Matrix& p) {
    if (!p.square()) throw NotSymmetric("sym_eig_extremes needs a square matrix");
    if (p.asymmetry() > 1e-12)
        throw NotSymmetric("matrix exceeds the 1e-12 relative asymmetry tolerance");
    const auto eigs = symmetric_eigenvalues(p);
    return {eigs.front(), eigs.back()};
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("eigenvalues needs a square matrix");
    if (!a.all_finite()) throw std::invalid_argument("eigenvalues needs finite entries");
    const std::size_t n = a.rows();
    if (n == 1) return {cd(a(0, 0), 0.0)};
    if (n == 2) return {std::get<0>(eig2(a(0, 0), a(0, 1), a(1, 0), a(1, 1))),
                        std::get<1>(eig2(a(0, 0), a(0, 1), a(1, 0), a(1, 1)))};

    Matrix h = a;
    hessenberg(h);
    std::vector<std::vector<cd>> hc(n, std::vector<cd>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) hc[i][j] = cd(h(i, j), 0.0);
    return hessenberg_qr_eigenvalues(std::move(hc));
}

bool is_hurwitz(const Matrix& a) {
    // Symmetric matrices get the cheaper, more accurate path.
    if (a.square() && a.asymmetry() <= 1e-13) {
        const auto eigs = symmetric_eigenvalues(a);
        return eigs.back() < -1e-12;
    }
    for (const auto& lambda : eigenvalues(a)) {
        if (lambda.real() >= -1e-12) return false;
    }
    return true;
}

}  // namespace mfc::ctrlmath
