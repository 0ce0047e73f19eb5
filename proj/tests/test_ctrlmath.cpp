#include <doctest.h>

#include <cmath>
#include <random>

#include "mfc/ctrlmath/eigen.hpp"
#include "mfc/ctrlmath/lyapunov.hpp"
#include "mfc/ctrlmath/margins.hpp"

using namespace mfc::ctrlmath;

namespace {

// Provably Hurwitz test matrix: -QQ^T - rho*I plus a skew-symmetric part,
// so x^T A x <= -rho ||x||^2 and every eigenvalue has Re < -rho.
Matrix random_hurwitz(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> rho_dist(0.1, 1.0);
    Matrix q(n, n), skew(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) = gauss(rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = gauss(rng);
            skew(i, j) = s;
            skew(j, i) = -s;
        }
    Matrix a = (q * q.transposed()) * -1.0 + skew;
    const double rho = rho_dist(rng);
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= rho;
    return a;
}

}  // namespace

TEST_CASE("lyapunov solve reproduces the closed-form 2x2 solution") {
    const Matrix a_cl(2, 2, {0.0, 1.0, -1.0, -2.0});
    const Matrix p = solve_lyapunov(a_cl);
    CHECK(p(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(p(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lyapunov_residual(a_cl, p) <= 1e-12);
}

TEST_CASE("lyapunov scalar and diagonal cases") {
    const Matrix scalar(1, 1, {-1.0});
    CHECK(solve_lyapunov(scalar)(0, 0) == doctest::Approx(0.5).epsilon(1e-14));

    const Matrix diag(2, 2, {-1.0, 0.0, 0.0, -2.0});
    const Matrix p = solve_lyapunov(diag);
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("lyapunov rejects non-Hurwitz inputs") {
    CHECK_THROWS_AS(solve_lyapunov(Matrix(2, 2, {0.0, 1.0, 0.0, 0.0})), NotHurwitz);
    try {
        solve_lyapunov(Matrix(1, 1, {2.0}));
        FAIL("expected NotHurwitz");
    } catch (const NotHurwitz& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("lyapunov residual stays below 1e-9 on random Hurwitz systems") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + (trial % 6);
        const Matrix a = random_hurwitz(rng, n);
        REQUIRE(is_hurwitz(a));
        const Matrix p = solve_lyapunov(a);
        CHECK(lyapunov_residual(a, p) <= 1e-9);
        CHECK(sym_eig_extremes(p).first > 0.0);
    }
}

TEST_CASE("symmetric eigenvalue extremes") {
    const auto [lmin, lmax] = sym_eig_extremes(Matrix(2, 2, {1.5, 0.5, 0.5, 0.5}));
    // Roots of l^2 - 2l + 0.5.
    CHECK(lmin == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-12));
    CHECK(lmax == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-12));

    const auto id = sym_eig_extremes(Matrix::identity(2));
    CHECK(id.first == doctest::Approx(1.0));
    CHECK(id.second == doctest::Approx(1.0));

    const auto diag = sym_eig_extremes(Matrix(2, 2, {0.5, 0.0, 0.0, 0.25}));
    CHECK(diag.first == doctest::Approx(0.25));
    CHECK(diag.second == doctest::Approx(0.5));

    CHECK_THROWS_AS(sym_eig_extremes(Matrix(2, 2, {1.0, 0.5, 0.0, 1.0})), NotSymmetric);
}

TEST_CASE("eigenvalue sandwich holds for random symmetric matrices") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + (trial % 5);
        Matrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) p(i, j) = p(j, i) = gauss(rng);
        const auto [lmin, lmax] = sym_eig_extremes(p);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> v(n);
            double norm_sq = 0.0;
            double quad = 0.0;
            for (auto& x : v) x = gauss(rng);
            for (std::size_t i = 0; i < n; ++i) {
                norm_sq += v[i] * v[i];
                for (std::size_t j = 0; j < n; ++j) quad += v[i] * p(i, j) * v[j];
            }
            CHECK(quad >= lmin * norm_sq - 1e-9 * norm_sq);
            CHECK(quad <= lmax * norm_sq + 1e-9 * norm_sq);
        }
    }
}

TEST_CASE("hurwitz verdicts") {
    CHECK(is_hurwitz(Matrix(2, 2, {0.0, 1.0, -1.0, -2.0})));       // double pole at -1
    CHECK_FALSE(is_hurwitz(Matrix(2, 2, {0.0, 1.0, 0.0, 0.0})));   // double zero
    CHECK(is_hurwitz(Matrix(1, 1, {-1.0})));
    CHECK_FALSE(is_hurwitz(Matrix(2, 2, {0.0, 1.0, -1.0, 0.0})));  // poles at +-i

    // Companion matrix of (s+1)(s+2)(s+3) = s^3 + 6s^2 + 11s + 6.
    const Matrix companion(3, 3, {0, 1, 0, 0, 0, 1, -6, -11, -6});
    CHECK(is_hurwitz(companion));
    const auto eigs = eigenvalues(companion);
    std::vector<double> re;
    for (const auto& l : eigs) {
        re.push_back(l.real());
        CHECK(std::abs(l.imag()) < 1e-8);
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-3.0).epsilon(1e-8));
    CHECK(re[1] == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(re[2] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("general eigenvalues handle complex pairs") {
    const auto eigs = eigenvalues(Matrix(2, 2, {0.0, 1.0, -1.0, 0.0}));
    REQUIRE(eigs.size() == 2);
    CHECK(std::abs(eigs[0].real()) < 1e-12);
    CHECK(std::abs(std::abs(eigs[0].imag()) - 1.0) < 1e-12);

    // Block diagonal: rotation at 3 +- 4i scaled, plus real -5.
    const Matrix m(3, 3, {-3.0, 4.0, 0.0, -4.0, -3.0, 0.0, 0.0, 0.0, -5.0});
    auto es = eigenvalues(m);
    std::sort(es.begin(), es.end(),
              [](auto a, auto b) { return a.imag() < b.imag(); });
    CHECK(es[0].real() == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(es[0].imag() == doctest::Approx(-4.0).epsilon(1e-9));
    CHECK(es[2].imag() == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(es[1].real() == doctest::Approx(-5.0).epsilon(1e-9));
}

TEST_CASE("general eigenvalues agree with the symmetric path") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + (trial % 4);
        Matrix p(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) p(i, j) = p(j, i) = gauss(rng);
        auto sym = symmetric_eigenvalues(p);
        auto gen = eigenvalues(p);
        std::vector<double> re;
        for (const auto& l : gen) {
            CHECK(std::abs(l.imag()) < 1e-7);
            re.push_back(l.real());
        }
        std::sort(re.begin(), re.end());
        for (std::size_t i = 0; i < n; ++i)
            CHECK(re[i] == doctest::Approx(sym[i]).epsilon(1e-7));
    }
}

TEST_CASE("stability margins of the canonical integrators") {
    const RationalTransfer integrator({1.0}, {0.0, 1.0});
    const auto m1 = stability_margins(integrator);
    CHECK(m1.crossover_rad_s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m1.phase_margin_deg == doctest::Approx(90.0).epsilon(1e-9));

    const RationalTransfer double_integrator({1.0}, {0.0, 0.0, 1.0});
    const auto m2 = stability_margins(double_integrator);
    CHECK(m2.crossover_rad_s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(m2.phase_margin_deg) < 1e-9);

    // Margin consistency: both computed independently.
    CHECK(m1.phase_margin_deg + m2.phase_margin_deg == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("stability margins reproduce the PI loop design point") {
    // L(s) = b0 (kp s + ki) / (s^2 (s + 1/tau_m)) with the cruise-control
    // constants; the loop crosses unity near 1 rad/s with ~75 deg margin.
    const double tau_m = 0.02, J_r = 3.0, i_G = 4.49;
    const double b0 = i_G / (tau_m * J_r);
    const double kp = 0.65, ki = 0.16;
    const RationalTransfer loop({b0 * ki, b0 * kp}, {0.0, 0.0, 1.0 / tau_m, 1.0});
    const auto m = stability_margins(loop);
    CHECK(m.crossover_rad_s == doctest::Approx(1.0).epsilon(0.02));
    CHECK(m.phase_margin_deg == doctest::Approx(75.0).epsilon(1.0 / 75.0));
    CHECK(loop.magnitude(m.crossover_rad_s) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("margin search reports NoCrossover when |L| stays below one") {
    const RationalTransfer small({0.5}, {1.0, 1.0});
    CHECK_THROWS_AS(stability_margins(small), NoCrossover);
}

TEST_CASE("rational transfer validation") {
    CHECK_THROWS_AS(RationalTransfer({1.0}, {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(RationalTransfer({1.0, 2.0, 3.0, 4.0}, {1.0, 1.0}), std::invalid_argument);
}
