#include "doctest.h"

#include <complex>

#include "ngmlimit/corpus.hpp"
#include "ngmlimit/spectrum.hpp"

using namespace ngmlimit;
using cd = std::complex<double>;

namespace {

bool near(const cd& a, const cd& b, double tol = 1e-10) { return std::abs(a - b) <= tol; }

// Companion matrix of prod (x - r_k).
MatrixXd companion(const std::vector<double>& roots) {
    std::vector<double> coeffs{1.0};  // highest degree first
    for (double r : roots) {
        std::vector<double> next(coeffs.size() + 1, 0.0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            next[k] += coeffs[k];
            next[k + 1] -= r * coeffs[k];
        }
        coeffs = next;
    }
    const Index n = static_cast<Index>(roots.size());
    MatrixXd c = MatrixXd::Zero(n, n);
    for (Index k = 1; k < n; ++k) c(k, k - 1) = 1.0;
    for (Index k = 0; k < n; ++k) c(k, n - 1) = -coeffs[static_cast<std::size_t>(n - k)];
    return c;
}

}  // namespace

TEST_CASE("eigenvalues") {
    MatrixXd d = MatrixXd::Zero(3, 3);
    d.diagonal() << 3, 1, 2;
    auto s = eigenvalues(d);
    REQUIRE(s.size() == 3);
    CHECK(near(s.values[0], 1.0));
    CHECK(near(s.values[1], 2.0));
    CHECK(near(s.values[2], 3.0));

    MatrixXd rot(2, 2);
    rot << 0, 1, -1, 0;
    s = eigenvalues(rot);
    CHECK(near(s.values[0], cd(0, -1)));
    CHECK(near(s.values[1], cd(0, 1)));

    s = eigenvalues(companion({2.0, -3.0, 0.5}));
    CHECK(near(s.values[0], -3.0, 1e-9));
    CHECK(near(s.values[1], 0.5, 1e-9));
    CHECK(near(s.values[2], 2.0, 1e-9));
    for (const auto& z : s.values) CHECK(z.imag() == 0.0);

    CHECK_THROWS_AS(eigenvalues(MatrixXd(2, 3)), InvalidInput);
}

TEST_CASE("spectrum is conjugation-closed and satisfies the characteristic polynomial") {
    corpus::Rng rng(21);
    for (int k = 0; k < 40; ++k) {
        const Index n = 1 + k % 9;
        const MatrixXd a = corpus::random_matrix(rng, n, n);
        const auto s = eigenvalues(a);
        REQUIRE(s.size() == static_cast<std::size_t>(n));
        for (const auto& z : s.values) {
            if (z.imag() == 0.0) continue;
            const bool paired = std::any_of(s.values.begin(), s.values.end(),
                                            [&](const cd& w) { return near(w, std::conj(z), 1e-8); });
            CHECK(paired);
        }
        const Matrix<cd> ac = a.cast<cd>();
        for (const auto& z : s.values) {
            const double residual = std::abs(determinant(Matrix<cd>(ac - z * Matrix<cd>::Identity(n, n))));
            CHECK(residual <= 1e-6 * std::pow(inf_norm(a), double(n)));
        }
    }
}

TEST_CASE("spectral radius and abscissa") {
    CHECK(spectral_radius(identity(3)) == doctest::Approx(1.0));
    MatrixXd d(2, 2);
    d << 1, 0, 0, -3;
    CHECK(spectral_radius(d) == doctest::Approx(3.0));
    MatrixXd sym(2, 2);
    sym << 0, 2, 2, 0;
    CHECK(spectral_radius(sym) == doctest::Approx(2.0));
    CHECK(spectral_radius(MatrixXd::Zero(4, 4)) == 0.0);

    CHECK(spectral_abscissa(MatrixXd(-identity(2))) == doctest::Approx(-1.0));
    d << -1, 0, 0, 0.5;
    CHECK(spectral_abscissa(d) == doctest::Approx(0.5));
    MatrixXd tri(2, 2);
    tri << -2, 1, 0, -3;
    CHECK(spectral_abscissa(tri) == doctest::Approx(-2.0));
}

TEST_CASE("spectral radius invariances") {
    corpus::Rng rng(8);
    for (int k = 0; k < 30; ++k) {
        const Index n = 2 + k % 7;
        const MatrixXd a = corpus::random_matrix(rng, n, n);
        const MatrixXd p = corpus::random_well_conditioned(rng, n);
        const double rho = spectral_radius(a);
        CHECK(std::abs(spectral_radius(MatrixXd(inverse(p) * a * p)) - rho) <= 1e-7 * rho);
        const double c = corpus::uniform(rng, -4.0, 4.0);
        CHECK(std::abs(spectral_radius(MatrixXd(c * a)) - std::abs(c) * rho) <= 1e-9 * std::abs(c) * rho);
    }
}

TEST_CASE("spectral radius is continuous under small perturbations") {
    corpus::Rng rng(99);
    const MatrixXd a = corpus::random_matrix(rng, 5, 5);
    const MatrixXd e = corpus::random_matrix(rng, 5, 5);
    const double rho = spectral_radius(a);
    double previous = std::numeric_limits<double>::infinity();
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        const MatrixXd scaled = e * (eps / inf_norm(e));
        const double gap = std::abs(spectral_radius(MatrixXd(a + scaled)) - rho);
        CHECK(gap <= eps * 10);
        CHECK(gap <= previous * 1.5 + 1e-14);  // monotone within measurement noise
        previous = gap;
    }
}

TEST_CASE("multiset_distance") {
    std::vector<cd> a{1.0, cd(0, 1), cd(0, -1)};
    std::vector<cd> b{cd(0, -1), 1.0 + 1e-9, cd(0, 1)};
    CHECK(multiset_distance(a, b) == doctest::Approx(1e-9).epsilon(1e-6));
    std::vector<cd> c{1.0, 1.0, 2.0};
    std::vector<cd> d{1.0, 2.0, 2.0};
    CHECK(multiset_distance(c, d) == doctest::Approx(1.0));
    CHECK_THROWS_AS(multiset_distance(a, c = {1.0}), InvalidInput);
}
