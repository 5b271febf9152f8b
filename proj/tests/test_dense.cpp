#include "doctest.h"

#include <complex>
#include <random>

#include "ngmlimit/corpus.hpp"
#include "ngmlimit/dense.hpp"

using namespace ngmlimit;

namespace {

MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
    Index r = 0;
    for (const auto& row : rows) {
        Index c = 0;
        for (double x : row) out(r, c++) = x;
        ++r;
    }
    return out;
}

// Builds the minor entry by entry from an explicit index map, independent of
// the block copies used by minor().
MatrixXd minor_by_remap(const MatrixXd& a, Index i, Index j) {
    MatrixXd out(a.rows() - 1, a.cols() - 1);
    for (Index r = 0; r < out.rows(); ++r) {
        for (Index c = 0; c < out.cols(); ++c) {
            const Index src_r = r + (r >= i - 1 ? 1 : 0);
            const Index src_c = c + (c >= j - 1 ? 1 : 0);
            out(r, c) = a(src_r, src_c);
        }
    }
    return out;
}

const MatrixXd kTridiag = mat({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});

}  // namespace

TEST_CASE("minor") {
    CHECK(minor(identity(3), 1, 1) == identity(2));
    CHECK(minor(mat({{1, 2}, {3, 4}}), 1, 2) == mat({{3}}));
    CHECK(minor(kTridiag, 2, 2) == mat({{2, 0}, {0, 4}}));

    SUBCASE("agrees with an index-remapping oracle") {
        corpus::Rng rng(7);
        for (int k = 0; k < 50; ++k) {
            const Index n = corpus::uniform_index(rng, 2, 6);
            const Index m = corpus::uniform_index(rng, 2, 6);
            const MatrixXd a = corpus::random_matrix(rng, n, m);
            for (Index i = 1; i <= n; ++i)
                for (Index j = 1; j <= m; ++j) CHECK(minor(a, i, j) == minor_by_remap(a, i, j));
        }
    }

    SUBCASE("rejects small matrices and bad indices") {
        CHECK_THROWS_AS(minor(mat({{1}}), 1, 1), InvalidInput);
        CHECK_THROWS_AS(minor(kTridiag, 0, 1), InvalidInput);
        CHECK_THROWS_AS(minor(kTridiag, 1, 4), InvalidInput);
    }
}

TEST_CASE("nested principal minors commute up to the index shift") {
    corpus::Rng rng(11);
    const MatrixXd a = corpus::random_matrix(rng, 4, 4);
    for (Index i = 1; i <= 4; ++i) {
        for (Index k = 1; k <= 3; ++k) {
            // k indexes the 3x3 minor; map it back to an index of a.
            const Index k_full = k >= i ? k + 1 : k;
            const Index i_shifted = i > k_full ? i - 1 : i;
            CHECK(minor(minor(a, i, i), k, k) == minor(minor(a, k_full, k_full), i_shifted, i_shifted));
        }
    }
}

TEST_CASE("determinant") {
    CHECK(determinant(identity(4)) == doctest::Approx(1.0));
    CHECK(determinant(mat({{2, 0}, {0, 4}})) == doctest::Approx(8.0));
    CHECK(determinant(kTridiag) == doctest::Approx(18.0));
    CHECK(determinant(mat({{0, 1}, {1, 0}})) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(determinant(MatrixXd(2, 3)), InvalidInput);

    SUBCASE("agrees with cofactor expansion for n <= 8") {
        corpus::Rng rng(3);
        for (int k = 0; k < 80; ++k) {
            const Index n = 1 + k % 8;
            const MatrixXd a = corpus::random_matrix(rng, n, n);
            const double oracle = cofactor_det(a);
            CHECK(std::abs(determinant(a) - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
        }
    }

    SUBCASE("complex scalar") {
        Matrix<std::complex<double>> z(2, 2);
        z << std::complex<double>(0, 1), 2, 3, std::complex<double>(0, -1);
        // i * (-i) - 6 = -5
        CHECK(std::abs(determinant(z) - std::complex<double>(-5, 0)) < 1e-14);
        CHECK(std::abs(cofactor_det(z) - std::complex<double>(-5, 0)) < 1e-14);
    }
}

TEST_CASE("cofactor_det") {
    CHECK(cofactor_det(mat({{-2.5}})) == -2.5);
    CHECK(cofactor_det(identity(3)) == 1.0);
    CHECK(cofactor_det(kTridiag) == 18.0);
    CHECK_THROWS_AS(cofactor_det(identity(11)), InvalidInput);
}

TEST_CASE("inverse") {
    CHECK(inverse(identity(5)).isApprox(identity(5)));
    CHECK(inverse(mat({{2, 0}, {0, 4}})).isApprox(mat({{0.5, 0}, {0, 0.25}})));

    SUBCASE("residual on well-conditioned matrices") {
        corpus::Rng rng(5);
        for (int k = 0; k < 30; ++k) {
            const Index n = 6;
            const MatrixXd a = corpus::random_well_conditioned(rng, n);
            const MatrixXd inv = inverse(a);
            CHECK(inf_norm(MatrixXd(inv * a - identity(n))) <= 1e-9 * inf_norm(a) * n);
            CHECK(std::abs(determinant(inv) * determinant(a) - 1.0) <= 1e-8);
        }
    }

    SUBCASE("singular input carries the pivot") {
        try {
            inverse(mat({{1, 2}, {2, 4}}));
            FAIL("expected SingularMatrix");
        } catch (const SingularMatrix& e) {
            CHECK(e.pivot() == doctest::Approx(0.0));
        }
        CHECK_THROWS_AS(inverse(MatrixXd::Zero(3, 3)), SingularMatrix);
        // Pivot 1e-14 against ||A|| = 1: below the 1e-12 threshold.
        CHECK_THROWS_AS(inverse(mat({{1, 0}, {0, 1e-14}})), SingularMatrix);
        CHECK_NOTHROW(inverse(mat({{1, 0}, {0, 1e-10}})));
    }
}

TEST_CASE("plumbing") {
    const MatrixXd b = mat({{1, 2, 3}, {4, 5, 6}});
    CHECK(matmul(identity(2), b) == b);
    CHECK_THROWS_AS(matmul(b, b), InvalidInput);
    CHECK(inf_norm(identity(3)) == 1.0);
    CHECK(inf_norm(b) == 15.0);
    CHECK(set_entry(MatrixXd::Zero(2, 2), 1, 1, 7.0) == mat({{7, 0}, {0, 0}}));
    CHECK_THROWS_AS(set_entry(b, 3, 1, 0.0), InvalidInput);
    CHECK_THROWS_AS(identity(0), InvalidInput);

    SUBCASE("set_entry leaves its input alone and round-trips") {
        const MatrixXd a = kTridiag;
        const MatrixXd changed = set_entry(a, 2, 2, 99.0);
        CHECK(a(1, 1) == 3.0);
        CHECK(set_entry(changed, 2, 2, a(1, 1)) == a);
    }

    CHECK(all_finite(b));
    MatrixXd bad = b;
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(require_finite(bad, "test"), InvalidInput);
}
