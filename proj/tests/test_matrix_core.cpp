#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfl/mat3.hpp"
#include "cfl/numerics.hpp"

using namespace cfl;

namespace {

Mat3 random_matrix(UniformRng& rng, double w = 1.0) {
    Mat3 m;
    for (auto& z : m.a) z = rng.complex_in_square(w);
    return m;
}

// independent determinant by explicit permutation sum
Complex det_oracle(const Mat3& m) {
    return m(0, 0) * m(1, 1) * m(2, 2) + m(0, 1) * m(1, 2) * m(2, 0) +
           m(0, 2) * m(1, 0) * m(2, 1) - m(0, 2) * m(1, 1) * m(2, 0) -
           m(0, 1) * m(1, 0) * m(2, 2) - m(0, 0) * m(1, 2) * m(2, 1);
}

// independent inverse by Gauss-Jordan elimination
Mat3 inverse_oracle(Mat3 a) {
    Mat3 inv = Mat3::identity();
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        REQUIRE(std::abs(a(piv, col)) > 1e-14);
        for (int c = 0; c < 3; ++c) {
            std::swap(a(piv, c), a(col, c));
            std::swap(inv(piv, c), inv(col, c));
        }
        const Complex d = a(col, col);
        for (int c = 0; c < 3; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const Complex f = a(r, col);
            for (int c = 0; c < 3; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

}  // namespace

TEST_CASE("minor basics") {
    CHECK(minor_of(Mat3::identity(), 1, 1) == Complex{1.0, 0.0});
    const Mat3 d = Mat3::diag({2.0, 0.0}, {3.0, 0.0}, {5.0, 0.0});
    CHECK(minor_of(d, 2, 2) == Complex{10.0, 0.0});
    CHECK_THROWS_AS(minor_of(d, 0, 1), std::out_of_range);
    CHECK_THROWS_AS(minor_of(d, 1, 4), std::out_of_range);
}

TEST_CASE("cofactor expansion reproduces an independent determinant") {
    UniformRng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat3 B = random_matrix(rng);
        Complex expansion{};
        for (int j = 1; j <= 3; ++j) {
            const double sign = (j % 2 == 1) ? 1.0 : -1.0;
            expansion += sign * B(0, j - 1) * minor_of(B, 1, j);
        }
        CHECK(std::abs(expansion - det_oracle(B)) < 1e-13);
    }
}

TEST_CASE("cofactor matrix identity and special cases") {
    CHECK(max_abs(cofactor_matrix(Mat3::identity()) - Mat3::identity()) == 0.0);
    const Mat3 d = Mat3::diag({2.0, 0.0}, {3.0, 0.0}, {5.0, 0.0});
    const Mat3 dc = cofactor_matrix(d);
    CHECK(dc(0, 0) == Complex{15.0, 0.0});
    CHECK(dc(1, 1) == Complex{10.0, 0.0});
    CHECK(dc(2, 2) == Complex{6.0, 0.0});

    UniformRng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const Mat3 B = random_matrix(rng);
        const Mat3 lhs = B * transpose(cofactor_matrix(B));
        const Mat3 rhs = det_oracle(B) * Mat3::identity();
        CHECK(max_abs(lhs - rhs) <= 1e-12 * max_abs(B) * max_abs(B) + 1e-14);
    }
}

TEST_CASE("det of cofactor matrix is det squared") {
    UniformRng rng(13);
    int tested = 0;
    while (tested < 200) {
        const Mat3 B = random_matrix(rng);
        const Complex d = det(B);
        if (std::abs(d) < 0.05) continue;
        ++tested;
        const Complex dc = det(cofactor_matrix(B));
        CHECK(std::abs(dc - d * d) <= 1e-10 * std::abs(d * d));
    }
}

TEST_CASE("sigma conjugation") {
    SUBCASE("diagonal matrices are fixed") {
        const Mat3 d = Mat3::diag({1.0, 2.0}, {-0.5, 0.3}, {0.0, 1.0});
        CHECK(max_abs(sigma_conjugate({0.7, -0.4}, d) - d) == 0.0);
    }
    SUBCASE("single entry scaling") {
        Mat3 e;
        e(0, 1) = 1.0;
        const Complex c{0.3, 0.8};
        const Mat3 out = sigma_conjugate(c, e);
        CHECK(std::abs(out(0, 1) - std::exp(-2.0 * c)) < 1e-15);
    }
    SUBCASE("dense-product oracle") {
        UniformRng rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            const Mat3 A = random_matrix(rng);
            const Complex c = rng.complex_in_square(1.2);
            const Mat3 E = Mat3::diag(std::exp(-c), std::exp(c), std::exp(c));
            const Mat3 Einv = Mat3::diag(std::exp(c), std::exp(-c), std::exp(-c));
            const Mat3 dense = E * A * Einv;
            CHECK(max_abs(sigma_conjugate(c, A) - dense) < 1e-12 * (1.0 + max_abs(dense)));
        }
    }
    SUBCASE("additivity and homomorphism") {
        UniformRng rng(29);
        for (int trial = 0; trial < 100; ++trial) {
            const Mat3 A = random_matrix(rng), B = random_matrix(rng);
            const Complex c1 = rng.complex_in_square(1.0), c2 = rng.complex_in_square(1.0);
            const Mat3 lhs = sigma_conjugate(c1, sigma_conjugate(c2, A));
            const Mat3 rhs = sigma_conjugate(c1 + c2, A);
            CHECK(max_abs(lhs - rhs) < 1e-11 * (1.0 + max_abs(rhs)));
            const Mat3 h1 = sigma_conjugate(c1, A * B);
            const Mat3 h2 = sigma_conjugate(c1, A) * sigma_conjugate(c1, B);
            CHECK(max_abs(h1 - h2) < 1e-11 * (1.0 + max_abs(h1)));
        }
    }
    SUBCASE("overflow reported, not saturated") {
        Mat3 e;
        e(0, 1) = 1.0;
        CHECK_THROWS_AS(sigma_conjugate({400.0, 0.0}, e), NonFiniteError);
        Mat3 bad;
        bad(0, 0) = {std::numeric_limits<double>::quiet_NaN(), 0.0};
        CHECK_THROWS_AS(sigma_conjugate({0.1, 0.0}, bad), NonFiniteError);
    }
}

TEST_CASE("symmetry image") {
    CHECK(max_abs(symmetry_image(Mat3::identity(), 1.0) - Mat3::identity()) == 0.0);
    CHECK_THROWS_AS(involution_matrix(0.5), std::domain_error);

    UniformRng rng(31);
    for (const double eps : {1.0, -1.0}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Mat3 M = random_matrix(rng), N = random_matrix(rng);
            // involution
            CHECK(max_abs(symmetry_image(symmetry_image(M, eps), eps) - M) < 1e-13);
            // antihomomorphism
            const Mat3 lhs = symmetry_image(M * N, eps);
            const Mat3 rhs = symmetry_image(N, eps) * symmetry_image(M, eps);
            CHECK(max_abs(lhs - rhs) < 1e-12 * (1.0 + max_abs(lhs)));
        }
    }
}

TEST_CASE("inverse agrees with a Gauss-Jordan oracle") {
    UniformRng rng(37);
    int tested = 0;
    while (tested < 100) {
        const Mat3 B = random_matrix(rng);
        if (std::abs(det_oracle(B)) < 0.05) continue;
        ++tested;
        CHECK(max_abs(inverse(B) - inverse_oracle(B)) < 1e-10 * (1.0 + max_abs(inverse_oracle(B))));
    }
    CHECK_THROWS_AS(inverse(Mat3::zero()), std::domain_error);
}

TEST_CASE("product determinant multiplicativity to roundoff") {
    UniformRng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat3 A = random_matrix(rng), B = random_matrix(rng);
        CHECK(std::abs(det(A * B) - det(A) * det(B)) <
              1e-11 * (1.0 + std::abs(det(A) * det(B))));
    }
}
