#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "cfl/rh.hpp"

using namespace cfl;

namespace {
constexpr Complex I{0.0, 1.0};
const double PI = std::numbers::pi;

Mat3 const_unimodular() {
    Mat3 A;
    A(0, 0) = {0.8, 0.1};  A(0, 1) = {0.2, -0.3}; A(0, 2) = {0.1, 0.2};
    A(1, 0) = {-0.3, 0.2}; A(1, 1) = {0.9, 0.05}; A(1, 2) = {0.15, -0.1};
    A(2, 0) = {0.2, 0.3};  A(2, 1) = {-0.1, -0.2}; A(2, 2) = {1.05, 0.1};
    return A * (1.0 / std::pow(det(A), 1.0 / 3.0));
}

// analytic unimodular family whose (1,1) entry has a simple zero at l0
Mat3 entry11_zero(Complex l, Complex l0, Complex s13 = Complex{0.3, 0.5}) {
    const Complex c22{0.9, 0.2}, m33{1.1, -0.3}, s12{0.7, -0.4};
    const Complex s23{-0.2, 0.3}, s31{0.4, -0.1}, s32{0.25, 0.15};
    Mat3 s;
    s(0, 0) = 0.8 * (l - l0);
    s(0, 1) = s12;
    s(0, 2) = s13;
    s(1, 0) = (s(0, 0) * c22 - m33) / s12;
    s(1, 1) = c22;
    s(1, 2) = s23;
    s(2, 0) = s31;
    s(2, 1) = s32;
    const Complex m31 = s(0, 1) * s(1, 2) - s(0, 2) * s(1, 1);
    const Complex m32 = s(0, 0) * s(1, 2) - s(0, 2) * s(1, 0);
    s(2, 2) = (1.0 - s31 * m31 + s32 * m32) / m33;
    return s;
}

SpectralAccess identity_mu2_access(std::function<Mat3(Complex)> s_of,
                                   std::function<Mat3(Complex)> S_of) {
    return {std::move(s_of), std::move(S_of),
            [](Complex, double, double) { return Mat3::identity(); }};
}

Vec3 laurent_oracle(const SpectralAccess& acc, Complex l0, int region, int col, double x,
                    double t, double radius = 0.05, int samples = 256) {
    Vec3 total{Complex{}, Complex{}, Complex{}};
    for (int m = 0; m < samples; ++m) {
        const double th = 2.0 * PI * m / samples;
        const Complex z = l0 + std::polar(radius, th);
        const Complex dz = I * std::polar(radius, th) * (2.0 * PI / samples);
        const Vec3 column = sectional_column(z, x, t, region, col, acc);
        for (int i = 0; i < 3; ++i) total[i] += column[i] * dz;
    }
    for (int i = 0; i < 3; ++i) total[i] /= 2.0 * PI * I;
    return total;
}
}  // namespace

TEST_CASE("theta bookkeeping") {
    const Complex lam{0.7, 0.4};
    for (int i = 2; i <= 3; ++i)
        for (int j = 2; j <= 3; ++j)
            CHECK(std::abs(theta(i, j, 1.3, 0.7, lam)) == 0.0);
    const Complex k = k_from_lambda(lam);
    const Complex expected = 2.0 * I * lam * lam * 1.3 - 4.0 * I * k * k * 0.7;
    CHECK(std::abs(theta(1, 3, 1.3, 0.7, lam) - expected) < 1e-14);
    CHECK(std::abs(theta(1, 2, 1.3, 0.7, lam) - expected) < 1e-14);
    CHECK(std::abs(theta(3, 1, 1.3, 0.7, lam) + expected) < 1e-14);
    CHECK(std::abs(theta(1, 3, 1.0, 0.0, {1.0, 0.0}) - Complex{0.0, 2.0}) < 1e-15);
    CHECK_THROWS_AS(theta(0, 1, 0.0, 0.0, lam), std::out_of_range);
}

TEST_CASE("interface predicate") {
    const double r0 = 1.0 / std::sqrt(2.0);
    CHECK(on_interface(1, 2, std::polar(r0, PI / 4)));
    CHECK_FALSE(on_interface(1, 2, std::polar(0.9, PI / 4)));
    CHECK(on_interface(1, 4, {1.0, 0.0}));
    CHECK(on_interface(2, 3, {0.4, 0.0}));
    CHECK_FALSE(on_interface(1, 4, {0.4, 0.0}));  // inside the circle
    CHECK(on_interface(1, 3, {r0, 0.0}));         // meeting point only
    CHECK_FALSE(on_interface(1, 3, {1.0, 0.0}));
}

TEST_CASE("jump matrices") {
    SUBCASE("identity data gives identity jumps") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        const Complex lam{1.0 / std::sqrt(2.0), 0.0};
        const auto rec = make_scattering_record(g, tr, lam);
        const auto sp = SpectralPoint::make(lam);
        const auto J = jump_matrix(1, 2, 1.0, 0.5, sp, rec);
        CHECK(max_abs(J.J - Mat3::identity()) == 0.0);
        CHECK(std::abs(det(J.J) - 1.0) == 0.0);
    }
    SUBCASE("cyclic product telescopes exactly") {
        UniformRng rng(55);
        ScatteringRecord rec;
        rec.lambda = {1.0 / std::sqrt(2.0), 0.0};
        Mat3 s, S;
        for (auto& z : s.a) z = rng.complex_in_square(0.8);
        for (auto& z : S.a) z = rng.complex_in_square(0.8);
        s = s * (1.0 / std::pow(det(s), 1.0 / 3.0));
        S = S * (1.0 / std::pow(det(S), 1.0 / 3.0));
        for (int n = 1; n <= 4; ++n) {
            rec.Sn[n - 1] = domain_spectral_matrix(s, S, n);
            rec.Sn_valid[n - 1] = true;
        }
        const auto sp = SpectralPoint::make(rec.lambda);
        const Mat3 cyc = jump_matrix(1, 2, 0.9, 0.3, sp, rec).J *
                         jump_matrix(2, 3, 0.9, 0.3, sp, rec).J *
                         jump_matrix(3, 4, 0.9, 0.3, sp, rec).J *
                         jump_matrix(4, 1, 0.9, 0.3, sp, rec).J;
        CHECK(max_abs(cyc - Mat3::identity()) < 1e-12);
        CHECK(std::abs(det(jump_matrix(1, 2, 0.9, 0.3, sp, rec).J) - 1.0) < 1e-12);
    }
    SUBCASE("off-contour lambda rejected") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        const Complex lam = std::polar(0.9, PI / 4);  // interior of D1
        const auto rec = make_scattering_record(g, tr, lam);
        CHECK_THROWS_AS(jump_matrix(1, 2, 0.0, 0.0, SpectralPoint::make(lam), rec),
                        std::invalid_argument);
    }
}

TEST_CASE("global relation") {
    SUBCASE("zero fields: exact") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        CHECK(global_relation_residual(g, tr, std::polar(0.8, PI / 4)) == 0.0);
    }
    SUBCASE("gaussian data: small") {
        const GaussianParams gp{};
        const FieldGrid g = solve_gaussian(gp, 8.0, 0.5, 257, 65);
        const BoundaryTraces tr = extract_boundary(g);
        IntegrateOptions trunc;
        trunc.allow_truncated_basepoint = true;
        CHECK(global_relation_residual(g, tr, std::polar(0.8, PI / 4), trunc) < 1e-5);
        CHECK(global_relation_residual(g, tr, std::polar(0.5, 2 * PI / 3), trunc) < 1e-5);
    }
}

TEST_CASE("winding numbers and zero search") {
    SUBCASE("constant function: empty") {
        auto f = [](Complex) { return Complex{1.0, 0.0}; };
        const Box box{0.2, 1.2, 0.1, 0.9};
        CHECK(winding_number(f, box) == 0);
        CHECK(find_zeros(f, ScalarFn::s11, 1, box).empty());
    }
    SUBCASE("synthetic linear zero localized to tolerance") {
        const Complex l0{0.63, 0.41};
        auto f = [l0](Complex l) { return l - l0; };
        const Box box{0.2, 1.2, 0.1, 0.9};
        const auto zeros = find_zeros(f, ScalarFn::s11, 1, box);
        REQUIRE(zeros.size() == 1);
        CHECK(std::abs(zeros[0].location - l0) < 1e-6);
        CHECK(zeros[0].multiplicity == 1);
    }
    SUBCASE("double zero counted with multiplicity") {
        const Complex l0{0.6, 0.4};
        auto f = [l0](Complex l) { return (l - l0) * (l - l0); };
        double dev = 0.0;
        CHECK(winding_number(f, Box{0.2, 1.0, 0.1, 0.8}, {}, &dev) == 2);
        CHECK(dev < 1e-3);
    }
    SUBCASE("zero near the boundary still found by splitting") {
        const Complex l0{0.2000001, 0.45};
        auto f = [l0](Complex l) { return l - l0; };
        const auto zeros = find_zeros(f, ScalarFn::s11, 1, Box{0.2, 1.0, 0.1, 0.8});
        REQUIRE(zeros.size() == 1);
        CHECK(std::abs(zeros[0].location - l0) < 1e-5);
    }
    SUBCASE("empty box rejected") {
        auto f = [](Complex l) { return l; };
        CHECK_THROWS_AS(find_zeros(f, ScalarFn::s11, 1, Box{1.0, 0.5, 0.0, 1.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("residue conditions against the Laurent oracle") {
    const double x = 0.7, t = 0.4;
    const Mat3 C = const_unimodular();

    SUBCASE("region 1: scattering-entry zero") {
        const Complex l0{0.9, 0.55};
        auto s_of = [l0](Complex l) { return entry11_zero(l, l0); };
        auto S_of = [C](Complex) { return C; };
        const auto acc = identity_mu2_access(s_of, S_of);
        ZeroRecord zr{l0, ScalarFn::s11, 1, 1};
        for (const int col : {1, 2}) {
            const Vec3 pred = residue_column(zr, x, t, acc, col);
            const Vec3 oracle = laurent_oracle(acc, l0, 1, col, x, t);
            for (int i = 0; i < 3; ++i) CHECK(std::abs(pred[i] - oracle[i]) < 1e-7);
        }
        // theta factor degenerates to 1 at the origin
        const Vec3 pred0 = residue_column(zr, 0.0, 0.0, acc, 1);
        const Vec3 oracle0 = laurent_oracle(acc, l0, 1, 1, 0.0, 0.0);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(pred0[i] - oracle0[i]) < 1e-7);
    }
    SUBCASE("region 2: mixed-scalar zero") {
        const Complex l0{0.4, 0.25};
        auto S_of = [C](Complex) { return C; };
        auto s_of = [l0, C](Complex l) { return C * entry11_zero(l, l0); };
        const auto acc = identity_mu2_access(s_of, S_of);
        ZeroRecord zr{l0, ScalarFn::sTSA11, 1, 2};
        for (const int col : {1, 2}) {
            const Vec3 pred = residue_column(zr, x, t, acc, col);
            const Vec3 oracle = laurent_oracle(acc, l0, 2, col, x, t);
            for (int i = 0; i < 3; ++i) CHECK(std::abs(pred[i] - oracle[i]) < 1e-7);
        }
    }
    SUBCASE("region 3: two-column combination") {
        const Complex l0{-0.4, 0.25};
        const Mat3 Ct = transpose(C) * (1.0 / std::pow(det(transpose(C)), 1.0 / 3.0));
        auto s_of = [Ct](Complex) { return Ct; };
        auto S_of = [l0, Ct](Complex l) { return Ct * entry11_zero(l, l0); };
        const auto acc = identity_mu2_access(s_of, S_of);
        ZeroRecord zr{l0, ScalarFn::STsA11, 1, 3};
        const Vec3 pred = residue_column(zr, x, t, acc, 0);
        const Vec3 oracle = laurent_oracle(acc, l0, 3, 0, x, t);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(pred[i] - oracle[i]) < 1e-7);
    }
    SUBCASE("region 4: minor zero") {
        const Complex l0{-0.9, 0.55};
        auto s_of = [l0](Complex l) { return transpose(cofactor_matrix(entry11_zero(l, l0))); };
        auto S_of = [C](Complex) { return C; };
        const auto acc = identity_mu2_access(s_of, S_of);
        ZeroRecord zr{l0, ScalarFn::m11s, 1, 4};
        const Vec3 pred = residue_column(zr, x, t, acc, 0);
        const Vec3 oracle = laurent_oracle(acc, l0, 4, 0, x, t);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(pred[i] - oracle[i]) < 1e-7);
    }
    SUBCASE("vanishing numerator minor gives a zero residue column") {
        const Complex l0{0.9, 0.55};
        // s13 = 0 forces the second numerator minor to vanish at the zero
        auto s_of = [l0](Complex l) { return entry11_zero(l, l0, Complex{}); };
        auto S_of = [C](Complex) { return C; };
        const auto acc = identity_mu2_access(s_of, S_of);
        ZeroRecord zr{l0, ScalarFn::s11, 1, 1};
        const Vec3 pred = residue_column(zr, x, t, acc, 2);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(pred[i]) < 1e-12);
    }
    SUBCASE("multiplicity beyond one unsupported") {
        ZeroRecord zr{{0.5, 0.5}, ScalarFn::s11, 2, 1};
        const auto acc = identity_mu2_access([](Complex l) { return entry11_zero(l, {0.5, 0.5}); },
                                             [C = const_unimodular()](Complex) { return C; });
        CHECK_THROWS_AS(residue_column(zr, 0.0, 0.0, acc, 1), std::invalid_argument);
    }
}

TEST_CASE("winding search over actual scattering data stays empty in the solitonless regime") {
    const GaussianParams gp{Complex{0.05, 0.0}, Complex{0.03, 0.0}, 1.5, 4.0};
    const FieldGrid g = solve_gaussian(gp, 8.0, 0.25, 129, 33);
    const BoundaryTraces tr = extract_boundary(g);
    IntegrateOptions trunc;
    trunc.allow_truncated_basepoint = true;
    auto f = [&](Complex l) { return scattering_s(g, tr, l, trunc)(0, 0); };
    FindZeroOptions opts;
    opts.samples = 12;
    const auto zeros = find_zeros(f, ScalarFn::s11, 1, Box{0.75, 1.15, 0.15, 0.55}, opts);
    CHECK(zeros.empty());
}
