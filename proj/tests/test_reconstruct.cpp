#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "cfl/reconstruct.hpp"

using namespace cfl;

namespace {
constexpr Complex I{0.0, 1.0};
}

TEST_CASE("x-integration") {
    SUBCASE("constant offset only") {
        std::vector<Complex> zero(41, Complex{});
        const auto q = integrate_x(zero, {0.7, -0.2}, 0.1);
        for (const auto& v : q) CHECK(v == Complex{0.7, -0.2});
    }
    SUBCASE("closed-form antiderivative") {
        const double kap = 1.3, dx = 4.0 / 128.0;
        const Complex a{0.4, 0.1};
        std::vector<Complex> qx(129);
        for (int i = 0; i < 129; ++i) qx[i] = I * kap * a * std::exp(I * kap * (dx * i));
        const auto q = integrate_x(qx, a, dx);
        double err = 0.0;
        for (int i = 0; i < 129; ++i)
            err = std::max(err, std::abs(q[i] - a * std::exp(I * kap * (dx * i))));
        CHECK(err < dx * dx);
    }
    SUBCASE("round trip through a stored grid row") {
        const PlaneWaveParams p = plane_wave({0.3, 0.0}, {0.2, 0.0}, 1.0);
        const FieldGrid g = sample_plane_wave(p, 4.0, 1.0, 129, 17);
        const int it = 8;
        std::vector<Complex> qx(g.nx);
        for (int i = 0; i < g.nx; ++i) qx[i] = g.qx[g.idx(i, it)];
        const auto q = integrate_x(qx, g.q[g.idx(0, it)], g.dx());
        double err = 0.0;
        for (int i = 0; i < g.nx; ++i) err = std::max(err, std::abs(q[i] - g.q[g.idx(i, it)]));
        CHECK(err < g.dx() * g.dx());
    }
}

TEST_CASE("derivative recovery") {
    SUBCASE("zero fields recover exactly zero") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        RayConfig ray;
        ray.magnitudes = {4.0, 8.0, 16.0};
        const auto [qx, rx] = recover_derivatives(g.x_of(16), g.t_of(8), ray, g, tr);
        CHECK(std::abs(qx) == 0.0);
        CHECK(std::abs(rx) == 0.0);
    }
    SUBCASE("plane wave within one percent; sign oracle") {
        const PlaneWaveParams p = plane_wave({0.3, 0.0}, {0.2, 0.0}, 1.0);
        const FieldGrid g = sample_plane_wave(p, 4.0, 1.0, 129, 33);
        const BoundaryTraces tr = extract_boundary(g);
        RayConfig ray;  // sign = +1
        const int ix = 32, it = 16;
        RayDiagnostics diag;
        const auto [qx, rx] = recover_derivatives(g.x_of(ix), g.t_of(it), ray, g, tr, {}, &diag);
        const FieldJet j = p.jet(g.x_of(ix), g.t_of(it));
        CHECK(std::abs(qx - j.qx) / std::abs(j.qx) < 0.01);
        CHECK(std::abs(rx - j.rx) / std::abs(j.rx) < 0.01);
        CHECK(std::abs(diag.fitted_decay_exponent - 1.0) < 0.2);

        RayConfig bad = ray;
        bad.sign = -1;
        const auto [qx_b, rx_b] = recover_derivatives(g.x_of(ix), g.t_of(it), bad, g, tr);
        CHECK(std::abs(qx_b - j.qx) / std::abs(j.qx) > 0.5);
    }
    SUBCASE("bad rays rejected") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        RayConfig ray;
        ray.magnitudes = {4.0, 8.0};
        CHECK_THROWS_AS(recover_derivatives(1.0, 0.5, ray, g, tr), std::invalid_argument);
        ray.magnitudes = {4.0, 8.0, 8.0};
        CHECK_THROWS_AS(recover_derivatives(1.0, 0.5, ray, g, tr), std::invalid_argument);
    }
}

TEST_CASE("closure report") {
    SUBCASE("zero scenario reports zero errors") {
        FieldGrid g = sample_zero(4.0, 1.0, 33, 17);
        const BoundaryTraces tr = extract_boundary(g);
        RayConfig ray;
        ray.magnitudes = {4.0, 8.0, 16.0};
        const auto rep = closure_report(g, tr, {{16, 8}, {8, 4}}, ray);
        CHECK(rep.max_rel_err_q == 0.0);
        CHECK(rep.max_rel_err_r == 0.0);
        for (const auto& p : rep.points) CHECK(p.ok);
    }
    SUBCASE("plane wave closure within tolerance") {
        const PlaneWaveParams p = plane_wave({0.3, 0.0}, {0.2, 0.0}, 1.0);
        const FieldGrid g = sample_plane_wave(p, 4.0, 1.0, 129, 33);
        const BoundaryTraces tr = extract_boundary(g);
        RayConfig ray;
        const auto rep = closure_report(g, tr, {{32, 16}, {64, 8}}, ray);
        CHECK(rep.max_rel_err_q < 0.01);
        CHECK(rep.max_rel_err_r < 0.01);
        CHECK(rep.validated_sign == 1);
    }
}
