#include "cfl/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cfl {

namespace {
constexpr Complex I{0.0, 1.0};

void check_grid_dims(int nx, int nt, double L, double T_end) {
    if (nx < 2 || nt < 1) throw std::invalid_argument("grid: nx >= 2 and nt >= 1 required");
    if (L <= 0.0 || T_end < 0.0) throw std::invalid_argument("grid: L > 0 and T_end >= 0 required");
}

/// First derivative on a uniform grid, 4th-order centered in the interior
/// with one-sided 4th-order closures at the two nodes near each end.
void derivative_x(std::span<const Complex> v, double h, std::span<Complex> out) {
    const int n = static_cast<int>(v.size());
    if (n < 6) {  // fall back to 2nd order on very short rows
        for (int i = 0; i < n; ++i) {
            if (i == 0) out[i] = (v[1] - v[0]) / h;
            else if (i == n - 1) out[i] = (v[n - 1] - v[n - 2]) / h;
            else out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        return;
    }
    const double c = 1.0 / (12.0 * h);
    out[0] = c * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]);
    out[1] = c * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]);
    for (int i = 2; i < n - 2; ++i)
        out[i] = c * (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]);
    out[n - 2] = c * (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]);
    out[n - 1] = c * (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]);
}

struct SolverState {
    std::vector<Complex> p, w;  // q_x, r_x on the x-grid
};

}  // namespace

FieldGrid sample_plane_wave(const PlaneWaveParams& p, double L, double T_end, int nx, int nt) {
    check_grid_dims(nx, nt, L, T_end);
    FieldGrid g;
    g.L = L;
    g.T_end = T_end;
    g.nx = nx;
    g.nt = nt;
    const size_t total = static_cast<size_t>(nx) * nt;
    g.q.resize(total);
    g.r.resize(total);
    g.qx.resize(total);
    g.rx.resize(total);
    for (int it = 0; it < nt; ++it)
        for (int ix = 0; ix < nx; ++ix) {
            const FieldJet j = p.jet(g.x_of(ix), g.t_of(it));
            const size_t k = g.idx(ix, it);
            g.q[k] = j.q;
            g.r[k] = j.r;
            g.qx[k] = j.qx;
            g.rx[k] = j.rx;
        }
    g.meta.family = (p.a == Complex{} && p.b == Complex{}) ? Family::zero : Family::plane_wave;
    g.meta.pw = p;
    g.meta.provenance = "exact";
    apply_decay_gate(g);
    return g;
}

FieldGrid sample_zero(double L, double T_end, int nx, int nt) {
    FieldGrid g = sample_plane_wave(plane_wave(0.0, 0.0, 1.0), L, T_end, nx, nt);
    g.meta.family = Family::zero;
    return g;
}

FieldGrid solve_direct(std::span<const Complex> q0, std::span<const Complex> r0,
                       std::span<const Complex> q0x, std::span<const Complex> r0x,
                       std::span<const Complex> g0, std::span<const Complex> h0,
                       double L, double T_end, int nx, int nt,
                       const SolveOptions& opts) {
    check_grid_dims(nx, nt, L, T_end);
    if (nx < 16 || nt < 16)
        throw std::invalid_argument("solve_direct: at least 16 nodes per dimension");
    if (static_cast<int>(q0.size()) != nx || static_cast<int>(r0.size()) != nx ||
        static_cast<int>(q0x.size()) != nx || static_cast<int>(r0x.size()) != nx)
        throw std::invalid_argument("solve_direct: profile arrays must match nx");
    if (static_cast<int>(g0.size()) != nt || static_cast<int>(h0.size()) != nt)
        throw std::invalid_argument("solve_direct: trace arrays must match nt");

    if (std::abs(q0[0] - g0[0]) > opts.corner_tol || std::abs(r0[0] - h0[0]) > opts.corner_tol) {
        std::ostringstream os;
        os << "solve_direct: incompatible corner data, |q0(0)-g0(0)| = "
           << std::abs(q0[0] - g0[0]) << ", |r0(0)-h0(0)| = " << std::abs(r0[0] - h0[0])
           << " exceeds tolerance " << opts.corner_tol;
        throw std::invalid_argument(os.str());
    }

    const double dx = L / (nx - 1);
    const double dt = T_end / (nt - 1);
    if (dt > opts.cfl * dx + 1e-15) {
        std::ostringstream os;
        os << "solve_direct: dt = " << dt << " violates the step bound " << opts.cfl
           << " * dx = " << opts.cfl * dx << "; increase nt";
        throw std::invalid_argument(os.str());
    }

    FieldGrid g;
    g.L = L;
    g.T_end = T_end;
    g.nx = nx;
    g.nt = nt;
    const size_t total = static_cast<size_t>(nx) * nt;
    g.q.resize(total);
    g.r.resize(total);
    g.qx.resize(total);
    g.rx.resize(total);

    // Dirichlet traces interpolate between stored samples for RK stage times.
    auto g0_at = [&](double t) { return interp4(g0, 0.0, dt, t); };
    auto h0_at = [&](double t) { return interp4(h0, 0.0, dt, t); };
    auto pL_at = [&](double t) { return opts.pL ? opts.pL(t) : Complex{}; };
    auto wL_at = [&](double t) { return opts.wL ? opts.wL(t) : Complex{}; };

    SolverState s;
    s.p.assign(q0x.begin(), q0x.end());
    s.w.assign(r0x.begin(), r0x.end());

    std::vector<Complex> qrow(nx), rrow(nx), px(nx), wx(nx);
    std::vector<Complex> kp(nx), kw(nx);

    // dp/dt = 2 p_x + (4i - i(2|q|^2+|r|^2)) p - i q conj(r) w - 2 q
    // dw/dt = 2 w_x + (4i - i(2|r|^2+|q|^2)) w - i r conj(q) p - 2 r
    auto rhs = [&](const std::vector<Complex>& p, const std::vector<Complex>& w, double t,
                   std::vector<Complex>& dp, std::vector<Complex>& dw) {
        auto qint = cumulative_integral(p, dx);
        auto rint = cumulative_integral(w, dx);
        const Complex qb = g0_at(t), rb = h0_at(t);
        for (int i = 0; i < nx; ++i) {
            qrow[i] = qb + qint[i];
            rrow[i] = rb + rint[i];
        }
        derivative_x(p, dx, px);
        derivative_x(w, dx, wx);
        for (int i = 0; i < nx; ++i) {
            const double nq = std::norm(qrow[i]), nr = std::norm(rrow[i]);
            dp[i] = 2.0 * px[i] + (4.0 * I - I * (2.0 * nq + nr)) * p[i]
                  - I * qrow[i] * std::conj(rrow[i]) * w[i] - 2.0 * qrow[i];
            dw[i] = 2.0 * wx[i] + (4.0 * I - I * (2.0 * nr + nq)) * w[i]
                  - I * rrow[i] * std::conj(qrow[i]) * p[i] - 2.0 * rrow[i];
        }
        // inflow values are pinned, not evolved
        dp[nx - 1] = Complex{};
        dw[nx - 1] = Complex{};
    };

    auto store_row = [&](int it, const std::vector<Complex>& p, const std::vector<Complex>& w) {
        const double t = dt * it;
        auto qint = cumulative_integral(p, dx);
        auto rint = cumulative_integral(w, dx);
        const Complex qb = g0_at(t), rb = h0_at(t);
        for (int i = 0; i < nx; ++i) {
            const size_t k = g.idx(i, it);
            g.q[k] = qb + qint[i];
            g.r[k] = rb + rint[i];
            g.qx[k] = p[i];
            g.rx[k] = w[i];
        }
    };

    double scale0 = 1e-12;
    for (int i = 0; i < nx; ++i)
        scale0 = std::max({scale0, std::abs(s.p[i]), std::abs(s.w[i])});
    for (int i = 0; i < nt; ++i)
        scale0 = std::max({scale0, std::abs(g0[i]), std::abs(h0[i]), 1e-12});

    store_row(0, s.p, s.w);

    std::vector<Complex> p1(nx), w1(nx), p2(nx), w2(nx), p3(nx), w3(nx);
    std::vector<Complex> d1(nx), e1(nx), d2(nx), e2(nx), d3(nx), e3(nx), d4(nx), e4(nx);

    for (int it = 1; it < nt; ++it) {
        const double t = dt * (it - 1);
        s.p[nx - 1] = pL_at(t);
        s.w[nx - 1] = wL_at(t);
        rhs(s.p, s.w, t, d1, e1);
        for (int i = 0; i < nx; ++i) { p1[i] = s.p[i] + 0.5 * dt * d1[i]; w1[i] = s.w[i] + 0.5 * dt * e1[i]; }
        p1[nx - 1] = pL_at(t + 0.5 * dt); w1[nx - 1] = wL_at(t + 0.5 * dt);
        rhs(p1, w1, t + 0.5 * dt, d2, e2);
        for (int i = 0; i < nx; ++i) { p2[i] = s.p[i] + 0.5 * dt * d2[i]; w2[i] = s.w[i] + 0.5 * dt * e2[i]; }
        p2[nx - 1] = pL_at(t + 0.5 * dt); w2[nx - 1] = wL_at(t + 0.5 * dt);
        rhs(p2, w2, t + 0.5 * dt, d3, e3);
        for (int i = 0; i < nx; ++i) { p3[i] = s.p[i] + dt * d3[i]; w3[i] = s.w[i] + dt * e3[i]; }
        p3[nx - 1] = pL_at(t + dt); w3[nx - 1] = wL_at(t + dt);
        rhs(p3, w3, t + dt, d4, e4);
        for (int i = 0; i < nx; ++i) {
            s.p[i] += dt / 6.0 * (d1[i] + 2.0 * d2[i] + 2.0 * d3[i] + d4[i]);
            s.w[i] += dt / 6.0 * (e1[i] + 2.0 * e2[i] + 2.0 * e3[i] + e4[i]);
        }
        s.p[nx - 1] = pL_at(t + dt);
        s.w[nx - 1] = wL_at(t + dt);

        double amp = 0.0;
        for (int i = 0; i < nx; ++i)
            amp = std::max({amp, std::abs(s.p[i]), std::abs(s.w[i])});
        if (!std::isfinite(amp) || amp > opts.instability_factor * (scale0 + 0.01)) {
            std::ostringstream os;
            os << "solve_direct: instability detected at t = " << dt * it
               << " (state amplitude " << amp << ", initial scale " << scale0 << ")";
            throw SolverInstabilityError(os.str());
        }
        store_row(it, s.p, s.w);
    }

    g.meta.family = Family::none;
    g.meta.provenance = "solve_direct rk4 space-order-4";
    g.meta.space_order = 4;
    apply_decay_gate(g);
    return g;
}

FieldGrid solve_plane_wave(const PlaneWaveParams& p, double L, double T_end, int nx, int nt,
                           const SolveOptions& opts_in) {
    std::vector<Complex> q0(nx), r0(nx), q0x(nx), r0x(nx), g0(nt), h0(nt);
    const double dx = L / (nx - 1);
    const double dt = nt > 1 ? T_end / (nt - 1) : 0.0;
    for (int i = 0; i < nx; ++i) {
        const FieldJet j = p.jet(dx * i, 0.0);
        q0[i] = j.q; r0[i] = j.r; q0x[i] = j.qx; r0x[i] = j.rx;
    }
    for (int i = 0; i < nt; ++i) {
        const FieldJet j = p.jet(0.0, dt * i);
        g0[i] = j.q; h0[i] = j.r;
    }
    SolveOptions opts = opts_in;
    opts.pL = [p, L](double t) { return p.jet(L, t).qx; };
    opts.wL = [p, L](double t) { return p.jet(L, t).rx; };
    FieldGrid g = solve_direct(q0, r0, q0x, r0x, g0, h0, L, T_end, nx, nt, opts);
    g.meta.provenance += " plane-wave-scenario";
    return g;
}

FieldGrid solve_gaussian(const GaussianParams& gp, double L, double T_end, int nx, int nt,
                         const SolveOptions& opts) {
    std::vector<Complex> q0(nx), r0(nx), q0x(nx), r0x(nx), g0(nt), h0(nt);
    const double dx = L / (nx - 1);
    for (int i = 0; i < nx; ++i) {
        q0[i] = gp.q0(dx * i);
        r0[i] = gp.r0(dx * i);
        q0x[i] = gp.q0x(dx * i);
        r0x[i] = gp.r0x(dx * i);
    }
    FieldGrid g = solve_direct(q0, r0, q0x, r0x, g0, h0, L, T_end, nx, nt, opts);
    g.meta.gp = gp;
    g.meta.provenance += " gaussian-scenario";
    return g;
}

ResidualSummary pde_residual(const FieldGrid& g) {
    if (g.nx < 5 || g.nt < 5)
        throw std::invalid_argument("pde_residual: grid too coarse (< 5 nodes per dimension)");
    ResidualSummary out;

    if (g.meta.family == Family::plane_wave || g.meta.family == Family::zero) {
        // analytic jet available at every node
        double sumsq = 0.0;
        for (int it = 0; it < g.nt; ++it)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double res = pde_residual_at(g.meta.pw.jet(g.x_of(ix), g.t_of(it)));
                out.max_abs = std::max(out.max_abs, res);
                sumsq += res * res;
            }
        out.l2 = std::sqrt(sumsq * g.dx() * g.dt());
        out.nx_interior = g.nx;
        out.nt_interior = g.nt;
        return out;
    }

    const double dx = g.dx(), dt = g.dt();
    double sumsq = 0.0;
    for (int it = 1; it < g.nt - 1; ++it)
        for (int ix = 1; ix < g.nx - 1; ++ix) {
            const size_t k = g.idx(ix, it);
            const Complex qv = g.q[k], rv = g.r[k];
            const Complex qxv = g.qx[k], rxv = g.rx[k];
            const Complex qxt = (g.qx[g.idx(ix, it + 1)] - g.qx[g.idx(ix, it - 1)]) / (2.0 * dt);
            const Complex rxt = (g.rx[g.idx(ix, it + 1)] - g.rx[g.idx(ix, it - 1)]) / (2.0 * dt);
            const Complex qxx = (g.qx[g.idx(ix + 1, it)] - g.qx[g.idx(ix - 1, it)]) / (2.0 * dx);
            const Complex rxx = (g.rx[g.idx(ix + 1, it)] - g.rx[g.idx(ix - 1, it)]) / (2.0 * dx);
            const Complex e1 = I * qxt - 2.0 * I * qxx + 4.0 * qxv
                             - (2.0 * std::norm(qv) + std::norm(rv)) * qxv
                             - qv * std::conj(rv) * rxv + 2.0 * I * qv;
            const Complex e2 = I * rxt - 2.0 * I * rxx + 4.0 * rxv
                             - (2.0 * std::norm(rv) + std::norm(qv)) * rxv
                             - rv * std::conj(qv) * qxv + 2.0 * I * rv;
            const double res = std::max(std::abs(e1), std::abs(e2));
            out.max_abs = std::max(out.max_abs, res);
            sumsq += res * res;
        }
    out.l2 = std::sqrt(sumsq * dx * dt);
    out.nx_interior = g.nx - 2;
    out.nt_interior = g.nt - 2;
    return out;
}

BoundaryTraces extract_boundary(const FieldGrid& g) {
    BoundaryTraces tr;
    tr.q0.resize(g.nx);
    tr.r0.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) {
        tr.q0[i] = g.q[g.idx(i, 0)];
        tr.r0[i] = g.r[g.idx(i, 0)];
    }
    tr.g0.resize(g.nt);
    tr.h0.resize(g.nt);
    tr.g1.resize(g.nt);
    tr.h1.resize(g.nt);
    for (int j = 0; j < g.nt; ++j) {
        tr.g0[j] = g.q[g.idx(0, j)];
        tr.h0[j] = g.r[g.idx(0, j)];
        tr.g1[j] = g.qx[g.idx(0, j)];
        tr.h1[j] = g.rx[g.idx(0, j)];
    }
    return tr;
}

FieldJet jet_from_grid(const FieldGrid& g, int ix, int it) {
    if (g.meta.family == Family::plane_wave || g.meta.family == Family::zero)
        return g.meta.pw.jet(g.x_of(ix), g.t_of(it));
    if (ix < 1 || ix > g.nx - 2 || it < 1 || it > g.nt - 2)
        throw std::invalid_argument("jet_from_grid: interior node required");
    const double dx = g.dx(), dt = g.dt();
    FieldJet j;
    const size_t k = g.idx(ix, it);
    j.q = g.q[k];
    j.r = g.r[k];
    j.qx = g.qx[k];
    j.rx = g.rx[k];
    j.qt = (g.q[g.idx(ix, it + 1)] - g.q[g.idx(ix, it - 1)]) / (2.0 * dt);
    j.rt = (g.r[g.idx(ix, it + 1)] - g.r[g.idx(ix, it - 1)]) / (2.0 * dt);
    j.qxx = (g.qx[g.idx(ix + 1, it)] - g.qx[g.idx(ix - 1, it)]) / (2.0 * dx);
    j.rxx = (g.rx[g.idx(ix + 1, it)] - g.rx[g.idx(ix - 1, it)]) / (2.0 * dx);
    j.qxt = (g.qx[g.idx(ix, it + 1)] - g.qx[g.idx(ix, it - 1)]) / (2.0 * dt);
    j.rxt = (g.rx[g.idx(ix, it + 1)] - g.rx[g.idx(ix, it - 1)]) / (2.0 * dt);
    return j;
}

double zero_curvature_residual(const FieldGrid& g, Complex lambda, int ix, int it) {
    const bool analytic =
        g.meta.family == Family::plane_wave || g.meta.family == Family::zero;
    if (!analytic && (ix < 1 || ix > g.nx - 2 || it < 1 || it > g.nt - 2))
        throw std::invalid_argument("zero_curvature_residual: interior node required");
    return zero_curvature_residual(jet_from_grid(g, ix, it), lambda);
}

double apply_decay_gate(FieldGrid& g, double threshold) {
    double m = 0.0;
    for (int j = 0; j < g.nt; ++j) {
        m = std::max(m, std::abs(g.q[g.idx(g.nx - 1, j)]));
        m = std::max(m, std::abs(g.r[g.idx(g.nx - 1, j)]));
    }
    g.meta.decay_threshold = threshold;
    g.meta.decay_max = m;
    g.meta.decay_ok = (m <= threshold);
    return m;
}

}  // namespace cfl
