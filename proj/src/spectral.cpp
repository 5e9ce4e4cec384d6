#include "cfl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cfl {

namespace {
constexpr Complex I{0.0, 1.0};
const double INV_SQRT2 = 1.0 / std::sqrt(2.0);

// sigma_ii - sigma_jj
constexpr double SIG_DIFF[3][3] = {{0.0, -2.0, -2.0}, {2.0, 0.0, 0.0}, {2.0, 0.0, 0.0}};

Mat3 sigma_commutator(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = SIG_DIFF[i][j] * m(i, j);
    return r;
}
}  // namespace

std::string domain_name(Domain d) {
    switch (d) {
        case Domain::D1: return "D1";
        case Domain::D2: return "D2";
        case Domain::D3: return "D3";
        case Domain::D4: return "D4";
        default: return "Boundary";
    }
}

Domain classify_domain(Complex lambda, double tol) {
    if (lambda == Complex{})
        throw std::domain_error("classify_domain: lambda = 0");
    const double alam = std::abs(lambda);
    if (std::abs(alam - INV_SQRT2) <= tol) return Domain::Boundary;
    if (std::min(std::abs(lambda.real()), std::abs(lambda.imag())) <= tol) return Domain::Boundary;
    const double im_l2 = 2.0 * lambda.real() * lambda.imag();
    const bool inside = alam < INV_SQRT2;
    if (im_l2 > 0.0) return inside ? Domain::D2 : Domain::D1;
    return inside ? Domain::D3 : Domain::D4;
}

std::array<Complex, 3> l_values(Complex lambda) {
    const Complex l1 = I * lambda * lambda;
    return {l1, -l1, -l1};
}

std::array<Complex, 3> z_values(Complex lambda) {
    const Complex k = k_from_lambda(lambda);
    const Complex z1 = 2.0 * I * k * k;
    return {z1, -z1, -z1};
}

double EigenfunctionRecord::max_det_defect() const {
    double m = 0.0;
    for (const auto& v : values)
        if (is_finite(v)) m = std::max(m, std::abs(det(v) - 1.0));
    return m;
}

namespace {

struct LegSpec {
    bool is_x = true;        // x-leg vs t-leg
    double u0 = 0.0, u1 = 0.0;
    std::function<FieldSample(double)> coeff;
    double data_h = 1.0;     // spacing of the underlying samples
};

struct LegEngine {
    Complex lambda, k;
    IntegrateOptions opts;

    Complex phase_rate(const LegSpec& leg) const {
        return leg.is_x ? I * lambda * lambda : 2.0 * I * k * k;
    }
    Mat3 coeff_matrix(const LegSpec& leg, double u) const {
        const FieldSample f = leg.coeff(u);
        return leg.is_x ? lax_U1(f, lambda) : lax_U2(f, lambda);
    }

    // worst log-growth per column over the leg (linear exponent, extremes at ends)
    std::array<double, 3> leg_growth(const LegSpec& leg) const {
        const double span = leg.u1 - leg.u0;
        const double rate = -2.0 * phase_rate(leg).imag();  // Re(2 * phase_rate) of column 1
        const double g1 = std::max(0.0, rate * span);
        const double g23 = std::max(0.0, -rate * span);
        return {g1, g23, g23};
    }

    int substeps(const LegSpec& leg, double span, bool nu_mode) const {
        const double omega = 2.0 * std::abs(phase_rate(leg));
        const double c = nu_mode ? 2.5 * opts.phase_step : opts.phase_step;
        const double n_phase = span * omega / c;
        const double n_data = opts.min_substeps_per_sample * span / leg.data_h;
        const double n = std::max({n_phase, n_data, 1.0});
        if (n > 4e6) {
            std::ostringstream os;
            os << "integrate_eigenfunction: step-size failure, " << n
               << " substeps required on a leg (|lambda| too large for this tolerance)";
            throw std::runtime_error(os.str());
        }
        return static_cast<int>(std::ceil(n));
    }

    // advance mu across [u0, u1] of the leg (direct form, commutator retained)
    Mat3 advance_mu(const LegSpec& leg, Mat3 mu, double a, double b) const {
        const double span = std::abs(b - a);
        if (span == 0.0) return mu;
        const int n = substeps(leg, span, false);
        const double h = (b - a) / n;
        const Complex rate = phase_rate(leg);
        auto rhs = [&](double u, const Mat3& m) {
            return rate * sigma_commutator(m) + coeff_matrix(leg, u) * m;
        };
        for (int s = 0; s < n; ++s) {
            const double u = a + s * h;
            const Mat3 k1 = rhs(u, mu);
            const Mat3 k2 = rhs(u + 0.5 * h, mu + 0.5 * h * k1);
            const Mat3 k3 = rhs(u + 0.5 * h, mu + 0.5 * h * k2);
            const Mat3 k4 = rhs(u + h, mu + h * k3);
            mu += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return mu;
    }

    // advance in the leg-anchored gauge: nu(u) = e^{-(Phi(u)-Phi(a)) sigma^} mu(u)
    Mat3 advance_nu(const LegSpec& leg, Mat3 mu, double a, double b) const {
        const double span = std::abs(b - a);
        if (span == 0.0) return mu;
        const int n = substeps(leg, span, true);
        const double h = (b - a) / n;
        const Complex rate = phase_rate(leg);
        auto rhs = [&](double u, const Mat3& m) {
            const Mat3 C = sigma_conjugate(-rate * (u - a), coeff_matrix(leg, u));
            return C * m;
        };
        Mat3 nu = mu;
        for (int s = 0; s < n; ++s) {
            const double u = a + s * h;
            const Mat3 k1 = rhs(u, nu);
            const Mat3 k2 = rhs(u + 0.5 * h, nu + 0.5 * h * k1);
            const Mat3 k3 = rhs(u + 0.5 * h, nu + 0.5 * h * k2);
            const Mat3 k4 = rhs(u + h, nu + h * k3);
            nu += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return sigma_conjugate(rate * (b - a), nu);
    }

    Mat3 advance(const LegSpec& leg, Mat3 mu, double a, double b) const {
        LegSpec sub = leg;
        sub.u0 = a;
        sub.u1 = b;
        const auto g = leg_growth(sub);
        const double worst = *std::max_element(g.begin(), g.end());
        if (worst <= opts.nu_gauge_limit) return advance_nu(leg, mu, a, b);
        return advance_mu(leg, mu, a, b);
    }
};

struct CoeffSource {
    const FieldGrid& grid;
    const BoundaryTraces& traces;

    bool analytic() const {
        return (grid.meta.family == Family::plane_wave || grid.meta.family == Family::zero) &&
               grid.meta.provenance == "exact";
    }

    std::function<FieldSample(double)> x_row(int it) const {
        if (analytic()) {
            const PlaneWaveParams pw = grid.meta.pw;
            const double t = grid.t_of(it);
            return [pw, t](double x) { return pw.sample(x, t); };
        }
        const auto q = grid.row(grid.q, it), r = grid.row(grid.r, it);
        const auto qx = grid.row(grid.qx, it), rx = grid.row(grid.rx, it);
        const double h = grid.dx();
        return [q, r, qx, rx, h](double x) {
            return FieldSample{interp4(q, 0.0, h, x), interp4(r, 0.0, h, x),
                               interp4(qx, 0.0, h, x), interp4(rx, 0.0, h, x)};
        };
    }

    std::function<FieldSample(double)> t_edge() const {  // x = 0, from traces
        if (analytic()) {
            const PlaneWaveParams pw = grid.meta.pw;
            return [pw](double t) { return pw.sample(0.0, t); };
        }
        if (static_cast<int>(traces.g0.size()) != grid.nt)
            throw std::invalid_argument("integrate_eigenfunction: traces do not match the grid");
        const double h = grid.dt();
        const auto& tr = traces;
        return [&tr, h](double t) {
            return FieldSample{interp4(tr.g0, 0.0, h, t), interp4(tr.h0, 0.0, h, t),
                               interp4(tr.g1, 0.0, h, t), interp4(tr.h1, 0.0, h, t)};
        };
    }

    std::function<FieldSample(double)> t_column(int ix) const {
        if (analytic()) {
            const PlaneWaveParams pw = grid.meta.pw;
            const double x = grid.x_of(ix);
            return [pw, x](double t) { return pw.sample(x, t); };
        }
        std::vector<Complex> q(grid.nt), r(grid.nt), qx(grid.nt), rx(grid.nt);
        for (int j = 0; j < grid.nt; ++j) {
            const size_t kk = grid.idx(ix, j);
            q[j] = grid.q[kk];
            r[j] = grid.r[kk];
            qx[j] = grid.qx[kk];
            rx[j] = grid.rx[kk];
        }
        const double h = grid.dt();
        return [q = std::move(q), r = std::move(r), qx = std::move(qx), rx = std::move(rx),
                h](double t) {
            return FieldSample{interp4(q, 0.0, h, t), interp4(r, 0.0, h, t),
                               interp4(qx, 0.0, h, t), interp4(rx, 0.0, h, t)};
        };
    }
};

void accumulate_growth(AdmissibilityFlags& fl, const std::array<double, 3>& g, double guard) {
    for (int c = 0; c < 3; ++c) {
        fl.log_growth[c] += g[c];
        if (fl.log_growth[c] > std::log(guard)) fl.column_ok[c] = false;
    }
}

// zero out non-finite columns that were flagged inadmissible; throw otherwise
void sanitize_columns(Mat3& m, const AdmissibilityFlags& fl) {
    for (int c = 0; c < 3; ++c) {
        bool fin = true;
        for (int i = 0; i < 3; ++i) fin = fin && is_finite(m(i, c));
        if (!fin) {
            if (fl.column_ok[c])
                throw NonFiniteError("integrate_eigenfunction: non-finite admissible column");
            for (int i = 0; i < 3; ++i) m(i, c) = Complex{};
        }
    }
}

}  // namespace

EigenfunctionRecord integrate_eigenfunction(int j, const SpectralPoint& sp,
                                            const FieldGrid& grid, const BoundaryTraces& traces,
                                            const std::vector<std::array<int, 2>>& targets,
                                            const IntegrateOptions& opts) {
    if (j < 1 || j > 3) throw std::invalid_argument("integrate_eigenfunction: j must be 1..3");
    if (j == 3 && !grid.meta.decay_ok && !opts.allow_truncated_basepoint)
        throw std::invalid_argument(
            "integrate_eigenfunction: grid fails the decay gate, far basepoint unusable "
            "(set allow_truncated_basepoint for the truncated-interval reading)");
    for (const auto& tg : targets)
        if (tg[0] < 0 || tg[0] >= grid.nx || tg[1] < 0 || tg[1] >= grid.nt)
            throw std::invalid_argument("integrate_eigenfunction: target off the grid");
    if (opts.alternate_route && j != 2)
        throw std::invalid_argument("integrate_eigenfunction: alternate route only for j = 2");

    EigenfunctionRecord rec;
    rec.j = j;
    rec.lambda = sp.lambda;
    switch (j) {
        case 1: rec.base_x = 0.0; rec.base_t = grid.T_end; break;
        case 2: rec.base_x = 0.0; rec.base_t = 0.0; break;
        // The far basepoint is anchored at the corner (L, 0) and the contour
        // runs along the x = L edge first. For gate-passing data the edge
        // legs are negligible (tail mass); for truncated data this anchoring
        // is what keeps the basepoints at different t consistent, so the
        // scattering relations hold exactly for the truncated problem.
        case 3: rec.base_x = grid.L; rec.base_t = 0.0; break;
    }
    rec.points.resize(targets.size());
    rec.values.resize(targets.size());

    LegEngine eng{sp.lambda, sp.k, opts};
    CoeffSource src{grid, traces};

    // group targets: by row (it) for the standard routes, by column for the
    // alternate staircase of j = 2
    std::map<int, std::vector<std::pair<int, size_t>>> groups;  // key -> [(other index, slot)]
    for (size_t m = 0; m < targets.size(); ++m) {
        const int key = opts.alternate_route ? targets[m][0] : targets[m][1];
        const int other = opts.alternate_route ? targets[m][1] : targets[m][0];
        groups[key].push_back({other, m});
    }

    AdmissibilityFlags worst;
    for (auto& [key, slots] : groups) {
        std::sort(slots.begin(), slots.end());
        AdmissibilityFlags fl;
        Mat3 mu = Mat3::identity();

        if (!opts.alternate_route) {
            const int it = key;
            const double t = grid.t_of(it);
            // vertical approach leg: at x = 0 for j = 1, 2; along x = L for j = 3
            if (j == 1 || j == 2) {
                LegSpec leg{false, (j == 1 ? grid.T_end : 0.0), t, src.t_edge(), std::max(grid.dt(), 1e-12)};
                accumulate_growth(fl, eng.leg_growth(leg), opts.overflow_guard);
                mu = eng.advance(leg, mu, leg.u0, leg.u1);
            } else if (t != 0.0) {
                LegSpec leg{false, 0.0, t, src.t_column(grid.nx - 1), std::max(grid.dt(), 1e-12)};
                accumulate_growth(fl, eng.leg_growth(leg), opts.overflow_guard);
                mu = eng.advance(leg, mu, leg.u0, leg.u1);
            }
            // horizontal leg along the row
            LegSpec leg{true, (j == 3 ? grid.L : 0.0), 0.0, src.x_row(it), grid.dx()};
            double u = leg.u0;
            auto emit = [&](size_t slot, const Mat3& v) {
                rec.points[slot] = {grid.x_of(targets[slot][0]), t};
                rec.values[slot] = v;
            };
            if (j == 3) {  // integrate rightward-in, targets descending
                std::vector<std::pair<int, size_t>> desc(slots.rbegin(), slots.rend());
                for (const auto& [ix, slot] : desc) {
                    const double xt = grid.x_of(ix);
                    LegSpec seg = leg;
                    seg.u0 = u;
                    seg.u1 = xt;
                    accumulate_growth(fl, eng.leg_growth(seg), opts.overflow_guard);
                    mu = eng.advance(leg, mu, u, xt);
                    u = xt;
                    Mat3 v = mu;
                    sanitize_columns(v, fl);
                    emit(slot, v);
                }
            } else {
                for (const auto& [ix, slot] : slots) {
                    const double xt = grid.x_of(ix);
                    LegSpec seg = leg;
                    seg.u0 = u;
                    seg.u1 = xt;
                    accumulate_growth(fl, eng.leg_growth(seg), opts.overflow_guard);
                    mu = eng.advance(leg, mu, u, xt);
                    u = xt;
                    Mat3 v = mu;
                    sanitize_columns(v, fl);
                    emit(slot, v);
                }
            }
        } else {  // j = 2 via (x, 0)
            const int ix = key;
            const double x = grid.x_of(ix);
            LegSpec legx{true, 0.0, x, src.x_row(0), grid.dx()};
            accumulate_growth(fl, eng.leg_growth(legx), opts.overflow_guard);
            mu = eng.advance(legx, mu, 0.0, x);
            LegSpec legt{false, 0.0, 0.0, src.t_column(ix), std::max(grid.dt(), 1e-12)};
            double u = 0.0;
            for (const auto& [it, slot] : slots) {
                const double tt = grid.t_of(it);
                LegSpec seg = legt;
                seg.u0 = u;
                seg.u1 = tt;
                accumulate_growth(fl, eng.leg_growth(seg), opts.overflow_guard);
                mu = eng.advance(legt, mu, u, tt);
                u = tt;
                Mat3 v = mu;
                sanitize_columns(v, fl);
                rec.points[slot] = {x, tt};
                rec.values[slot] = v;
            }
        }
        for (int c = 0; c < 3; ++c) {
            worst.log_growth[c] = std::max(worst.log_growth[c], fl.log_growth[c]);
            worst.column_ok[c] = worst.column_ok[c] && fl.column_ok[c];
        }
    }
    rec.flags = worst;
    return rec;
}

Mat3 eigenfunction_at(int j, const SpectralPoint& sp, const FieldGrid& grid,
                      const BoundaryTraces& traces, int ix, int it,
                      const IntegrateOptions& opts, AdmissibilityFlags* flags) {
    const auto rec = integrate_eigenfunction(j, sp, grid, traces, {{ix, it}}, opts);
    if (flags) *flags = rec.flags;
    return rec.values.at(0);
}

Mat3 scattering_s(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                  const IntegrateOptions& opts, AdmissibilityFlags* flags) {
    return eigenfunction_at(3, SpectralPoint::make(lambda), grid, traces, 0, 0, opts, flags);
}

Mat3 scattering_S(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                  const IntegrateOptions& opts, AdmissibilityFlags* flags) {
    return eigenfunction_at(1, SpectralPoint::make(lambda), grid, traces, 0, 0, opts, flags);
}

Mat3 c_function(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                const IntegrateOptions& opts, AdmissibilityFlags* flags) {
    return eigenfunction_at(3, SpectralPoint::make(lambda), grid, traces, 0, grid.nt - 1, opts,
                            flags);
}

double adjugate_residual(const EigenfunctionRecord& rec, const FieldGrid& grid) {
    const size_t n = rec.values.size();
    if (n < 3)
        throw std::invalid_argument("adjugate_residual: need at least 3 stored points");
    const double t = rec.points[0][1];
    const double h = rec.points[1][0] - rec.points[0][0];
    for (size_t m = 0; m + 1 < n; ++m) {
        if (rec.points[m][1] != t ||
            std::abs((rec.points[m + 1][0] - rec.points[m][0]) - h) > 1e-12)
            throw std::invalid_argument("adjugate_residual: stored points must be one uniform row");
    }
    const Complex il2 = I * rec.lambda * rec.lambda;
    const int it = static_cast<int>(std::lround(t / std::max(grid.dt(), 1e-300)));
    double worst = 0.0;
    for (size_t m = 1; m + 1 < n; ++m) {
        const Mat3 A = cofactor_matrix(rec.values[m]);
        const Mat3 Ap = cofactor_matrix(rec.values[m + 1]);
        const Mat3 Am = cofactor_matrix(rec.values[m - 1]);
        const Mat3 dA = (Ap - Am) * (1.0 / (2.0 * h));
        const int ix = static_cast<int>(std::lround(rec.points[m][0] / grid.dx()));
        const Mat3 V1t = transpose(lax_U1(grid.at(ix, it), rec.lambda));
        const Mat3 R = dA + il2 * sigma_commutator(A) + V1t * A;
        worst = std::max(worst, fro_norm(R));
    }
    return worst;
}

Complex scalar_denominator(const Mat3& s, const Mat3& S, int n) {
    switch (n) {
        case 1: return s(0, 0);
        case 2:
            return s(0, 0) * minor_of(S, 1, 1) - s(1, 0) * minor_of(S, 2, 1) +
                   s(2, 0) * minor_of(S, 3, 1);
        case 3:
            return S(0, 0) * minor_of(s, 1, 1) - S(1, 0) * minor_of(s, 2, 1) +
                   S(2, 0) * minor_of(s, 3, 1);
        case 4: return minor_of(s, 1, 1);
        default: throw std::invalid_argument("scalar_denominator: n must be 1..4");
    }
}

static const char* denominator_name(int n) {
    switch (n) {
        case 1: return "s11";
        case 2: return "sTSA11";
        case 3: return "STsA11";
        default: return "m11s";
    }
}

Mat3 domain_spectral_matrix(const Mat3& s, const Mat3& S, int n, double tol) {
    if (n < 1 || n > 4) throw std::invalid_argument("domain_spectral_matrix: n must be 1..4");
    const Complex den = scalar_denominator(s, S, n);
    const double scale = 1.0 + max_abs(s) + max_abs(S);
    if (std::abs(den) <= tol * scale) {
        std::ostringstream os;
        os << "domain_spectral_matrix: vanishing denominator " << denominator_name(n)
           << " (|.| = " << std::abs(den) << ")";
        throw SingularFactorError(denominator_name(n), os.str());
    }
    Mat3 out;
    auto m = [](const Mat3& B, int i, int j) { return minor_of(B, i, j); };
    switch (n) {
        case 1:
            out(0, 0) = s(0, 0); out(0, 1) = 0.0; out(0, 2) = 0.0;
            out(1, 0) = s(1, 0); out(1, 1) = m(s, 3, 3) / den; out(1, 2) = m(s, 3, 2) / den;
            out(2, 0) = s(2, 0); out(2, 1) = m(s, 2, 3) / den; out(2, 2) = m(s, 2, 2) / den;
            break;
        case 2:
            out(0, 0) = s(0, 0);
            out(1, 0) = s(1, 0);
            out(2, 0) = s(2, 0);
            out(0, 1) = (m(s, 3, 3) * m(S, 2, 1) - m(s, 2, 3) * m(S, 3, 1)) / den;
            out(0, 2) = (m(s, 3, 2) * m(S, 2, 1) - m(s, 2, 2) * m(S, 3, 1)) / den;
            out(1, 1) = (m(s, 3, 3) * m(S, 1, 1) - m(s, 1, 3) * m(S, 3, 1)) / den;
            out(1, 2) = (m(s, 3, 2) * m(S, 1, 1) - m(s, 1, 2) * m(S, 3, 1)) / den;
            out(2, 1) = (m(s, 2, 3) * m(S, 1, 1) - m(s, 1, 3) * m(S, 2, 1)) / den;
            out(2, 2) = (m(s, 2, 2) * m(S, 1, 1) - m(s, 1, 2) * m(S, 2, 1)) / den;
            break;
        case 3:
            for (int i = 0; i < 3; ++i) {
                out(i, 0) = S(i, 0) / den;
                out(i, 1) = s(i, 1);
                out(i, 2) = s(i, 2);
            }
            break;
        case 4:
            out(0, 0) = 1.0 / den; out(0, 1) = s(0, 1); out(0, 2) = s(0, 2);
            out(1, 0) = 0.0; out(1, 1) = s(1, 1); out(1, 2) = s(1, 2);
            out(2, 0) = 0.0; out(2, 1) = s(2, 1); out(2, 2) = s(2, 2);
            break;
    }
    return out;
}

std::array<std::array<int, 3>, 3> contour_table(int n) {
    switch (n) {
        case 1: return {{{3, 2, 2}, {3, 3, 3}, {3, 3, 3}}};
        case 2: return {{{3, 1, 1}, {3, 3, 3}, {3, 3, 3}}};
        case 3: return {{{3, 3, 3}, {1, 3, 3}, {1, 3, 3}}};
        case 4: return {{{3, 3, 3}, {2, 3, 3}, {2, 3, 3}}};
        default: throw std::invalid_argument("contour_table: n must be 1..4");
    }
}

int contour_for_entry(int i, int j, Complex lambda) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("contour_for_entry: indices must lie in {1,2,3}");
    const auto l = l_values(lambda);
    const auto z = z_values(lambda);
    const double li = l[i - 1].real(), lj = l[j - 1].real();
    const double zi = z[i - 1].real(), zj = z[j - 1].real();
    if (li >= lj) return 3;
    return (zi >= zj) ? 1 : 2;
}

Mat3 sectional_solution(double x_val, double t_val, const SpectralPoint& sp, int n,
                        const FieldGrid& grid, const BoundaryTraces& traces,
                        const IntegrateOptions& opts) {
    const Mat3 s = scattering_s(grid, traces, sp.lambda, opts);
    const Mat3 S = scattering_S(grid, traces, sp.lambda, opts);
    const Mat3 Sn = domain_spectral_matrix(s, S, n);
    const int ix = static_cast<int>(std::lround(x_val / grid.dx()));
    const int it = grid.nt > 1 ? static_cast<int>(std::lround(t_val / grid.dt())) : 0;
    const Mat3 mu2 =
        eigenfunction_at(2, sp, grid, traces, ix, it, opts);
    const Complex theta = I * sp.lambda * sp.lambda * x_val + 2.0 * I * sp.k * sp.k * t_val;
    return mu2 * sigma_conjugate(theta, Sn);
}

Mat3 sectional_solution(double x_val, double t_val, const SpectralPoint& sp, int n,
                        const ScatteringRecord& rec, const FieldGrid& grid,
                        const BoundaryTraces& traces, const IntegrateOptions& opts) {
    if (n < 1 || n > 4) throw std::invalid_argument("sectional_solution: n must be 1..4");
    if (!rec.Sn_valid[n - 1])
        throw SingularFactorError("Sn", "sectional_solution: spectral matrix unavailable");
    const int ix = static_cast<int>(std::lround(x_val / grid.dx()));
    const int it = grid.nt > 1 ? static_cast<int>(std::lround(t_val / grid.dt())) : 0;
    const Mat3 mu2 = eigenfunction_at(2, sp, grid, traces, ix, it, opts);
    const Complex theta = I * sp.lambda * sp.lambda * x_val + 2.0 * I * sp.k * sp.k * t_val;
    return mu2 * sigma_conjugate(theta, rec.Sn[n - 1]);
}

Mat3 sectional_equation_rhs(int ix, int it, const SpectralPoint& sp, int n,
                            const FieldGrid& grid, const BoundaryTraces& traces,
                            const IntegrateOptions& opts) {
    const Mat3 s = scattering_s(grid, traces, sp.lambda, opts);
    const Mat3 S = scattering_S(grid, traces, sp.lambda, opts);
    const Mat3 Sn = domain_spectral_matrix(s, S, n);
    const auto table = contour_table(n);
    const double x = grid.x_of(ix), t = grid.t_of(it);
    const Complex lam2 = sp.lambda * sp.lambda, k2 = sp.k * sp.k;
    auto Theta = [&](double xx, double tt) { return I * lam2 * xx + 2.0 * I * k2 * tt; };
    const Complex Th_target = Theta(x, t);

    // primary-route values along the row t and the column x = 0
    std::vector<std::array<int, 2>> row_targets, col_targets;
    for (int i = 0; i < grid.nx; ++i) row_targets.push_back({i, it});
    for (int j = 0; j < grid.nt; ++j) col_targets.push_back({0, j});
    const auto row_rec = integrate_eigenfunction(2, sp, grid, traces, row_targets, opts);
    const auto col_rec = integrate_eigenfunction(2, sp, grid, traces, col_targets, opts);

    auto M_at = [&](const Mat3& mu2, double xx, double tt) {
        return mu2 * sigma_conjugate(Theta(xx, tt), Sn);
    };

    // integrand W = V * M at the sampled nodes, per leg
    std::vector<Mat3> row_W(grid.nx), colW(grid.nt);
    for (int i = 0; i < grid.nx; ++i) {
        const Mat3 M = M_at(row_rec.values[i], grid.x_of(i), t);
        row_W[i] = lax_U1(grid.at(i, it), sp.lambda) * M;
    }
    FieldSample edge_sample;
    for (int j = 0; j < grid.nt; ++j) {
        const Mat3 M = M_at(col_rec.values[j], 0.0, grid.t_of(j));
        edge_sample = FieldSample{traces.g0[j], traces.h0[j], traces.g1[j], traces.h1[j]};
        colW[j] = lax_U2(edge_sample, sp.lambda) * M;
    }

    Mat3 rhs = Mat3::identity();
    std::vector<Complex> buf;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double sd = SIG_DIFF[i][j];
            auto weighted_row = [&](int from, int to) {  // x-nodes [from..to]
                buf.clear();
                for (int m = from; m <= to; ++m) {
                    const Complex c = (Th_target - Theta(grid.x_of(m), t)) * sd;
                    buf.push_back(std::exp(c) * row_W[m](i, j));
                }
                return integrate_simpson(buf, grid.dx());
            };
            auto weighted_col = [&](int from, int to) {
                buf.clear();
                for (int m = from; m <= to; ++m) {
                    const Complex c = (Th_target - Theta(0.0, grid.t_of(m))) * sd;
                    buf.push_back(std::exp(c) * colW[m](i, j));
                }
                return integrate_simpson(buf, grid.dt());
            };
            Complex v{};
            switch (table[i][j]) {
                case 3:  // from (far, t) leftward to x
                    if (ix < grid.nx - 1) v = -weighted_row(ix, grid.nx - 1);
                    break;
                case 2:  // from the origin via (0, t)
                    if (it > 0) v += weighted_col(0, it);
                    if (ix > 0) v += weighted_row(0, ix);
                    break;
                case 1:  // from (0, T) down to (0, t), then across
                    if (it < grid.nt - 1) v -= weighted_col(it, grid.nt - 1);
                    if (ix > 0) v += weighted_row(0, ix);
                    break;
            }
            rhs(i, j) += v;
        }
    return rhs;
}

double sectional_equation_residual(int ix, int it, const SpectralPoint& sp, int n,
                                   const FieldGrid& grid, const BoundaryTraces& traces,
                                   const IntegrateOptions& opts) {
    const Mat3 rhs = sectional_equation_rhs(ix, it, sp, n, grid, traces, opts);
    const Mat3 primary =
        sectional_solution(grid.x_of(ix), grid.t_of(it), sp, n, grid, traces, opts);
    return max_abs(rhs - primary);
}

ScatteringRecord make_scattering_record(const FieldGrid& grid, const BoundaryTraces& traces,
                                        Complex lambda, const IntegrateOptions& opts) {
    ScatteringRecord rec;
    rec.lambda = lambda;
    rec.region = classify_domain(lambda);
    rec.s = scattering_s(grid, traces, lambda, opts, &rec.s_flags);
    rec.S = scattering_S(grid, traces, lambda, opts, &rec.S_flags);
    rec.cT = c_function(grid, traces, lambda, opts, &rec.c_flags);
    for (int n = 1; n <= 4; ++n) {
        try {
            rec.Sn[n - 1] = domain_spectral_matrix(rec.s, rec.S, n);
            rec.Sn_valid[n - 1] = true;
        } catch (const SingularFactorError&) {
            rec.Sn[n - 1] = Mat3::zero();
            rec.Sn_valid[n - 1] = false;
        }
    }
    return rec;
}

}  // namespace cfl
