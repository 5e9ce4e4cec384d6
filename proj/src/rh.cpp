#include "cfl/rh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cfl {

namespace {
constexpr Complex I{0.0, 1.0};
const double INV_SQRT2 = 1.0 / std::sqrt(2.0);
}  // namespace

Complex theta(int i, int j, double x, double t, Complex lambda) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("theta: indices must lie in {1,2,3}");
    const auto l = l_values(lambda);
    const auto z = z_values(lambda);
    return (l[i - 1] - l[j - 1]) * x - (z[i - 1] - z[j - 1]) * t;
}

bool on_interface(int m, int n, Complex lambda, double tol) {
    if (m == n) return false;
    auto near_circle = [&] { return std::abs(std::abs(lambda) - INV_SQRT2) <= tol; };
    auto near_axis = [&] {
        return std::min(std::abs(lambda.real()), std::abs(lambda.imag())) <= tol;
    };
    const bool outside = std::abs(lambda) >= INV_SQRT2 - tol;
    const bool inside = std::abs(lambda) <= INV_SQRT2 + tol;
    const int lo = std::min(m, n), hi = std::max(m, n);
    if (lo == 1 && hi == 2) return near_circle();          // same quadrant pair, across circle
    if (lo == 3 && hi == 4) return near_circle();
    if (lo == 1 && hi == 4) return near_axis() && outside; // across an axis, outside
    if (lo == 2 && hi == 3) return near_axis() && inside;  // across an axis, inside
    // remaining pairs (1,3), (2,4) meet only at the circle/axis corners
    return near_circle() && near_axis();
}

JumpRecord jump_matrix(int m, int n, double x, double t, const SpectralPoint& sp,
                       const ScatteringRecord& rec, double interface_tol) {
    if (m < 1 || m > 4 || n < 1 || n > 4 || m == n)
        throw std::invalid_argument("jump_matrix: m, n must be distinct domain indices");
    if (!on_interface(m, n, sp.lambda, interface_tol))
        throw std::invalid_argument("jump_matrix: lambda is off the requested interface");
    if (!rec.Sn_valid[m - 1] || !rec.Sn_valid[n - 1])
        throw SingularFactorError("Sn", "jump_matrix: spectral matrix unavailable (singular factor)");
    const Mat3& Sm = rec.Sn[m - 1];
    const Mat3& Sn = rec.Sn[n - 1];
    const Complex dSm = det(Sm);
    if (std::abs(dSm) < 1e-12)
        throw SingularFactorError("Sm", "jump_matrix: S_m is singular");
    const Complex theta_c = I * sp.lambda * sp.lambda * x + 2.0 * I * sp.k * sp.k * t;
    JumpRecord out;
    out.m = m;
    out.n = n;
    out.contour_point = sp.lambda;
    out.x = x;
    out.t = t;
    out.J = sigma_conjugate(theta_c, inverse(Sm) * Sn);
    return out;
}

double global_relation_residual(const FieldGrid& grid, const BoundaryTraces& traces,
                                Complex lambda, const IntegrateOptions& opts) {
    AdmissibilityFlags fs, fS, fc;
    const Mat3 s = scattering_s(grid, traces, lambda, opts, &fs);
    const Mat3 S = scattering_S(grid, traces, lambda, opts, &fS);
    const Mat3 c = c_function(grid, traces, lambda, opts, &fc);
    const Complex k = k_from_lambda(lambda);
    const Mat3 rhs = sigma_conjugate(-2.0 * I * k * k * grid.T_end, c);
    const Mat3 lhs = inverse(S) * s;
    double worst = 0.0;
    for (int col = 0; col < 3; ++col) {
        if (!(fs.column_ok[col] && fc.column_ok[col] && fS.all())) continue;
        for (int row = 0; row < 3; ++row)
            worst = std::max(worst, std::abs(lhs(row, col) - rhs(row, col)));
    }
    return worst;
}

std::string scalar_fn_name(ScalarFn f) {
    switch (f) {
        case ScalarFn::s11: return "s11";
        case ScalarFn::sTSA11: return "sTSA11";
        case ScalarFn::STsA11: return "STsA11";
        default: return "m11s";
    }
}

ScalarFn scalar_fn_for_domain(int n) {
    switch (n) {
        case 1: return ScalarFn::s11;
        case 2: return ScalarFn::sTSA11;
        case 3: return ScalarFn::STsA11;
        case 4: return ScalarFn::m11s;
        default: throw std::invalid_argument("scalar_fn_for_domain: n must be 1..4");
    }
}

namespace {

Complex boundary_point(const Box& b, double s) {
    // s in [0,4): perimeter parameter, counterclockwise from the lower-left corner
    const double w = b.re_hi - b.re_lo, h = b.im_hi - b.im_lo;
    const double q = s - std::floor(s / 4.0) * 4.0;
    if (q < 1.0) return {b.re_lo + q * w, b.im_lo};
    if (q < 2.0) return {b.re_hi, b.im_lo + (q - 1.0) * h};
    if (q < 3.0) return {b.re_hi - (q - 2.0) * w, b.im_hi};
    return {b.re_lo, b.im_hi - (q - 3.0) * h};
}

Complex boundary_tangent(const Box& b, double s) {
    const double w = b.re_hi - b.re_lo, h = b.im_hi - b.im_lo;
    const double q = s - std::floor(s / 4.0) * 4.0;
    if (q < 1.0) return {w, 0.0};
    if (q < 2.0) return {0.0, h};
    if (q < 3.0) return {-w, 0.0};
    return {0.0, -h};
}

}  // namespace

int winding_number(const std::function<Complex(Complex)>& f, const Box& box,
                   const FindZeroOptions& opts, double* raw_deviation) {
    int samples = opts.samples;
    for (int attempt = 0; attempt <= opts.max_refines; ++attempt, samples *= 2) {
        const int total = 4 * samples;
        Complex acc{};
        bool boundary_zero = false;
        const double ds = 4.0 / total;
        for (int i = 0; i < total; ++i) {
            const double s = (i + 0.5) * ds;
            const Complex z = boundary_point(box, s);
            const Complex fz = f(z);
            if (std::abs(fz) < 1e-13) {
                boundary_zero = true;
                break;
            }
            const double hstep = opts.fd_step_rel * std::max(1.0, std::abs(z));
            const Complex fp = (f(z - 2.0 * hstep) - 8.0 * f(z - hstep) + 8.0 * f(z + hstep) -
                                f(z + 2.0 * hstep)) /
                               (12.0 * hstep);
            acc += fp / fz * boundary_tangent(box, s) * ds;
        }
        if (boundary_zero)
            throw std::runtime_error("winding_number: f vanishes on the box boundary");
        const Complex w = acc / (2.0 * std::numbers::pi * I);
        const double wr = w.real();
        const double nearest = std::round(wr);
        const double dev = std::max(std::abs(wr - nearest), std::abs(w.imag()));
        if (dev <= opts.integer_tol) {
            if (raw_deviation) *raw_deviation = dev;
            return static_cast<int>(nearest);
        }
        // non-integral: refine the sampling, never round silently
    }
    throw std::runtime_error("winding_number: result failed to settle on an integer");
}

static void find_zeros_impl(const std::function<Complex(Complex)>& f, ScalarFn which, int region,
                            const Box& box, const FindZeroOptions& opts,
                            std::vector<ZeroRecord>& out, int depth) {
    int w;
    try {
        w = winding_number(f, box, opts);
    } catch (const std::runtime_error&) {
        if (depth > 60) throw;
        // zero on (or too near) the boundary: split and retry
        const Complex c = box.center();
        const Box quads[4] = {
            {box.re_lo, c.real(), box.im_lo, c.imag()},
            {c.real(), box.re_hi, box.im_lo, c.imag()},
            {box.re_lo, c.real(), c.imag(), box.im_hi},
            {c.real(), box.re_hi, c.imag(), box.im_hi}};
        for (const auto& q : quads) find_zeros_impl(f, which, region, q, opts, out, depth + 1);
        return;
    }
    if (w == 0) return;
    if (box.diameter() <= opts.locate_tol) {
        ZeroRecord z;
        z.location = box.center();
        z.which = which;
        z.multiplicity = w;
        z.region = region;
        out.push_back(z);
        return;
    }
    const Complex c = box.center();
    const Box quads[4] = {{box.re_lo, c.real(), box.im_lo, c.imag()},
                          {c.real(), box.re_hi, box.im_lo, c.imag()},
                          {box.re_lo, c.real(), c.imag(), box.im_hi},
                          {c.real(), box.re_hi, c.imag(), box.im_hi}};
    for (const auto& q : quads) find_zeros_impl(f, which, region, q, opts, out, depth + 1);
}

std::vector<ZeroRecord> find_zeros(const std::function<Complex(Complex)>& f, ScalarFn which,
                                   int region, const Box& box, const FindZeroOptions& opts) {
    if (box.re_hi <= box.re_lo || box.im_hi <= box.im_lo)
        throw std::invalid_argument("find_zeros: empty box");
    std::vector<ZeroRecord> out;
    find_zeros_impl(f, which, region, box, opts, out, 0);
    std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        return std::make_pair(a.location.real(), a.location.imag()) <
               std::make_pair(b.location.real(), b.location.imag());
    });
    return out;
}

Vec3 sectional_column(Complex lambda, double x, double t, int n, int col,
                      const SpectralAccess& data) {
    const Mat3 s = data.s_of(lambda);
    const Mat3 S = data.S_of(lambda);
    const Mat3 Sn = domain_spectral_matrix(s, S, n);
    const Complex k = k_from_lambda(lambda);
    const Complex th = I * lambda * lambda * x + 2.0 * I * k * k * t;
    const Mat3 M = data.mu2_of(lambda, x, t) * sigma_conjugate(th, Sn);
    return {M(0, col), M(1, col), M(2, col)};
}

Vec3 residue_column(const ZeroRecord& zero, double x, double t, const SpectralAccess& data,
                    int col) {
    if (zero.multiplicity != 1)
        throw std::invalid_argument("residue_column: only simple zeros supported");
    const Complex lj = zero.location;
    const Complex k = k_from_lambda(lj);
    const Complex Theta = I * lj * lj * x + 2.0 * I * k * k * t;
    const Mat3 s = data.s_of(lj);
    const Mat3 S = data.S_of(lj);
    const Mat3 mu2 = data.mu2_of(lj, x, t);

    const int n = zero.region;
    auto f_of = [&](Complex l) { return scalar_denominator(data.s_of(l), data.S_of(l), n); };
    const double h = 1e-4 * std::max(1.0, std::abs(lj));
    const Complex fdot =
        (f_of(lj - 2.0 * h) - 8.0 * f_of(lj - h) + 8.0 * f_of(lj + h) - f_of(lj + 2.0 * h)) /
        (12.0 * h);
    if (std::abs(fdot) < 1e-12)
        throw std::runtime_error("residue_column: scalar derivative vanishes at the zero");

    auto m = [](const Mat3& B, int i, int jj) { return minor_of(B, i, jj); };
    auto column_combination = [&](Complex c1, Complex c2, Complex c3) {
        Vec3 v;
        for (int i = 0; i < 3; ++i) v[i] = c1 * mu2(i, 0) + c2 * mu2(i, 1) + c3 * mu2(i, 2);
        return v;
    };

    switch (n) {
        case 1: {
            if (std::abs(s(1, 0)) < 1e-12)
                throw std::runtime_error("residue_column: companion denominator s21 vanishes");
            if (col != 1 && col != 2)
                throw std::invalid_argument("residue_column: region 1 has residues in columns 2, 3");
            // [M]_1 at the zero, times the minor ratio and the conjugation factor
            const Complex e2t = std::exp(2.0 * Theta);
            const Vec3 M1 = column_combination(s(0, 0), s(1, 0) * e2t, s(2, 0) * e2t);
            const Complex num = (col == 1) ? m(s, 3, 3) : m(s, 3, 2);
            const Complex coef = num / (fdot * s(1, 0)) * std::exp(-2.0 * Theta);
            return {coef * M1[0], coef * M1[1], coef * M1[2]};
        }
        case 2: {
            if (std::abs(s(1, 0)) < 1e-12)
                throw std::runtime_error("residue_column: companion denominator s21 vanishes");
            if (col != 1 && col != 2)
                throw std::invalid_argument("residue_column: region 2 has residues in columns 2, 3");
            const Complex e2t = std::exp(2.0 * Theta);
            const Vec3 M1 = column_combination(s(0, 0), s(1, 0) * e2t, s(2, 0) * e2t);
            const Complex num = (col == 1)
                                    ? m(s, 3, 3) * m(S, 1, 1) - m(s, 1, 3) * m(S, 3, 1)
                                    : m(s, 3, 2) * m(S, 1, 1) - m(s, 1, 2) * m(S, 3, 1);
            const Complex coef = num / (fdot * s(1, 0)) * std::exp(-2.0 * Theta);
            return {coef * M1[0], coef * M1[1], coef * M1[2]};
        }
        case 3: {
            const Complex m11 = m(s, 1, 1);
            if (std::abs(m11) < 1e-12)
                throw std::runtime_error("residue_column: companion denominator m11(s) vanishes");
            const Complex em2t = std::exp(-2.0 * Theta);
            // columns 2, 3 of M_3 are regular at the zero
            const Vec3 M2 = column_combination(s(0, 1) * em2t, s(1, 1), s(2, 1));
            const Vec3 M3 = column_combination(s(0, 2) * em2t, s(1, 2), s(2, 2));
            const Complex cA = (s(2, 2) * S(1, 0) - s(1, 2) * S(2, 0)) / (fdot * m11);
            const Complex cB = (s(1, 1) * S(2, 0) - s(2, 1) * S(1, 0)) / (fdot * m11);
            const Complex e2t = std::exp(2.0 * Theta);
            Vec3 out;
            for (int i = 0; i < 3; ++i) out[i] = e2t * (cA * M2[i] + cB * M3[i]);
            return out;
        }
        case 4: {
            const Complex m21 = m(s, 2, 1);
            if (std::abs(m21) < 1e-12)
                throw std::runtime_error("residue_column: companion denominator m21(s) vanishes");
            const Complex em2t = std::exp(-2.0 * Theta);
            const Vec3 M2 = column_combination(s(0, 1) * em2t, s(1, 1), s(2, 1));
            const Vec3 M3 = column_combination(s(0, 2) * em2t, s(1, 2), s(2, 2));
            const Complex e2t = std::exp(2.0 * Theta);
            Vec3 out;
            for (int i = 0; i < 3; ++i)
                out[i] = e2t * (s(2, 2) * M2[i] - s(2, 1) * M3[i]) / (fdot * m21);
            return out;
        }
        default:
            throw std::invalid_argument("residue_column: region must be 1..4");
    }
}

}  // namespace cfl
