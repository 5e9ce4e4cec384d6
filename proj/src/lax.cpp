#include "cfl/lax.hpp"

namespace cfl {

namespace {
constexpr Complex I{0.0, 1.0};

Mat3 commutator(const Mat3& A, const Mat3& B) { return A * B - B * A; }
}  // namespace

Complex k_from_lambda(Complex lambda) {
    if (lambda == Complex(0.0, 0.0))
        throw std::domain_error("k_from_lambda: lambda = 0");
    return lambda - 0.5 / lambda;
}

Mat3 build_Q(const FieldSample& f) {
    Mat3 m;
    m(0, 1) = f.qx;
    m(0, 2) = f.rx;
    m(1, 0) = std::conj(f.qx);
    m(2, 0) = std::conj(f.rx);
    return m;
}

Mat3 build_V0(const FieldSample& f) {
    const double nq = std::norm(f.q), nr = std::norm(f.r);
    Mat3 m;
    m(0, 0) = -nq - nr;
    m(1, 1) = nq;
    m(1, 2) = std::conj(f.q) * f.r;
    m(2, 1) = f.q * std::conj(f.r);
    m(2, 2) = nr;
    return m;
}

Mat3 build_Vminus1(const FieldSample& f) {
    Mat3 m;
    m(0, 1) = f.q;
    m(0, 2) = f.r;
    m(1, 0) = -std::conj(f.q);
    m(2, 0) = -std::conj(f.r);
    return m;
}

Mat3 lax_X(const FieldSample& f, Complex lambda) {
    if (lambda == Complex(0.0, 0.0)) throw std::domain_error("lax_X: lambda = 0");
    return (I * lambda * lambda) * sigma_matrix() + lambda * build_Q(f);
}

Mat3 lax_T(const FieldSample& f, Complex lambda) {
    if (lambda == Complex(0.0, 0.0)) throw std::domain_error("lax_T: lambda = 0");
    const Complex k = k_from_lambda(lambda);
    return (2.0 * I * k * k) * sigma_matrix() + lax_U2(f, lambda);
}

Mat3 lax_U1(const FieldSample& f, Complex lambda) {
    if (lambda == Complex(0.0, 0.0)) throw std::domain_error("lax_U1: lambda = 0");
    return lambda * build_Q(f);
}

Mat3 lax_U2(const FieldSample& f, Complex lambda) {
    if (lambda == Complex(0.0, 0.0)) throw std::domain_error("lax_U2: lambda = 0");
    return 2.0 * lambda * build_Q(f) + I * build_V0(f) + (I / lambda) * build_Vminus1(f);
}

double zero_curvature_residual(const FieldJet& jet, Complex lambda) {
    if (lambda == Complex(0.0, 0.0))
        throw std::domain_error("zero_curvature_residual: lambda = 0");
    const FieldSample f{jet.q, jet.r, jet.qx, jet.rx};

    // X_t = lambda Q_t, built from the t-derivatives of the jet.
    Mat3 Qt;
    Qt(0, 1) = jet.qxt;
    Qt(0, 2) = jet.rxt;
    Qt(1, 0) = std::conj(jet.qxt);
    Qt(2, 0) = std::conj(jet.rxt);
    const Mat3 Xt = lambda * Qt;

    // T_x = 2 lambda Q_x + i V0_x + i V_{-1,x}/lambda.
    Mat3 Qx;
    Qx(0, 1) = jet.qxx;
    Qx(0, 2) = jet.rxx;
    Qx(1, 0) = std::conj(jet.qxx);
    Qx(2, 0) = std::conj(jet.rxx);

    Mat3 V0x;
    const Complex dnq = jet.qx * std::conj(jet.q) + jet.q * std::conj(jet.qx);
    const Complex dnr = jet.rx * std::conj(jet.r) + jet.r * std::conj(jet.rx);
    V0x(0, 0) = -dnq - dnr;
    V0x(1, 1) = dnq;
    V0x(1, 2) = std::conj(jet.qx) * jet.r + std::conj(jet.q) * jet.rx;
    V0x(2, 1) = jet.qx * std::conj(jet.r) + jet.q * std::conj(jet.rx);
    V0x(2, 2) = dnr;

    Mat3 Vm1x;
    Vm1x(0, 1) = jet.qx;
    Vm1x(0, 2) = jet.rx;
    Vm1x(1, 0) = -std::conj(jet.qx);
    Vm1x(2, 0) = -std::conj(jet.rx);

    const Mat3 Tx = 2.0 * lambda * Qx + I * V0x + (I / lambda) * Vm1x;

    const Mat3 X = lax_X(f, lambda);
    const Mat3 T = lax_T(f, lambda);
    const Mat3 F = Xt - Tx + commutator(X, T);
    if (!is_finite(F))
        throw NonFiniteError("zero_curvature_residual: non-finite result");
    return fro_norm(F);
}

PlaneWaveParams plane_wave(Complex a, Complex b, double kappa) {
    if (kappa == 0.0) throw std::domain_error("plane_wave: kappa = 0");
    PlaneWaveParams p;
    p.a = a;
    p.b = b;
    p.kappa = kappa;
    p.omega = -2.0 * kappa - 4.0 + 2.0 * (std::norm(a) + std::norm(b)) - 2.0 / kappa;
    return p;
}

FieldJet PlaneWaveParams::jet(double x, double t) const {
    const Complex I_{0.0, 1.0};
    const Complex E = std::exp(I_ * (kappa * x - omega * t));
    const Complex ikap = I_ * kappa;
    const Complex miw = -I_ * omega;
    FieldJet j;
    j.q = a * E;
    j.r = b * E;
    j.qx = ikap * j.q;
    j.rx = ikap * j.r;
    j.qt = miw * j.q;
    j.rt = miw * j.r;
    j.qxx = ikap * j.qx;
    j.rxx = ikap * j.rx;
    j.qxt = miw * j.qx;
    j.rxt = miw * j.rx;
    return j;
}

double pde_residual_at(const FieldJet& j) {
    const Complex I_{0.0, 1.0};
    const Complex e1 = I_ * j.qxt - 2.0 * I_ * j.qxx + 4.0 * j.qx
                     - (2.0 * std::norm(j.q) + std::norm(j.r)) * j.qx
                     - j.q * std::conj(j.r) * j.rx + 2.0 * I_ * j.q;
    const Complex e2 = I_ * j.rxt - 2.0 * I_ * j.rxx + 4.0 * j.rx
                     - (2.0 * std::norm(j.r) + std::norm(j.q)) * j.rx
                     - j.r * std::conj(j.q) * j.qx + 2.0 * I_ * j.r;
    return std::max(std::abs(e1), std::abs(e2));
}

}  // namespace cfl
