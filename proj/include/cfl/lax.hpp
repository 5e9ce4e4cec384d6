#pragma once

#include "cfl/mat3.hpp"

namespace cfl {

/// One sample of the two-component field and its x-derivatives.
struct FieldSample {
    Complex q{};
    Complex r{};
    Complex qx{};
    Complex rx{};
};

/// Full local jet of an exact solution, used by the analytic residual path.
struct FieldJet {
    Complex q{}, r{};
    Complex qx{}, rx{};
    Complex qt{}, rt{};
    Complex qxx{}, rxx{};
    Complex qxt{}, rxt{};
};

/// k = lambda - 1/(2 lambda). Throws std::domain_error at lambda = 0.
Complex k_from_lambda(Complex lambda);

/// Q: first row (0, q_x, r_x), first column below diagonal (conj q_x, conj r_x).
Mat3 build_Q(const FieldSample& f);

/// V0 = diag-block [[-|q|^2-|r|^2], [[|q|^2, conj(q) r], [q conj(r), |r|^2]]].
Mat3 build_V0(const FieldSample& f);

/// V_{-1}: first row (0, q, r), first column below diagonal (-conj q, -conj r).
Mat3 build_Vminus1(const FieldSample& f);

/// x-part coefficient of the linear system: i lambda^2 sigma + lambda Q.
Mat3 lax_X(const FieldSample& f, Complex lambda);

/// t-part coefficient: 2ik^2 sigma + 2 lambda Q + i V0 + i V_{-1}/lambda.
Mat3 lax_T(const FieldSample& f, Complex lambda);

/// Gauge-removed coefficients: U1 = lambda Q, U2 = 2 lambda Q + i V0 + i V_{-1}/lambda.
Mat3 lax_U1(const FieldSample& f, Complex lambda);
Mat3 lax_U2(const FieldSample& f, Complex lambda);

/// Frobenius norm of X_t - T_x + [X, T] evaluated from an analytic jet.
/// Zero (to roundoff) exactly when the fields solve the evolution system.
double zero_curvature_residual(const FieldJet& jet, Complex lambda);

/// Plane-wave family q = a e^{i(kappa x - omega t)}, r = b e^{i(kappa x - omega t)}.
/// omega is pinned by the dispersion relation; validated by a substitution
/// oracle in the test suite before anything trusts it.
struct PlaneWaveParams {
    Complex a{};
    Complex b{};
    double kappa = 1.0;
    double omega = 0.0;

    FieldJet jet(double x, double t) const;
    FieldSample sample(double x, double t) const {
        const FieldJet j = jet(x, t);
        return {j.q, j.r, j.qx, j.rx};
    }
};

/// Builds the family parameters, deriving omega = -2k - 4 + 2(|a|^2+|b|^2) - 2/k.
PlaneWaveParams plane_wave(Complex a, Complex b, double kappa);

/// Pointwise residual of both evolution equations from an analytic jet
/// (max of the two absolute values).
double pde_residual_at(const FieldJet& jet);

}  // namespace cfl
