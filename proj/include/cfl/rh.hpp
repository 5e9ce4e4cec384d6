#pragma once

#include "cfl/spectral.hpp"

namespace cfl {

using Vec3 = std::array<Complex, 3>;

/// theta_ij = (l_i - l_j) x - (z_i - z_j) t, the printed exponent bookkeeping:
/// zero for i, j in {2,3}; theta_12 = theta_13 = -theta_21 = -theta_31
/// = 2i lambda^2 x - 4i k^2 t. Indices are 1-based; throws on lambda = 0.
/// Note: the residue evaluators use the conjugation exponents from the
/// column algebra (see residue_column), which differ from this display in
/// the sign pairing.
Complex theta(int i, int j, double x, double t, Complex lambda);

struct JumpRecord {
    int m = 0, n = 0;
    Complex contour_point{};
    double x = 0.0, t = 0.0;
    Mat3 J;
};

/// Jump factor J_{m,n} = e^{(i lambda^2 x + 2i k^2 t) sigma^}(S_m^{-1} S_n),
/// relating adjacent sectional solutions. Throws when S_m is singular or
/// lambda is off the m|n interface by more than tol.
JumpRecord jump_matrix(int m, int n, double x, double t, const SpectralPoint& sp,
                       const ScatteringRecord& rec, double interface_tol = 1e-9);

/// True when lambda lies within tol of the closure intersection of domains
/// m and n (circle arc or axis segment).
bool on_interface(int m, int n, Complex lambda, double tol = 1e-9);

/// Norm of S^{-1} s - e^{-2i k^2 T sigma^} c(T, lambda) over the columns
/// whose integrations are admissible. Zero-field data gives exactly zero.
double global_relation_residual(const FieldGrid& grid, const BoundaryTraces& traces,
                                Complex lambda, const IntegrateOptions& opts = {});

enum class ScalarFn { s11, sTSA11, STsA11, m11s };

std::string scalar_fn_name(ScalarFn f);

/// Map from domain index to the scalar whose zeros can generate poles there.
ScalarFn scalar_fn_for_domain(int n);

struct ZeroRecord {
    Complex location{};
    ScalarFn which = ScalarFn::s11;
    int multiplicity = 1;
    int region = 1;
};

struct Box {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
    Complex center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    double diameter() const { return std::max(re_hi - re_lo, im_hi - im_lo); }
};

struct FindZeroOptions {
    int samples = 64;            // boundary samples per edge (initial)
    double integer_tol = 1e-3;   // winding must land this close to an integer
    double locate_tol = 1e-6;    // bisection stops at this box diameter
    double fd_step_rel = 1e-4;   // lambda-derivative step, scaled by max(1, |lambda|)
    int max_refines = 4;         // sample doublings before giving up
};

/// Argument-principle winding number of f over the box boundary, by
/// quadrature of f'/f with central-difference derivatives. Adaptively
/// doubles the sampling until the result is integer within tolerance.
/// Throws when f vanishes on the boundary or refinement fails. When
/// raw_deviation is given it receives the distance of the settled
/// quadrature value from the returned integer.
int winding_number(const std::function<Complex(Complex)>& f, const Box& box,
                   const FindZeroOptions& opts = {}, double* raw_deviation = nullptr);

/// Localizes simple zeros of the selected scalar inside the box by winding
/// numbers and box bisection.
std::vector<ZeroRecord> find_zeros(const std::function<Complex(Complex)>& f, ScalarFn which,
                                   int region, const Box& box, const FindZeroOptions& opts = {});

/// Scattering data access used by the residue machinery; synthetic tests
/// supply rational matrix functions, production wires the spectral module.
struct SpectralAccess {
    std::function<Mat3(Complex)> s_of;
    std::function<Mat3(Complex)> S_of;
    // normalized eigenfunction with basepoint at the origin; identity for
    // synthetic data
    std::function<Mat3(Complex, double, double)> mu2_of;
};

/// One column of the sectional solution M_n at (x, t): the col-th column of
/// mu2 e^{Theta sigma^} S_n (0-based col). Columns that stay finite at a
/// simple zero of the domain scalar are computable there.
Vec3 sectional_column(Complex lambda, double x, double t, int n, int col,
                      const SpectralAccess& data);

/// Residue of the singular column(s) of M at a located simple zero,
/// evaluated from the closed-form residue conditions. For regions 1 and 2
/// this is the residue of column `col` in {1, 2} (0-based: 1 or 2); regions
/// 3 and 4 have the singular first column (col ignored). The lambda-
/// derivative of the vanishing scalar is computed by 4th-order central
/// differences. Throws on vanishing companion denominators or
/// multiplicity > 1.
Vec3 residue_column(const ZeroRecord& zero, double x, double t, const SpectralAccess& data,
                    int col = 1);

}  // namespace cfl
