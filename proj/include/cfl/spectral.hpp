#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cfl/fields.hpp"

namespace cfl {

/// Thrown by the spectral-matrix assembly when a scalar denominator
/// vanishes; carries the name of the offending factor (these are exactly
/// the possible pole locations of the sectional solutions).
class SingularFactorError : public std::runtime_error {
public:
    SingularFactorError(const std::string& which, const std::string& what)
        : std::runtime_error(what), which_(which) {}
    const std::string& which() const { return which_; }

private:
    std::string which_;
};

enum class Domain { D1, D2, D3, D4, Boundary };

std::string domain_name(Domain d);

/// Quadrant/modulus classification of the lambda plane. Within tol of the
/// circle |lambda| = 1/sqrt(2) or of the coordinate axes the result is
/// Boundary. Throws std::domain_error at lambda = 0.
Domain classify_domain(Complex lambda, double tol = 1e-12);

struct SpectralPoint {
    Complex lambda{};
    Complex k{};
    Domain region = Domain::Boundary;

    static SpectralPoint make(Complex lambda, double tol = 1e-12) {
        return {lambda, k_from_lambda(lambda), classify_domain(lambda, tol)};
    }
};

/// Diagonal of -i lambda^2 sigma (l) and -2i k^2 sigma (z).
std::array<Complex, 3> l_values(Complex lambda);
std::array<Complex, 3> z_values(Complex lambda);

/// Per-column numerical admissibility of an eigenfunction integration:
/// column j is admissible when its worst exponential growth factor along
/// the path stays below the overflow guard.
struct AdmissibilityFlags {
    std::array<bool, 3> column_ok{true, true, true};
    std::array<double, 3> log_growth{0.0, 0.0, 0.0};  // natural log of the worst factor
    bool all() const { return column_ok[0] && column_ok[1] && column_ok[2]; }
};

struct EigenfunctionRecord {
    int j = 0;                      // contour index, 1..3
    Complex lambda{};
    double base_x = 0.0, base_t = 0.0;
    std::vector<std::array<double, 2>> points;  // (x, t) per stored value
    std::vector<Mat3> values;
    AdmissibilityFlags flags;

    double max_det_defect() const;  // max |det - 1| over stored values
};

struct IntegrateOptions {
    double overflow_guard = 1e12;   // per-column exponential factor limit
    double phase_step = 0.02;       // radians of fastest phase per RK4 substep
    double nu_gauge_limit = 8.0;    // max log-growth for the anchored gauge
    int min_substeps_per_sample = 4;
    bool alternate_route = false;   // j = 2: (0,0)->(x,0)->(x,t) instead of via (0,t)
    // Permit the far basepoint on grids that fail the decay gate. The
    // integration then defines the truncated-interval spectral problem
    // (basepoint value fixed to the identity at x = L); every identity the
    // toolkit checks holds exactly for that problem. Off by default: the
    // strict half-line reading requires the gate.
    bool allow_truncated_basepoint = false;
};

/// Integrates the normalized eigenfunction along the axis-parallel legs of
/// contour j (1: from (0,T); 2: from (0,0); 3: from (L,t)) up to each target
/// grid node. Targets must be grid nodes; t-legs at x = 0 take their
/// coefficients from the boundary traces, x-legs from the grid row (analytic
/// families are evaluated exactly). For j = 3 the grid must pass the decay
/// gate. Throws on step failure or non-finite values in admissible columns.
EigenfunctionRecord integrate_eigenfunction(int j, const SpectralPoint& sp,
                                            const FieldGrid& grid, const BoundaryTraces& traces,
                                            const std::vector<std::array<int, 2>>& targets,
                                            const IntegrateOptions& opts = {});

/// Single-point helpers returning the eigenfunction value itself.
Mat3 eigenfunction_at(int j, const SpectralPoint& sp, const FieldGrid& grid,
                      const BoundaryTraces& traces, int ix, int it,
                      const IntegrateOptions& opts = {}, AdmissibilityFlags* flags = nullptr);

/// s(lambda): value of the decaying eigenfunction at the origin.
Mat3 scattering_s(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                  const IntegrateOptions& opts = {}, AdmissibilityFlags* flags = nullptr);

/// S(lambda): value of the boundary eigenfunction at the origin.
Mat3 scattering_S(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                  const IntegrateOptions& opts = {}, AdmissibilityFlags* flags = nullptr);

/// c(T, lambda): decaying eigenfunction evaluated at (0, T_end).
Mat3 c_function(const FieldGrid& grid, const BoundaryTraces& traces, Complex lambda,
                const IntegrateOptions& opts = {}, AdmissibilityFlags* flags = nullptr);

/// Max residual of the adjugate linear system along a stored record
/// (finite-differenced in x over the stored path; the record must hold
/// consecutive nodes of one grid row).
double adjugate_residual(const EigenfunctionRecord& rec, const FieldGrid& grid);

/// Per-domain spectral matrix assembled from s and S by the closed-form
/// factorization. Throws SingularFactorError when the required scalar
/// denominator vanishes (below tol in absolute value).
Mat3 domain_spectral_matrix(const Mat3& s, const Mat3& S, int n, double tol = 1e-12);

/// The four scalar denominators, by domain index: s11, (s^T S^A)_11,
/// (S^T s^A)_11, m11(s).
Complex scalar_denominator(const Mat3& s, const Mat3& S, int n);

/// Contour assignment table for the per-entry integral representation of
/// the sectional solution: entry value 1, 2 or 3.
std::array<std::array<int, 3>, 3> contour_table(int n);

/// Per-entry contour selection rule from the ordering of Re l and Re z at
/// lambda (1-based i, j). The table above is this rule evaluated on each
/// open domain.
int contour_for_entry(int i, int j, Complex lambda);

struct ScatteringRecord;

/// Sectional solution assembled by the primary route
/// (eigenfunction-2 times conjugated spectral matrix).
Mat3 sectional_solution(double x_val, double t_val, const SpectralPoint& sp, int n,
                        const FieldGrid& grid, const BoundaryTraces& traces,
                        const IntegrateOptions& opts = {});

/// Variant reusing the spectral matrices of a precomputed record.
Mat3 sectional_solution(double x_val, double t_val, const SpectralPoint& sp, int n,
                        const ScatteringRecord& rec, const FieldGrid& grid,
                        const BoundaryTraces& traces, const IntegrateOptions& opts = {});

/// Verification route: residual of the per-entry integral equation for the
/// sectional solution at one grid node, with all integrals evaluated by
/// Simpson quadrature along the per-entry contours. Small iff the primary
/// route solves the integral equation.
double sectional_equation_residual(int ix, int it, const SpectralPoint& sp, int n,
                                   const FieldGrid& grid, const BoundaryTraces& traces,
                                   const IntegrateOptions& opts = {});

/// Right-hand side of the per-entry integral equation at one node (used by
/// the verification route; at the origin it reproduces the spectral matrix).
Mat3 sectional_equation_rhs(int ix, int it, const SpectralPoint& sp, int n,
                            const FieldGrid& grid, const BoundaryTraces& traces,
                            const IntegrateOptions& opts = {});

struct ScatteringRecord {
    Complex lambda{};
    Domain region = Domain::Boundary;
    Mat3 s, S;
    std::array<Mat3, 4> Sn;
    std::array<bool, 4> Sn_valid{false, false, false, false};
    Mat3 cT;
    AdmissibilityFlags s_flags, S_flags, c_flags;
};

/// One-stop evaluation of all spectral data at a lambda sample.
ScatteringRecord make_scattering_record(const FieldGrid& grid, const BoundaryTraces& traces,
                                        Complex lambda, const IntegrateOptions& opts = {});

}  // namespace cfl
