#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace cfl {

using Complex = std::complex<double>;

/// Thrown when an operation would produce (or received) non-finite entries.
/// Exponential conjugation factors grow without bound off the admissible
/// domains; they must fail loudly instead of propagating NaN/Inf.
class NonFiniteError : public std::runtime_error {
public:
    explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Dense 3x3 complex matrix with value semantics. Storage is row-major,
/// operator()(r, c) is 0-based; the minor/cofactor helpers below take
/// 1-based indices matching the usual mathematical convention.
struct Mat3 {
    std::array<Complex, 9> a{};

    Complex& operator()(int r, int c) { return a[static_cast<size_t>(3 * r + c)]; }
    const Complex& operator()(int r, int c) const { return a[static_cast<size_t>(3 * r + c)]; }

    static Mat3 zero() { return Mat3{}; }
    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3 diag(Complex d0, Complex d1, Complex d2) {
        Mat3 m;
        m(0, 0) = d0; m(1, 1) = d1; m(2, 2) = d2;
        return m;
    }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Complex s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat3 operator*(Complex c) const {
        Mat3 r;
        for (size_t i = 0; i < 9; ++i) r.a[i] = a[i] * c;
        return r;
    }
    Mat3& operator+=(const Mat3& o) {
        for (size_t i = 0; i < 9; ++i) a[i] += o.a[i];
        return *this;
    }
};

inline Mat3 operator*(Complex c, const Mat3& m) { return m * c; }

inline bool is_finite(const Mat3& m) {
    for (const auto& z : m.a)
        if (!is_finite(z)) return false;
    return true;
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

inline Mat3 conjugate(const Mat3& m) {
    Mat3 r;
    for (size_t i = 0; i < 9; ++i) r.a[i] = std::conj(m.a[i]);
    return r;
}

inline Complex trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

inline double fro_norm(const Mat3& m) {
    double s = 0.0;
    for (const auto& z : m.a) s += std::norm(z);
    return std::sqrt(s);
}

inline double max_abs(const Mat3& m) {
    double s = 0.0;
    for (const auto& z : m.a) s = std::max(s, std::abs(z));
    return s;
}

Complex det(const Mat3& m);

/// (i,j)th minor, i, j in {1,2,3}: determinant of the 2x2 matrix left after
/// deleting row i and column j. Throws std::out_of_range on bad indices.
Complex minor_of(const Mat3& m, int i, int j);

/// Cofactor matrix B^A with (B^A)_ij = (-1)^(i+j) minor(B, i, j).
/// Satisfies B (B^A)^T = det(B) I; for unimodular B, (B^A)^T = B^{-1}.
Mat3 cofactor_matrix(const Mat3& m);

/// sigma = diag(-1, 1, 1)
Mat3 sigma_matrix();

/// Entry-wise action of e^{c sigma^}: entry (i,j) is scaled by
/// e^{c (sigma_ii - sigma_jj)}. Exact (the dense exponentials are diagonal),
/// and implemented entry-wise so overflow in one entry cannot pollute others.
/// Throws NonFiniteError if a scale factor leaves floating range.
Mat3 sigma_conjugate(Complex c, const Mat3& m);

/// A = diag(-1, eps, eps); eps must satisfy eps^2 = 1.
Mat3 involution_matrix(double eps);

/// The matrix part of the eigenfunction symmetry: A conj(M)^T A.
/// Pairing lambda with conj(lambda) is the caller's job.
Mat3 symmetry_image(const Mat3& m, double eps);

/// Inverse via adjugate over determinant. Throws std::domain_error when the
/// determinant is numerically zero.
Mat3 inverse(const Mat3& m);

}  // namespace cfl
