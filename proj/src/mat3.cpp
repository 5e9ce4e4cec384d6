#include "cfl/mat3.hpp"

namespace cfl {

Complex det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Complex minor_of(const Mat3& m, int i, int j) {
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::out_of_range("minor_of: indices must lie in {1,2,3}");
    int r0 = -1, r1 = -1, c0 = -1, c1 = -1;
    for (int k = 0; k < 3; ++k) {
        if (k != i - 1) (r0 < 0 ? r0 : r1) = k;
        if (k != j - 1) (c0 < 0 ? c0 : c1) = k;
    }
    return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
}

Mat3 cofactor_matrix(const Mat3& m) {
    Mat3 r;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
            double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            r(i - 1, j - 1) = sign * minor_of(m, i, j);
        }
    return r;
}

Mat3 sigma_matrix() { return Mat3::diag(-1.0, 1.0, 1.0); }

Mat3 sigma_conjugate(Complex c, const Mat3& m) {
    // sigma_ii - sigma_jj is -2 on (1,2),(1,3), +2 on (2,1),(3,1), 0 elsewhere.
    if (!is_finite(c) || !is_finite(m))
        throw NonFiniteError("sigma_conjugate: non-finite input");
    const double re2 = 2.0 * c.real();
    if (std::abs(re2) > 700.0)
        throw NonFiniteError("sigma_conjugate: exponent magnitude exceeds floating range");
    const Complex em = std::exp(-2.0 * c);
    const Complex ep = std::exp(2.0 * c);
    Mat3 r = m;
    r(0, 1) *= em;
    r(0, 2) *= em;
    r(1, 0) *= ep;
    r(2, 0) *= ep;
    if (!is_finite(r))
        throw NonFiniteError("sigma_conjugate: non-finite result");
    return r;
}

Mat3 involution_matrix(double eps) {
    if (eps != 1.0 && eps != -1.0)
        throw std::domain_error("involution_matrix: eps must be +1 or -1");
    return Mat3::diag(-1.0, eps, eps);
}

Mat3 symmetry_image(const Mat3& m, double eps) {
    const Mat3 A = involution_matrix(eps);
    return A * transpose(conjugate(m)) * A;
}

Mat3 inverse(const Mat3& m) {
    const Complex d = det(m);
    if (std::abs(d) < 1e-300)
        throw std::domain_error("inverse: singular matrix");
    return transpose(cofactor_matrix(m)) * (1.0 / d);
}

}  // namespace cfl
