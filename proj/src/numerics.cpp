#include "cfl/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfl {

Complex interp4(std::span<const Complex> v, double x0, double h, double x) {
    const int n = static_cast<int>(v.size());
    if (n == 0) throw std::invalid_argument("interp4: empty data");
    if (n == 1) return v[0];
    const double s = (x - x0) / h;
    if (n < 4) {
        // linear fallback on short data
        int i = std::clamp(static_cast<int>(s), 0, n - 2);
        const double f = s - i;
        return v[i] * (1.0 - f) + v[i + 1] * f;
    }
    int i0 = static_cast<int>(s) - 1;
    i0 = std::clamp(i0, 0, n - 4);
    const double u = s - i0;  // in [0,3] within the stencil
    // Lagrange weights for nodes 0,1,2,3
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    return w0 * v[i0] + w1 * v[i0 + 1] + w2 * v[i0 + 2] + w3 * v[i0 + 3];
}

std::vector<Complex> cumulative_integral(std::span<const Complex> v, double h) {
    const int n = static_cast<int>(v.size());
    std::vector<Complex> out(static_cast<size_t>(std::max(n, 0)), Complex{});
    if (n < 2) return out;
    if (n < 4) {
        for (int i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (v[i - 1] + v[i]);
        return out;
    }
    // 4th-order panel weights: interior panels use the two neighbours on each
    // side; first/last panels use one-sided 4-node weights.
    auto panel_start = [&](int i) {  // integral over [x_i, x_{i+1}] using nodes i..i+3
        return h / 24.0 * (9.0 * v[i] + 19.0 * v[i + 1] - 5.0 * v[i + 2] + v[i + 3]);
    };
    auto panel_mid = [&](int i) {  // nodes i-1..i+2
        return h / 24.0 * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]);
    };
    auto panel_end = [&](int i) {  // nodes i-2..i+1
        return h / 24.0 * (v[i - 2] - 5.0 * v[i - 1] + 19.0 * v[i] + 9.0 * v[i + 1]);
    };
    for (int i = 0; i + 1 < n; ++i) {
        Complex p;
        if (i == 0) p = panel_start(i);
        else if (i + 2 < n) p = panel_mid(i);
        else p = panel_end(i);
        out[i + 1] = out[i] + p;
    }
    return out;
}

Complex integrate_simpson(std::span<const Complex> v, double h) {
    const int n = static_cast<int>(v.size());
    if (n < 2) throw std::invalid_argument("integrate_simpson: need at least 2 nodes");
    Complex total{};
    int i = 0;
    const int intervals = n - 1;
    int simpson_pairs = intervals / 2;
    const bool odd = (intervals % 2) != 0;
    if (odd && intervals >= 3) simpson_pairs -= 1;  // leave room for a 3/8 tail
    for (int p = 0; p < simpson_pairs; ++p, i += 2)
        total += h / 3.0 * (v[i] + 4.0 * v[i + 1] + v[i + 2]);
    if (odd) {
        if (intervals >= 3)
            total += 3.0 * h / 8.0 * (v[i] + 3.0 * v[i + 1] + 3.0 * v[i + 2] + v[i + 3]);
        else
            total += 0.5 * h * (v[i] + v[i + 1]);
    }
    return total;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need matching data with >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::uint64_t fnv1a(std::span<const char> bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ull;
    }
    return hash;
}

}  // namespace cfl
