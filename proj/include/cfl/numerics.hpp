#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cfl/mat3.hpp"

namespace cfl {

/// Cubic 4-point Lagrange interpolation on a uniform grid (stencil shifted
/// at the ends). x is the physical coordinate, x0 the first node.
Complex interp4(std::span<const Complex> v, double x0, double h, double x);

/// Cumulative integral on a uniform grid, 4th-order (Adams-Moulton weights
/// per panel, mirrored at the start). out[0] = 0, out[m] = integral over
/// [x0, x_m]. Falls back to trapezoid below 4 nodes.
std::vector<Complex> cumulative_integral(std::span<const Complex> v, double h);

/// Composite Simpson over the full uniform grid; handles an odd final panel
/// with the 3/8 rule. Requires at least 2 nodes.
Complex integrate_simpson(std::span<const Complex> v, double h);

/// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

/// Deterministic uniform RNG with a fixed output mapping (bit-identical
/// across platforms, unlike std::uniform_real_distribution).
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    Complex complex_in_square(double half_width) {
        return {uniform(-half_width, half_width), uniform(-half_width, half_width)};
    }

private:
    std::uint64_t next() {  // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t state_;
};

/// FNV-1a 64-bit hash, used for config digests in output headers.
std::uint64_t fnv1a(std::span<const char> bytes);

}  // namespace cfl
