#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cfl/numerics.hpp"

namespace cfl {

/// Input rejected; carries the offending line (0 = file-level).
class ValidationError : public std::runtime_error {
public:
    ValidationError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct RunConfig {
    std::string scenario = "gaussian";  // zero | plane_wave | gaussian | file
    double L = 8.0;
    double T_end = 1.0;
    int nx = 513;
    int nt = 257;
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    std::string profile_file;

    // plane-wave scenario parameters
    Complex pw_a{0.3, 0.0};
    Complex pw_b{0.2, 0.0};
    double pw_kappa = 1.0;

    // gaussian scenario parameters
    Complex amp_q{0.2, 0.0};
    Complex amp_r{0.1, 0.0};
    double beta = 1.5;
    double center = 4.0;

    int reconstruction_sign = +1;

    // opt into the truncated-interval reading of the far basepoint for data
    // that fails the decay gate (see IntegrateOptions)
    bool allow_truncated = false;

    std::map<std::string, std::vector<Complex>> lambda_sets;
    std::map<std::string, double> tolerances;

    static RunConfig defaults();

    double tol(const std::string& name) const;
    const std::vector<Complex>& lambdas(const std::string& name) const;

    /// Throws ValidationError on out-of-range values (nx/nt >= 16, positive
    /// extents and tolerances, no zero lambda).
    void validate() const;

    std::string canonical_text() const;
    std::uint64_t digest() const;
    std::string digest_hex() const;
};

/// Parses the versioned key = value format; unknown keys are errors with
/// line-addressed messages.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::string format_complex(Complex z);
Complex parse_complex(const std::string& tok, int line_for_error);

}  // namespace cfl
