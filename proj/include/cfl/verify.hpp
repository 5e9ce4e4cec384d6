#pragma once

#include <memory>

#include "cfl/config.hpp"
#include "cfl/io.hpp"

namespace cfl {

struct Check {
    std::string name;
    double measured = 0.0;
    double tol = 0.0;
    bool greater_is_pass = false;  // pass when measured >= tol (order fits etc.)
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Suites in acceptance order: algebra, lax, solver, eigen, symmetry,
/// relations, factorization, jumps, global, residues, reconstruction,
/// classify.
const std::vector<std::string>& all_suites();

/// Shared heavyweight artifacts (solver runs etc.) reused across suites.
class VerifyContext {
public:
    explicit VerifyContext(RunConfig cfg);
    ~VerifyContext();
    const RunConfig& cfg() const;

    const FieldGrid& plane_exact();
    const BoundaryTraces& plane_exact_traces();
    const FieldGrid& gaussian();
    const BoundaryTraces& gaussian_traces();

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

SuiteResult run_suite(const std::string& name, VerifyContext& ctx);

/// Runs the named suites (or all for "all") over one shared context.
std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& cfg);

void write_verify_report(const std::string& path, const std::vector<SuiteResult>& results,
                         const std::string& digest_hex);

void print_suite_results(std::ostream& os, const std::vector<SuiteResult>& results);

}  // namespace cfl
