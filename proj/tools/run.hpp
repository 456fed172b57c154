#ifndef MOMENTBOUNDS_TOOLS_RUN_HPP
#define MOMENTBOUNDS_TOOLS_RUN_HPP

#include "config.hpp"
#include "tables.hpp"

#include "momentbounds/emm.hpp"
#include "momentbounds/moments.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace momentbounds::cli {

/// Quartic ground-state energy used by the sandwich and degeneracy checks.
constexpr double kQuarticGroundState = 1.060362090484;

/// Builds the artifact for config. Diagnostics go to log.
Table build_table(const RunConfig& config, std::ostream& log);

/// Validates, builds, writes the artifact and returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

/// Moments of a random positive mixture of centred Gaussians, mu_0 = 1.
MomentSequence<double> random_positive_trial(std::mt19937_64& rng, int max_order);

/// `count` values of mu_2 strictly inside the window where the quartic moment-equation
/// sequence at E has a positive definite U at dimension N+1.
std::vector<double> pd_compatible_mu2(double E, int N, int count);

struct RootCheck {
    double max_relative_error = 0;
    int roots_found = 0;
    int eigenvalues = 0;
};

/// Brackets the roots of det(H - lambda U) by sign changes and refines them with TOMS 748,
/// then compares with the Cholesky-route spectrum.
RootCheck compare_determinant_roots(const MomentSequence<double>& seq, int N);

/// Interval-consistent check of inf lambda_max <= E_L <= E <= E_U <= sup lambda_min.
bool sandwich_holds(const Theorem4Bounds& t4, const EmmOrderResult& emm, double E, std::string& detail);

} // namespace momentbounds::cli

#endif
