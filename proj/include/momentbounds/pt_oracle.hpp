#ifndef MOMENTBOUNDS_PT_ORACLE_HPP
#define MOMENTBOUNDS_PT_ORACLE_HPP

#include "momentbounds/moments.hpp"

#include <vector>

namespace momentbounds {

// Integrates -Phi'' - (ix)^3 Phi = calE Phi inward from x = +-L with decaying WKB data,
// matches at x = 0 and takes moments of S(x) = |Phi(x)|^2.
// Instantiated for double and HighPrecision.

struct PtOracleOptions {
    double half_width = 12.0;
    double max_step = 0.25;
    double rel_tol = 1e-12;
    int taylor_order = 40;
    bool refine_energy = false;
    int max_refinements = 60;
    // Relative bound on |Phi_R'/Phi_R - Phi_L'/Phi_L| at x = 0.
    double matching_tolerance = 1e-8;
    // Highest Q at which the propagated sequence must stay positive definite; 0 picks by precision.
    int positivity_check_order = 0;
};

/// Piecewise Taylor representation of one half-line solution, normalized to Phi(0) = 1.
template <class Scalar>
struct PtSegment {
    Scalar x0{};
    Scalar h{};
    std::vector<Scalar> re; // Taylor coefficients about x0
    std::vector<Scalar> im;
    Scalar weight{};        // multiplies the polynomial to give the normalized solution
};

template <class Scalar>
struct PtSolution {
    Scalar calE{};
    std::vector<PtSegment<Scalar>> right; // x in [0, L]
    std::vector<PtSegment<Scalar>> left;  // x in [-L, 0]
    // Complex Phi(0) per side before normalization is folded into the segment weights.
    Scalar right_phi0_re{}, right_phi0_im{}, left_phi0_re{}, left_phi0_im{};
    Scalar mismatch{}; // |g_R - g_L| with g the log-derivative at 0
    int grid_points = 0;

    /// Normalized Phi and Phi' at x (|x| <= L).
    void evaluate(const Scalar& x, Scalar& phi_re, Scalar& phi_im, Scalar& dphi_re,
                  Scalar& dphi_im) const;
};

template <class Scalar>
struct PtOracleResult {
    Scalar calE{};
    Scalar mu2{}, mu4{}, mu6{};
    // mu_0..mu_8 from quadrature, normalized to mu_0 = 1.
    std::vector<Scalar> quadrature_moments;
    // |mu_8 - 5 calE mu_0| / (5 calE mu_0)
    Scalar mu8_relative_residual{};
    Scalar mismatch{};
    int grid_points = 0;
    int positivity_checked_to = 0;
};

template <class Scalar>
struct BartaScan {
    Scalar infimum{};
    Scalar argmin{};
    int points = 0;
};

template <class Scalar>
PtSolution<Scalar> integrate_pt(const Scalar& calE, const PtOracleOptions& options = {});

template <class Scalar>
PtOracleResult<Scalar> solve_pt_missing_moments(const Scalar& calE,
                                                const PtOracleOptions& options = {});

/// Infimum of 2 calE - 2|Phi'/Phi|^2 + x^4 on a uniform grid over [-W, W], then locally refined.
template <class Scalar>
BartaScan<Scalar> pt_barta_scan(const PtSolution<Scalar>& solution, double half_width = 4.0,
                                int points = 8001);

} // namespace momentbounds

#endif
