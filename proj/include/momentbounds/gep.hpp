#ifndef MOMENTBOUNDS_GEP_HPP
#define MOMENTBOUNDS_GEP_HPP

#include "momentbounds/hankel.hpp"
#include "momentbounds/moments.hpp"

#include <string>
#include <vector>

// Function templates in this header are instantiated for double and HighPrecision.

namespace momentbounds {

/// H(i,j) = -(i+j)(i+j-1) mu_{i+j-2} + mu_{i+j+4},  U(i,j) = mu_{i+j}.
template <class Scalar>
struct SymmetricPair {
    Matrix<Scalar> H;
    Matrix<Scalar> U;
    int N = 0;
    MomentSequence<Scalar> source;

    int dimension() const { return N + 1; }
};

struct GepOptions {
    // Retry a double computation in HighPrecision when min/max of the squared
    // Cholesky pivots of U drops below this ratio.
    double escalation_threshold = 1e-13;
    unsigned escalation_digits = 50;
    bool allow_escalation = true;
    // Relative slack for the monotonicity assertion in bound_series.
    double monotonicity_tolerance = 1e-12;
};

template <class Scalar>
struct Extremes {
    Scalar lambda_min{};
    Scalar lambda_max{};
    Scalar pivot_ratio{};
    bool escalated = false;
};

template <class Scalar>
struct BoundEntry {
    int N = 0;
    Scalar lambda_min{};
    Scalar lambda_max{};
    bool escalated = false;

    int dimension() const { return N + 1; }
    int max_moment() const { return 2 * N + 4; }
};

template <class Scalar>
struct BoundSeries {
    std::vector<BoundEntry<Scalar>> entries;
    std::string trial_id;
};

template <class Scalar>
SymmetricPair<Scalar> build_pair(const MomentSequence<Scalar>& seq, int N,
                                 const GepOptions& options = {});

/// All generalized eigenvalues of H v = lambda U v in ascending order.
template <class Scalar>
Vector<Scalar> generalized_eigenvalues(const SymmetricPair<Scalar>& pair);

template <class Scalar>
Extremes<Scalar> extremal_eigenvalues(const SymmetricPair<Scalar>& pair,
                                      const GepOptions& options = {});

template <class Scalar>
BoundSeries<Scalar> bound_series(const MomentSequence<Scalar>& seq, int N_max,
                                 const GepOptions& options = {},
                                 const std::string& trial_id = "");

template <class Scalar>
struct DegeneracyReport {
    Scalar E{};
    std::vector<Scalar> eigenvalues;
    Scalar max_deviation{};
    int worst_index = -1;
    Scalar tolerance{};
    bool degenerate = false;
};

/// Spread of the generalized spectrum of seq around E at dimension N+1.
template <class Scalar>
DegeneracyReport<Scalar> degeneracy_report(const MomentSequence<Scalar>& seq, const Scalar& E,
                                           int N, const Scalar& tolerance);

template <class Scalar>
Scalar default_degeneracy_tolerance(const Scalar& E)
{
    using std::abs;
    return Scalar(1e-10) * (abs(E) + 1);
}

/// Builds the moment-equation sequence for E and reports whether H = E U collapses the spectrum.
template <class Scalar>
DegeneracyReport<Scalar> verify_theorem2(const Scalar& E, const Scalar& mu0, const Scalar& mu2,
                                         int N, const Scalar& tolerance);

template <class Scalar>
struct QuasiConvexitySample {
    Scalar s{};
    bool domain_gap = false;
    Scalar lambda_min{};
    Scalar lambda_max{};
    bool ok = true;
};

template <class Scalar>
struct QuasiConvexityReport {
    std::vector<QuasiConvexitySample<Scalar>> samples;
    Scalar floor_min{};   // min(lambda_min(a), lambda_min(b))
    Scalar ceiling_max{}; // max(lambda_max(a), lambda_max(b))
    int domain_gaps = 0;
    bool holds = true;
};

template <class Scalar>
QuasiConvexityReport<Scalar> quasiconvexity_probe(const MomentSequence<Scalar>& seq_a,
                                                  const MomentSequence<Scalar>& seq_b, int N,
                                                  const std::vector<Scalar>& s_grid,
                                                  const Scalar& tolerance);

} // namespace momentbounds

#endif
