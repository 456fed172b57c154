#include "momentbounds/gep.hpp"

#include <algorithm>
#include <cmath>

namespace momentbounds {

namespace {

template <class Scalar>
struct Reduction {
    Matrix<Scalar> A; // L^{-1} H L^{-T}
    Scalar pivot_ratio{};
};

template <class Scalar>
Reduction<Scalar> reduce(const SymmetricPair<Scalar>& pair)
{
    Eigen::LLT<Matrix<Scalar>> llt(pair.U);
    if (llt.info() != Eigen::Success)
        throw NumericalError("Cholesky factorization of U failed at dimension " +
                             std::to_string(pair.dimension()));
    const Matrix<Scalar> L = llt.matrixL();
    Scalar lo = L(0, 0) * L(0, 0), hi = lo;
    for (Eigen::Index i = 1; i < L.rows(); ++i) {
        Scalar d = L(i, i) * L(i, i);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    Reduction<Scalar> r;
    r.pivot_ratio = lo / hi;
    const auto tri = L.template triangularView<Eigen::Lower>();
    Matrix<Scalar> X = tri.solve(pair.H);
    Matrix<Scalar> Xt = X.transpose();
    r.A = tri.solve(Xt);
    Matrix<Scalar> At = r.A.transpose();
    r.A = (r.A + At) / 2;
    return r;
}

template <class Scalar>
Vector<Scalar> symmetric_eigenvalues(const Matrix<Scalar>& A)
{
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigen-solver did not converge");
    return es.eigenvalues();
}

template <class To, class From>
SymmetricPair<To> convert_pair(const SymmetricPair<From>& p)
{
    SymmetricPair<To> out;
    out.H = p.H.template cast<To>();
    out.U = p.U.template cast<To>();
    out.N = p.N;
    out.source = convert<To>(p.source);
    return out;
}

template <class Scalar>
void require_positive_definite(const Matrix<Scalar>& U, const GepOptions& options)
{
    auto report = check_positivity<Scalar>(U);
    if (report.is_positive_definite)
        return;
    if constexpr (std::is_same_v<Scalar, double>) {
        if (options.allow_escalation) {
            PrecisionScope scope(options.escalation_digits);
            Matrix<HighPrecision> Uh = U.template cast<HighPrecision>();
            auto hp = check_positivity<HighPrecision>(Uh);
            if (hp.is_positive_definite)
                return;
        }
    }
    throw NumericalError("U is not positive definite at dimension " + std::to_string(U.rows()) +
                         " (min eigenvalue " + format_decimal(report.min_eigenvalue, 6) + ")");
}

template <class Scalar>
[[noreturn]] void rethrow_at(int N)
{
    const std::string where = " (at N=" + std::to_string(N) + ")";
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(e.what() + where);
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(e.what() + where);
    } catch (const NumericalError& e) {
        throw NumericalError(e.what() + where);
    }
}

} // namespace

template <class Scalar>
SymmetricPair<Scalar> build_pair(const MomentSequence<Scalar>& seq, int N, const GepOptions& options)
{
    if (N < 0)
        throw ConfigError("pair dimension index N must be non-negative");
    if (seq.max_order() < 2 * N + 4)
        throw ConfigError("pair at N=" + std::to_string(N) + " needs moments up to order " +
                          std::to_string(2 * N + 4) + ", sequence stops at " +
                          std::to_string(seq.max_order()));
    SymmetricPair<Scalar> pair;
    pair.N = N;
    pair.source = seq;
    pair.H.resize(N + 1, N + 1);
    pair.U.resize(N + 1, N + 1);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) {
            const int k = i + j;
            Scalar h = seq[k + 4];
            if (k >= 2)
                h -= Scalar(k * (k - 1)) * seq[k - 2];
            pair.H(i, j) = h;
            pair.U(i, j) = seq[k];
        }
    require_positive_definite<Scalar>(pair.U, options);
    return pair;
}

template <class Scalar>
Vector<Scalar> generalized_eigenvalues(const SymmetricPair<Scalar>& pair)
{
    return symmetric_eigenvalues<Scalar>(reduce(pair).A);
}

template <class Scalar>
Extremes<Scalar> extremal_eigenvalues(const SymmetricPair<Scalar>& pair, const GepOptions& options)
{
    auto red = reduce(pair);
    if constexpr (std::is_same_v<Scalar, double>) {
        if (options.allow_escalation && red.pivot_ratio < options.escalation_threshold) {
            PrecisionScope scope(options.escalation_digits);
            auto hp = extremal_eigenvalues<HighPrecision>(convert_pair<HighPrecision>(pair), options);
            Extremes<double> out;
            out.lambda_min = static_cast<double>(hp.lambda_min);
            out.lambda_max = static_cast<double>(hp.lambda_max);
            out.pivot_ratio = red.pivot_ratio;
            out.escalated = true;
            return out;
        }
    }
    auto ev = symmetric_eigenvalues<Scalar>(red.A);
    Extremes<Scalar> out;
    out.lambda_min = ev(0);
    out.lambda_max = ev(ev.size() - 1);
    out.pivot_ratio = red.pivot_ratio;
    return out;
}

template <class Scalar>
BoundSeries<Scalar> bound_series(const MomentSequence<Scalar>& seq, int N_max,
                                 const GepOptions& options, const std::string& trial_id)
{
    using std::abs;
    if (N_max < 0)
        throw ConfigError("N_max must be non-negative");
    if (seq.max_order() < 2 * N_max + 4)
        throw ConfigError("bound series to N=" + std::to_string(N_max) + " needs moments up to " +
                          std::to_string(2 * N_max + 4));
    BoundSeries<Scalar> series;
    series.trial_id = trial_id;
    for (int N = 0; N <= N_max; ++N) {
        BoundEntry<Scalar> e;
        e.N = N;
        try {
            auto ext = extremal_eigenvalues(build_pair(seq, N, options), options);
            e.lambda_min = ext.lambda_min;
            e.lambda_max = ext.lambda_max;
            e.escalated = ext.escalated;
        } catch (const Error&) {
            rethrow_at<Scalar>(N);
        }
        if (!series.entries.empty()) {
            const auto& prev = series.entries.back();
            const Scalar tol_min =
                Scalar(options.monotonicity_tolerance) * std::max(Scalar(1), abs(prev.lambda_min));
            const Scalar tol_max =
                Scalar(options.monotonicity_tolerance) * std::max(Scalar(1), abs(prev.lambda_max));
            if (e.lambda_min > prev.lambda_min + tol_min)
                throw InvariantViolation("lambda_min increased from N=" + std::to_string(N - 1) +
                                         " to N=" + std::to_string(N) + ": " +
                                         format_decimal(prev.lambda_min, 12) + " -> " +
                                         format_decimal(e.lambda_min, 12));
            if (e.lambda_max < prev.lambda_max - tol_max)
                throw InvariantViolation("lambda_max decreased from N=" + std::to_string(N - 1) +
                                         " to N=" + std::to_string(N) + ": " +
                                         format_decimal(prev.lambda_max, 12) + " -> " +
                                         format_decimal(e.lambda_max, 12));
        }
        series.entries.push_back(e);
    }
    return series;
}

template <class Scalar>
DegeneracyReport<Scalar> degeneracy_report(const MomentSequence<Scalar>& seq, const Scalar& E,
                                           int N, const Scalar& tolerance)
{
    using std::abs;
    GepOptions opts;
    opts.allow_escalation = false;
    auto ev = generalized_eigenvalues(build_pair(seq, N, opts));
    DegeneracyReport<Scalar> r;
    r.E = E;
    r.tolerance = tolerance;
    r.max_deviation = Scalar(0);
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
        r.eigenvalues.push_back(ev(j));
        Scalar dev = abs(ev(j) - E);
        if (r.worst_index < 0 || dev > r.max_deviation) {
            r.max_deviation = dev;
            r.worst_index = static_cast<int>(j);
        }
    }
    r.degenerate = r.max_deviation <= tolerance;
    return r;
}

template <class Scalar>
DegeneracyReport<Scalar> verify_theorem2(const Scalar& E, const Scalar& mu0, const Scalar& mu2,
                                         int N, const Scalar& tolerance)
{
    auto seq = generate_quartic_sequence<Scalar>(E, mu0, mu2, 2 * N + 4);
    return degeneracy_report(seq, E, N, tolerance);
}

template <class Scalar>
QuasiConvexityReport<Scalar> quasiconvexity_probe(const MomentSequence<Scalar>& seq_a,
                                                  const MomentSequence<Scalar>& seq_b, int N,
                                                  const std::vector<Scalar>& s_grid,
                                                  const Scalar& tolerance)
{
    require_same_normalization(seq_a, seq_b);
    auto ea = extremal_eigenvalues(build_pair(seq_a, N));
    auto eb = extremal_eigenvalues(build_pair(seq_b, N));
    QuasiConvexityReport<Scalar> r;
    r.floor_min = std::min(ea.lambda_min, eb.lambda_min);
    r.ceiling_max = std::max(ea.lambda_max, eb.lambda_max);
    for (const auto& s : s_grid) {
        if (s < 0 || s > 1)
            throw ConfigError("quasi-convexity grid values must lie in [0, 1]");
        QuasiConvexitySample<Scalar> sample;
        sample.s = s;
        try {
            auto ext = extremal_eigenvalues(build_pair(convex_combination(seq_a, seq_b, s), N));
            sample.lambda_min = ext.lambda_min;
            sample.lambda_max = ext.lambda_max;
            sample.ok = ext.lambda_min >= r.floor_min - tolerance &&
                        ext.lambda_max <= r.ceiling_max + tolerance;
        } catch (const NumericalError&) {
            sample.domain_gap = true;
            ++r.domain_gaps;
        }
        r.holds = r.holds && sample.ok;
        r.samples.push_back(sample);
    }
    return r;
}

#define MOMENTBOUNDS_INSTANTIATE_GEP(S)                                                        \
    template SymmetricPair<S> build_pair<S>(const MomentSequence<S>&, int, const GepOptions&); \
    template Vector<S> generalized_eigenvalues<S>(const SymmetricPair<S>&);                  \
    template Extremes<S> extremal_eigenvalues<S>(const SymmetricPair<S>&, const GepOptions&);  \
    template BoundSeries<S> bound_series<S>(const MomentSequence<S>&, int, const GepOptions&,  \
                                            const std::string&);                             \
    template DegeneracyReport<S> degeneracy_report<S>(const MomentSequence<S>&, const S&, int, \
                                                      const S&);                             \
    template DegeneracyReport<S> verify_theorem2<S>(const S&, const S&, const S&, int,         \
                                                    const S&);                               \
    template QuasiConvexityReport<S> quasiconvexity_probe<S>(                                  \
        const MomentSequence<S>&, const MomentSequence<S>&, int, const std::vector<S>&, const S&);

MOMENTBOUNDS_INSTANTIATE_GEP(double)
MOMENTBOUNDS_INSTANTIATE_GEP(HighPrecision)

} // namespace momentbounds
