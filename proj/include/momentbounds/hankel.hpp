#ifndef MOMENTBOUNDS_HANKEL_HPP
#define MOMENTBOUNDS_HANKEL_HPP

#include "momentbounds/moments.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace momentbounds {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// entries(i, j) = mu_{m + stride*(i+j)}; stride 2 gives the parity blocks of an even sequence.
template <class Scalar>
struct HankelMatrix {
    Matrix<Scalar> entries;
    int base_offset = 0;
    int stride = 1;

    int dimension() const { return static_cast<int>(entries.rows()); }
    int source_max_moment() const { return base_offset + stride * 2 * (dimension() - 1); }
};

template <class Scalar>
struct PositivityReport {
    bool is_positive_definite = false;
    Scalar min_eigenvalue{};
    Vector<Scalar> witness_vector;
    // Leading principal minors Delta_{0,n}, n = 0..N.
    std::vector<Scalar> determinants;
    Scalar tolerance{};

    bool minors_positive() const
    {
        for (const auto& d : determinants)
            if (!(d > 0))
                return false;
        return true;
    }
};

template <class Scalar>
HankelMatrix<Scalar> hankel_from_values(const std::vector<Scalar>& mu, int m, int N, int stride = 1)
{
    if (m < 0 || N < 0 || stride < 1)
        throw ConfigError("Hankel offset, size and stride must be non-negative");
    const int top = m + stride * 2 * N;
    if (top >= static_cast<int>(mu.size()))
        throw ConfigError("Hankel matrix needs mu_" + std::to_string(top) + " but only mu_0..mu_" +
                          std::to_string(static_cast<int>(mu.size()) - 1) + " are available");
    HankelMatrix<Scalar> h;
    h.base_offset = m;
    h.stride = stride;
    h.entries.resize(N + 1, N + 1);
    for (int i = 0; i <= N; ++i)
        for (int j = i; j <= N; ++j) {
            h.entries(i, j) = mu[static_cast<std::size_t>(m + stride * (i + j))];
            h.entries(j, i) = h.entries(i, j);
        }
    return h;
}

template <class Scalar>
HankelMatrix<Scalar> build_hankel(const MomentSequence<Scalar>& seq, int m, int N, int stride = 1)
{
    if (m % 2 != 0)
        throw ConfigError("Hankel base offset must be even");
    return hankel_from_values(seq.values, m, N, stride);
}

template <class Scalar>
Scalar default_positivity_tolerance(const Matrix<Scalar>& M)
{
    Scalar norm1(0);
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        Scalar col = M.col(j).cwiseAbs().sum();
        if (col > norm1)
            norm1 = col;
    }
    return machine_epsilon<Scalar>() * norm1 * Scalar(static_cast<int>(M.rows()));
}

/// Leading principal minors from an unpivoted LDL^T sweep.
template <class Scalar>
std::vector<Scalar> leading_minors(const Matrix<Scalar>& M)
{
    const Eigen::Index n = M.rows();
    std::vector<Scalar> minors;
    minors.reserve(static_cast<std::size_t>(n));
    Matrix<Scalar> L = Matrix<Scalar>::Identity(n, n);
    Vector<Scalar> d(n);
    Scalar running(1);
    bool broken = false;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (broken) {
            minors.push_back(M.topLeftCorner(k + 1, k + 1).partialPivLu().determinant());
            continue;
        }
        Scalar dk = M(k, k);
        for (Eigen::Index s = 0; s < k; ++s)
            dk -= L(k, s) * L(k, s) * d(s);
        d(k) = dk;
        running *= dk;
        minors.push_back(running);
        if (dk == 0) {
            broken = true;
            continue;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) {
            Scalar v = M(i, k);
            for (Eigen::Index s = 0; s < k; ++s)
                v -= L(i, s) * L(k, s) * d(s);
            L(i, k) = v / dk;
        }
    }
    return minors;
}

template <class Scalar>
PositivityReport<Scalar> check_positivity(const Matrix<Scalar>& M,
                                          std::optional<Scalar> tolerance = std::nullopt);

template <class Scalar>
PositivityReport<Scalar> check_positivity(const HankelMatrix<Scalar>& H,
                                          std::optional<Scalar> tolerance = std::nullopt)
{
    return check_positivity<Scalar>(H.entries, tolerance);
}

/// Positivity of D^{-1/2} M D^{-1/2}, D = diag(M); a non-positive diagonal entry fails at once.
template <class Scalar>
PositivityReport<Scalar> check_positivity_scaled(const Matrix<Scalar>& M, const Scalar& tolerance);

template <class Scalar>
PositivityReport<Scalar> check_positivity(const Matrix<Scalar>& M, std::optional<Scalar> tolerance)
{
    PositivityReport<Scalar> r;
    r.tolerance = tolerance ? *tolerance : default_positivity_tolerance<Scalar>(M);
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(M);
    if (es.info() != Eigen::Success)
        throw NumericalError("symmetric eigen-solver did not converge");
    r.min_eigenvalue = es.eigenvalues()(0);
    r.witness_vector = es.eigenvectors().col(0);
    r.is_positive_definite = r.min_eigenvalue > r.tolerance;
    r.determinants = leading_minors<Scalar>(M);
    return r;
}

template <class Scalar>
PositivityReport<Scalar> check_positivity_scaled(const Matrix<Scalar>& M, const Scalar& tolerance)
{
    using std::sqrt;
    const Eigen::Index n = M.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(M(i, i) > 0)) {
            PositivityReport<Scalar> r;
            r.tolerance = tolerance;
            r.min_eigenvalue = M(i, i);
            r.witness_vector = Vector<Scalar>::Unit(n, i);
            r.is_positive_definite = false;
            r.determinants = leading_minors<Scalar>(M);
            return r;
        }
    Vector<Scalar> s(n);
    for (Eigen::Index i = 0; i < n; ++i)
        s(i) = 1 / sqrt(M(i, i));
    Matrix<Scalar> S = s.asDiagonal() * M * s.asDiagonal();
    auto r = check_positivity<Scalar>(S, tolerance);
    r.witness_vector = (s.array() * r.witness_vector.array()).matrix();
    return r;
}

extern template PositivityReport<double> check_positivity<double>(const Matrix<double>&,
                                                                  std::optional<double>);
extern template PositivityReport<HighPrecision>
check_positivity<HighPrecision>(const Matrix<HighPrecision>&, std::optional<HighPrecision>);
extern template PositivityReport<double> check_positivity_scaled<double>(const Matrix<double>&,
                                                                         const double&);
extern template PositivityReport<HighPrecision>
check_positivity_scaled<HighPrecision>(const Matrix<HighPrecision>&, const HighPrecision&);

} // namespace momentbounds

#endif
