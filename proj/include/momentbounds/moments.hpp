#ifndef MOMENTBOUNDS_MOMENTS_HPP
#define MOMENTBOUNDS_MOMENTS_HPP

#include "momentbounds/errors.hpp"
#include "momentbounds/precision.hpp"

#include <map>
#include <string>
#include <vector>

namespace momentbounds {

enum class MomentKind { Hamburger, Stieltjes };
enum class Normalization { Mu0EqualsOne, Mu0PlusMuQEqualsOne, None };

std::string to_string(MomentKind k);
std::string to_string(Normalization n);
MomentKind parse_moment_kind(const std::string& s);
Normalization parse_normalization(const std::string& s);

/// Moments mu_0..mu_Q together with the metadata that says how they may be used.
template <class Scalar>
struct MomentSequence {
    std::vector<Scalar> values;
    MomentKind kind = MomentKind::Hamburger;
    bool parity_even = false;
    Normalization normalization = Normalization::None;
    // True when the sequence is asserted to come from a strictly positive function.
    bool positive_function = false;

    int max_order() const { return static_cast<int>(values.size()) - 1; }

    const Scalar& operator[](int p) const
    {
        if (p < 0 || p > max_order())
            throw ConfigError("moment order " + std::to_string(p) + " outside 0.." +
                              std::to_string(max_order()));
        return values[static_cast<std::size_t>(p)];
    }

    // Moment with negative orders read as zero; used where the coefficient vanishes anyway.
    Scalar at_or_zero(int p) const { return p < 0 ? Scalar(0) : (*this)[p]; }
};

template <class Scalar>
Scalar default_moment_tolerance(const MomentSequence<Scalar>& seq)
{
    using std::abs;
    Scalar scale(1);
    for (const auto& v : seq.values)
        if (abs(v) > scale)
            scale = abs(v);
    return Scalar(64) * machine_epsilon<Scalar>() * scale;
}

/// Throws InvariantViolation when a structural invariant of the sequence fails.
template <class Scalar>
void validate(const MomentSequence<Scalar>& seq, const Scalar& tol)
{
    using std::abs;
    if (seq.values.empty())
        throw InvariantViolation("moment sequence is empty");
    const int Q = seq.max_order();
    if (seq.parity_even)
        for (int p = 1; p <= Q; p += 2)
            if (seq[p] != 0)
                throw InvariantViolation("parity-even sequence has nonzero mu_" + std::to_string(p));
    if (seq.kind == MomentKind::Hamburger && seq.positive_function)
        for (int p = 0; p <= Q; p += 2)
            if (!(seq[p] > 0))
                throw InvariantViolation("positive-function sequence has non-positive mu_" +
                                         std::to_string(p));
    if (seq.normalization == Normalization::Mu0EqualsOne && abs(seq[0] - 1) > tol)
        throw InvariantViolation("mu_0 = 1 normalization violated");
    if (seq.normalization == Normalization::Mu0PlusMuQEqualsOne) {
        if (abs(seq[0] + seq[Q] - 1) > tol)
            throw InvariantViolation("mu_0 + mu_Q = 1 normalization violated");
        for (int p = 0; p <= Q; ++p)
            if (abs(seq[p]) > 1 + tol)
                throw InvariantViolation("|mu_" + std::to_string(p) +
                                         "| exceeds 1 under mu_0 + mu_Q = 1");
    }
}

template <class Scalar>
void validate(const MomentSequence<Scalar>& seq)
{
    validate(seq, default_moment_tolerance(seq));
}

template <class To, class From>
MomentSequence<To> convert(const MomentSequence<From>& seq)
{
    MomentSequence<To> out;
    out.values.reserve(seq.values.size());
    for (const auto& v : seq.values)
        out.values.push_back(scalar_cast<To>(v));
    out.kind = seq.kind;
    out.parity_even = seq.parity_even;
    out.normalization = seq.normalization;
    out.positive_function = seq.positive_function;
    return out;
}

/// c * mu; the result carries no normalization unless c == 1.
template <class Scalar>
MomentSequence<Scalar> scaled(const MomentSequence<Scalar>& seq, const Scalar& c)
{
    if (!(c > 0))
        throw ConfigError("moment scale factor must be positive");
    MomentSequence<Scalar> out = seq;
    for (auto& v : out.values)
        v *= c;
    if (c != 1)
        out.normalization = Normalization::None;
    return out;
}

template <class Scalar>
MomentSequence<Scalar> truncated(const MomentSequence<Scalar>& seq, int max_order)
{
    if (max_order < 0 || max_order > seq.max_order())
        throw ConfigError("cannot truncate to order " + std::to_string(max_order));
    MomentSequence<Scalar> out = seq;
    out.values.resize(static_cast<std::size_t>(max_order) + 1);
    if (out.normalization == Normalization::Mu0PlusMuQEqualsOne && max_order != seq.max_order())
        out.normalization = Normalization::None;
    return out;
}

/// Rejects combining sequences recorded under different normalizations.
template <class Scalar>
void require_same_normalization(const MomentSequence<Scalar>& a, const MomentSequence<Scalar>& b)
{
    if (a.normalization != b.normalization)
        throw ConfigError("cannot mix moment normalizations " + to_string(a.normalization) +
                          " and " + to_string(b.normalization));
}

/// s*a + (1-s)*b, elementwise.
template <class Scalar>
MomentSequence<Scalar> convex_combination(const MomentSequence<Scalar>& a,
                                          const MomentSequence<Scalar>& b, const Scalar& s)
{
    require_same_normalization(a, b);
    if (a.values.size() != b.values.size())
        throw ConfigError("convex combination of sequences with different orders");
    MomentSequence<Scalar> out = a;
    for (std::size_t p = 0; p < a.values.size(); ++p)
        out.values[p] = s * a.values[p] + (1 - s) * b.values[p];
    out.parity_even = a.parity_even && b.parity_even;
    out.positive_function = a.positive_function && b.positive_function;
    return out;
}

// ---------------------------------------------------------------------------
// Generators

template <class Scalar>
MomentSequence<Scalar> generate_gaussian_moments(int max_order)
{
    if (max_order < 0 || max_order % 2 != 0)
        throw ConfigError("Gaussian moments need a non-negative even max_order");
    MomentSequence<Scalar> seq;
    seq.values.assign(static_cast<std::size_t>(max_order) + 1, Scalar(0));
    seq.values[0] = 1;
    for (int p = 0; p + 2 <= max_order; p += 2)
        seq.values[p + 2] = seq.values[p] * Scalar(1 + p) / 2;
    seq.kind = MomentKind::Hamburger;
    seq.parity_even = true;
    seq.normalization = Normalization::Mu0EqualsOne;
    seq.positive_function = true;
    return seq;
}

/// mu_{p+4} = E mu_p + p(p-1) mu_{p-2} from the missing moments mu_0, mu_2.
template <class Scalar>
MomentSequence<Scalar> generate_quartic_sequence(const Scalar& E, const Scalar& mu0,
                                                 const Scalar& mu2, int max_order)
{
    if (max_order < 4 || max_order % 2 != 0)
        throw ConfigError("quartic moment sequence needs an even max_order >= 4");
    if (!(mu0 > 0))
        throw ConfigError("quartic moment sequence needs mu_0 > 0");
    MomentSequence<Scalar> seq;
    seq.values.assign(static_cast<std::size_t>(max_order) + 1, Scalar(0));
    seq.values[0] = mu0;
    seq.values[2] = mu2;
    for (int p = 0; p + 4 <= max_order; p += 2) {
        Scalar v = E * seq.values[p];
        if (p >= 2)
            v += Scalar(p * (p - 1)) * seq.values[p - 2];
        seq.values[p + 4] = v;
    }
    seq.kind = MomentKind::Hamburger;
    seq.parity_even = true;
    seq.normalization = mu0 == 1 ? Normalization::Mu0EqualsOne : Normalization::None;
    seq.positive_function = false;
    return seq;
}

/// u_{r+1} = E u_r + 2r(2r-1) u_{r-1}, u_0 = 1.
template <class Scalar>
MomentSequence<Scalar> generate_harmonic_stieltjes(const Scalar& E, int max_order)
{
    if (max_order < 1)
        throw ConfigError("harmonic Stieltjes sequence needs max_order >= 1");
    MomentSequence<Scalar> seq;
    seq.values.assign(static_cast<std::size_t>(max_order) + 1, Scalar(0));
    seq.values[0] = 1;
    seq.values[1] = E;
    for (int r = 1; r + 1 <= max_order; ++r)
        seq.values[r + 1] = E * seq.values[r] + Scalar(2 * r * (2 * r - 1)) * seq.values[r - 1];
    seq.kind = MomentKind::Stieltjes;
    seq.parity_even = false;
    seq.normalization = Normalization::Mu0EqualsOne;
    seq.positive_function = false;
    return seq;
}

/// 4 mu_{p+7} = (p+4)p(p-1)(p-2) mu_{p-3} + 4 calE p(p+4) mu_{p-1}, mu_0 = 1.
template <class Scalar>
MomentSequence<Scalar> generate_pt_density_moments(const Scalar& calE, const Scalar& mu2,
                                                   const Scalar& mu4, const Scalar& mu6,
                                                   int max_order)
{
    if (max_order < 7)
        throw ConfigError("PT density moments need max_order >= 7");
    if (!(mu2 > 0) || !(mu4 > 0) || !(mu6 > 0))
        throw ConfigError("PT density missing moments must be positive");
    MomentSequence<Scalar> seq;
    seq.values.assign(static_cast<std::size_t>(max_order) + 1, Scalar(0));
    seq.values[0] = 1;
    seq.values[2] = mu2;
    seq.values[4] = mu4;
    seq.values[6] = mu6;
    for (int p = 0; p + 7 <= max_order; ++p) {
        const long long q = p;
        Scalar rhs(0);
        if (p >= 3)
            rhs += Scalar((q + 4) * q * (q - 1) * (q - 2)) * seq.values[p - 3];
        if (p >= 1)
            rhs += 4 * calE * Scalar(q * (q + 4)) * seq.values[p - 1];
        seq.values[p + 7] = rhs / 4;
    }
    seq.kind = MomentKind::Hamburger;
    seq.parity_even = true;
    seq.normalization = Normalization::Mu0EqualsOne;
    seq.positive_function = true;
    return seq;
}

enum class RecursionName { GaussianTrial, QuarticMomentEquation, HarmonicStieltjes, PTCubicDensity };

std::string to_string(RecursionName r);

/// Number of initialization moments each recursion leaves undetermined.
inline std::size_t missing_moment_count(RecursionName name)
{
    switch (name) {
    case RecursionName::QuarticMomentEquation: return 2;
    case RecursionName::PTCubicDensity: return 4;
    default: return 0;
    }
}

template <class Scalar>
struct MomentRecursion {
    RecursionName name = RecursionName::GaussianTrial;
    std::map<std::string, Scalar> parameters;
    std::vector<Scalar> missing_moments;

    Scalar parameter(const std::string& key) const
    {
        auto it = parameters.find(key);
        if (it == parameters.end())
            throw ConfigError("recursion " + to_string(name) + " needs parameter '" + key + "'");
        return it->second;
    }
};

template <class Scalar>
MomentSequence<Scalar> generate(const MomentRecursion<Scalar>& rec, int max_order)
{
    if (rec.missing_moments.size() != missing_moment_count(rec.name))
        throw ConfigError("recursion " + to_string(rec.name) + " expects " +
                          std::to_string(missing_moment_count(rec.name)) + " missing moments, got " +
                          std::to_string(rec.missing_moments.size()));
    const auto& m = rec.missing_moments;
    switch (rec.name) {
    case RecursionName::GaussianTrial:
        return generate_gaussian_moments<Scalar>(max_order);
    case RecursionName::QuarticMomentEquation:
        return generate_quartic_sequence<Scalar>(rec.parameter("E"), m[0], m[1], max_order);
    case RecursionName::HarmonicStieltjes:
        return generate_harmonic_stieltjes<Scalar>(rec.parameter("E"), max_order);
    case RecursionName::PTCubicDensity:
        if (m[0] != 1)
            throw ConfigError("PT density recursion fixes mu_0 = 1");
        return generate_pt_density_moments<Scalar>(rec.parameter("calE"), m[1], m[2], m[3],
                                                   max_order);
    }
    throw ConfigError("unknown recursion");
}

// ---------------------------------------------------------------------------
// Persistence

/// Writes the sequence atomically; digits defaults to the working precision.
template <class Scalar>
void save_moments(const MomentSequence<Scalar>& seq, const std::string& path, int digits = 0);

template <class Scalar>
MomentSequence<Scalar> load_moments(const std::string& path);

template <class Scalar>
std::string serialize_moments(const MomentSequence<Scalar>& seq, int digits = 0);

template <class Scalar>
MomentSequence<Scalar> parse_moments(const std::string& text, const std::string& origin = "<memory>");

extern template void save_moments(const MomentSequence<double>&, const std::string&, int);
extern template void save_moments(const MomentSequence<HighPrecision>&, const std::string&, int);
extern template MomentSequence<double> load_moments<double>(const std::string&);
extern template MomentSequence<HighPrecision> load_moments<HighPrecision>(const std::string&);
extern template std::string serialize_moments(const MomentSequence<double>&, int);
extern template std::string serialize_moments(const MomentSequence<HighPrecision>&, int);
extern template MomentSequence<double> parse_moments<double>(const std::string&, const std::string&);
extern template MomentSequence<HighPrecision> parse_moments<HighPrecision>(const std::string&,
                                                                          const std::string&);

} // namespace momentbounds

#endif
