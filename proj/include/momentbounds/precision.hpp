#ifndef MOMENTBOUNDS_PRECISION_HPP
#define MOMENTBOUNDS_PRECISION_HPP

#include <boost/multiprecision/mpfr.hpp>

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>

namespace momentbounds {

// Runtime-precision MPFR real; the digit count is set with PrecisionScope.
using HighPrecision = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

template <class Scalar>
inline constexpr bool is_high_precision_v = std::is_same_v<Scalar, HighPrecision>;

// Sets the default HighPrecision digit count for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned digits10)
        : saved_(HighPrecision::default_precision())
    {
        HighPrecision::default_precision(digits10);
    }
    ~PrecisionScope() { HighPrecision::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

template <class Scalar>
inline int working_digits()
{
    if constexpr (is_high_precision_v<Scalar>)
        return static_cast<int>(HighPrecision::default_precision());
    else
        return std::numeric_limits<Scalar>::max_digits10;
}

template <class Scalar>
inline Scalar machine_epsilon()
{
    return std::numeric_limits<Scalar>::epsilon();
}

template <class To, class From>
inline To scalar_cast(const From& x)
{
    if constexpr (std::is_same_v<To, From>)
        return x;
    else if constexpr (is_high_precision_v<From>)
        return static_cast<To>(x);
    else
        return To(x);
}

template <class Scalar>
inline Scalar parse_decimal(const std::string& text)
{
    if constexpr (is_high_precision_v<Scalar>) {
        return HighPrecision(text);
    } else {
        std::size_t used = 0;
        Scalar v;
        if constexpr (std::is_same_v<Scalar, double>)
            v = std::stod(text, &used);
        else
            v = static_cast<Scalar>(std::stold(text, &used));
        if (used != text.size())
            throw std::invalid_argument("trailing characters in number: " + text);
        return v;
    }
}

template <class Scalar>
inline std::string format_decimal(const Scalar& x, int digits)
{
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << x;
    return os.str();
}

template <class Scalar>
inline Scalar from_ratio(long long num, long long den)
{
    return Scalar(num) / Scalar(den);
}

} // namespace momentbounds

namespace Eigen {

// Boost 1.74 ships a NumTraits for its numbers that lacks infinity() and
// quiet_NaN(), which current Eigen solvers call.
template <>
struct NumTraits<momentbounds::HighPrecision> : GenericNumTraits<momentbounds::HighPrecision> {
    using Real = momentbounds::HighPrecision;
    using NonInteger = Real;
    using Nested = Real;
    using Literal = Real;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 10,
        MulCost = 40
    };
    static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
    static Real dummy_precision() { return epsilon() * 1000; }
    static Real highest() { return (std::numeric_limits<Real>::max)(); }
    static Real lowest() { return std::numeric_limits<Real>::lowest(); }
    static Real infinity() { return std::numeric_limits<Real>::infinity(); }
    static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
    static int digits10() { return static_cast<int>(Real::default_precision()); }
};

} // namespace Eigen

#endif
