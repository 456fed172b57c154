#include "momentbounds/moments.hpp"

#include "momentbounds/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momentbounds {

std::string to_string(MomentKind k)
{
    return k == MomentKind::Hamburger ? "Hamburger" : "Stieltjes";
}

std::string to_string(Normalization n)
{
    switch (n) {
    case Normalization::Mu0EqualsOne: return "Mu0EqualsOne";
    case Normalization::Mu0PlusMuQEqualsOne: return "Mu0PlusMuQEqualsOne";
    case Normalization::None: return "None";
    }
    return "None";
}

std::string to_string(RecursionName r)
{
    switch (r) {
    case RecursionName::GaussianTrial: return "GaussianTrial";
    case RecursionName::QuarticMomentEquation: return "QuarticMomentEquation";
    case RecursionName::HarmonicStieltjes: return "HarmonicStieltjes";
    case RecursionName::PTCubicDensity: return "PTCubicDensity";
    }
    return "?";
}

MomentKind parse_moment_kind(const std::string& s)
{
    if (s == "Hamburger") return MomentKind::Hamburger;
    if (s == "Stieltjes") return MomentKind::Stieltjes;
    throw ConfigError("unknown moment kind '" + s + "'");
}

Normalization parse_normalization(const std::string& s)
{
    if (s == "Mu0EqualsOne") return Normalization::Mu0EqualsOne;
    if (s == "Mu0PlusMuQEqualsOne") return Normalization::Mu0PlusMuQEqualsOne;
    if (s == "None") return Normalization::None;
    throw ConfigError("unknown normalization '" + s + "'");
}

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

template <class Scalar>
std::string serialize_moments(const MomentSequence<Scalar>& seq, int digits)
{
    if (digits <= 0)
        digits = working_digits<Scalar>() + (is_high_precision_v<Scalar> ? 5 : 0);
    std::ostringstream os;
    os << "# momentbounds moment sequence\n";
    os << "kind: " << to_string(seq.kind) << "\n";
    os << "parity: " << (seq.parity_even ? "even" : "none") << "\n";
    os << "normalization: " << to_string(seq.normalization) << "\n";
    os << "positive: " << (seq.positive_function ? "true" : "false") << "\n";
    os << "precision: " << digits << "\n";
    os << "count: " << seq.values.size() << "\n";
    for (const auto& v : seq.values)
        os << format_decimal(v, digits) << "\n";
    return os.str();
}

template <class Scalar>
MomentSequence<Scalar> parse_moments(const std::string& text, const std::string& origin)
{
    std::istringstream in(text);
    std::string line;
    MomentSequence<Scalar> seq;
    bool have_kind = false, have_parity = false, have_norm = false;
    int digits = -1;
    long count = -1;
    int lineno = 0;
    auto fail = [&](const std::string& why) -> ConfigError {
        return ConfigError(origin + ":" + std::to_string(lineno) + ": " + why);
    };
    while (count < 0 && std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw fail("expected 'key: value' header line");
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        try {
            if (key == "kind") {
                seq.kind = parse_moment_kind(value);
                have_kind = true;
            } else if (key == "parity") {
                if (value != "even" && value != "none")
                    throw fail("parity must be 'even' or 'none'");
                seq.parity_even = value == "even";
                have_parity = true;
            } else if (key == "normalization") {
                seq.normalization = parse_normalization(value);
                have_norm = true;
            } else if (key == "positive") {
                if (value != "true" && value != "false")
                    throw fail("positive must be 'true' or 'false'");
                seq.positive_function = value == "true";
            } else if (key == "precision") {
                digits = std::stoi(value);
            } else if (key == "count") {
                count = std::stol(value);
            } else {
                throw fail("unknown header key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw fail("bad value for '" + key + "'");
        }
    }
    if (!have_kind || !have_parity || !have_norm || digits <= 0 || count <= 0)
        throw fail("incomplete header");
    seq.values.reserve(static_cast<std::size_t>(count));
    while (static_cast<long>(seq.values.size()) < count && std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty())
            continue;
        try {
            seq.values.push_back(parse_decimal<Scalar>(line));
        } catch (const std::exception&) {
            throw fail("malformed moment '" + line + "'");
        }
    }
    if (static_cast<long>(seq.values.size()) != count)
        throw fail("expected " + std::to_string(count) + " moments, found " +
                   std::to_string(seq.values.size()));
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty())
            throw fail("trailing content after moments");
    }
    // Values were rounded to the stored digit count.
    using std::pow;
    Scalar tol = std::max(default_moment_tolerance(seq),
                          Scalar(10) * pow(Scalar(10), Scalar(-(digits - 1))));
    validate(seq, tol);
    return seq;
}

template <class Scalar>
void save_moments(const MomentSequence<Scalar>& seq, const std::string& path, int digits)
{
    atomic_write_file(path, serialize_moments(seq, digits));
}

template <class Scalar>
MomentSequence<Scalar> load_moments(const std::string& path)
{
    return parse_moments<Scalar>(read_text_file(path), path);
}

template void save_moments(const MomentSequence<double>&, const std::string&, int);
template void save_moments(const MomentSequence<HighPrecision>&, const std::string&, int);
template MomentSequence<double> load_moments<double>(const std::string&);
template MomentSequence<HighPrecision> load_moments<HighPrecision>(const std::string&);
template std::string serialize_moments(const MomentSequence<double>&, int);
template std::string serialize_moments(const MomentSequence<HighPrecision>&, int);
template MomentSequence<double> parse_moments<double>(const std::string&, const std::string&);
template MomentSequence<HighPrecision> parse_moments<HighPrecision>(const std::string&,
                                                                   const std::string&);

} // namespace momentbounds
