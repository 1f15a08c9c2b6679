#pragma once

/**
 * @file rational.hpp
 * @brief Exact integer/rational arithmetic used throughout the library.
 *
 * Every quantity in this library is an integer or an exact rational; no
 * floating point appears in any computation. Division of Int truncates
 * toward zero, which is the rounding convention used for midranges.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>

namespace lipz {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

inline Rat abs_rat(const Rat& v) { return v < 0 ? Rat(-v) : v; }

/// Largest integer <= q.
inline Int floor_rat(const Rat& q) {
    Int n = numerator(q);
    Int d = denominator(q);  // d > 0 by normalization
    Int t = n / d;           // truncates toward zero
    if (n < 0 && t * d != n) --t;
    return t;
}

/// Smallest integer >= q.
inline Int ceil_rat(const Rat& q) {
    Int n = numerator(q);
    Int d = denominator(q);
    Int t = n / d;
    if (n > 0 && t * d != n) ++t;
    return t;
}

/// (lo + hi) / 2 with exact halves rounded toward zero.
inline Int midrange_toward_zero(const Int& lo, const Int& hi) {
    return (lo + hi) / 2;
}

/// Canonical "num/den" form, e.g. "3/2", "4/1", "0/1".
inline std::string format_rational(const Rat& q) {
    std::ostringstream os;
    os << numerator(q) << '/' << denominator(q);
    return os.str();
}

/// Accepts "p/q" or a bare integer. Throws std::invalid_argument otherwise.
inline Rat parse_rational(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("rational: empty string");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0)
            throw std::invalid_argument("rational: zero denominator");
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("rational: cannot parse \"" + text + "\"");
    }
}

}  // namespace lipz
