// include/chainlab/log_value.hpp: exact values of the form c - log2(m / 2^scale).

#pragma once

#include "chainlab/natural.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace chainlab {

/// c - log2(m / 2^scale) with m >= 1, held exactly.
///
/// Every defect and every member of the families S_k and T_i has this shape.
/// Comparison clears the logarithms by cross-multiplying powers of two, so two
/// values compare equal iff they are the same real number.
struct ExactLogValue {
    std::int64_t c = 0;
    Natural m = 1;
    std::uint32_t scale = 0;

    /// total - log2(m), written with scale = floor(log2 m) so that c is the ceiling
    /// of the value (or the value itself when m is a power of two).
    static ExactLogValue from_log(std::int64_t total, const Natural& m) {
        const unsigned s = floor_log2(m);
        return ExactLogValue{total - static_cast<std::int64_t>(s), m, s};
    }

    /// Value = exponent() - log2(m).
    std::int64_t exponent() const { return c + scale; }

    /// Canonical encoding (e, o) with value = e - log2(o), o odd.
    std::pair<std::int64_t, Natural> normalized() const {
        const unsigned v = two_adic_valuation(m);
        return {exponent() - v, m >> v};
    }

    bool is_integer() const { return is_power_of_two(m); }
};

/// value(x) vs value(y) via 2^(e_x) * m_y vs 2^(e_y) * m_x.
inline std::strong_ordering compare(const ExactLogValue& x, const ExactLogValue& y) {
    if (x.m <= 0 || y.m <= 0) {
        throw std::invalid_argument("ExactLogValue: argument must be positive");
    }
    const std::int64_t ex = x.exponent();
    const std::int64_t ey = y.exponent();
    const std::int64_t low = std::min(ex, ey);
    const Natural lhs = y.m << static_cast<unsigned>(ex - low);
    const Natural rhs = x.m << static_cast<unsigned>(ey - low);
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

inline bool operator==(const ExactLogValue& x, const ExactLogValue& y) {
    return compare(x, y) == std::strong_ordering::equal;
}

inline std::strong_ordering operator<=>(const ExactLogValue& x, const ExactLogValue& y) {
    return compare(x, y);
}

namespace detail {

using Float50 = boost::multiprecision::cpp_bin_float_50;

inline Float50 approximate(std::int64_t exponent, const Natural& m) {
    if (is_power_of_two(m)) {
        return Float50(exponent - static_cast<std::int64_t>(floor_log2(m)));
    }
    const unsigned shift = floor_log2(m);
    // log2(m) = shift + log2(m / 2^shift), keeping the argument in [1, 2)
    Float50 mantissa(m);
    mantissa = boost::multiprecision::ldexp(mantissa, -static_cast<int>(shift));
    return Float50(exponent - static_cast<std::int64_t>(shift)) -
           boost::multiprecision::log(mantissa) / boost::multiprecision::log(Float50(2));
}

}  // namespace detail

/// Display-only decimal approximation.
inline double to_double(const ExactLogValue& v) {
    return static_cast<double>(detail::approximate(v.exponent(), v.m));
}

namespace detail {

/// Fixed-point rendering of x with `places` decimals, round-half-even.
inline std::string fixed_point(Float50 scaled, unsigned places) {
    const bool negative = scaled < 0;
    if (negative) {
        scaled = -scaled;
    }
    scaled *= boost::multiprecision::pow(Float50(10), static_cast<int>(places));
    Float50 whole = boost::multiprecision::floor(scaled);
    const Float50 frac = scaled - whole;
    Natural digits = static_cast<Natural>(whole);
    if (frac > Float50(0.5) || (frac == Float50(0.5) && (digits & 1) != 0)) {
        digits += 1;
    }
    std::string text = digits.str();
    if (text.size() <= places) {
        text.insert(0, places + 1 - text.size(), '0');
    }
    if (places > 0) {
        text.insert(text.size() - places, ".");
    }
    if (negative && digits != 0) {
        text.insert(0, "-");
    }
    return text;
}

}  // namespace detail

/// Display-only decimal with `places` decimals, round-half-even.
inline std::string to_decimal(const ExactLogValue& v, unsigned places = 6) {
    return detail::fixed_point(detail::approximate(v.exponent(), v.m), places);
}

}  // namespace chainlab
