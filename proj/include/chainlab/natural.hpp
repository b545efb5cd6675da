// include/chainlab/natural.hpp: arbitrary-precision naturals and bit-level helpers.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chainlab {

/// Arbitrary-precision non-negative integer used for every public quantity.
using Natural = boost::multiprecision::cpp_int;

namespace detail {

inline void require_positive(const Natural& n, const char* what) {
    if (n <= 0) {
        throw std::invalid_argument(std::string(what) + ": argument must be a positive integer");
    }
}

/// Popcount over the limbs; this Boost release has no popcount for cpp_int.
inline unsigned limb_popcount(const Natural& n) {
    const auto& backend = n.backend();
    unsigned total = 0;
    for (unsigned i = 0; i < backend.size(); ++i) {
        total += static_cast<unsigned>(std::popcount(backend.limbs()[i]));
    }
    return total;
}

}  // namespace detail

/// Number of 1 bits in the binary expansion of n (the Hamming weight, written
/// nu_2(n) in the literature; not the 2-adic valuation).
inline unsigned ones_count(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("ones_count: argument must be a positive integer");
    }
    return static_cast<unsigned>(std::popcount(n));
}

inline unsigned ones_count(const Natural& n) {
    detail::require_positive(n, "ones_count");
    return detail::limb_popcount(n);
}

/// Largest e with 2^e <= n.
inline unsigned floor_log2(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("floor_log2: argument must be a positive integer");
    }
    return static_cast<unsigned>(std::bit_width(n) - 1);
}

inline unsigned floor_log2(const Natural& n) {
    detail::require_positive(n, "floor_log2");
    return static_cast<unsigned>(boost::multiprecision::msb(n));
}

/// Smallest e with 2^e >= n.
inline unsigned ceil_log2(const Natural& n) {
    const unsigned f = floor_log2(n);
    return detail::limb_popcount(n) == 1 ? f : f + 1;
}

inline bool is_power_of_two(const Natural& n) {
    return n > 0 && detail::limb_popcount(n) == 1;
}

/// Exponent of the largest power of two dividing n.
inline unsigned two_adic_valuation(const Natural& n) {
    detail::require_positive(n, "two_adic_valuation");
    return static_cast<unsigned>(boost::multiprecision::lsb(n));
}

/// n with every factor of two removed.
inline Natural odd_part(const Natural& n) {
    return n >> two_adic_valuation(n);
}

inline Natural pow2(unsigned e) {
    Natural r = 1;
    r <<= e;
    return r;
}

/// Parses a non-negative decimal integer; rejects signs, blanks and garbage.
inline Natural parse_natural(std::string_view text) {
    if (text.empty()) {
        throw std::invalid_argument("malformed number: empty");
    }
    Natural value = 0;
    for (char ch : text) {
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
        }
        value *= 10;
        value += ch - '0';
    }
    return value;
}

inline std::string to_string(const Natural& n) { return n.str(); }

/// Binary-expansion summary of a positive integer.
struct BitProfile {
    Natural n;
    unsigned ones = 0;
    unsigned floor_log2 = 0;
};

inline BitProfile bit_profile(const Natural& n) {
    return BitProfile{n, ones_count(n), chainlab::floor_log2(n)};
}

}  // namespace chainlab
