// include/chainlab/ordinal.hpp: ordinals below w^w in Cantor normal form.
//
// Text grammar: terms `w^k*c`, `w^k`, `w*c`, `w` or `c`, joined by `+` with
// strictly descending powers and nonzero coefficients; `0` is the zero ordinal.

#pragma once

#include "chainlab/natural.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chainlab {

/// w^m * a_m + ... + w * a_1 + a_0, stored as (a_0, ..., a_m) with a_m != 0.
class OrdinalCNF {
public:
    OrdinalCNF() = default;

    static OrdinalCNF from_coefficients(std::vector<Natural> coeffs) {
        OrdinalCNF x;
        for (const auto& c : coeffs) {
            if (c < 0) {
                throw std::invalid_argument("ordinal coefficients must be non-negative");
            }
        }
        x.coeffs_ = std::move(coeffs);
        x.trim();
        return x;
    }

    /// w^power * coefficient.
    static OrdinalCNF term(std::size_t power, const Natural& coefficient) {
        std::vector<Natural> c(power + 1, 0);
        c[power] = coefficient;
        return from_coefficients(std::move(c));
    }

    static OrdinalCNF finite(const Natural& n) { return term(0, n); }

    bool is_zero() const { return coeffs_.empty(); }
    /// Highest power present; 0 for finite ordinals including 0.
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    Natural coefficient(std::size_t power) const { return power < coeffs_.size() ? coeffs_[power] : Natural(0); }
    const std::vector<Natural>& coefficients() const { return coeffs_; }

    friend bool operator==(const OrdinalCNF&, const OrdinalCNF&) = default;

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) {
            coeffs_.pop_back();
        }
    }

    std::vector<Natural> coeffs_;
};

/// Hessenberg sum: add coefficients power by power.
inline OrdinalCNF natural_sum(const OrdinalCNF& x, const OrdinalCNF& y) {
    std::vector<Natural> c(std::max(x.coefficients().size(), y.coefficients().size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = x.coefficient(i) + y.coefficient(i);
    }
    return OrdinalCNF::from_coefficients(std::move(c));
}

/// Lexicographic from the highest power down.
inline std::strong_ordering compare(const OrdinalCNF& x, const OrdinalCNF& y) {
    const std::size_t top = std::max(x.coefficients().size(), y.coefficients().size());
    for (std::size_t i = top; i-- > 0;) {
        const Natural a = x.coefficient(i);
        const Natural b = y.coefficient(i);
        if (a != b) {
            return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    return std::strong_ordering::equal;
}

inline std::strong_ordering operator<=>(const OrdinalCNF& x, const OrdinalCNF& y) { return compare(x, y); }

struct Rwo1Bound {
    /// w^(q-1) q + ... + w^2 3 + w 2 + 1
    OrdinalCNF bound;
    /// w^(q-1) (q+1), strictly above `bound`
    OrdinalCNF first_upper;
    /// w^q, strictly above `first_upper`
    OrdinalCNF second_upper;
};

inline Rwo1Bound rwo1_bound(unsigned q) {
    if (q == 0) {
        throw std::invalid_argument("rwo1_bound: q must be positive");
    }
    std::vector<Natural> c(q);
    for (unsigned j = 1; j <= q; ++j) {
        c[j - 1] = j;
    }
    return Rwo1Bound{OrdinalCNF::from_coefficients(std::move(c)), OrdinalCNF::term(q - 1, q + 1),
                     OrdinalCNF::term(q, 1)};
}

inline std::string format_cnf(const OrdinalCNF& x) {
    if (x.is_zero()) {
        return "0";
    }
    std::string out;
    const auto& c = x.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '+';
        }
        if (i == 0) {
            out += c[i].str();
            continue;
        }
        out += 'w';
        if (i > 1) {
            out += '^' + std::to_string(i);
        }
        if (c[i] != 1) {
            out += '*' + c[i].str();
        }
    }
    return out;
}

inline OrdinalCNF parse_cnf(std::string_view text) {
    std::string s;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t') {
            s += ch;
        }
    }
    const auto fail = [&](const std::string& why) {
        return std::invalid_argument("malformed ordinal '" + std::string(text) + "': " + why);
    };
    if (s.empty()) {
        throw fail("empty");
    }
    if (s == "0") {
        return OrdinalCNF{};
    }
    const auto digits = [&](std::string_view d, const char* what) {
        if (d.empty() || d.find_first_not_of("0123456789") != std::string_view::npos) {
            throw fail(std::string("expected digits for ") + what);
        }
        return parse_natural(d);
    };

    std::vector<Natural> coeffs;
    std::size_t last_power = 0;
    bool first = true;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t plus = s.find('+', pos);
        const std::string_view t = std::string_view(s).substr(pos, plus == std::string::npos ? s.npos : plus - pos);
        if (t.empty()) {
            throw fail("empty term");
        }
        std::size_t power = 0;
        Natural coefficient = 1;
        if (t[0] == 'w') {
            std::string_view rest = t.substr(1);
            power = 1;
            if (!rest.empty() && rest[0] == '^') {
                const std::size_t star = rest.find('*');
                const Natural p = digits(rest.substr(1, star == rest.npos ? rest.npos : star - 1), "exponent");
                if (p > 4096) {
                    throw fail("exponent too large");
                }
                power = static_cast<std::size_t>(p);
                rest = star == rest.npos ? std::string_view{} : rest.substr(star);
            }
            if (!rest.empty()) {
                if (rest[0] != '*') {
                    throw fail("unexpected '" + std::string(rest) + "'");
                }
                coefficient = digits(rest.substr(1), "coefficient");
            }
        } else {
            coefficient = digits(t, "coefficient");
        }
        if (coefficient == 0) {
            throw fail("zero coefficient");
        }
        if (!first && power >= last_power) {
            throw fail("powers must be strictly descending");
        }
        if (coeffs.size() <= power) {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = coefficient;
        last_power = power;
        first = false;
        if (plus == std::string::npos) {
            break;
        }
        pos = plus + 1;
        if (pos == s.size()) {
            throw fail("trailing '+'");
        }
    }
    return OrdinalCNF::from_coefficients(std::move(coeffs));
}

}  // namespace chainlab
