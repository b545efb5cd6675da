// include/chainlab/catalog.hpp: explicit defect families, certified enumeration and bound verifiers.

#pragma once

#include "chainlab/batch.hpp"
#include "chainlab/classifier.hpp"
#include "chainlab/defect.hpp"
#include "chainlab/log_value.hpp"
#include "chainlab/natural.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chainlab {

// ---------------------------------------------------------------------------
// S_k and the bijection phi

/// k - 1 - log2(1 + 2^-b_1 + ... + 2^-b_(k-1)) for 0 < b_1 < ... < b_(k-1).
inline ExactLogValue sk_value(unsigned k, const std::vector<unsigned>& b) {
    if (k == 0) {
        throw std::invalid_argument("sk_value: k must be at least 1");
    }
    if (b.size() != k - 1) {
        throw std::invalid_argument("sk_value: expected k - 1 exponents");
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0 || (i > 0 && b[i] <= b[i - 1])) {
            throw std::invalid_argument("sk_value: exponents must be positive and strictly increasing");
        }
    }
    if (b.empty()) {
        return ExactLogValue{0, 1, 0};
    }
    // (1 + sum 2^-b_i) = m / 2^B with B = b_(k-1)
    const unsigned top = b.back();
    Natural m = pow2(top);
    for (unsigned bi : b) {
        m += pow2(top - bi);
    }
    return ExactLogValue{static_cast<std::int64_t>(k) - 1, m, top};
}

/// b_i = i + c_1 + ... + c_i (c_0 taken as 0).
inline std::vector<unsigned> phi_exponents(const std::vector<unsigned>& c) {
    std::vector<unsigned> b(c.size());
    unsigned running = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        running += c[i];
        b[i] = static_cast<unsigned>(i + 1) + running;
    }
    return b;
}

inline ExactLogValue phi(const std::vector<unsigned>& c) {
    return sk_value(static_cast<unsigned>(c.size()) + 1, phi_exponents(c));
}

/// c_i = b_i - b_(i-1) - 1 with b_0 = 0.
inline std::vector<unsigned> phi_inverse(const std::vector<unsigned>& b) {
    std::vector<unsigned> c(b.size());
    unsigned prev = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i] <= prev) {
            throw std::invalid_argument("phi_inverse: exponents must be positive and strictly increasing");
        }
        c[i] = b[i] - prev - 1;
        prev = b[i];
    }
    return c;
}

/// phi(0, ..., 0, j) for j = 0 .. count-1: the first `count` elements of S_k.
inline std::vector<ExactLogValue> sk_prefix(unsigned k, unsigned count) {
    if (k < 2 || count == 0) {
        throw std::invalid_argument("sk_prefix: need k >= 2 and count >= 1");
    }
    std::vector<ExactLogValue> out;
    std::vector<unsigned> c(k - 1, 0);
    for (unsigned j = 0; j < count; ++j) {
        c.back() = j;
        out.push_back(phi(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// T_1 .. T_5

struct TValue {
    ExactLogValue value;
    /// Odd representative (a = 0) of the Knuth form.
    Natural n;
};

/// 2 + floor(log2 n) - log2 n over odd n of Knuth form `form`, free exponents <= cap.
inline std::vector<TValue> t_set_values(int form, unsigned cap) {
    std::vector<Natural> numbers;
    switch (form) {
        case 1:
        case 4:
        case 5:
            for (unsigned c = 2; c <= cap; ++c) {
                for (unsigned b = 1; b < c; ++b) {
                    numbers.push_back(knuth_form_number(form, {0, b, c}));
                }
            }
            break;
        case 2: numbers.push_back(knuth_form_number(2, {0})); break;
        case 3:
            for (unsigned b = 2; b <= cap; ++b) {
                numbers.push_back(knuth_form_number(3, {0, b}));
            }
            break;
        default: throw std::invalid_argument("t_set_values: form must be 1..5");
    }
    std::vector<TValue> out;
    for (const auto& n : numbers) {
        out.push_back({ExactLogValue::from_log(2 + floor_log2(n), n), n});
    }
    std::sort(out.begin(), out.end(), [](const TValue& x, const TValue& y) {
        const auto order = compare(x.value, y.value);
        return order == std::strong_ordering::less || (order == std::strong_ordering::equal && x.n < y.n);
    });
    out.erase(std::unique(out.begin(), out.end(), [](const TValue& x, const TValue& y) { return x.value == y.value; }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Thresholds

/// A non-negative rational threshold r = num / den, parsed from decimal text.
struct Threshold {
    Natural num = 0;
    Natural den = 1;

    static Threshold integer(unsigned value) { return Threshold{value, 1}; }

    static Threshold parse(std::string_view text) {
        const auto dot = text.find('.');
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
        if (whole.empty() && frac.empty()) {
            throw std::invalid_argument("malformed threshold: '" + std::string(text) + "'");
        }
        Threshold t;
        t.den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            t.den *= 10;
        }
        const Natural w = whole.empty() ? Natural(0) : parse_natural(whole);
        const Natural f = frac.empty() ? Natural(0) : parse_natural(frac);
        t.num = w * t.den + f;
        return t;
    }

    Natural floor() const { return num / den; }
    std::string str() const {
        if (den == 1) {
            return num.str();
        }
        std::string digits = Natural(num % den).str();
        const std::size_t places = den.str().size() - 1;
        digits.insert(0, places - digits.size(), '0');
        return floor().str() + "." + digits;
    }
};

/// value <= r, decided as 2^(den*e - num) <= m^den.
inline bool at_most(const ExactLogValue& v, const Threshold& r) {
    const Natural lhs_exp = Natural(v.exponent() < 0 ? 0 : v.exponent()) * r.den;
    const Natural neg = Natural(v.exponent() < 0 ? -v.exponent() : 0) * r.den + r.num;
    // 2^(lhs_exp - neg) <= m^den
    const Natural power = boost::multiprecision::pow(v.m, static_cast<unsigned>(r.den));
    if (lhs_exp <= neg) {
        return true;
    }
    return pow2(static_cast<unsigned>(lhs_exp - neg)) <= power;
}

/// Largest L with L - log2 n <= r, or -1 when there is none.
inline long long max_length_within(const Natural& n, const Threshold& r) {
    long long length = static_cast<long long>(floor_log2(n)) + static_cast<long long>(r.floor()) + 1;
    while (length >= 0 && !at_most(ExactLogValue{length, n, 0}, r)) {
        --length;
    }
    return length;
}

// ---------------------------------------------------------------------------
// Certified enumeration of defect values

struct CatalogEntry {
    ExactDefect defect;  // defect of the leader
    Natural leader;
    std::size_t multiplicity = 0;
    std::optional<StabilityVerdict> stability;
};

struct CompletenessCertificate {
    /// Every S_2 witness 2^b + 1 <= n_max was found with the expected value.
    bool witnesses_verified = false;
    /// The list is all of D^A within [0, r].
    bool certified_through_threshold = false;
    /// Otherwise: the list is all of D^A within [0, certified_below).
    std::optional<ExactLogValue> certified_below;
    std::string note;
};

struct Catalog {
    Threshold threshold;
    Natural n_max;
    std::string class_name;
    std::vector<CatalogEntry> entries;
    std::vector<Natural> unchecked;
    CompletenessCertificate certificate;
};

struct CatalogOptions {
    bool probe_stability = true;
    unsigned horizon = 16;
};

/// Defect values <= r over n <= n_max, grouped by exact equality.
///
/// D^A within [0, 1] is {0} together with S_2 = {1 - log2(1 + 2^-b)}, the
/// value at b being attained by 2^b + 1. So below the first S_2 value whose
/// witness exceeds n_max the list is complete for all of D^A; above that it
/// is complete only for n <= n_max.
inline Catalog enumerate_defects(const Threshold& r, const Natural& n_max, const SearchContext& ctx,
                                 const CatalogOptions& options = {}) {
    detail::require_positive(n_max, "enumerate_defects");
    Catalog catalog;
    catalog.threshold = r;
    catalog.n_max = n_max;
    catalog.class_name = ctx.cls.name();

    struct Group {
        Natural leader;
        unsigned leader_length = 0;
        std::size_t count = 0;
    };
    std::map<std::pair<std::int64_t, Natural>, Group> groups;
    for (Natural n = 1; n <= n_max; ++n) {
        const long long cap = max_length_within(n, r);
        if (cap < static_cast<long long>(ceil_log2(n))) {
            continue;
        }
        std::optional<unsigned> length;
        try {
            length = length_if_within(n, static_cast<unsigned>(cap), ctx);
        } catch (const BudgetExhausted&) {
            catalog.unchecked.push_back(n);
            continue;
        }
        if (!length) {
            continue;
        }
        const auto key = ExactLogValue::from_log(*length, n).normalized();
        auto [it, fresh] = groups.try_emplace(key, Group{n, *length, 0});
        ++it->second.count;
    }

    for (const auto& [key, g] : groups) {
        CatalogEntry entry;
        entry.defect = ExactDefect{g.leader_length, g.leader, ctx.cls.name()};
        entry.leader = g.leader;
        entry.multiplicity = g.count;
        if (options.probe_stability) {
            try {
                entry.stability = stability_probe(g.leader, ctx, options.horizon).verdict;
            } catch (const BudgetExhausted&) {
                // left unprobed
            }
        }
        catalog.entries.push_back(std::move(entry));
    }
    std::sort(catalog.entries.begin(), catalog.entries.end(), [](const CatalogEntry& x, const CatalogEntry& y) {
        return compare_defects(x.defect, y.defect) == std::strong_ordering::less;
    });

    // certificate from the description of D^A within [0, 1]
    auto& cert = catalog.certificate;
    unsigned witnessed = 0;  // largest b with 2^b + 1 <= n_max
    while (pow2(witnessed + 1) + 1 <= n_max) {
        ++witnessed;
    }
    const ExactLogValue next_gap = sk_value(2, {witnessed + 1});
    cert.witnesses_verified = catalog.unchecked.empty();
    for (unsigned b = 1; b <= witnessed && cert.witnesses_verified; ++b) {
        const ExactLogValue expected = sk_value(2, {b});
        if (!at_most(expected, r)) {
            break;
        }
        const Natural witness = pow2(b) + 1;
        const bool present = std::any_of(catalog.entries.begin(), catalog.entries.end(), [&](const CatalogEntry& e) {
            return e.leader == witness && e.defect.value() == expected;
        });
        cert.witnesses_verified = present;
    }
    const bool below_gap = !at_most(next_gap, r);
    if (!cert.witnesses_verified) {
        cert.certified_below = ExactLogValue{0, 1, 0};
        cert.note = "no completeness claim: a witness in [0, 1) is missing or unchecked";
    } else if (below_gap) {
        cert.certified_through_threshold = true;
        cert.note = "complete for all of D^A in [0, " + r.str() + "]";
    } else {
        cert.certified_below = next_gap;
        cert.note = "complete for all of D^A below " + to_decimal(next_gap) + "; above that, complete for n <= " +
                    n_max.str() + " only";
    }
    return catalog;
}

// ---------------------------------------------------------------------------
// q(r)

struct QEstimate {
    unsigned max_ones = 0;
    Natural witness;
    std::vector<Natural> unchecked;
};

/// max nu(n) over n <= n_max with delta^A(n) <= r, and the least n attaining it.
inline QEstimate q_empirical(const Threshold& r, const Natural& n_max, const SearchContext& ctx) {
    QEstimate q;
    for (Natural n = 1; n <= n_max; ++n) {
        const unsigned ones = ones_count(n);
        if (ones <= q.max_ones) {
            continue;
        }
        const long long cap = max_length_within(n, r);
        if (cap < static_cast<long long>(ceil_log2(n))) {
            continue;
        }
        try {
            if (length_if_within(n, static_cast<unsigned>(cap), ctx)) {
                q.max_ones = ones;
                q.witness = n;
            }
        } catch (const BudgetExhausted&) {
            q.unchecked.push_back(n);
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Bound verifiers

struct BoundViolation {
    Natural n;
    /// Length of a chain that beats the bound.
    unsigned length = 0;
    /// Least length the bound allows.
    unsigned bound = 0;
};

struct BoundReport {
    std::string name;
    std::vector<BoundViolation> violations;
    std::vector<Natural> unchecked;
    std::size_t checked = 0;
};

/// delta(n) >= log2 nu(n) - 2.13 for n <= n_max, i.e. no chain shorter than
/// schonhage_length_bound(n). Each refutation searches from ceil(log2 n) and
/// ignores the cache, so it never leans on the bound under test.
inline BoundReport verify_schonhage(const Natural& n_max, const SearchContext& ctx) {
    BoundReport report{"schonhage", {}, {}, 0};
    for (Natural n = 1; n <= n_max; ++n) {
        const unsigned bound = schonhage_length_bound(n);
        if (bound == 0) {
            ++report.checked;
            continue;
        }
        const BoundedOutcome probe = chain_within(n, bound - 1, ctx.cls, ctx.budget);
        if (probe.result == Reachability::BudgetExhausted) {
            report.unchecked.push_back(n);
            continue;
        }
        ++report.checked;
        if (probe.result == Reachability::Found) {
            report.violations.push_back({n, static_cast<unsigned>(probe.witness->length()), bound});
        }
    }
    return report;
}

/// s(n) >= log2 nu(n) for n <= n_max (conjectural; a violation is news, not a bug).
inline BoundReport verify_knuth_stolarsky(const Natural& n_max, const SearchContext& ctx) {
    BoundReport report{"knuth-stolarsky", {}, {}, 0};
    for (Natural n = 1; n <= n_max; ++n) {
        const unsigned bound = floor_log2(n) + ceil_log2(Natural(ones_count(n)));
        if (bound == 0) {
            ++report.checked;
            continue;
        }
        try {
            const auto length = length_if_within(n, bound - 1, ctx);
            ++report.checked;
            if (length) {
                report.violations.push_back({n, *length, bound});
            }
        } catch (const BudgetExhausted&) {
            report.unchecked.push_back(n);
        }
    }
    return report;
}

struct ScholzBrauerRow {
    unsigned exponent = 0;
    bool checked = false;
    unsigned lhs = 0;  // l(2^e - 1)
    unsigned rhs = 0;  // e + l(e) - 1
    bool holds = false;
    long long slack = 0;
};

/// l(2^e - 1) <= e + l(e) - 1 for e = 1..max_exp.
inline std::vector<ScholzBrauerRow> verify_scholz_brauer(unsigned max_exp, const SearchContext& ctx) {
    std::vector<ScholzBrauerRow> rows;
    for (unsigned e = 1; e <= max_exp; ++e) {
        ScholzBrauerRow row;
        row.exponent = e;
        try {
            row.lhs = exact_length(pow2(e) - 1, ctx);
            row.rhs = e + exact_length(Natural(e), ctx) - 1;
            row.checked = true;
            row.holds = row.lhs <= row.rhs;
            row.slack = static_cast<long long>(row.rhs) - static_cast<long long>(row.lhs);
        } catch (const BudgetExhausted&) {
            row.checked = false;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// f(k)

struct FBoundsReport {
    unsigned k = 0;
    /// f(k) = k is known exactly (k <= 2).
    bool exact = false;
    /// Strict lower bound as text, and its approximate value.
    std::string lower_expression;
    double lower_approx = 0;
    /// Upper bound (inclusive): f(k) <= k.
    unsigned upper = 0;
};

inline FBoundsReport f_bounds(unsigned k) {
    FBoundsReport r;
    r.k = k;
    r.upper = k;
    if (k <= 2) {
        r.exact = true;
        r.lower_expression = std::to_string(k);
        r.lower_approx = k;
    } else if (k <= 7) {
        r.lower_expression = "2";
        r.lower_approx = 2;
    } else if (k <= 33) {
        r.lower_expression = "3";
        r.lower_approx = 3;
    } else {
        using detail::Float50;
        r.lower_expression = "log2(" + std::to_string(k + 1) + ") - 2.13";
        const Float50 value = boost::multiprecision::log(Float50(k + 1)) / boost::multiprecision::log(Float50(2)) -
                              Float50(213) / 100;
        r.lower_approx = static_cast<double>(value);
    }
    return r;
}

}  // namespace chainlab
