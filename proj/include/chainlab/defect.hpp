// include/chainlab/defect.hpp: exact defects, small steps, stability probes and leaders.

#pragma once

#include "chainlab/batch.hpp"
#include "chainlab/log_value.hpp"
#include "chainlab/natural.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chainlab {

/// delta^A(n) = length - log2 n, kept as the pair (length, n).
struct ExactDefect {
    unsigned length = 0;
    Natural n = 1;
    std::string class_name = "all";

    ExactLogValue value() const { return ExactLogValue::from_log(length, n); }
};

/// delta_1 vs delta_2 by comparing 2^(l1) * n2 with 2^(l2) * n1.
inline std::strong_ordering compare_defects(const ExactDefect& d1, const ExactDefect& d2) {
    const Natural lhs = d2.n << d1.length;
    const Natural rhs = d1.n << d2.length;
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

inline bool same_defect(const ExactDefect& d1, const ExactDefect& d2) {
    return compare_defects(d1, d2) == std::strong_ordering::equal;
}

/// True iff the defects differ by an integer, i.e. n1 / n2 is a power of two.
inline bool congruent_mod_one(const ExactDefect& d1, const ExactDefect& d2) {
    return odd_part(d1.n) == odd_part(d2.n);
}

/// delta is an integer exactly when n is a power of two.
inline bool is_integer_defect(const ExactDefect& d) { return is_power_of_two(d.n); }

/// delta < 1, i.e. 2^length < 2n.
inline bool below_one(const ExactDefect& d) { return (Natural(1) << d.length) < 2 * d.n; }

/// ceil(delta) by exponent comparison: least c >= 0 with 2^length <= n * 2^c.
inline unsigned ceil_defect(const ExactDefect& d) {
    const Natural power = Natural(1) << d.length;
    unsigned c = d.length > floor_log2(d.n) + 1 ? d.length - floor_log2(d.n) - 1 : 0;
    while ((d.n << c) < power) {
        ++c;
    }
    return c;
}

inline std::string to_decimal(const ExactDefect& d, unsigned places = 6) {
    return to_decimal(d.value(), places);
}

inline ExactDefect defect(const Natural& n, const SearchContext& ctx) {
    return ExactDefect{exact_length(n, ctx), n, ctx.cls.name()};
}

/// s^A(n) = l^A(n) - floor(log2 n).
inline unsigned small_steps(const Natural& n, const SearchContext& ctx) {
    return exact_length(n, ctx) - floor_log2(n);
}

/// l^A(m) given that it lies in [lo, hi] and a chain of length hi exists.
inline unsigned length_in_range(const Natural& m, unsigned lo, unsigned hi, const SearchContext& ctx) {
    if (ctx.cache != nullptr) {
        if (auto hit = ctx.cache->find(ctx.cls.name(), m)) {
            return *hit;
        }
    }
    lo = std::max(lo, lower_bound_length(m));
    if (lo >= hi) {
        return hi;
    }
    const BoundedOutcome probe = chain_within(m, hi - 1, ctx.cls, ctx.budget, lo);
    if (probe.result == Reachability::BudgetExhausted) {
        throw BudgetExhausted(m, ctx.cls.name());
    }
    const unsigned length =
        probe.result == Reachability::Found ? static_cast<unsigned>(probe.witness->length()) : hi;
    if (ctx.cache != nullptr) {
        ctx.cache->insert(ctx.cls.name(), m, length);
    }
    return length;
}

enum class StabilityVerdict { CertifiedStable, StableUpToHorizon, UnstableAt };

inline const char* to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::CertifiedStable: return "certified-stable";
        case StabilityVerdict::StableUpToHorizon: return "stable-up-to-horizon";
        case StabilityVerdict::UnstableAt: return "unstable";
    }
    return "unknown";
}

struct StabilityReport {
    Natural n;
    std::string class_name;
    StabilityVerdict verdict = StabilityVerdict::StableUpToHorizon;
    unsigned horizon = 0;
    /// First k with l(2^k n) < l(2^(k-1) n) + 1 (UnstableAt only).
    std::optional<unsigned> drop_at;
    /// k at which the defect fell below 1 (CertifiedStable only).
    std::optional<unsigned> certified_at;
    /// delta(2^k n) for k = 0 .. end of probe.
    std::vector<ExactDefect> trajectory;
    Natural leader;
    /// min over probed k of l(2^k n) - k.
    unsigned stable_length = 0;
    /// The trajectory entry attaining the minimum; equals stable_length - log2 n.
    ExactDefect stable_defect;

    bool certified() const { return verdict == StabilityVerdict::CertifiedStable; }
};

namespace detail {

/// Fills lengths[k] for lo < k < hi using that l(2^k n) - k is non-increasing in k.
inline void fill_trajectory(const Natural& n, std::vector<unsigned>& lengths, unsigned lo, unsigned hi,
                            const SearchContext& ctx) {
    if (hi - lo < 2) {
        return;
    }
    const unsigned f_lo = lengths[lo] - lo;
    const unsigned f_hi = lengths[hi] - hi;
    if (f_lo == f_hi) {
        for (unsigned k = lo + 1; k < hi; ++k) {
            lengths[k] = f_lo + k;
        }
        return;
    }
    const unsigned mid = lo + (hi - lo) / 2;
    lengths[mid] = length_in_range(n << mid, f_hi + mid, f_lo + mid, ctx);
    fill_trajectory(n, lengths, lo, mid, ctx);
    fill_trajectory(n, lengths, mid, hi, ctx);
}

}  // namespace detail

/// Smallest n / 2^j with the same defect as n.
inline Natural leader_of(const Natural& n, const SearchContext& ctx) {
    detail::require_positive(n, "leader_of");
    Natural m = n;
    unsigned length = exact_length(m, ctx);
    while ((m & 1) == 0 && m > 1) {
        const Natural half = m >> 1;
        // l(m/2) >= l(m) - 1 always; the defect is unchanged iff equality holds
        const unsigned half_length = length_in_range(half, length - 1, binary_chain_length(half), ctx);
        if (half_length != length - 1) {
            break;
        }
        m = half;
        length = half_length;
    }
    return m;
}

/// Probes delta(2^k n) for k = 0..horizon.
///
/// CertifiedStable: some delta(2^k n) < 1, which forces stability from there on.
/// UnstableAt(k): the trajectory drops strictly at k.
/// StableUpToHorizon: flat through the horizon with every value >= 1; no claim beyond.
///
/// A flat trajectory is confirmed with one search: if no chain of length
/// l(n) + K - 1 reaches 2^K n, then l(2^k n) = l(n) + k for every k <= K.
inline StabilityReport stability_probe(const Natural& n, const SearchContext& ctx, unsigned horizon = 16) {
    detail::require_positive(n, "stability_probe");
    StabilityReport report;
    report.n = n;
    report.class_name = ctx.cls.name();
    report.horizon = horizon;

    const unsigned base = exact_length(n, ctx);
    std::vector<unsigned> lengths(horizon + 1, 0);
    lengths[0] = base;
    unsigned end = horizon;
    if (below_one(ExactDefect{base, n, ctx.cls.name()})) {
        end = 0;
    } else if (horizon > 0) {
        const Natural top = n << horizon;
        lengths[horizon] = length_in_range(top, lower_bound_length(top), base + horizon, ctx);
        detail::fill_trajectory(n, lengths, 0, horizon, ctx);
    }

    for (unsigned k = 0; k <= end; ++k) {
        const ExactDefect d{lengths[k], n << k, ctx.cls.name()};
        report.trajectory.push_back(d);
        if (k > 0 && !report.drop_at && lengths[k] < lengths[k - 1] + 1) {
            report.drop_at = k;
        }
        if (below_one(d)) {
            report.certified_at = k;
            break;
        }
    }
    if (report.drop_at) {
        report.verdict = StabilityVerdict::UnstableAt;
    } else if (report.certified_at) {
        report.verdict = StabilityVerdict::CertifiedStable;
    } else {
        report.verdict = StabilityVerdict::StableUpToHorizon;
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < report.trajectory.size(); ++k) {
        if (compare_defects(report.trajectory[k], report.trajectory[best]) == std::strong_ordering::less) {
            best = k;
        }
    }
    report.stable_defect = report.trajectory[best];
    report.stable_length = report.trajectory[best].length - static_cast<unsigned>(best);
    report.leader = leader_of(n, ctx);
    return report;
}

/// (min over probed k of l(2^k n) - k, certified).
inline std::pair<unsigned, bool> stable_length(const Natural& n, const SearchContext& ctx, unsigned horizon = 16) {
    const StabilityReport r = stability_probe(n, ctx, horizon);
    return {r.stable_length, r.certified()};
}

inline std::pair<ExactDefect, bool> stable_defect(const Natural& n, const SearchContext& ctx, unsigned horizon = 16) {
    const StabilityReport r = stability_probe(n, ctx, horizon);
    return {r.stable_defect, r.certified()};
}

}  // namespace chainlab
