// include/chainlab/classifier.hpp: closed-form small-steps buckets from the binary expansion.
//
// s(n) = 0 iff nu(n) = 1 and s(n) = 1 iff nu(n) = 2. s(n) = 2 iff n has one of
// Knuth's five shapes (a < b < c):
//   1. 2^a + 2^b + 2^c
//   2. 2^a + 2^(a+1) + 2^(a+2) + 2^(a+7)
//   3. 2^a + 2^(a+1) + 2^b + 2^(b+3),     b > a + 1
//   4. 2^a + 2^b + 2^c + 2^(b+c-a)
//   5. 2^a + 2^b + 2^c + 2^(b+c-a+1)

#pragma once

#include "chainlab/batch.hpp"
#include "chainlab/natural.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace chainlab {

struct KnuthMatch {
    int form = 0;
    /// (a, b, c) for forms 1, 4 and 5; (a) for form 2; (a, b) for form 3.
    std::vector<unsigned> params;
};

enum class Bucket { Zero, One, Two, ThreePlus };

inline const char* to_string(Bucket b) {
    switch (b) {
        case Bucket::Zero: return "0";
        case Bucket::One: return "1";
        case Bucket::Two: return "2";
        case Bucket::ThreePlus: return ">=3";
    }
    return "?";
}

struct SmallStepsBucket {
    Natural n;
    Bucket bucket = Bucket::ThreePlus;
    /// Every matching Knuth form, lowest id first (bucket Two only).
    std::vector<KnuthMatch> forms;

    /// Lowest matching form id, or 0.
    int primary_form() const { return forms.empty() ? 0 : forms.front().form; }
};

/// Positions of the 1 bits, ascending.
inline std::vector<unsigned> set_bit_positions(const Natural& n) {
    detail::require_positive(n, "set_bit_positions");
    std::vector<unsigned> out;
    const unsigned top = floor_log2(n);
    for (unsigned i = 0; i <= top; ++i) {
        if (boost::multiprecision::bit_test(n, i)) {
            out.push_back(i);
        }
    }
    return out;
}

/// All Knuth forms n matches. Empty when nu(n) is not 3 or 4 or nothing fits.
inline std::vector<KnuthMatch> knuth_form_of(const Natural& n) {
    std::vector<KnuthMatch> out;
    const std::vector<unsigned> e = set_bit_positions(n);
    if (e.size() == 3) {
        out.push_back({1, {e[0], e[1], e[2]}});
        return out;
    }
    if (e.size() != 4) {
        return out;
    }
    // sorting the exponents fixes the role of every term in each form
    if (e[1] == e[0] + 1 && e[2] == e[0] + 2 && e[3] == e[0] + 7) {
        out.push_back({2, {e[0]}});
    }
    if (e[1] == e[0] + 1 && e[2] > e[0] + 1 && e[3] == e[2] + 3) {
        out.push_back({3, {e[0], e[2]}});
    }
    if (e[3] == e[1] + e[2] - e[0]) {
        out.push_back({4, {e[0], e[1], e[2]}});
    }
    if (e[3] == e[1] + e[2] - e[0] + 1) {
        out.push_back({5, {e[0], e[1], e[2]}});
    }
    return out;
}

inline SmallStepsBucket classify_small_steps(const Natural& n) {
    SmallStepsBucket result;
    result.n = n;
    switch (ones_count(n)) {
        case 1: result.bucket = Bucket::Zero; break;
        case 2: result.bucket = Bucket::One; break;
        case 3:
        case 4:
            result.forms = knuth_form_of(n);
            result.bucket = result.forms.empty() ? Bucket::ThreePlus : Bucket::Two;
            break;
        default: result.bucket = Bucket::ThreePlus; break;
    }
    return result;
}

/// Knuth's form-id n from parameters, with the shape's constraints checked.
inline Natural knuth_form_number(int form, const std::vector<unsigned>& p) {
    const auto need = [&](std::size_t count, bool ok) {
        if (p.size() != count || !ok) {
            throw std::invalid_argument("knuth_form_number: parameters violate form " + std::to_string(form));
        }
    };
    switch (form) {
        case 1:
            need(3, p.size() == 3 && p[0] < p[1] && p[1] < p[2]);
            return pow2(p[0]) + pow2(p[1]) + pow2(p[2]);
        case 2:
            need(1, true);
            return pow2(p[0]) + pow2(p[0] + 1) + pow2(p[0] + 2) + pow2(p[0] + 7);
        case 3:
            need(2, p.size() == 2 && p[1] > p[0] + 1);
            return pow2(p[0]) + pow2(p[0] + 1) + pow2(p[1]) + pow2(p[1] + 3);
        case 4:
        case 5:
            need(3, p.size() == 3 && p[0] < p[1] && p[1] < p[2]);
            return pow2(p[0]) + pow2(p[1]) + pow2(p[2]) + pow2(p[1] + p[2] - p[0] + (form == 5 ? 1 : 0));
        default: break;
    }
    throw std::invalid_argument("knuth_form_number: form must be 1..5");
}

/// min(s^A(n), cap + 1), i.e. the exact small-steps count when it is <= cap.
inline unsigned capped_small_steps(const Natural& n, unsigned cap, const SearchContext& ctx) {
    const unsigned lam = floor_log2(n);
    const auto length = length_if_within(n, lam + cap, ctx);
    return length ? *length - lam : cap + 1;
}

struct Discrepancy {
    Natural n;
    Bucket bucket = Bucket::ThreePlus;
    /// Searched s(n), capped: 3 stands for "3 or more".
    unsigned searched = 0;
};

struct CrossCheckReport {
    std::vector<Discrepancy> discrepancies;
    std::vector<Natural> unchecked;
    std::size_t checked = 0;
};

inline bool bucket_agrees(Bucket b, unsigned capped_s) {
    switch (b) {
        case Bucket::Zero: return capped_s == 0;
        case Bucket::One: return capped_s == 1;
        case Bucket::Two: return capped_s == 2;
        case Bucket::ThreePlus: return capped_s >= 3;
    }
    return false;
}

/// Compares classify_small_steps with searched s(n) for n in [lo, hi].
///
/// Only "is there a chain of length <= floor(log2 n) + 2" is searched, which
/// settles s(n) exactly when it is at most 2 and shows s(n) >= 3 otherwise.
inline CrossCheckReport cross_check(const Natural& lo, const Natural& hi, const SearchContext& ctx,
                                    unsigned threads = 1) {
    detail::require_positive(lo, "cross_check");
    CrossCheckReport report;
    if (hi < lo) {
        return report;
    }
    const std::size_t count = static_cast<std::size_t>(hi - lo) + 1;
    // 0..3 = capped s, 4 = budget exhausted
    std::vector<unsigned char> searched(count, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                searched[i] = static_cast<unsigned char>(capped_small_steps(lo + i, 2, ctx));
            } catch (const BudgetExhausted&) {
                searched[i] = 4;
            } catch (...) {
                std::scoped_lock guard(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    for (std::size_t i = 0; i < count; ++i) {
        const Natural n = lo + i;
        if (searched[i] == 4) {
            report.unchecked.push_back(n);
            continue;
        }
        ++report.checked;
        const SmallStepsBucket b = classify_small_steps(n);
        if (!bucket_agrees(b.bucket, searched[i])) {
            report.discrepancies.push_back({n, b.bucket, searched[i]});
        }
    }
    return report;
}

}  // namespace chainlab
