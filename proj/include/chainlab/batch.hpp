// include/chainlab/batch.hpp: cached length lookups, batch sweeps and the doubling-drop scan.

#pragma once

#include "chainlab/chain.hpp"
#include "chainlab/length_cache.hpp"
#include "chainlab/natural.hpp"
#include "chainlab/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace chainlab {

constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Raised when a fact that must be exact could not be settled within the node budget.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(Natural n, std::string class_name)
        : std::runtime_error("node budget exhausted for n=" + n.str() + " (class " + class_name + ")"),
          n_(std::move(n)), class_name_(std::move(class_name)) {}

    const Natural& n() const { return n_; }
    const std::string& class_name() const { return class_name_; }

private:
    Natural n_;
    std::string class_name_;
};

/// Class, per-query node budget and optional cache shared by every length query.
struct SearchContext {
    ChainClass cls = ChainClass::all();
    std::uint64_t budget = kDefaultBudget;
    LengthCache* cache = nullptr;
};

/// Full search for n; exact results are recorded in the cache.
inline SearchOutcome search_and_record(const Natural& n, const SearchContext& ctx) {
    SearchOutcome out = shortest_length(n, ctx.cls, ctx.budget);
    if (out.exact() && ctx.cache != nullptr) {
        ctx.cache->insert(ctx.cls.name(), n, out.length);
    }
    return out;
}

/// l^A(n), from the cache when present. Throws BudgetExhausted rather than guess.
inline unsigned exact_length(const Natural& n, const SearchContext& ctx) {
    if (ctx.cache != nullptr) {
        if (auto hit = ctx.cache->find(ctx.cls.name(), n)) {
            return *hit;
        }
    }
    const SearchOutcome out = search_and_record(n, ctx);
    if (!out.exact()) {
        throw BudgetExhausted(n, ctx.cls.name());
    }
    return out.length;
}

/// "Is l^A(n) <= max_length?", answered from the cache when possible.
///
/// Depths are scanned upward from ceil(log2 n), so a witness found here is a
/// shortest chain and its length is cached.
inline BoundedOutcome within(const Natural& n, unsigned max_length, const SearchContext& ctx,
                             std::optional<unsigned> start_length = std::nullopt) {
    if (ctx.cache != nullptr) {
        if (auto hit = ctx.cache->find(ctx.cls.name(), n)) {
            BoundedOutcome out;
            out.result = *hit <= max_length ? Reachability::Found : Reachability::NotFound;
            return out;
        }
    }
    BoundedOutcome out = chain_within(n, max_length, ctx.cls, ctx.budget, start_length);
    if (out.result == Reachability::Found && ctx.cache != nullptr && out.witness &&
        start_length.value_or(0) <= lower_bound_length(n)) {
        ctx.cache->insert(ctx.cls.name(), n, static_cast<unsigned>(out.witness->length()));
    }
    return out;
}

/// l^A(n) if it is at most max_length, std::nullopt if larger. Throws BudgetExhausted.
inline std::optional<unsigned> length_if_within(const Natural& n, unsigned max_length, const SearchContext& ctx) {
    if (ctx.cache != nullptr) {
        if (auto hit = ctx.cache->find(ctx.cls.name(), n)) {
            return *hit <= max_length ? std::optional<unsigned>(*hit) : std::nullopt;
        }
    }
    const BoundedOutcome out = within(n, max_length, ctx);
    if (out.result == Reachability::BudgetExhausted) {
        throw BudgetExhausted(n, ctx.cls.name());
    }
    if (out.result == Reachability::NotFound) {
        return std::nullopt;
    }
    return static_cast<unsigned>(out.witness->length());
}

struct LengthRow {
    Natural n;
    SearchStatus status = SearchStatus::Exact;
    /// Exact length, or the binary-method upper bound when the budget ran out.
    unsigned length = 0;
    bool from_cache = false;
};

/// l^A(n) for every n in [lo, hi]. Rows come back in order of n regardless of
/// `threads`; new exact lengths are merged into the cache in one batch.
inline std::vector<LengthRow> batch_lengths(const Natural& lo, const Natural& hi, const SearchContext& ctx,
                                            unsigned threads = 1) {
    detail::require_positive(lo, "batch_lengths");
    if (hi < lo) {
        throw std::invalid_argument("batch_lengths: empty range");
    }
    const std::size_t count = static_cast<std::size_t>(hi - lo) + 1;
    std::vector<LengthRow> rows(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;

    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            LengthRow& row = rows[i];
            row.n = lo + i;
            try {
                if (ctx.cache != nullptr) {
                    if (auto hit = ctx.cache->find(ctx.cls.name(), row.n)) {
                        row.length = *hit;
                        row.from_cache = true;
                        continue;
                    }
                }
                const SearchOutcome out = shortest_length(row.n, ctx.cls, ctx.budget);
                row.status = out.status;
                row.length = out.length;
            } catch (...) {
                std::scoped_lock guard(failure_lock);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1) {
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
    if (ctx.cache != nullptr) {
        std::vector<CacheEntry> fresh;
        for (const auto& row : rows) {
            if (!row.from_cache && row.status == SearchStatus::Exact) {
                fresh.push_back(CacheEntry{ctx.cls.name(), row.n, row.length});
            }
        }
        ctx.cache->merge(fresh);
    }
    return rows;
}

/// n with l^A(2n) <= l^A(n), shown by explicit shortest chains for both.
struct DropWitness {
    Natural n;
    unsigned length_n = 0;
    unsigned length_2n = 0;
    AdditionChain chain_n;
    AdditionChain chain_2n;
};

struct DropScan {
    std::optional<DropWitness> drop;
    /// Set when the budget stopped the scan before a drop was certified.
    std::optional<Natural> unchecked;
};

/// Scans n = 1..limit for the first n with l^A(2n) = l^A(n).
inline DropScan smallest_drop(const Natural& limit, const SearchContext& ctx) {
    detail::require_positive(limit, "smallest_drop");
    DropScan scan;
    for (Natural n = 1; n <= limit; ++n) {
        unsigned ln = 0;
        unsigned l2n = 0;
        try {
            ln = exact_length(n, ctx);
            l2n = exact_length(2 * n, ctx);
        } catch (const BudgetExhausted&) {
            scan.unchecked = n;
            return scan;
        }
        if (l2n <= ln) {
            const SearchOutcome a = shortest_length(n, ctx.cls, ctx.budget);
            const SearchOutcome b = shortest_length(2 * n, ctx.cls, ctx.budget);
            if (!a.exact() || !b.exact()) {
                scan.unchecked = n;
                return scan;
            }
            scan.drop = DropWitness{n, a.length, b.length, a.witness, b.witness};
            return scan;
        }
    }
    return scan;
}

}  // namespace chainlab
