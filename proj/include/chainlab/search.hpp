// include/chainlab/search.hpp: exact shortest-chain search by iterative deepening.
//
// The depth-first core works on 64-bit words; targets must stay below 2^62 so
// that every intermediate bound fits. The search space is the set of strictly
// increasing chains, explored largest candidate first. Pruning uses only facts
// that hold for every addition chain, so it is sound for every chain class:
//
//   * with t steps left and current maximum a, the final element is at most
//     a * 2^t;
//   * unless every remaining step doubles the maximum, or only the first one
//     does not, the final element is at most 3a * 2^(t-2);
//   * a step that is not a doubling of the maximum at most doubles the largest
//     Hamming weight in the chain, so a target of weight w needs at least
//     ceil(log2(w / W)) such steps; with j of them the final element is bounded
//     by simulating "max + second max" on the top two elements.
//
// The starting depth is lower_bound_length, the Schonhage bound with the
// constant 2.13 evaluated in exact integer arithmetic.

#pragma once

#include "chainlab/chain.hpp"
#include "chainlab/natural.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainlab {

/// Largest target the depth-first core accepts (exclusive).
inline const Natural& search_limit() {
    static const Natural limit = pow2(62);
    return limit;
}

/// Least integer L with L >= log2 n + log2 nu(n) - 2.13, clamped at 0.
///
/// Decided exactly: L qualifies iff 2^(100L + 213) >= (n nu(n))^100.
inline unsigned schonhage_length_bound(const Natural& n) {
    detail::require_positive(n, "schonhage_length_bound");
    const Natural power = boost::multiprecision::pow(Natural(n * ones_count(n)), 100);
    const auto fits = [&](long long len) {
        const long long exponent = 100 * len + 213;
        return exponent >= 0 && pow2(static_cast<unsigned>(exponent)) >= power;
    };
    long long len = (static_cast<long long>(boost::multiprecision::msb(power)) - 213) / 100 - 1;
    while (!fits(len)) {
        ++len;
    }
    while (len > 0 && fits(len - 1)) {
        --len;
    }
    return len < 0 ? 0u : static_cast<unsigned>(len);
}

/// Proved lower bound on l(n), hence on l^A(n) for every admissible A:
/// max(ceil(log2 n), ceil(log2 n + log2 nu(n) - 2.13)).
inline unsigned lower_bound_length(const Natural& n) {
    return std::max(ceil_log2(n), schonhage_length_bound(n));
}

enum class SearchStatus { Exact, BudgetExhausted };

struct SearchOutcome {
    Natural n;
    std::string class_name;
    SearchStatus status = SearchStatus::Exact;
    /// l^A(n) when Exact; otherwise the best known upper bound (binary method).
    unsigned length = 0;
    /// Shortest chain when Exact; the binary chain (if the class admits it) otherwise.
    AdditionChain witness;
    std::uint64_t nodes_expanded = 0;

    bool exact() const { return status == SearchStatus::Exact; }
};

enum class Reachability { Found, NotFound, BudgetExhausted };

/// Answer to "is there a chain of length at most max_length?".
struct BoundedOutcome {
    Reachability result = Reachability::NotFound;
    std::optional<AdditionChain> witness;
    std::uint64_t nodes_expanded = 0;
};

namespace detail {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t shl_sat(std::uint64_t x, unsigned s) {
    if (x == 0) {
        return 0;
    }
    if (s >= 64 || x > (kSaturated >> s)) {
        return kSaturated;
    }
    return x << s;
}

inline std::uint64_t add_sat(std::uint64_t x, std::uint64_t y) {
    return x > kSaturated - y ? kSaturated : x + y;
}

/// Upper bound on the final element after t steps from a chain whose two
/// largest elements are (top, second), when at least `needed` of the steps are
/// not doublings of the current maximum.
inline std::uint64_t growth_bound(std::uint64_t top, std::uint64_t second, unsigned t, unsigned needed) {
    if (needed == 0) {
        return shl_sat(top, t);
    }
    if (needed > t) {
        return 0;
    }
    constexpr unsigned kMaxTracked = 8;
    needed = std::min(needed, kMaxTracked - 1);
    std::array<std::uint64_t, kMaxTracked> hi{};
    std::array<std::uint64_t, kMaxTracked> lo{};
    std::array<bool, kMaxTracked> live{};
    live[0] = true;
    hi[0] = top;
    lo[0] = second;
    for (unsigned step = 0; step < t; ++step) {
        std::array<std::uint64_t, kMaxTracked> nhi{};
        std::array<std::uint64_t, kMaxTracked> nlo{};
        std::array<bool, kMaxTracked> nlive{};
        auto merge = [&](unsigned slot, std::uint64_t m, std::uint64_t s) {
            if (!nlive[slot]) {
                nlive[slot] = true;
                nhi[slot] = m;
                nlo[slot] = s;
            } else {
                nhi[slot] = std::max(nhi[slot], m);
                nlo[slot] = std::max(nlo[slot], s);
            }
        };
        for (unsigned c = 0; c <= needed; ++c) {
            if (!live[c]) {
                continue;
            }
            merge(c, add_sat(hi[c], hi[c]), hi[c]);
            merge(std::min(c + 1, needed), add_sat(hi[c], lo[c]), hi[c]);
        }
        hi = nhi;
        lo = nlo;
        live = nlive;
    }
    return live[needed] ? hi[needed] : 0;
}

/// Depth-first core for one target and one exact depth.
template <ClassTag Tag>
class ChainSearch {
public:
    ChainSearch(std::uint64_t target, const ChainClass& cls, std::uint64_t budget, std::uint64_t spent)
        : n_(target), target_weight_(static_cast<unsigned>(std::popcount(target))), cls_(cls),
          budget_(budget), nodes_(spent) {}

    /// Looks for a chain of exactly `depth` steps (shorter ones may be found incidentally).
    bool run(unsigned depth) {
        depth_ = depth;
        chain_.assign(depth + 2, 0);
        chain_[0] = 1;
        if (n_ == 1) {
            length_ = 1;
            return true;
        }
        return descend(1, 1);
    }

    bool exhausted() const { return exhausted_; }
    std::uint64_t nodes() const { return nodes_; }

    AdditionChain witness() const {
        AdditionChain out;
        for (std::size_t i = 0; i < length_; ++i) {
            out.elements.emplace_back(chain_[i]);
        }
        return out;
    }

private:
    bool contains(std::size_t len, std::uint64_t v) const {
        return std::binary_search(chain_.begin(), chain_.begin() + static_cast<std::ptrdiff_t>(len), v);
    }

    bool pair_sum(std::size_t len, std::uint64_t v) const {
        std::size_t i = 0;
        std::size_t j = len - 1;
        while (i <= j) {
            const std::uint64_t s = chain_[i] + chain_[j];
            if (s == v) {
                return true;
            }
            if (s < v) {
                ++i;
            } else {
                if (j == 0) {
                    break;
                }
                --j;
            }
        }
        return false;
    }

    /// Whether `v` is a step the class allows after chain_[0..len).
    bool step_ok(std::size_t len, std::uint64_t v) const {
        if constexpr (Tag == ClassTag::All) {
            return pair_sum(len, v);
        } else if constexpr (Tag == ClassTag::Star) {
            const std::uint64_t last = chain_[len - 1];
            return v > last && v - last <= last && contains(len, v - last);
        } else {
            if (!pair_sum(len, v)) {
                return false;
            }
            std::vector<Natural> prefix(chain_.begin(), chain_.begin() + static_cast<std::ptrdiff_t>(len));
            return cls_.accepts_step(prefix, Natural(v));
        }
    }

    /// Completes the chain with `first` followed by doublings up to n_.
    bool finish_with(std::size_t len, std::uint64_t first, unsigned steps) {
        std::size_t pos = len;
        std::uint64_t v = first;
        for (unsigned i = 0; i < steps; ++i) {
            if (!step_ok(pos, v)) {
                return false;
            }
            chain_[pos++] = v;
            v <<= 1;
        }
        length_ = pos;
        return true;
    }

    void candidates(std::size_t len, std::uint64_t floor_value, std::vector<std::uint64_t>& out) const {
        const std::uint64_t a = chain_[len - 1];
        const std::uint64_t hi = std::min(a << 1, n_);
        out.clear();
        if constexpr (Tag == ClassTag::Star) {
            for (std::size_t i = len; i-- > 0;) {
                const std::uint64_t v = a + chain_[i];
                if (v < floor_value) {
                    break;
                }
                if (v <= hi) {
                    out.push_back(v);
                }
            }
            return;
        } else {
            for (std::size_t i = len; i-- > 0;) {
                const std::uint64_t x = chain_[i];
                if (x + x <= a || x + x < floor_value) {
                    break;
                }
                for (std::size_t j = i + 1; j-- > 0;) {
                    const std::uint64_t v = x + chain_[j];
                    if (v <= a || v < floor_value) {
                        break;
                    }
                    if (v <= hi) {
                        out.push_back(v);
                    }
                }
            }
            std::sort(out.begin(), out.end(), std::greater<>());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            if constexpr (Tag == ClassTag::Custom) {
                std::erase_if(out, [&](std::uint64_t v) { return !step_ok(len, v); });
            }
        }
    }

    bool one_step(std::size_t len) {
        if (n_ > (chain_[len - 1] << 1) || !step_ok(len, n_)) {
            return false;
        }
        chain_[len] = n_;
        length_ = len + 1;
        return true;
    }

    bool two_steps(std::size_t len) {
        const std::uint64_t a = chain_[len - 1];
        if (n_ > (a << 2)) {
            return false;
        }
        if constexpr (Tag == ClassTag::Custom) {
            std::vector<std::uint64_t> next;
            candidates(len, (n_ + 1) / 2, next);
            for (std::uint64_t c : next) {
                chain_[len] = c;
                if (one_step(len + 1)) {
                    return true;
                }
            }
            return false;
        } else {
            // n = c + w with w in the chain or w = c; try the largest c first.
            std::uint64_t best = 0;
            if ((n_ & 1) == 0) {
                const std::uint64_t c = n_ >> 1;
                if (c > a && step_ok(len, c)) {
                    best = c;
                }
            }
            for (std::size_t i = 0; i < len; ++i) {
                const std::uint64_t w = chain_[i];
                if (w >= n_) {
                    break;
                }
                const std::uint64_t c = n_ - w;
                if (c <= best || c <= a) {
                    break;
                }
                if (c > (a << 1)) {
                    continue;
                }
                if (!step_ok(len, c)) {
                    continue;
                }
                best = c;
                break;
            }
            if (best == 0) {
                return false;
            }
            chain_[len] = best;
            chain_[len + 1] = n_;
            length_ = len + 2;
            return true;
        }
    }

    bool descend(std::size_t len, unsigned weight) {
        const std::uint64_t a = chain_[len - 1];
        const unsigned t = depth_ + 1 - static_cast<unsigned>(len);
        if (a == n_) {
            length_ = len;
            return true;
        }
        if (t == 0) {
            return false;
        }
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        const std::uint64_t reach = shl_sat(a, t);
        if (reach < n_) {
            return false;
        }
        if (reach == n_) {
            return finish_with(len, a << 1, t);
        }
        if (t >= 2 && n_ > shl_sat(3 * a, t - 2)) {
            // only "one non-doubling step, then doublings" can get this far
            const unsigned rest = t - 1;
            if ((n_ & ((std::uint64_t{1} << rest) - 1)) != 0) {
                return false;
            }
            const std::uint64_t first = n_ >> rest;
            if (first <= a || first >= (a << 1)) {
                return false;
            }
            return finish_with(len, first, t);
        }
        unsigned needed = 1;
        while (weight << needed < target_weight_) {
            ++needed;
        }
        if (needed > t) {
            return false;
        }
        if (needed >= 2 && t >= 3) {
            const std::uint64_t second = len >= 2 ? chain_[len - 2] : 0;
            if (n_ > growth_bound(a, second, t, needed)) {
                return false;
            }
        }
        if (t == 1) {
            return one_step(len);
        }
        if (t == 2) {
            return two_steps(len);
        }
        // children with v * 2^(t-1) < n would be pruned on entry
        const std::uint64_t floor_value = ((n_ - 1) >> (t - 1)) + 1;
        std::vector<std::uint64_t>& next = scratch(len);
        candidates(len, floor_value, next);
        for (std::uint64_t v : next) {
            chain_[len] = v;
            const unsigned w = std::max(weight, static_cast<unsigned>(std::popcount(v)));
            if (descend(len + 1, w)) {
                return true;
            }
            if (exhausted_) {
                return false;
            }
        }
        return false;
    }

    std::vector<std::uint64_t>& scratch(std::size_t len) {
        if (scratch_.size() <= len) {
            scratch_.resize(len + 1);
        }
        return scratch_[len];
    }

    std::uint64_t n_;
    unsigned target_weight_;
    const ChainClass& cls_;
    std::uint64_t budget_;
    std::uint64_t nodes_;
    unsigned depth_ = 0;
    bool exhausted_ = false;
    std::size_t length_ = 0;
    std::vector<std::uint64_t> chain_;
    std::vector<std::vector<std::uint64_t>> scratch_;
};

inline std::uint64_t to_word(const Natural& n, const char* what) {
    detail::require_positive(n, what);
    if (n >= search_limit()) {
        throw std::out_of_range(std::string(what) + ": target exceeds the search range (2^62)");
    }
    return static_cast<std::uint64_t>(n);
}

struct DepthResult {
    bool found = false;
    bool exhausted = false;
    std::uint64_t nodes = 0;
    AdditionChain witness;
};

template <ClassTag Tag>
DepthResult search_depths(std::uint64_t n, const ChainClass& cls, unsigned from, unsigned to,
                          std::uint64_t budget) {
    DepthResult result;
    for (unsigned depth = from; depth <= to; ++depth) {
        ChainSearch<Tag> search(n, cls, budget, result.nodes);
        const bool found = search.run(depth);
        result.nodes = search.nodes();
        if (found) {
            result.found = true;
            result.witness = search.witness();
            return result;
        }
        if (search.exhausted()) {
            result.exhausted = true;
            return result;
        }
    }
    return result;
}

inline DepthResult dispatch_depths(std::uint64_t n, const ChainClass& cls, unsigned from, unsigned to,
                                   std::uint64_t budget) {
    switch (cls.tag()) {
        case ClassTag::All: return search_depths<ClassTag::All>(n, cls, from, to, budget);
        case ClassTag::Star: return search_depths<ClassTag::Star>(n, cls, from, to, budget);
        case ClassTag::Binary: break;
        case ClassTag::Custom: return search_depths<ClassTag::Custom>(n, cls, from, to, budget);
    }
    // the binary class holds exactly one chain per target
    DepthResult result;
    const AdditionChain chain = binary_chain(Natural(n));
    result.nodes = chain.length();
    if (chain.length() >= from && chain.length() <= to) {
        result.found = true;
        result.witness = chain;
    }
    return result;
}

}  // namespace detail

/// Exact l^A(n) by iterative deepening from lower_bound_length(n).
///
/// Witnesses are deterministic (largest candidate first) but not canonical.
inline SearchOutcome shortest_length(const Natural& n, const ChainClass& cls, std::uint64_t budget) {
    if (budget == 0) {
        throw std::invalid_argument("shortest_length: budget must be at least 1");
    }
    const std::uint64_t target = detail::to_word(n, "shortest_length");
    SearchOutcome out;
    out.n = n;
    out.class_name = cls.name();

    const unsigned upper = binary_chain_length(n);
    const unsigned lower = lower_bound_length(n);
    const bool binary_admitted = validate_chain(binary_chain(n), cls).valid();
    // when the binary chain is in the class, failing below its length settles it
    const unsigned last_depth = binary_admitted ? upper - (upper > lower ? 1 : 0) : upper;

    detail::DepthResult found;
    if (cls.tag() == ClassTag::Binary || lower <= last_depth) {
        found = detail::dispatch_depths(target, cls, lower, last_depth, budget);
    }
    out.nodes_expanded = found.nodes;
    if (found.found) {
        out.length = static_cast<unsigned>(found.witness.length());
        out.witness = std::move(found.witness);
        return out;
    }
    if (!found.exhausted && binary_admitted) {
        out.length = upper;
        out.witness = binary_chain(n);
        return out;
    }
    out.status = SearchStatus::BudgetExhausted;
    out.length = upper;
    if (binary_admitted) {
        out.witness = binary_chain(n);
    }
    return out;
}

/// Decides whether a chain of length <= max_length exists, scanning depths
/// from start_length upward. Defaults to ceil(log2 n) so the answer does not
/// depend on the Schonhage bound.
inline BoundedOutcome chain_within(const Natural& n, unsigned max_length, const ChainClass& cls,
                                   std::uint64_t budget, std::optional<unsigned> start_length = std::nullopt) {
    if (budget == 0) {
        throw std::invalid_argument("chain_within: budget must be at least 1");
    }
    const std::uint64_t target = detail::to_word(n, "chain_within");
    const unsigned from = start_length.value_or(ceil_log2(n));
    BoundedOutcome out;
    if (from > max_length) {
        return out;
    }
    auto found = detail::dispatch_depths(target, cls, from, max_length, budget);
    out.nodes_expanded = found.nodes;
    if (found.found) {
        out.result = Reachability::Found;
        out.witness = std::move(found.witness);
    } else if (found.exhausted) {
        out.result = Reachability::BudgetExhausted;
    }
    return out;
}

}  // namespace chainlab
