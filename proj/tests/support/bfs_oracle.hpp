// tests/support/bfs_oracle.hpp: exhaustive chain-length oracle, independent of the search engine.
//
// Decides the layer question of a breadth-first search over strictly
// increasing chains ("is n in some chain of length <= L?") depth first, so no
// layer is stored. Two pruning rules, both elementary:
//   * a chain with maximum a and k steps left ends at most at a * 2^k;
//   * unless every remaining step doubles, the first other step adds at most
//     the second largest element, capping the end at
//     max(a + b, 3a/2) * 2^(k-1) where b is the previous maximum.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace oracle {

namespace detail {

struct Dfs {
    std::uint32_t n = 0;
    int max_length = 0;
    std::uint32_t chain[64] = {1};

    /// Can a chain whose top two elements are v > second still reach n in `left` steps?
    bool viable(std::uint64_t v, std::uint64_t second, int left) const {
        if (left == 0) {
            return v == n;
        }
        if ((v << left) == n) {
            return true;
        }
        std::uint64_t twice_cap = 2 * (v + second);
        if (left >= 2) {
            twice_cap = std::max<std::uint64_t>(twice_cap, 3 * v);
        }
        return 2 * std::uint64_t(n) <= (twice_cap << (left - 1));
    }

    bool extend(int depth) {
        const std::uint32_t top = chain[depth];
        const int left = max_length - depth;
        std::uint32_t sums[64 * 65 / 2];
        int count = 0;
        for (int i = depth; i >= 0; --i) {
            for (int k = i; k >= 0; --k) {
                const std::uint32_t v = chain[i] + chain[k];
                if (v <= top) {
                    break;
                }
                if (v == n) {
                    return true;
                }
                if (v < n && viable(v, top, left - 1)) {
                    sums[count++] = v;
                }
            }
        }
        if (left == 1) {
            return false;
        }
        std::sort(sums, sums + count, std::greater<>());
        count = static_cast<int>(std::unique(sums, sums + count) - sums);
        for (int s = 0; s < count; ++s) {
            chain[depth + 1] = sums[s];
            if (extend(depth + 1)) {
                return true;
            }
        }
        return false;
    }
};

}  // namespace detail

/// True iff some addition chain for n has length <= max_length.
inline bool reachable_within(std::uint32_t n, int max_length) {
    if (n == 0 || n > 0xFFFF) {
        throw std::out_of_range("oracle supports 1 <= n <= 65535");
    }
    if (max_length > 62) {
        throw std::out_of_range("oracle supports lengths up to 62");
    }
    if (max_length < 0) {
        return false;
    }
    if (n == 1) {
        return true;
    }
    if (max_length == 0) {
        return false;
    }
    detail::Dfs dfs;
    dfs.n = n;
    dfs.max_length = max_length;
    return dfs.extend(0);
}

/// l(n) by increasing depth.
inline int shortest_length(std::uint32_t n) {
    int depth = 0;
    while (!reachable_within(n, depth)) {
        ++depth;
    }
    return depth;
}

}  // namespace oracle
