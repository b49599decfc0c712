#include "qpc/combinations.hpp"

#include <algorithm>
#include <string>

#include "qpc/errors.hpp"

namespace qpc {

std::uint64_t binomial_u64(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // acc * (n - k + i) / i stays exact: acc holds C(n - k + i - 1, i - 1).
        acc = acc * (n - k + i) / i;
        if (acc > UINT64_MAX) {
            throw BudgetExceeded("C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 64 bits");
        }
    }
    return static_cast<std::uint64_t>(acc);
}

std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
    if (k > n) {
        throw PreconditionError("unrank_combination: k > n");
    }
    if (rank >= binomial_u64(n, k)) {
        throw PreconditionError("unrank_combination: rank out of range");
    }
    std::vector<std::size_t> out(k);
    std::size_t x = 0;
    for (std::size_t i = 0; i < k; ++i) {
        // Skip every subset whose i-th element is x.
        for (;; ++x) {
            const std::uint64_t block = binomial_u64(n - x - 1, k - i - 1);
            if (rank < block) {
                break;
            }
            rank -= block;
        }
        out[i] = x++;
    }
    return out;
}

std::uint64_t rank_combination(std::size_t n, std::span<const std::size_t> subset) {
    const std::size_t k = subset.size();
    std::uint64_t rank = 0;
    std::size_t x = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (; x < subset[i]; ++x) {
            rank += binomial_u64(n - x - 1, k - i - 1);
        }
        ++x;
    }
    return rank;
}

bool next_combination(std::size_t n, std::span<std::size_t> subset) {
    const std::size_t k = subset.size();
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (subset[i] < n - k + i) {
            ++subset[i];
            for (std::size_t j = i + 1; j < k; ++j) {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

std::vector<CombinationRange> partition_combinations(std::size_t n, std::size_t k, std::size_t chunks) {
    const std::uint64_t total = binomial_u64(n, k);
    chunks = std::max<std::size_t>(chunks, 1);
    std::vector<CombinationRange> out;
    const std::uint64_t base = total / chunks;
    const std::uint64_t extra = total % chunks;
    std::uint64_t first = 0;
    for (std::size_t c = 0; c < chunks && first < total; ++c) {
        const std::uint64_t count = base + (c < extra ? 1 : 0);
        if (count == 0) {
            continue;
        }
        out.push_back({first, count});
        first += count;
    }
    return out;
}

}  // namespace qpc
