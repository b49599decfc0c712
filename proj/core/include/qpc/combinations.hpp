#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qpc {

// Exact C(n, k) in 64 bits; throws BudgetExceeded on overflow.
std::uint64_t binomial_u64(std::size_t n, std::size_t k);

// Lexicographic rank <-> k-subset of {0..n-1} (ascending elements).
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank);
std::uint64_t rank_combination(std::size_t n, std::span<const std::size_t> subset);

// Advances an ascending k-subset to its lexicographic successor. Returns
// false (leaving the subset unspecified) past the last one.
bool next_combination(std::size_t n, std::span<std::size_t> subset);

// Contiguous slice [first, first + count) of the lexicographic order.
struct CombinationRange {
    std::uint64_t first = 0;
    std::uint64_t count = 0;
};

// Splits the C(n, k) subsets into at most `chunks` contiguous ranges of
// near-equal size. The split depends only on (n, k, chunks).
std::vector<CombinationRange> partition_combinations(std::size_t n, std::size_t k, std::size_t chunks);

template <class Visitor>
void enumerate_combination_range(std::size_t n, std::size_t k, CombinationRange range, Visitor&& visit) {
    if (range.count == 0) {
        return;
    }
    std::vector<std::size_t> subset = unrank_combination(n, k, range.first);
    for (std::uint64_t i = 0; i < range.count; ++i) {
        visit(std::span<const std::size_t>(subset));
        if (i + 1 < range.count) {
            next_combination(n, subset);
        }
    }
}

// Calls visit(span<const size_t>) once per k-subset of {0..n-1}, in
// lexicographic order.
template <class Visitor>
void enumerate_combinations(std::size_t n, std::size_t k, Visitor&& visit) {
    if (k > n) {
        return;
    }
    std::vector<std::size_t> subset(k);
    for (std::size_t i = 0; i < k; ++i) {
        subset[i] = i;
    }
    do {
        visit(std::span<const std::size_t>(subset));
    } while (next_combination(n, subset));
}

}  // namespace qpc
