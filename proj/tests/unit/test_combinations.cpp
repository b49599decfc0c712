#include <gtest/gtest.h>

#include "oracles.hpp"

#include <bit>
#include <set>

#include "qpc/bigint.hpp"
#include "qpc/combinations.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"

namespace qpc {
namespace {

TEST(Binomial, SmallValuesAndOverflow) {
    EXPECT_EQ(binomial_u64(40, 7), 18643560U);
    EXPECT_EQ(binomial_u64(64, 7), 621216192U);
    EXPECT_EQ(binomial_u64(5, 0), 1U);
    EXPECT_EQ(binomial_u64(5, 6), 0U);
    EXPECT_EQ(binomial_u64(128, 7), 94525795200ULL);
    EXPECT_THROW(binomial_u64(200, 100), BudgetExceeded);
}

TEST(Combinations, EnumerationMatchesBitmasks) {
    for (std::size_t n = 0; n <= 10; ++n) {
        for (std::size_t k = 0; k <= n; ++k) {
            std::vector<std::uint64_t> masks;
            enumerate_combinations(n, k, [&](std::span<const std::size_t> s) {
                std::uint64_t m = 0;
                for (std::size_t x : s) {
                    m |= std::uint64_t{1} << x;
                }
                masks.push_back(m);
            });
            std::set<std::uint64_t> expected;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
                if (static_cast<std::size_t>(std::popcount(m)) == k) {
                    expected.insert(m);
                }
            }
            ASSERT_EQ(masks.size(), expected.size());
            EXPECT_EQ(std::set<std::uint64_t>(masks.begin(), masks.end()), expected);
        }
    }
}

TEST(Combinations, RankUnrankRoundTripInOrder) {
    const std::size_t n = 12;
    const std::size_t k = 4;
    std::uint64_t expected = 0;
    enumerate_combinations(n, k, [&](std::span<const std::size_t> s) {
        EXPECT_EQ(rank_combination(n, s), expected);
        const auto back = unrank_combination(n, k, expected);
        EXPECT_TRUE(std::equal(back.begin(), back.end(), s.begin(), s.end()));
        ++expected;
    });
    EXPECT_EQ(expected, binomial_u64(n, k));
}

TEST(Combinations, PartitionCoversEverythingOnce) {
    for (std::size_t chunks : {1U, 3U, 7U, 64U, 1000U}) {
        const auto parts = partition_combinations(15, 5, chunks);
        EXPECT_LE(parts.size(), chunks);
        std::uint64_t next = 0;
        std::vector<std::uint64_t> ranks;
        for (const auto& p : parts) {
            EXPECT_EQ(p.first, next);
            next += p.count;
            enumerate_combination_range(15, 5, p, [&](std::span<const std::size_t> s) {
                ranks.push_back(rank_combination(15, s));
            });
        }
        EXPECT_EQ(next, binomial_u64(15, 5));
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            ASSERT_EQ(ranks[i], i);
        }
    }
}

TEST(Parallel, RunsEveryTaskAndRethrows) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t t) { hits[t]++; });
    for (auto& h : hits) {
        EXPECT_EQ(h.load(), 1);
    }
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t t) {
                                  if (t == 5) {
                                      throw ConsistencyError("boom");
                                  }
                              }),
                 ConsistencyError);
}

TEST(Binomial, AgreesWithArbitraryPrecision) {
    for (std::size_t n = 0; n <= 64; ++n) {
        for (std::size_t k = 0; k <= 8; ++k) {
            EXPECT_EQ(from_u64(binomial_u64(n, k)), binomial(static_cast<long long>(n), static_cast<long long>(k)));
        }
    }
}

TEST(Combinations, VisitCountsMatchBinomials) {
    for (std::size_t n = 0; n <= 24; ++n) {
        for (std::size_t k = 0; k <= 8; ++k) {
            std::uint64_t visits = 0;
            enumerate_combinations(n, k, [&](std::span<const std::size_t>) { ++visits; });
            ASSERT_EQ(from_u64(visits), binomial(static_cast<long long>(n), static_cast<long long>(k)))
                << n << " " << k;
        }
    }
    // Chunk sizes alone for the larger cases.
    for (std::size_t n = 25; n <= 64; ++n) {
        for (std::size_t k = 0; k <= 8; ++k) {
            Integer sum = 0;
            for (const auto& r : partition_combinations(n, k, 64)) {
                sum += from_u64(r.count);
            }
            ASSERT_EQ(sum, binomial(static_cast<long long>(n), static_cast<long long>(k)));
        }
    }
}

}  // namespace
}  // namespace qpc
