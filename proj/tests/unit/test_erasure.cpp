#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qpc/construct.hpp"
#include "qpc/erasure.hpp"
#include "qpc/errors.hpp"
#include "qpc/random.hpp"
#include "qpc/spectrum.hpp"

namespace qpc {
namespace {

std::vector<Code> d4_codes() {
    return {extended_hamming(4), extended_hamming(5), panchenko(5), panchenko(6),
            general_qp(6, 3, seed("example_9_5"))};
}

TEST(SRho, ExactMatchesBitmaskOracle) {
    for (const auto& c : d4_codes()) {
        for (std::size_t rho = 1; rho <= 7; ++rho) {
            EXPECT_EQ(s_rho_exact(c, rho), testing::s_rho_by_masks(c.parity_check(), rho))
                << "n=" << c.length() << " rho=" << rho;
        }
    }
}

TEST(SRho, ZeroAndRepeatedColumns) {
    const auto h = BitMatrix::from_rows({"0110", "0011"});
    for (std::size_t rho = 1; rho <= 3; ++rho) {
        EXPECT_EQ(s_rho_exact(h, rho), testing::s_rho_by_masks(h, rho));
    }
}

TEST(SRho, ThreadCountDoesNotChangeResult) {
    const auto c = panchenko(7);
    EnumerationOptions one;
    one.threads = 1;
    EnumerationOptions four;
    four.threads = 4;
    EXPECT_EQ(s_rho_exact(c, 5, one), s_rho_exact(c, 5, four));
}

TEST(SRho, BudgetIsEnforced) {
    EnumerationOptions tight;
    tight.budget = 1000;
    EXPECT_THROW(s_rho_exact(panchenko(7), 4, tight), BudgetExceeded);
}

TEST(Psi, ExactInLowRegimeAndBelowOtherwise) {
    for (const auto& c : d4_codes()) {
        const auto s = oracle_spectrum(c);
        for (std::size_t rho = 1; rho <= 7; ++rho) {
            const Integer ex = from_u64(s_rho_exact(c, rho));
            const Integer lower = psi(c.length(), 4, rho, s);
            if (is_exact_regime(4, rho)) {
                EXPECT_EQ(lower, ex) << "n=" << c.length() << " rho=" << rho;
            } else {
                EXPECT_LE(lower, ex);
            }
        }
    }
}

TEST(Psi, BelowDistanceIsBinomial) {
    const auto s = oracle_spectrum(panchenko(6));
    EXPECT_EQ(psi(20, 4, 3, s), binomial(20, 3));
    EXPECT_EQ(delta_lower(20, 4, 2, s), Rational(1));
}

TEST(PsiTilde, OrderingAndDepthLimits) {
    for (const auto& c : d4_codes()) {
        TrailingShortenProvider provider(c);
        const auto s = oracle_spectrum(c);
        for (std::size_t rho = 4; rho <= 7; ++rho) {
            const Integer lower = psi(c.length(), 4, rho, s);
            const Integer tilde = psi_tilde(c.length(), 4, rho, provider);
            const Integer ex = from_u64(s_rho_exact(c, rho));
            EXPECT_LE(lower, tilde);
            EXPECT_LE(tilde, ex);
            EXPECT_LE(ex, binomial(static_cast<long long>(c.length()), static_cast<long long>(rho)));
            EXPECT_EQ(psi_tilde(c.length(), 4, rho, provider, 1), lower);
            Rational two(psi_tilde(c.length(), 4, rho, provider, 2),
                         binomial(static_cast<long long>(c.length()), static_cast<long long>(rho)));
            two.canonicalize();
            EXPECT_EQ(delta_tilde_2(c.length(), 4, rho, provider), two);
        }
    }
}

TEST(Sampling, DeterministicAndCloseToExact) {
    const auto h = panchenko(7).parity_check();
    const auto a = s_rho_sampled(h, 6, 200000, 42, 1);
    const auto b = s_rho_sampled(h, 6, 200000, 42, 4);
    EXPECT_EQ(a.hits, b.hits);
    EXPECT_EQ(a.samples, 200000U);
    const double exact = static_cast<double>(s_rho_exact(h, 6)) / 3838380.0;
    EXPECT_NEAR(a.delta, exact, 5 * a.std_error);
    EXPECT_NEAR(a.ci_halfwidth, 1.96 * a.std_error, 1e-15);
}

TEST(Analysis, RhoAboveRankHasNoIndependentSets) {
    const auto c = panchenko(5);
    const auto s = oracle_spectrum(c);
    ErasureOptions opts;
    const auto rep = analyze_erasure(c, s, 6, opts);
    ASSERT_TRUE(rep.s_exact);
    EXPECT_EQ(*rep.s_exact, 0);
    EXPECT_EQ(rep.delta_value(), 0.0);
}

TEST(Analysis, HammingSevenPsiBoundIsStrictAtSix) {
    const auto c = extended_hamming(7);
    const auto s = spectrum_by_doubling(c);
    const double bound = delta_lower(64, 4, 6, s).get_d();
    EXPECT_NEAR(bound, 0.7385, 1e-4);
    EXPECT_LT(bound, 0.7469);
}

TEST(Approx, ParameterRangeAndBounds) {
    EXPECT_THROW(ApproxParams::checked(6.0, 7), PreconditionError);
    EXPECT_NO_THROW(ApproxParams::checked(7.0, 7));
    EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    const auto b = delta_entropy_bound(4, 5, 6.5);
    ASSERT_TRUE(b.weak);
    EXPECT_NEAR(*b.weak, 1 - std::pow(2.0, 5 - 6.5), 1e-12);
    // sum_{w=4}^{5} C(5, w) = 6.
    EXPECT_NEAR(b.binomial_sum, 1 - 6 * std::pow(2.0, -6.5), 1e-12);
    EXPECT_FALSE(delta_entropy_bound(4, 7, 6.5).weak);
}

TEST(Printed, ReferenceTableLookup) {
    EXPECT_EQ(printed_table1_value("Panchenko", 7, 4), 0.9870);
    EXPECT_EQ(printed_table1_value("Hamming", 8, 5), 0.9600);
    EXPECT_FALSE(printed_table1_value("Hamming", 6, 4));
}

TEST(Table1, ExactRegimeRowForPanchenkoSeven) {
    ErasureOptions opts;
    opts.method = ErasureMethod::PsiBound;
    const auto rows = table1(table1_codes({"panchenko7"}), 4, 5, opts);
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_NEAR(rows[0].report.delta_value(), 0.9870, 1e-4);
    EXPECT_NEAR(rows[1].report.delta_value(), 0.9287, 1e-4);
    EXPECT_THROW(table1_codes({"foo9"}), PreconditionError);
}

TEST(SRho, DeltaDecreasesWithRho) {
    for (const auto& c : d4_codes()) {
        Rational prev = 1;
        for (std::size_t rho = 1; rho <= std::min<std::size_t>(8, c.length()); ++rho) {
            Rational d(from_u64(s_rho_exact(c, rho)),
                       binomial(static_cast<long long>(c.length()), static_cast<long long>(rho)));
            d.canonicalize();
            EXPECT_LE(d, prev);
            prev = d;
        }
    }
}

TEST(SRho, InvariantUnderColumnPermutation) {
    const BitMatrix h = panchenko(7).parity_check();
    SplitMix64 rng(31);
    std::vector<std::size_t> perm(h.cols());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
    }
    const BitMatrix p = select_columns(h, perm);
    for (std::size_t rho = 4; rho <= 6; ++rho) {
        EXPECT_EQ(s_rho_exact(h, rho), s_rho_exact(p, rho));
    }
}

TEST(Sampling, WithinThreeSigmaForThreeSeeds) {
    const auto h = general_qp(7, 3, seed("example_9_5")).parity_check();
    const double exact = static_cast<double>(s_rho_exact(h, 7)) / binomial(36, 7).get_d();
    for (std::uint64_t seed_value : {1U, 2U, 3U}) {
        const auto s = s_rho_sampled(h, 7, 100000, seed_value, 2);
        EXPECT_NEAR(s.delta, exact, 3 * s.std_error) << "seed " << seed_value;
    }
}

}  // namespace
}  // namespace qpc
