#include "qpc/spectrum.hpp"

#include <algorithm>

#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"

namespace qpc {

WeightSpectrum WeightSpectrum::zeros(std::size_t n, SpectrumKind kind) {
    WeightSpectrum s;
    s.n = n;
    s.counts.assign(n + 1, Integer(0));
    s.kind = kind;
    return s;
}

Integer WeightSpectrum::at(long long w) const {
    if (w < 0 || static_cast<std::size_t>(w) >= counts.size()) {
        return Integer(0);
    }
    return counts[static_cast<std::size_t>(w)];
}

Integer WeightSpectrum::total() const {
    Integer t = 0;
    for (const auto& a : counts) {
        t += a;
    }
    return t;
}

std::size_t WeightSpectrum::log2_total() const {
    const Integer t = total();
    if (t <= 0) {
        throw ConsistencyError("spectrum total is not positive");
    }
    const std::size_t bits = mpz_sizeinbase(t.get_mpz_t(), 2) - 1;
    if (t != pow2(bits)) {
        throw ConsistencyError("spectrum total " + to_decimal(t) + " is not a power of two");
    }
    return bits;
}

unsigned minimum_distance(const WeightSpectrum& s) {
    for (std::size_t w = 1; w < s.counts.size(); ++w) {
        if (s.counts[w] != 0) {
            return static_cast<unsigned>(w);
        }
    }
    return kUnboundedDistance;
}

WeightSpectrum dual_spectrum_by_enumeration(const BitMatrix& h, std::size_t threads) {
    const std::vector<BitVector> basis = row_space_basis(h);
    const std::size_t k = basis.size();
    if (k > kOracleMaxRank) {
        throw BudgetExceeded("oracle: rank " + std::to_string(k) + " exceeds the enumeration budget of " +
                             std::to_string(kOracleMaxRank));
    }
    const std::size_t n = h.cols();
    const std::size_t stride = words_for(n);
    if (threads == 0) {
        threads = default_thread_count();
    }

    // High basis vectors select the chunk; the low ones are walked in Gray
    // code order inside it.
    const std::size_t high = std::min<std::size_t>(k, 6);
    const std::size_t low = k - high;
    const std::size_t chunks = std::size_t{1} << high;
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(n + 1, 0));

    parallel_for(chunks, threads, [&](std::size_t chunk) {
        std::vector<Word> acc(stride, 0);
        for (std::size_t b = 0; b < high; ++b) {
            if ((chunk >> b) & 1U) {
                const auto w = basis[low + b].words();
                for (std::size_t i = 0; i < stride; ++i) {
                    acc[i] ^= w[i];
                }
            }
        }
        auto weight = [&] {
            std::size_t total = 0;
            for (Word x : acc) {
                total += static_cast<std::size_t>(std::popcount(x));
            }
            return total;
        };
        auto& counts = partial[chunk];
        ++counts[weight()];
        const std::uint64_t steps = std::uint64_t{1} << low;
        for (std::uint64_t g = 1; g < steps; ++g) {
            const auto flip = static_cast<std::size_t>(std::countr_zero(g));
            const auto w = basis[flip].words();
            for (std::size_t i = 0; i < stride; ++i) {
                acc[i] ^= w[i];
            }
            ++counts[weight()];
        }
    });

    WeightSpectrum out = WeightSpectrum::zeros(n, SpectrumKind::Dual);
    for (const auto& counts : partial) {
        for (std::size_t w = 0; w <= n; ++w) {
            out.counts[w] += from_u64(counts[w]);
        }
    }
    return out;
}

WeightSpectrum oracle_spectrum(const BitMatrix& h, std::size_t threads) {
    const WeightSpectrum dual = dual_spectrum_by_enumeration(h, threads);
    const std::size_t rank = dual.log2_total();
    return macwilliams(dual, rank);
}

WeightSpectrum macwilliams(const WeightSpectrum& s, std::size_t k) {
    const std::size_t n = s.n;
    if (s.counts.size() != n + 1) {
        throw PreconditionError("macwilliams: spectrum has " + std::to_string(s.counts.size()) +
                                " entries for length " + std::to_string(n));
    }
    if (k > n) {
        throw PreconditionError("macwilliams: dimension exceeds length");
    }
    if (s.total() != pow2(k)) {
        throw ConsistencyError("macwilliams: spectrum total " + to_decimal(s.total()) + " is not 2^" +
                               std::to_string(k));
    }

    std::vector<Integer> acc(n + 1, Integer(0));
    std::vector<Integer> kraw(n + 1);
    const auto sn = static_cast<long>(n);
    for (std::size_t j = 0; j <= n; ++j) {
        if (s.counts[j] == 0) {
            continue;
        }
        // K_0 = 1, K_1 = n - 2j, (w+1) K_{w+1} = (n - 2j) K_w - (n - w + 1) K_{w-1}.
        const long lead = sn - 2 * static_cast<long>(j);
        kraw[0] = 1;
        if (n >= 1) {
            kraw[1] = lead;
        }
        for (std::size_t w = 1; w < n; ++w) {
            Integer next = kraw[w] * lead - kraw[w - 1] * (sn - static_cast<long>(w) + 1);
            mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(w + 1));
            kraw[w + 1] = std::move(next);
        }
        for (std::size_t w = 0; w <= n; ++w) {
            acc[w] += s.counts[j] * kraw[w];
        }
    }

    WeightSpectrum out = WeightSpectrum::zeros(n, s.kind == SpectrumKind::Primal ? SpectrumKind::Dual
                                                                              : SpectrumKind::Primal);
    const Integer scale = pow2(k);
    for (std::size_t w = 0; w <= n; ++w) {
        if (!mpz_divisible_p(acc[w].get_mpz_t(), scale.get_mpz_t())) {
            throw ConsistencyError("macwilliams: non-integral coefficient at weight " + std::to_string(w));
        }
        mpz_divexact(out.counts[w].get_mpz_t(), acc[w].get_mpz_t(), scale.get_mpz_t());
        if (out.counts[w] < 0) {
            throw ConsistencyError("macwilliams: negative coefficient at weight " + std::to_string(w));
        }
    }
    return out;
}

WeightSpectrum doubling_step(const WeightSpectrum& s, std::size_t half_n) {
    if (s.kind != SpectrumKind::Primal) {
        throw PreconditionError("doubling_step expects a primal spectrum");
    }
    if (s.n != half_n || s.counts.size() != half_n + 1) {
        throw PreconditionError("doubling_step: spectrum length " + std::to_string(s.n) + " != half length " +
                                std::to_string(half_n));
    }
    if (s.counts[0] != 1) {
        throw PreconditionError("doubling_step: A_0 must be 1");
    }
    for (long long w = 1; w <= 3; ++w) {
        if (s.at(w) != 0) {
            throw PreconditionError("doubling_step: input has " + to_decimal(s.at(w)) + " codewords of weight " +
                                    std::to_string(w) + "; the recursion only covers codes without weights 1..3");
        }
    }

    const auto h = static_cast<long long>(half_n);
    WeightSpectrum out = WeightSpectrum::zeros(2 * half_n, SpectrumKind::Primal);
    out.counts[0] = 1;
    for (long long v = 1; 2 * v <= 2 * h; ++v) {
        Integer a = (v % 2 == 0) ? binomial(h, v) : Integer(0);
        for (long long j = 0; j <= v - 2; ++j) {
            const Integer& prev = s.at(2 * v - 2 * j);
            if (prev == 0) {
                continue;
            }
            a += pow2(static_cast<unsigned long>(2 * v - 2 * j - 1)) * prev * binomial(h - 2 * v + 2 * j, j);
        }
        out.counts[static_cast<std::size_t>(2 * v)] = std::move(a);
    }
    for (long long v = 0; 2 * v + 1 <= 2 * h; ++v) {
        Integer a = 0;
        for (long long j = 0; j <= v - 2; ++j) {
            const Integer prev = s.at(2 * v + 1 - 2 * j);
            if (prev == 0) {
                continue;
            }
            a += pow2(static_cast<unsigned long>(2 * v - 2 * j)) * prev * binomial(h - 2 * v - 1 + 2 * j, j);
        }
        out.counts[static_cast<std::size_t>(2 * v + 1)] = std::move(a);
    }
    return out;
}

WeightSpectrum dual_doubling_step(const WeightSpectrum& dual, std::size_t r, std::size_t half_n) {
    if (dual.kind != SpectrumKind::Dual) {
        throw PreconditionError("dual_doubling_step expects a dual spectrum");
    }
    if (half_n % 2 != 0) {
        throw PreconditionError("dual_doubling_step: half length " + std::to_string(half_n) +
                                " is odd; the dual recursion needs it even");
    }
    if (dual.n != half_n || dual.counts.size() != half_n + 1) {
        throw PreconditionError("dual_doubling_step: spectrum length " + std::to_string(dual.n) +
                                " != half length " + std::to_string(half_n));
    }
    if (r < 1 || dual.total() != pow2(r - 1)) {
        throw PreconditionError("dual_doubling_step: dual total " + to_decimal(dual.total()) + " is not 2^(r-1)");
    }
    WeightSpectrum out = WeightSpectrum::zeros(2 * half_n, SpectrumKind::Dual);
    for (std::size_t v = 0; v <= half_n; ++v) {
        out.counts[2 * v] = dual.counts[v];
    }
    out.counts[half_n] += pow2(r - 1);
    return out;
}

namespace {

void check_lineage(const Code& c, const BitMatrix& seed_h) {
    const std::size_t k = c.spec().lineage.doublings;
    Code probe(CodeSpec{seed_h.cols(), seed_h.rows(), kUnboundedDistance, {}}, seed_h);
    if (doubled(probe, k).parity_check() != c.parity_check()) {
        throw ConsistencyError("parity-check matrix is not a " + std::to_string(k) + "-fold doubling of its seed");
    }
}

}  // namespace

WeightSpectrum spectrum_by_doubling(const Code& c) {
    if (!c.has_doubling_lineage()) {
        throw PreconditionError("spectrum_by_doubling: code has no doubling lineage; use the oracle");
    }
    const BitMatrix seed_h = c.seed_matrix();
    check_lineage(c, seed_h);
    WeightSpectrum s = oracle_spectrum(seed_h);
    std::size_t half = seed_h.cols();
    for (std::size_t i = 0; i < c.spec().lineage.doublings; ++i) {
        s = doubling_step(s, half);
        half *= 2;
    }
    return s;
}

WeightSpectrum dual_spectrum_by_doubling(const Code& c) {
    if (!c.has_doubling_lineage()) {
        throw PreconditionError("dual_spectrum_by_doubling: code has no doubling lineage");
    }
    const BitMatrix seed_h = c.seed_matrix();
    check_lineage(c, seed_h);
    WeightSpectrum primal = oracle_spectrum(seed_h);
    WeightSpectrum dual = dual_spectrum_by_enumeration(seed_h);
    std::size_t half = seed_h.cols();
    std::size_t r = seed_h.rows();
    for (std::size_t i = 0; i < c.spec().lineage.doublings; ++i) {
        WeightSpectrum next_primal = doubling_step(primal, half);
        ++r;
        if (half % 2 == 0 && dual.total() == pow2(r - 1)) {
            dual = dual_doubling_step(dual, r, half);
        } else {
            dual = macwilliams(next_primal, 2 * half - r);
        }
        primal = std::move(next_primal);
        half *= 2;
    }
    return dual;
}

}  // namespace qpc
