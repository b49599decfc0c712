#pragma once

#include <cstddef>
#include <vector>

#include "qpc/bigint.hpp"
#include "qpc/construct.hpp"
#include "qpc/gf2.hpp"

namespace qpc {

enum class SpectrumKind { Primal, Dual };

// A_0..A_n as exact integers.
struct WeightSpectrum {
    std::size_t n = 0;
    std::vector<Integer> counts;
    SpectrumKind kind = SpectrumKind::Primal;

    static WeightSpectrum zeros(std::size_t n, SpectrumKind kind);

    // A_w, zero outside [0, n].
    Integer at(long long w) const;
    Integer total() const;
    // log2 of total(); throws ConsistencyError unless it is a power of two.
    std::size_t log2_total() const;

    friend bool operator==(const WeightSpectrum&, const WeightSpectrum&) = default;
};

// Smallest w > 0 with A_w > 0, or kUnboundedDistance.
unsigned minimum_distance(const WeightSpectrum& s);

// Largest row-space rank the oracle will enumerate (2^26 dual words).
inline constexpr std::size_t kOracleMaxRank = 26;

// Weight distribution of the row space of H (the dual code), by Gray-code
// walk over all 2^rank(H) combinations of a row basis. Chunked over the
// high basis bits; partial counts are merged in chunk order.
WeightSpectrum dual_spectrum_by_enumeration(const BitMatrix& h, std::size_t threads = 0);

// Primal spectrum: dual enumeration followed by the MacWilliams transform.
WeightSpectrum oracle_spectrum(const BitMatrix& h, std::size_t threads = 0);
inline WeightSpectrum oracle_spectrum(const Code& c, std::size_t threads = 0) {
    return oracle_spectrum(c.parity_check(), threads);
}

// Spectrum of the dual of a code of dimension k with spectrum s:
//   B_w = 2^-k * sum_j A_j K_w(j),
// K_w the binary Krawtchouk polynomials of length n. Throws
// ConsistencyError if sum(A) != 2^k or a coefficient is not integral.
WeightSpectrum macwilliams(const WeightSpectrum& s, std::size_t k);

// One doubling step on primal spectra. Input: spectrum of C_{r-1}, length
// half_n; output: spectrum of C_r, length 2 * half_n.
//   A_{2v}   = Delta_v + sum_{j=0}^{v-2} 2^{2v-2j-1} A_{2v-2j} C(half_n-2v+2j, j)
//   A_{2v+1} =           sum_{j=0}^{v-2} 2^{2v-2j}   A_{2v+1-2j} C(half_n-2v-1+2j, j)
// with Delta_v = C(half_n, v) for even v and 0 for odd v. The sums only see
// codewords of weight >= 4, so an input with A_1, A_2 or A_3 nonzero is
// refused with PreconditionError.
WeightSpectrum doubling_step(const WeightSpectrum& s, std::size_t half_n);

// One doubling step on dual spectra, valid for even half_n:
//   B'_{2v} = B_v, plus 2^(r-1) at weight half_n.
// Refuses odd half_n and inputs whose total is not 2^(r-1).
WeightSpectrum dual_doubling_step(const WeightSpectrum& dual, std::size_t r, std::size_t half_n);

// Oracle spectrum of the seed, then doubling_step once per recorded
// doubling. Throws PreconditionError for codes without doubling lineage and
// ConsistencyError if H is not the doubling of its recovered seed.
WeightSpectrum spectrum_by_doubling(const Code& c);

// Dual counterpart: dual_doubling_step where half_n is even, MacWilliams of
// the primal recursion where it is odd.
WeightSpectrum dual_spectrum_by_doubling(const Code& c);

}  // namespace qpc
