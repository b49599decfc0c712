#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qpc/gf2.hpp"

namespace qpc {

// Distance of a code without nonzero codewords (e.g. the [2,0] code of M).
inline constexpr unsigned kUnboundedDistance = std::numeric_limits<unsigned>::max();

// How a code was obtained: a named seed, a number of doubling steps applied
// to it, the g parameter of the length family (if any), and the columns
// removed afterwards.
struct Lineage {
    std::string seed;  // "M", "S", "EH3", "example_9_5", "custom" or "" when unknown
    std::size_t doublings = 0;
    int g = -1;  // -1 when the code is not indexed by g
    std::vector<std::size_t> shortened;

    friend bool operator==(const Lineage&, const Lineage&) = default;
};

// [n, n - r, d] bookkeeping. `d` is the design distance tracked through the
// constructions; shortening recomputes it when the spectrum oracle can.
struct CodeSpec {
    std::size_t n = 0;
    std::size_t r = 0;
    unsigned d = 0;
    Lineage lineage;

    std::size_t dimension() const { return n - r; }
    friend bool operator==(const CodeSpec&, const CodeSpec&) = default;
};

class Code {
public:
    Code(CodeSpec spec, BitMatrix h);

    const CodeSpec& spec() const { return spec_; }
    const BitMatrix& parity_check() const { return h_; }
    std::size_t length() const { return spec_.n; }
    std::size_t redundancy() const { return spec_.r; }

    // Has no zero column and no repeated column.
    bool columns_distinct_nonzero() const;

    // True when the code still carries a seed + doubling history usable by
    // the spectrum recursion (no shortening applied).
    bool has_doubling_lineage() const;

    // The seed's parity-check matrix, recovered from the lower-left block
    // that the doubling construction leaves untouched.
    BitMatrix seed_matrix() const;

    friend bool operator==(const Code&, const Code&) = default;

private:
    CodeSpec spec_;
    BitMatrix h_;
};

enum class SeedName { M, S, EH3, Example9 };

SeedName parse_seed_name(const std::string& name);
std::string seed_name(SeedName s);

// Literal seed matrices: M -> [2,0], S -> [5,1], EH3 -> [4,1,4],
// example_9_5 -> [9,4,4].
Code seed(SeedName name);
Code seed(const std::string& name);

// Builds H' = [0...0 | 1...1 ; H | H].
Code doubled(const Code& c);
Code doubled(const Code& c, std::size_t times);

Code extended_hamming(std::size_t r);

// P_r from its block form [B_{0,2} ... B_{D,2} ; S ... S], D = 2^(r-4) - 1.
Code panchenko(std::size_t r);

// B_{k,g} blocks over repeated copies of the seed, k = 0..2^(r-g-2)-1 left
// to right with the most significant bit of k on top.
Code general_qp_blocks(std::size_t r, unsigned g, const Code& seed_code);

// (r - g - 2)-fold doubling of the seed. The seed must have redundancy g + 2
// and length 2^g + 1 (g >= 3); g = 0 takes M and g = 2 takes S.
Code general_qp(std::size_t r, unsigned g, const Code& seed_code);

// (g, n) for n = 2^(r-2) + 2^(r-2-g), g in {0, 2, 3, ..., r - 3}.
std::vector<std::pair<unsigned, std::size_t>> admissible_lengths(std::size_t r);

// Removes the listed columns. Keeps r; recomputes d through the spectrum
// oracle when the row space is small enough, otherwise keeps the parent's
// d (shortening never lowers it).
Code shorten(const Code& c, std::vector<std::size_t> cols);
// Removes the trailing `count` columns.
Code shorten_trailing(const Code& c, std::size_t count);

// Largest number of columns needed to reach any syndrome in the column
// space of H, by breadth-first search over syndromes.
inline constexpr std::size_t kCoveringRadiusMaxRows = 24;
std::size_t covering_radius(const Code& c);

// Minimum distance in {3, 4} and covering radius 2.
bool is_quasi_perfect(const Code& c);

}  // namespace qpc
