#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpc/construct.hpp"
#include "qpc/gf2.hpp"
#include "qpc/random.hpp"

namespace qpc {

// Systematic encoder for the null space of H. The parity positions are the
// pivot columns found by elimination from the left; the remaining n - rank
// positions carry the payload.
class SystematicEncoder {
public:
    explicit SystematicEncoder(const BitMatrix& h);

    std::size_t length() const { return n_; }
    std::size_t dimension() const { return info_.size(); }
    const std::vector<std::size_t>& info_positions() const { return info_; }

    BitVector encode(const BitVector& payload) const;
    Word syndrome(const BitVector& word) const;

private:
    std::size_t n_;
    std::vector<Word> cols_;
    std::vector<std::size_t> info_;
    std::vector<std::size_t> parity_;
    XorBasis parity_basis_;
};

// Array of col_code.length() rows by row_code.length() columns; each row
// belongs to row_code and each column to col_code.
class ProductCode {
public:
    ProductCode(Code row_code, Code col_code);

    const Code& row_code() const { return row_code_; }
    const Code& col_code() const { return col_code_; }
    std::size_t rows() const { return col_code_.length(); }
    std::size_t cols() const { return row_code_.length(); }
    std::size_t payload_rows() const { return col_enc_.dimension(); }
    std::size_t payload_cols() const { return row_enc_.dimension(); }

    // Payload is payload_rows() x payload_cols(). Rows are encoded first,
    // then every column.
    BitMatrix encode(const BitMatrix& payload) const;

    // Per-row syndromes under the row code and per-column syndromes under
    // the column code.
    std::vector<Word> row_syndromes(const BitMatrix& array) const;
    std::vector<Word> col_syndromes(const BitMatrix& array) const;
    bool is_codeword(const BitMatrix& array) const;

    const std::vector<Word>& row_check_columns() const { return row_h_cols_; }
    const std::vector<Word>& col_check_columns() const { return col_h_cols_; }

private:
    Code row_code_;
    Code col_code_;
    SystematicEncoder row_enc_;
    SystematicEncoder col_enc_;
    std::vector<Word> row_h_cols_;
    std::vector<Word> col_h_cols_;
};

// Both components are panchenko(8) with the trailing 8 columns removed,
// the [72, 64, 4] code.
ProductCode panchenko_product_72();

enum class OutcomeKind { Success, DetectedFailure, Miscorrection };
enum class CorrectedVia { None, Rows, Columns };

std::string outcome_name(OutcomeKind k);
std::string via_name(CorrectedVia v);

struct DecodeResult {
    BitMatrix array;
    bool syndromes_clear = false;
    CorrectedVia via = CorrectedVia::None;
    std::size_t erasure_weight = 0;
};

struct DecodeOutcome {
    OutcomeKind kind = OutcomeKind::Success;
    CorrectedVia via = CorrectedVia::None;
    std::size_t erasure_weight = 0;

    friend bool operator==(const DecodeOutcome&, const DecodeOutcome&) = default;
};

// One detect / check / correct pass.
//  1. Flag rows and columns with a nonzero syndrome.
//  2. The flagged column set is correctable when it is nonempty, has at
//     most d_plus members and the matching columns of the row code's H are
//     independent; the flagged row set likewise against the column code.
//  3. Erase and refill the flagged columns in every row (preferred), else
//     the flagged rows in every column. Then recheck all syndromes.
DecodeResult decode_array(const ProductCode& pc, const BitMatrix& received, std::size_t d_plus);

// decode_array classified against the transmitted array.
DecodeOutcome decode(const ProductCode& pc, const BitMatrix& received, std::size_t d_plus,
                     const BitMatrix& transmitted);

// Flips each bit independently with probability p.
void apply_channel(BitMatrix& array, double p, SplitMix64& rng);

// Flips k distinct uniformly chosen bits.
void apply_fixed_weight_errors(BitMatrix& array, std::size_t k, SplitMix64& rng);

enum class SimStrategy { Plain, Stratified };

struct SimConfig {
    double p = 0.0;
    std::size_t d_plus = 3;
    std::uint64_t trials = 100'000;
    std::uint64_t master_seed = 1;
    SimStrategy strategy = SimStrategy::Plain;
    // Stratified only.
    std::optional<std::size_t> kmax;   // empty: chosen from eps_tail
    std::uint64_t per_stratum = 10'000;
    double eps_tail = 1e-15;
    std::size_t threads = 0;

    void validate() const;
};

struct StratumResult {
    std::size_t k = 0;
    double weight = 0.0;  // P(K = k)
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
};

struct SimResult {
    double p = 0.0;
    std::size_t d_plus = 0;
    SimStrategy strategy = SimStrategy::Plain;
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    std::uint64_t miscorrections = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double tail_bound = 0.0;
    std::vector<StratumResult> strata;
};

// Errors are added to the all-zero array: the decoder is syndrome-driven
// and its refill is linear, so the outcome depends on the error pattern
// alone. Trial i always uses the stream derive_seed(master_seed, i).
SimResult failure_probability(const ProductCode& pc, const SimConfig& cfg);

// P(K = k) for K ~ Binomial(n, p), evaluated with 256-bit floats.
std::vector<double> binomial_pmf(std::size_t n, double p, std::size_t kmax);

// Reference failure probabilities printed for the product code at
// p in {1e-1, 1e-2, 5e-3, 1e-3, 5e-4} and d_plus in {3, 4, 5, 6}.
std::optional<double> printed_table2_value(double p, std::size_t d_plus);

}  // namespace qpc
