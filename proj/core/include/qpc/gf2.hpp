#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpc {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

// Packed GF(2) vector. Bit i lives in word i / 64 at position i % 64 (least
// significant bit first). Bits past length() are always zero.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t length) : length_(length), words_(words_for(length), 0) {}

    static BitVector from_string(std::string_view bits);

    std::size_t length() const { return length_; }
    std::span<const Word> words() const { return words_; }

    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
    void set(std::size_t i, bool value = true) {
        const Word mask = Word{1} << (i % kWordBits);
        if (value) {
            words_[i / kWordBits] |= mask;
        } else {
            words_[i / kWordBits] &= ~mask;
        }
    }
    void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

    std::size_t weight() const;
    bool is_zero() const;
    std::vector<std::size_t> support() const;

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    std::string to_string() const;

private:
    std::size_t length_ = 0;
    std::vector<Word> words_;
};

// Dense row-major GF(2) matrix. Each row is packed like a BitVector, so bit
// order inside a word is fixed (lowest column index = least significant bit).
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t size);
    // One string of '0'/'1' per row; all rows must have equal length.
    static BitMatrix from_rows(const std::vector<std::string>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t row_words() const { return stride_; }

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1U;
    }
    void set(std::size_t r, std::size_t c, bool value = true);

    std::span<const Word> row_words(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }
    std::span<Word> row_words(std::size_t r) { return {data_.data() + r * stride_, stride_}; }
    BitVector row(std::size_t r) const;
    BitVector column(std::size_t c) const;

    // Column c as a packed word, row i at bit i. Requires rows() <= 64.
    Word column_word(std::size_t c) const;
    std::vector<Word> column_words() const;

    std::size_t rank() const;

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

std::size_t rank(const BitMatrix& m);

// Throws PreconditionError on an out-of-range or repeated index.
BitMatrix select_columns(const BitMatrix& m, std::span<const std::size_t> idx);

bool columns_independent(const BitMatrix& m, std::span<const std::size_t> idx);

// Horizontal concatenation [a | b]; row counts must agree.
BitMatrix hconcat(const BitMatrix& a, const BitMatrix& b);
// Vertical concatenation; column counts must agree.
BitMatrix vconcat(const BitMatrix& top, const BitMatrix& bottom);

// Rows of a reduced basis of the row space of m.
std::vector<BitVector> row_space_basis(const BitMatrix& m);

// Incremental XOR basis over column words (at most 64 rows). Keeps one
// vector per pivot bit and records, for each stored vector, which inserted
// inputs it is a combination of. At most 64 inputs.
class XorBasis {
public:
    // Reduces v; inserts it and returns true iff it was independent.
    bool insert(Word v);
    bool contains(Word v) const { return reduce(v) == 0; }
    Word reduce(Word v) const;
    std::size_t size() const { return size_; }

    // Solves sum_i x_i * inputs[i] = target over the inserted inputs.
    // Bit i of the result is x_i. Empty when target is outside the span.
    std::optional<Word> solve(Word target) const;

private:
    Word basis_[kWordBits] = {};
    Word combo_[kWordBits] = {};
    std::size_t size_ = 0;
    std::size_t inputs_ = 0;
};

// Matrix text format: "rows cols" on the first line, then one line of
// '0'/'1' characters per row.
void write_matrix(std::ostream& out, const BitMatrix& m);
BitMatrix read_matrix(std::istream& in);
std::string to_text(const BitMatrix& m);
BitMatrix matrix_from_text(const std::string& text);

}  // namespace qpc
