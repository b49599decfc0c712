#include "qpc/gf2.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "qpc/errors.hpp"

namespace qpc {

namespace {

void check_indices(const BitMatrix& m, std::span<const std::size_t> idx) {
    std::vector<bool> seen(m.cols(), false);
    for (std::size_t c : idx) {
        if (c >= m.cols()) {
            throw PreconditionError("column index " + std::to_string(c) + " out of range for " +
                                    std::to_string(m.cols()) + " columns");
        }
        if (seen[c]) {
            throw PreconditionError("duplicate column index " + std::to_string(c));
        }
        seen[c] = true;
    }
}

}  // namespace

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw PreconditionError("bit string may only contain '0' and '1'");
        }
    }
    return v;
}

std::size_t BitVector::weight() const {
    std::size_t w = 0;
    for (Word x : words_) {
        w += static_cast<std::size_t>(std::popcount(x));
    }
    return w;
}

bool BitVector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](Word x) { return x == 0; });
}

std::vector<std::size_t> BitVector::support() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
        for (Word x = words_[k]; x != 0; x &= x - 1) {
            out.push_back(k * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
        }
    }
    return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
    if (other.length_ != length_) {
        throw PreconditionError("BitVector length mismatch");
    }
    for (std::size_t k = 0; k < words_.size(); ++k) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

std::string BitVector::to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * stride_, 0) {}

BitMatrix BitMatrix::identity(std::size_t size) {
    BitMatrix m(size, size);
    for (std::size_t i = 0; i < size; ++i) {
        m.set(i, i);
    }
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw PreconditionError("ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (rows[r][c] == '1') {
                m.set(r, c);
            } else if (rows[r][c] != '0') {
                throw PreconditionError("matrix rows may only contain '0' and '1'");
            }
        }
    }
    return m;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    Word& w = data_[r * stride_ + c / kWordBits];
    const Word mask = Word{1} << (c % kWordBits);
    if (value) {
        w |= mask;
    } else {
        w &= ~mask;
    }
}

BitVector BitMatrix::row(std::size_t r) const {
    BitVector v(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        if (get(r, c)) {
            v.set(c);
        }
    }
    return v;
}

BitVector BitMatrix::column(std::size_t c) const {
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        if (get(r, c)) {
            v.set(r);
        }
    }
    return v;
}

Word BitMatrix::column_word(std::size_t c) const {
    if (rows_ > kWordBits) {
        throw PreconditionError("column_word needs at most 64 rows");
    }
    Word w = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        w |= static_cast<Word>(get(r, c)) << r;
    }
    return w;
}

std::vector<Word> BitMatrix::column_words() const {
    std::vector<Word> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        out[c] = column_word(c);
    }
    return out;
}

std::size_t BitMatrix::rank() const {
    // Elimination on a scratch copy; pivots walk the columns left to right.
    std::vector<Word> a = data_;
    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols_ && pivot_row < rows_; ++c) {
        const std::size_t wi = c / kWordBits;
        const Word mask = Word{1} << (c % kWordBits);
        std::size_t found = pivot_row;
        while (found < rows_ && (a[found * stride_ + wi] & mask) == 0) {
            ++found;
        }
        if (found == rows_) {
            continue;
        }
        if (found != pivot_row) {
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(found * stride_),
                             a.begin() + static_cast<std::ptrdiff_t>((found + 1) * stride_),
                             a.begin() + static_cast<std::ptrdiff_t>(pivot_row * stride_));
        }
        const Word* p = a.data() + pivot_row * stride_;
        for (std::size_t r = pivot_row + 1; r < rows_; ++r) {
            Word* q = a.data() + r * stride_;
            if (q[wi] & mask) {
                for (std::size_t k = wi; k < stride_; ++k) {
                    q[k] ^= p[k];
                }
            }
        }
        ++pivot_row;
    }
    return pivot_row;
}

std::size_t rank(const BitMatrix& m) { return m.rank(); }

BitMatrix select_columns(const BitMatrix& m, std::span<const std::size_t> idx) {
    check_indices(m, idx);
    BitMatrix out(m.rows(), idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (m.get(r, idx[j])) {
                out.set(r, j);
            }
        }
    }
    return out;
}

bool columns_independent(const BitMatrix& m, std::span<const std::size_t> idx) {
    return select_columns(m, idx).rank() == idx.size();
}

BitMatrix hconcat(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows()) {
        throw PreconditionError("hconcat: row count mismatch");
    }
    BitMatrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (a.get(r, c)) {
                out.set(r, c);
            }
        }
        for (std::size_t c = 0; c < b.cols(); ++c) {
            if (b.get(r, c)) {
                out.set(r, a.cols() + c);
            }
        }
    }
    return out;
}

BitMatrix vconcat(const BitMatrix& top, const BitMatrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw PreconditionError("vconcat: column count mismatch");
    }
    BitMatrix out(top.rows() + bottom.rows(), top.cols());
    for (std::size_t r = 0; r < top.rows(); ++r) {
        std::ranges::copy(top.row_words(r), out.row_words(r).begin());
    }
    for (std::size_t r = 0; r < bottom.rows(); ++r) {
        std::ranges::copy(bottom.row_words(r), out.row_words(top.rows() + r).begin());
    }
    return out;
}

std::vector<BitVector> row_space_basis(const BitMatrix& m) {
    std::vector<BitVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        rows.push_back(m.row(r));
    }
    std::vector<BitVector> basis;
    std::vector<std::size_t> pivots;
    for (auto& v : rows) {
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (v.get(pivots[k])) {
                v ^= basis[k];
            }
        }
        if (v.is_zero()) {
            continue;
        }
        const std::size_t pivot = v.support().front();
        for (std::size_t k = 0; k < basis.size(); ++k) {
            if (basis[k].get(pivot)) {
                basis[k] ^= v;
            }
        }
        basis.push_back(std::move(v));
        pivots.push_back(pivot);
    }
    return basis;
}

Word XorBasis::reduce(Word v) const {
    while (v != 0) {
        const int b = std::bit_width(v) - 1;
        if (basis_[b] == 0) {
            break;
        }
        v ^= basis_[b];
    }
    return v;
}

bool XorBasis::insert(Word v) {
    if (inputs_ == kWordBits) {
        throw PreconditionError("XorBasis: more than 64 inputs");
    }
    Word combo = Word{1} << inputs_++;
    while (v != 0) {
        const int b = std::bit_width(v) - 1;
        if (basis_[b] == 0) {
            basis_[b] = v;
            combo_[b] = combo;
            ++size_;
            return true;
        }
        v ^= basis_[b];
        combo ^= combo_[b];
    }
    return false;
}

std::optional<Word> XorBasis::solve(Word target) const {
    Word combo = 0;
    while (target != 0) {
        const int b = std::bit_width(target) - 1;
        if (basis_[b] == 0) {
            return std::nullopt;
        }
        target ^= basis_[b];
        combo ^= combo_[b];
    }
    return combo;
}

void write_matrix(std::ostream& out, const BitMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << (m.get(r, c) ? '1' : '0');
        }
        out << '\n';
    }
}

BitMatrix read_matrix(std::istream& in) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(in >> rows >> cols)) {
        throw PreconditionError("matrix text: expected \"rows cols\" header");
    }
    std::vector<std::string> lines;
    lines.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        std::string line;
        if (!(in >> line)) {
            throw PreconditionError("matrix text: missing row " + std::to_string(r));
        }
        if (line.size() != cols) {
            throw PreconditionError("matrix text: row " + std::to_string(r) + " has " +
                                    std::to_string(line.size()) + " columns, expected " + std::to_string(cols));
        }
        lines.push_back(std::move(line));
    }
    if (rows == 0) {
        return BitMatrix(0, cols);
    }
    return BitMatrix::from_rows(lines);
}

std::string to_text(const BitMatrix& m) {
    std::ostringstream os;
    write_matrix(os, m);
    return os.str();
}

BitMatrix matrix_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_matrix(is);
}

}  // namespace qpc
