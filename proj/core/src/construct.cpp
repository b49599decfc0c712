#include "qpc/construct.hpp"

#include <algorithm>

#include "qpc/errors.hpp"
#include "qpc/spectrum.hpp"

namespace qpc {

namespace {

unsigned doubled_distance(unsigned d) { return std::min(d, 4U); }

BitMatrix remove_columns(const BitMatrix& h, const std::vector<bool>& removed) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < h.cols(); ++c) {
        if (!removed[c]) {
            keep.push_back(c);
        }
    }
    return select_columns(h, keep);
}

void check_general_seed(std::size_t r, unsigned g, const Code& seed_code) {
    if (r < 5) {
        throw PreconditionError("general_qp needs r >= 5");
    }
    if (g == 1 || g + 3 > r) {
        throw PreconditionError("g = " + std::to_string(g) + " is not admissible for r = " + std::to_string(r));
    }
    const std::size_t want_rows = g + 2;
    const std::size_t want_cols = g == 0 ? 2 : (std::size_t{1} << g) + 1;
    const BitMatrix& h = seed_code.parity_check();
    if (h.rows() != want_rows || h.cols() != want_cols) {
        throw PreconditionError("seed for g = " + std::to_string(g) + " must be " + std::to_string(want_rows) + "x" +
                                std::to_string(want_cols) + ", got " + std::to_string(h.rows()) + "x" +
                                std::to_string(h.cols()));
    }
}

}  // namespace

Code::Code(CodeSpec spec, BitMatrix h) : spec_(std::move(spec)), h_(std::move(h)) {
    if (spec_.n < 1 || spec_.r < 1) {
        throw PreconditionError("code needs n >= 1 and r >= 1");
    }
    if (h_.rows() != spec_.r || h_.cols() != spec_.n) {
        throw PreconditionError("parity-check matrix is " + std::to_string(h_.rows()) + "x" +
                                std::to_string(h_.cols()) + " but spec says r = " + std::to_string(spec_.r) +
                                ", n = " + std::to_string(spec_.n));
    }
}

bool Code::columns_distinct_nonzero() const {
    std::vector<std::vector<Word>> seen;
    seen.reserve(h_.cols());
    for (std::size_t c = 0; c < h_.cols(); ++c) {
        const BitVector col = h_.column(c);
        if (col.is_zero()) {
            return false;
        }
        seen.emplace_back(col.words().begin(), col.words().end());
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

bool Code::has_doubling_lineage() const {
    const Lineage& l = spec_.lineage;
    return !l.seed.empty() && l.shortened.empty() && l.doublings < kWordBits &&
           spec_.n % (std::size_t{1} << l.doublings) == 0 && spec_.r > l.doublings;
}

BitMatrix Code::seed_matrix() const {
    if (!has_doubling_lineage()) {
        throw PreconditionError("code has no doubling lineage");
    }
    const std::size_t k = spec_.lineage.doublings;
    const std::size_t n0 = spec_.n >> k;
    BitMatrix out(spec_.r - k, n0);
    for (std::size_t r = k; r < spec_.r; ++r) {
        for (std::size_t c = 0; c < n0; ++c) {
            if (h_.get(r, c)) {
                out.set(r - k, c);
            }
        }
    }
    return out;
}

SeedName parse_seed_name(const std::string& name) {
    if (name == "M") return SeedName::M;
    if (name == "S") return SeedName::S;
    if (name == "EH3") return SeedName::EH3;
    if (name == "example_9_5") return SeedName::Example9;
    throw PreconditionError("unknown seed '" + name + "' (expected M, S, EH3 or example_9_5)");
}

std::string seed_name(SeedName s) {
    switch (s) {
        case SeedName::M: return "M";
        case SeedName::S: return "S";
        case SeedName::EH3: return "EH3";
        case SeedName::Example9: return "example_9_5";
    }
    return {};
}

Code seed(SeedName name) {
    CodeSpec spec;
    spec.lineage.seed = seed_name(name);
    BitMatrix h;
    switch (name) {
        case SeedName::M:
            h = BitMatrix::from_rows({"01", "11"});
            spec.d = kUnboundedDistance;
            spec.lineage.g = 0;
            break;
        case SeedName::S:
            h = BitMatrix::from_rows({"10001", "01001", "00101", "00011"});
            spec.d = 5;
            spec.lineage.g = 2;
            break;
        case SeedName::EH3:
            h = BitMatrix::from_rows({"0011", "0101", "1111"});
            spec.d = 4;
            break;
        case SeedName::Example9:
            h = BitMatrix::from_rows({"000001111", "100010000", "010011001", "001010101", "000110011"});
            spec.d = 4;
            spec.lineage.g = 3;
            break;
    }
    spec.n = h.cols();
    spec.r = h.rows();
    return Code(std::move(spec), std::move(h));
}

Code seed(const std::string& name) { return seed(parse_seed_name(name)); }

Code doubled(const Code& c) {
    const BitMatrix& h = c.parity_check();
    const std::size_t n = h.cols();
    BitMatrix top(1, 2 * n);
    for (std::size_t j = n; j < 2 * n; ++j) {
        top.set(0, j);
    }
    BitMatrix out = vconcat(top, hconcat(h, h));

    CodeSpec spec = c.spec();
    spec.n = 2 * n;
    spec.r = h.rows() + 1;
    spec.d = doubled_distance(spec.d);
    if (spec.lineage.shortened.empty()) {
        ++spec.lineage.doublings;
    } else {
        // Doubling a shortened code starts a fresh, seedless history.
        spec.lineage = Lineage{};
    }
    return Code(std::move(spec), std::move(out));
}

Code doubled(const Code& c, std::size_t times) {
    Code out = c;
    for (std::size_t i = 0; i < times; ++i) {
        out = doubled(out);
    }
    return out;
}

Code extended_hamming(std::size_t r) {
    if (r < 3) {
        throw PreconditionError("extended_hamming needs r >= 3");
    }
    Code c = doubled(seed(SeedName::EH3), r - 3);
    CodeSpec spec = c.spec();
    spec.lineage.g = 0;
    return Code(std::move(spec), c.parity_check());
}

Code general_qp_blocks(std::size_t r, unsigned g, const Code& seed_code) {
    check_general_seed(r, g, seed_code);
    const std::size_t top_rows = r - g - 2;
    const std::size_t blocks = std::size_t{1} << top_rows;
    const BitMatrix& s = seed_code.parity_check();
    const std::size_t m = s.cols();

    BitMatrix h(r, blocks * m);
    for (std::size_t k = 0; k < blocks; ++k) {
        for (std::size_t c = 0; c < m; ++c) {
            const std::size_t col = k * m + c;
            for (std::size_t bit = 0; bit < top_rows; ++bit) {
                // Row 0 carries the most significant bit of k.
                if ((k >> (top_rows - 1 - bit)) & 1U) {
                    h.set(bit, col);
                }
            }
            for (std::size_t row = 0; row < s.rows(); ++row) {
                if (s.get(row, c)) {
                    h.set(top_rows + row, col);
                }
            }
        }
    }

    CodeSpec spec;
    spec.n = h.cols();
    spec.r = r;
    spec.d = seed_code.spec().d;
    for (std::size_t i = 0; i < top_rows; ++i) {
        spec.d = doubled_distance(spec.d);
    }
    spec.lineage = seed_code.spec().lineage;
    if (!spec.lineage.shortened.empty() || spec.lineage.seed.empty()) {
        spec.lineage = Lineage{"custom", 0, -1, {}};
    }
    spec.lineage.doublings += top_rows;
    spec.lineage.g = static_cast<int>(g);
    return Code(std::move(spec), std::move(h));
}

Code general_qp(std::size_t r, unsigned g, const Code& seed_code) {
    check_general_seed(r, g, seed_code);
    Code base = seed_code;
    if (!base.spec().lineage.shortened.empty() || base.spec().lineage.seed.empty()) {
        CodeSpec spec = base.spec();
        spec.lineage = Lineage{"custom", 0, -1, {}};
        base = Code(std::move(spec), base.parity_check());
    }
    Code c = doubled(base, r - g - 2);
    CodeSpec spec = c.spec();
    spec.lineage.g = static_cast<int>(g);
    return Code(std::move(spec), c.parity_check());
}

Code panchenko(std::size_t r) {
    if (r < 5) {
        throw PreconditionError("panchenko needs r >= 5");
    }
    return general_qp_blocks(r, 2, seed(SeedName::S));
}

std::vector<std::pair<unsigned, std::size_t>> admissible_lengths(std::size_t r) {
    if (r < 5) {
        throw PreconditionError("admissible_lengths needs r >= 5");
    }
    std::vector<std::pair<unsigned, std::size_t>> out;
    for (unsigned g = 0; g + 3 <= r; ++g) {
        if (g == 1) {
            continue;
        }
        out.emplace_back(g, (std::size_t{1} << (r - 2)) + (std::size_t{1} << (r - 2 - g)));
    }
    return out;
}

Code shorten(const Code& c, std::vector<std::size_t> cols) {
    const std::size_t n = c.length();
    std::vector<bool> removed(n, false);
    for (std::size_t col : cols) {
        if (col >= n) {
            throw PreconditionError("shorten: column " + std::to_string(col) + " out of range");
        }
        if (removed[col]) {
            throw PreconditionError("shorten: duplicate column " + std::to_string(col));
        }
        removed[col] = true;
    }
    if (cols.size() >= n) {
        throw PreconditionError("shorten: cannot remove all columns");
    }
    if (cols.empty()) {
        return c;
    }

    BitMatrix h = remove_columns(c.parity_check(), removed);
    CodeSpec spec = c.spec();
    spec.n = h.cols();
    // Record removals in the original (pre-shortening) column numbering.
    std::vector<std::size_t> original;
    {
        std::vector<std::size_t> alive;
        std::vector<bool> gone(n + spec.lineage.shortened.size(), false);
        for (std::size_t x : spec.lineage.shortened) {
            gone[x] = true;
        }
        for (std::size_t i = 0; i < gone.size(); ++i) {
            if (!gone[i]) {
                alive.push_back(i);
            }
        }
        for (std::size_t col : cols) {
            original.push_back(alive[col]);
        }
    }
    spec.lineage.shortened.insert(spec.lineage.shortened.end(), original.begin(), original.end());
    std::sort(spec.lineage.shortened.begin(), spec.lineage.shortened.end());

    if (rank(h) <= kOracleMaxRank) {
        const unsigned d = minimum_distance(oracle_spectrum(h));
        spec.d = d;
    }
    return Code(std::move(spec), std::move(h));
}

Code shorten_trailing(const Code& c, std::size_t count) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < count; ++i) {
        cols.push_back(c.length() - count + i);
    }
    return shorten(c, std::move(cols));
}

std::size_t covering_radius(const Code& c) {
    const BitMatrix& h = c.parity_check();
    if (h.rows() > kCoveringRadiusMaxRows) {
        throw BudgetExceeded("covering_radius: 2^" + std::to_string(h.rows()) + " syndromes exceed the budget of 2^" +
                             std::to_string(kCoveringRadiusMaxRows));
    }
    std::vector<Word> cols = h.column_words();
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::erase(cols, Word{0});

    constexpr std::uint8_t kUnseen = 0xFF;
    std::vector<std::uint8_t> dist(std::size_t{1} << h.rows(), kUnseen);
    std::vector<std::uint32_t> frontier{0};
    dist[0] = 0;
    std::size_t radius = 0;
    while (!frontier.empty()) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t s : frontier) {
            for (Word col : cols) {
                const auto t = static_cast<std::uint32_t>(s ^ col);
                if (dist[t] == kUnseen) {
                    dist[t] = static_cast<std::uint8_t>(radius + 1);
                    next.push_back(t);
                }
            }
        }
        if (next.empty()) {
            break;
        }
        ++radius;
        frontier = std::move(next);
    }
    return radius;
}

bool is_quasi_perfect(const Code& c) {
    const unsigned d = minimum_distance(oracle_spectrum(c.parity_check()));
    if (d != 3 && d != 4) {
        return false;
    }
    return covering_radius(c) == 2;
}

}  // namespace qpc
