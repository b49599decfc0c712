#include "qpc/product_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qpc/bigint.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"

namespace qpc {

SystematicEncoder::SystematicEncoder(const BitMatrix& h) : n_(h.cols()), cols_(h.column_words()) {
    for (std::size_t c = 0; c < n_; ++c) {
        if (!parity_basis_.contains(cols_[c])) {
            parity_basis_.insert(cols_[c]);
            parity_.push_back(c);
        } else {
            info_.push_back(c);
        }
    }
}

Word SystematicEncoder::syndrome(const BitVector& word) const {
    Word s = 0;
    for (std::size_t i : word.support()) {
        s ^= cols_[i];
    }
    return s;
}

BitVector SystematicEncoder::encode(const BitVector& payload) const {
    if (payload.length() != info_.size()) {
        throw PreconditionError("encode: payload has " + std::to_string(payload.length()) + " bits, expected " +
                                std::to_string(info_.size()));
    }
    BitVector out(n_);
    Word s = 0;
    for (std::size_t i = 0; i < info_.size(); ++i) {
        if (payload.get(i)) {
            out.set(info_[i]);
            s ^= cols_[info_[i]];
        }
    }
    // Parity columns span the column space, so this always succeeds.
    const Word x = parity_basis_.solve(s).value();
    for (std::size_t i = 0; i < parity_.size(); ++i) {
        if ((x >> i) & 1U) {
            out.set(parity_[i]);
        }
    }
    return out;
}

ProductCode::ProductCode(Code row_code, Code col_code)
    : row_code_(std::move(row_code)),
      col_code_(std::move(col_code)),
      row_enc_(row_code_.parity_check()),
      col_enc_(col_code_.parity_check()),
      row_h_cols_(row_code_.parity_check().column_words()),
      col_h_cols_(col_code_.parity_check().column_words()) {}

BitMatrix ProductCode::encode(const BitMatrix& payload) const {
    if (payload.rows() != payload_rows() || payload.cols() != payload_cols()) {
        throw PreconditionError("encode: payload must be " + std::to_string(payload_rows()) + "x" +
                                std::to_string(payload_cols()));
    }
    BitMatrix out(rows(), cols());
    const auto& info_rows = col_enc_.info_positions();
    for (std::size_t a = 0; a < payload.rows(); ++a) {
        const BitVector row = row_enc_.encode(payload.row(a));
        for (std::size_t c : row.support()) {
            out.set(info_rows[a], c);
        }
    }
    for (std::size_t c = 0; c < cols(); ++c) {
        BitVector column_payload(col_enc_.dimension());
        for (std::size_t a = 0; a < info_rows.size(); ++a) {
            if (out.get(info_rows[a], c)) {
                column_payload.set(a);
            }
        }
        const BitVector column = col_enc_.encode(column_payload);
        for (std::size_t i = 0; i < rows(); ++i) {
            out.set(i, c, column.get(i));
        }
    }
    return out;
}

std::vector<Word> ProductCode::row_syndromes(const BitMatrix& array) const {
    std::vector<Word> out(array.rows(), 0);
    for (std::size_t i = 0; i < array.rows(); ++i) {
        const auto words = array.row_words(i);
        for (std::size_t k = 0; k < words.size(); ++k) {
            for (Word x = words[k]; x != 0; x &= x - 1) {
                out[i] ^= row_h_cols_[k * kWordBits + static_cast<std::size_t>(std::countr_zero(x))];
            }
        }
    }
    return out;
}

std::vector<Word> ProductCode::col_syndromes(const BitMatrix& array) const {
    std::vector<Word> out(array.cols(), 0);
    for (std::size_t i = 0; i < array.rows(); ++i) {
        const auto words = array.row_words(i);
        const Word hc = col_h_cols_[i];
        for (std::size_t k = 0; k < words.size(); ++k) {
            for (Word x = words[k]; x != 0; x &= x - 1) {
                out[k * kWordBits + static_cast<std::size_t>(std::countr_zero(x))] ^= hc;
            }
        }
    }
    return out;
}

bool ProductCode::is_codeword(const BitMatrix& array) const {
    const auto rs = row_syndromes(array);
    const auto cs = col_syndromes(array);
    return std::all_of(rs.begin(), rs.end(), [](Word s) { return s == 0; }) &&
           std::all_of(cs.begin(), cs.end(), [](Word s) { return s == 0; });
}

ProductCode panchenko_product_72() {
    const Code c = shorten_trailing(panchenko(8), 8);
    return ProductCode(c, c);
}

std::string outcome_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Success: return "success";
        case OutcomeKind::DetectedFailure: return "detected_failure";
        case OutcomeKind::Miscorrection: return "miscorrection";
    }
    return {};
}

std::string via_name(CorrectedVia v) {
    switch (v) {
        case CorrectedVia::None: return "none";
        case CorrectedVia::Rows: return "rows";
        case CorrectedVia::Columns: return "columns";
    }
    return {};
}

namespace {

std::vector<std::size_t> flagged(const std::vector<Word>& syndromes) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < syndromes.size(); ++i) {
        if (syndromes[i] != 0) {
            out.push_back(i);
        }
    }
    return out;
}

// Basis over the check-matrix columns at the erased positions, or empty when
// the set is not correctable.
std::optional<XorBasis> erasure_basis(const std::vector<std::size_t>& positions, const std::vector<Word>& h_cols,
                                      std::size_t d_plus) {
    if (positions.empty() || positions.size() > d_plus) {
        return std::nullopt;
    }
    XorBasis basis;
    for (std::size_t p : positions) {
        if (!basis.insert(h_cols[p])) {
            return std::nullopt;
        }
    }
    return basis;
}

}  // namespace

DecodeResult decode_array(const ProductCode& pc, const BitMatrix& received, std::size_t d_plus) {
    if (received.rows() != pc.rows() || received.cols() != pc.cols()) {
        throw PreconditionError("decode: array must be " + std::to_string(pc.rows()) + "x" + std::to_string(pc.cols()));
    }
    DecodeResult res;
    res.array = received;
    const std::vector<Word> rs = pc.row_syndromes(received);
    const std::vector<Word> cs = pc.col_syndromes(received);
    const std::vector<std::size_t> bad_rows = flagged(rs);
    const std::vector<std::size_t> bad_cols = flagged(cs);
    if (bad_rows.empty() && bad_cols.empty()) {
        res.syndromes_clear = true;
        return res;
    }

    const auto& row_h = pc.row_check_columns();
    const auto& col_h = pc.col_check_columns();
    if (auto basis = erasure_basis(bad_cols, row_h, d_plus)) {
        // Refill the flagged columns of every row from its row syndrome.
        res.via = CorrectedVia::Columns;
        res.erasure_weight = bad_cols.size();
        for (std::size_t i = 0; i < pc.rows(); ++i) {
            Word s = rs[i];
            for (std::size_t c : bad_cols) {
                if (res.array.get(i, c)) {
                    s ^= row_h[c];
                }
            }
            const auto x = basis->solve(s);
            if (!x) {
                continue;
            }
            for (std::size_t t = 0; t < bad_cols.size(); ++t) {
                res.array.set(i, bad_cols[t], (*x >> t) & 1U);
            }
        }
    } else if (auto basis = erasure_basis(bad_rows, col_h, d_plus)) {
        res.via = CorrectedVia::Rows;
        res.erasure_weight = bad_rows.size();
        for (std::size_t c = 0; c < pc.cols(); ++c) {
            Word s = cs[c];
            for (std::size_t i : bad_rows) {
                if (res.array.get(i, c)) {
                    s ^= col_h[i];
                }
            }
            const auto x = basis->solve(s);
            if (!x) {
                continue;
            }
            for (std::size_t t = 0; t < bad_rows.size(); ++t) {
                res.array.set(bad_rows[t], c, (*x >> t) & 1U);
            }
        }
    } else {
        return res;
    }
    res.syndromes_clear = pc.is_codeword(res.array);
    return res;
}

DecodeOutcome decode(const ProductCode& pc, const BitMatrix& received, std::size_t d_plus,
                     const BitMatrix& transmitted) {
    const DecodeResult res = decode_array(pc, received, d_plus);
    DecodeOutcome out;
    out.via = res.via;
    out.erasure_weight = res.erasure_weight;
    if (!res.syndromes_clear) {
        out.kind = OutcomeKind::DetectedFailure;
    } else if (res.array == transmitted) {
        out.kind = OutcomeKind::Success;
    } else {
        out.kind = OutcomeKind::Miscorrection;
    }
    return out;
}

void apply_channel(BitMatrix& array, double p, SplitMix64& rng) {
    if (p <= 0.0) {
        return;
    }
    const std::size_t total = array.rows() * array.cols();
    const std::size_t cols = array.cols();
    if (p >= 1.0) {
        for (std::size_t pos = 0; pos < total; ++pos) {
            array.set(pos / cols, pos % cols, !array.get(pos / cols, pos % cols));
        }
        return;
    }
    // Gaps between flips are geometric with success probability p.
    const double log_q = std::log1p(-p);
    std::size_t pos = 0;
    for (;;) {
        const double u = 1.0 - uniform01(rng);  // (0, 1]
        const double gap = std::floor(std::log(u) / log_q);
        if (gap >= static_cast<double>(total - pos)) {
            return;
        }
        pos += static_cast<std::size_t>(gap);
        array.set(pos / cols, pos % cols, !array.get(pos / cols, pos % cols));
        ++pos;
        if (pos >= total) {
            return;
        }
    }
}

void apply_fixed_weight_errors(BitMatrix& array, std::size_t k, SplitMix64& rng) {
    const std::size_t total = array.rows() * array.cols();
    const std::size_t cols = array.cols();
    if (k > total) {
        throw PreconditionError("apply_fixed_weight_errors: k exceeds array size");
    }
    std::vector<std::uint8_t> taken(total, 0);
    for (std::size_t j = total - k; j < total; ++j) {
        const auto t = static_cast<std::size_t>(uniform_below(rng, j + 1));
        const std::size_t pick = taken[t] ? j : t;
        taken[pick] = 1;
        array.set(pick / cols, pick % cols, !array.get(pick / cols, pick % cols));
    }
}

void SimConfig::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw PreconditionError("p must lie in [0, 1]");
    }
    if (trials == 0) {
        throw PreconditionError("trials must be at least 1");
    }
    if (strategy == SimStrategy::Stratified && per_stratum == 0) {
        throw PreconditionError("per_stratum must be at least 1");
    }
    if (!(eps_tail > 0.0 && eps_tail < 1.0)) {
        throw PreconditionError("eps_tail must lie in (0, 1)");
    }
}

std::vector<double> binomial_pmf(std::size_t n, double p, std::size_t kmax) {
    kmax = std::min(kmax, n);
    std::vector<double> out(kmax + 1, 0.0);
    if (p <= 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (p >= 1.0) {
        if (kmax == n) {
            out[n] = 1.0;
        }
        return out;
    }
    constexpr mp_bitcnt_t kBits = 256;
    const mpf_class pf(p, kBits);
    const mpf_class qf = mpf_class(1, kBits) - pf;
    mpf_class term(0, kBits);
    mpf_pow_ui(term.get_mpf_t(), qf.get_mpf_t(), static_cast<unsigned long>(n));
    const mpf_class ratio = pf / qf;
    for (std::size_t k = 0; k <= kmax; ++k) {
        out[k] = term.get_d();
        term = term * ratio * static_cast<unsigned long>(n - k) / static_cast<unsigned long>(k + 1);
    }
    return out;
}

namespace {

constexpr std::size_t kTrialChunks = 256;

bool is_zero(const BitMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (Word w : m.row_words(i)) {
            if (w != 0) {
                return false;
            }
        }
    }
    return true;
}

// Outcome against the all-zero transmitted array.
OutcomeKind classify_against_zero(const ProductCode& pc, const BitMatrix& received, std::size_t d_plus) {
    const DecodeResult res = decode_array(pc, received, d_plus);
    if (!res.syndromes_clear) {
        return OutcomeKind::DetectedFailure;
    }
    return is_zero(res.array) ? OutcomeKind::Success : OutcomeKind::Miscorrection;
}

// Agresti-Coull standard error; stays positive when all or no trials fail.
double adjusted_std_error(std::uint64_t failures, std::uint64_t trials) {
    const double t = static_cast<double>(trials) + 4.0;
    const double pt = (static_cast<double>(failures) + 2.0) / t;
    return std::sqrt(pt * (1.0 - pt) / t);
}

void wilson_interval(std::uint64_t failures, std::uint64_t trials, double& lo, double& hi) {
    const double z = 1.96;
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(failures) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (ph + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom;
    lo = std::max(0.0, centre - half);
    hi = std::min(1.0, centre + half);
}

SimResult run_plain(const ProductCode& pc, const SimConfig& cfg, std::size_t threads) {
    std::vector<std::uint64_t> fails(kTrialChunks, 0);
    std::vector<std::uint64_t> miscorr(kTrialChunks, 0);
    parallel_for(kTrialChunks, threads, [&](std::size_t chunk) {
        const std::uint64_t begin = cfg.trials * chunk / kTrialChunks;
        const std::uint64_t end = cfg.trials * (chunk + 1) / kTrialChunks;
        BitMatrix array(pc.rows(), pc.cols());
        for (std::uint64_t t = begin; t < end; ++t) {
            SplitMix64 rng(derive_seed(cfg.master_seed, t));
            array = BitMatrix(pc.rows(), pc.cols());
            apply_channel(array, cfg.p, rng);
            const OutcomeKind k = classify_against_zero(pc, array, cfg.d_plus);
            if (k != OutcomeKind::Success) {
                ++fails[chunk];
            }
            if (k == OutcomeKind::Miscorrection) {
                ++miscorr[chunk];
            }
        }
    });
    SimResult res;
    res.trials = cfg.trials;
    for (std::size_t c = 0; c < kTrialChunks; ++c) {
        res.failures += fails[c];
        res.miscorrections += miscorr[c];
    }
    res.estimate = static_cast<double>(res.failures) / static_cast<double>(res.trials);
    res.std_error = adjusted_std_error(res.failures, res.trials);
    wilson_interval(res.failures, res.trials, res.ci_low, res.ci_high);
    return res;
}

SimResult run_stratified(const ProductCode& pc, const SimConfig& cfg, std::size_t threads) {
    const std::size_t cells = pc.rows() * pc.cols();
    std::vector<double> pmf;
    std::size_t kmax = 0;
    if (cfg.kmax) {
        kmax = std::min(*cfg.kmax, cells);
        pmf = binomial_pmf(cells, cfg.p, kmax);
    } else {
        pmf = binomial_pmf(cells, cfg.p, cells);
        // Smallest kmax whose upper tail is below eps_tail.
        double cumulative = 0.0;
        for (kmax = 0; kmax < cells; ++kmax) {
            cumulative += pmf[kmax];
            if (1.0 - cumulative < cfg.eps_tail) {
                break;
            }
        }
        pmf.resize(kmax + 1);
    }

    const double floor_weight = cfg.eps_tail / static_cast<double>(kmax + 1);
    std::vector<StratumResult> strata;
    for (std::size_t k = 0; k <= kmax; ++k) {
        if (pmf[k] >= floor_weight) {
            strata.push_back({k, pmf[k], cfg.per_stratum, 0});
        }
    }
    std::vector<std::uint64_t> miscorr(strata.size(), 0);
    parallel_for(strata.size(), threads, [&](std::size_t idx) {
        StratumResult& st = strata[idx];
        const std::uint64_t stream = derive_seed(cfg.master_seed, (std::uint64_t{1} << 40) + st.k);
        for (std::uint64_t t = 0; t < st.trials; ++t) {
            SplitMix64 rng(derive_seed(stream, t));
            BitMatrix array(pc.rows(), pc.cols());
            apply_fixed_weight_errors(array, st.k, rng);
            const OutcomeKind kind = classify_against_zero(pc, array, cfg.d_plus);
            if (kind != OutcomeKind::Success) {
                ++st.failures;
            }
            if (kind == OutcomeKind::Miscorrection) {
                ++miscorr[idx];
            }
        }
    });

    SimResult res;
    // Mass outside the simulated strata, summed with full precision.
    mpf_class covered(0, 256);
    double variance = 0.0;
    for (std::size_t idx = 0; idx < strata.size(); ++idx) {
        const StratumResult& st = strata[idx];
        res.trials += st.trials;
        res.failures += st.failures;
        res.miscorrections += miscorr[idx];
        const double f = static_cast<double>(st.failures) / static_cast<double>(st.trials);
        res.estimate += st.weight * f;
        const double se = adjusted_std_error(st.failures, st.trials);
        variance += st.weight * st.weight * se * se;
        covered += mpf_class(st.weight, 256);
    }
    const mpf_class tail = mpf_class(1, 256) - covered;
    res.tail_bound = std::max(0.0, tail.get_d());
    res.std_error = std::sqrt(variance);
    res.ci_low = std::max(0.0, res.estimate - 1.96 * res.std_error);
    res.ci_high = std::min(1.0, res.estimate + 1.96 * res.std_error + res.tail_bound);
    res.strata = std::move(strata);
    return res;
}

}  // namespace

SimResult failure_probability(const ProductCode& pc, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
    SimResult res = cfg.strategy == SimStrategy::Plain ? run_plain(pc, cfg, threads) : run_stratified(pc, cfg, threads);
    res.p = cfg.p;
    res.d_plus = cfg.d_plus;
    res.strategy = cfg.strategy;
    return res;
}

std::optional<double> printed_table2_value(double p, std::size_t d_plus) {
    static constexpr std::array<double, 5> kP{1e-1, 1e-2, 5e-3, 1e-3, 5e-4};
    static constexpr std::array<std::array<double, 5>, 4> kValues{{
        {1.0, 0.996, 0.250, 1.1e-09, 2.3e-14},
        {1.0, 0.988, 0.092, 1.6e-12, 5.1e-18},
        {1.0, 0.967, 0.027, 7.0e-14, 1.045e-18},
        {1.0, 0.926, 0.008, 5.8e-14, 1.029e-18},
    }};
    if (d_plus < 3 || d_plus > 6) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i < kP.size(); ++i) {
        if (std::abs(p - kP[i]) <= 1e-12 * kP[i]) {
            return kValues[d_plus - 3][i];
        }
    }
    return std::nullopt;
}

}  // namespace qpc
