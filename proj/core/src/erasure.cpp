#include "qpc/erasure.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>

#include "qpc/combinations.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"
#include "qpc/random.hpp"

namespace qpc {

Integer psi(std::size_t n, unsigned d, std::size_t rho, const WeightSpectrum& s) {
    if (rho > n) {
        throw PreconditionError("psi: rho = " + std::to_string(rho) + " exceeds n = " + std::to_string(n));
    }
    if (s.n != n) {
        throw PreconditionError("psi: spectrum length " + std::to_string(s.n) + " != n = " + std::to_string(n));
    }
    const auto sn = static_cast<long long>(n);
    const auto sr = static_cast<long long>(rho);
    Integer out = binomial(sn, sr);
    for (long long w = d; w <= sr; ++w) {
        out -= s.at(w) * binomial(sn - w, sr - w);
    }
    return out;
}

Rational delta_lower(std::size_t n, unsigned d, std::size_t rho, const WeightSpectrum& s) {
    Rational q(psi(n, d, rho, s), binomial(static_cast<long long>(n), static_cast<long long>(rho)));
    q.canonicalize();
    return q;
}

bool is_exact_regime(unsigned d, std::size_t rho) { return 2 * rho <= 3 * static_cast<std::size_t>(d) - 1; }

namespace {

// rho-subsets below a fixed first column, counted by depth-first search.
class IndependentSetCounter {
public:
    IndependentSetCounter(std::span<const Word> cols, std::size_t rows, std::size_t rho)
        : cols_(cols), rho_(rho), in_span_(std::size_t{1} << rows, 0) {
        span_.reserve(std::size_t{1} << std::min(rho, rows));
    }

    std::uint64_t count_from(std::size_t first) {
        const Word c = cols_[first];
        if (c == 0) {
            return 0;
        }
        span_.clear();
        span_.push_back(0);
        in_span_[0] = 1;
        extend(c);
        const std::uint64_t out = rho_ == 1 ? 1 : walk(1, first + 1);
        for (Word s : span_) {
            in_span_[s] = 0;
        }
        return out;
    }

private:
    void extend(Word c) {
        const std::size_t size = span_.size();
        for (std::size_t i = 0; i < size; ++i) {
            const Word t = span_[i] ^ c;
            span_.push_back(t);
            in_span_[t] = 1;
        }
    }

    void retract(std::size_t size) {
        for (std::size_t i = size; i < span_.size(); ++i) {
            in_span_[span_[i]] = 0;
        }
        span_.resize(size);
    }

    // `depth` columns chosen so far, all independent.
    std::uint64_t walk(std::size_t depth, std::size_t start) {
        const std::size_t n = cols_.size();
        if (depth + 1 == rho_) {
            std::uint64_t hits = 0;
            for (std::size_t j = start; j < n; ++j) {
                hits += in_span_[cols_[j]] == 0 ? 1 : 0;
            }
            return hits;
        }
        std::uint64_t total = 0;
        const std::size_t last = n - (rho_ - depth);
        for (std::size_t j = start; j <= last; ++j) {
            const Word c = cols_[j];
            if (in_span_[c] != 0) {
                continue;
            }
            const std::size_t size = span_.size();
            extend(c);
            total += walk(depth + 1, j + 1);
            retract(size);
        }
        return total;
    }

    std::span<const Word> cols_;
    std::size_t rho_;
    std::vector<Word> span_;
    std::vector<std::uint8_t> in_span_;
};

// Basis with distinct leading bits, kept in decreasing order so that
// reducing by the "min" rule leaves zero exactly for members of the span.
class SmallBasis {
public:
    bool insert(Word v) {
        for (std::size_t i = 0; i < size_; ++i) {
            v = std::min(v, v ^ elems_[i]);
        }
        if (v == 0) {
            return false;
        }
        std::size_t pos = size_;
        while (pos > 0 && elems_[pos - 1] < v) {
            elems_[pos] = elems_[pos - 1];
            --pos;
        }
        elems_[pos] = v;
        ++size_;
        return true;
    }

private:
    std::array<Word, kWordBits> elems_{};
    std::size_t size_ = 0;
};

std::uint64_t sample_chunk(std::span<const Word> cols, std::size_t rho, std::uint64_t samples, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::size_t n = cols.size();
    std::vector<std::uint8_t> taken(n, 0);
    std::vector<std::size_t> picked(rho);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        // Floyd's algorithm for a uniform rho-subset of {0..n-1}.
        std::size_t m = 0;
        for (std::size_t j = n - rho; j < n; ++j) {
            const auto t = static_cast<std::size_t>(uniform_below(rng, j + 1));
            const std::size_t pick = taken[t] ? j : t;
            taken[pick] = 1;
            picked[m++] = pick;
        }
        SmallBasis basis;
        bool independent = true;
        for (std::size_t i = 0; i < rho; ++i) {
            if (independent && !basis.insert(cols[picked[i]])) {
                independent = false;
            }
            taken[picked[i]] = 0;
        }
        hits += independent ? 1 : 0;
    }
    return hits;
}

constexpr std::size_t kSampleChunks = 64;

}  // namespace

std::uint64_t s_rho_exact(const BitMatrix& h, std::size_t rho, const EnumerationOptions& opts) {
    const std::size_t n = h.cols();
    if (rho > n) {
        throw PreconditionError("s_rho_exact: rho exceeds n");
    }
    if (h.rows() > kExactMaxRows) {
        throw BudgetExceeded("s_rho_exact: " + std::to_string(h.rows()) + " rows exceed the span-table limit of " +
                             std::to_string(kExactMaxRows));
    }
    const Integer total = binomial(static_cast<long long>(n), static_cast<long long>(rho));
    if (total > from_u64(opts.budget)) {
        throw BudgetExceeded("s_rho_exact: C(" + std::to_string(n) + "," + std::to_string(rho) + ") = " +
                             to_decimal(total) + " subsets exceed the budget of " + std::to_string(opts.budget));
    }
    if (rho == 0) {
        return 1;
    }
    if (rho > h.rows()) {
        return 0;
    }
    const std::vector<Word> cols = h.column_words();
    const std::size_t tasks = n - rho + 1;
    std::vector<std::uint64_t> partial(tasks, 0);
    std::atomic<std::size_t> done{0};
    const std::size_t threads = opts.threads == 0 ? default_thread_count() : opts.threads;
    parallel_for(tasks, threads, [&](std::size_t first) {
        IndependentSetCounter counter(cols, h.rows(), rho);
        partial[first] = counter.count_from(first);
        const std::size_t finished = done.fetch_add(1) + 1;
        if (opts.progress) {
            opts.progress(finished, tasks);
        }
    });
    std::uint64_t sum = 0;
    for (std::uint64_t p : partial) {
        sum += p;
    }
    return sum;
}

SampledCount s_rho_sampled(const BitMatrix& h, std::size_t rho, std::uint64_t samples, std::uint64_t master_seed,
                           std::size_t threads) {
    const std::size_t n = h.cols();
    if (rho > n) {
        throw PreconditionError("s_rho_sampled: rho exceeds n");
    }
    if (samples == 0) {
        throw PreconditionError("s_rho_sampled: need at least one sample");
    }
    if (h.rows() > kWordBits) {
        throw PreconditionError("s_rho_sampled: at most 64 rows");
    }
    const std::vector<Word> cols = h.column_words();
    std::vector<std::uint64_t> hits(kSampleChunks, 0);
    if (threads == 0) {
        threads = default_thread_count();
    }
    parallel_for(kSampleChunks, threads, [&](std::size_t chunk) {
        const std::uint64_t count = samples / kSampleChunks + (chunk < samples % kSampleChunks ? 1 : 0);
        hits[chunk] = sample_chunk(cols, rho, count, derive_seed(master_seed, chunk));
    });

    SampledCount out;
    out.samples = samples;
    for (std::uint64_t x : hits) {
        out.hits += x;
    }
    const double total = binomial(static_cast<long long>(n), static_cast<long long>(rho)).get_d();
    out.delta = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.std_error = std::sqrt(out.delta * (1.0 - out.delta) / static_cast<double>(samples));
    out.ci_halfwidth = 1.96 * out.std_error;
    out.estimate = out.delta * total;
    out.estimate_halfwidth = out.ci_halfwidth * total;
    return out;
}

const WeightSpectrum& TrailingShortenProvider::spectrum(std::size_t length) {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(length);
    if (it != cache_.end()) {
        return *it->second;
    }
    if (length == 0 || length > h_.cols()) {
        throw PreconditionError("shortened spectrum: length " + std::to_string(length) + " outside 1.." +
                                std::to_string(h_.cols()));
    }
    std::vector<std::size_t> keep(length);
    for (std::size_t i = 0; i < length; ++i) {
        keep[i] = i;
    }
    auto s = std::make_unique<WeightSpectrum>(oracle_spectrum(select_columns(h_, keep)));
    const WeightSpectrum& ref = *s;
    cache_.emplace(length, std::move(s));
    return ref;
}

namespace {

Integer psi_tilde_rec(std::size_t m, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider,
                      std::optional<std::size_t> depth_left, std::map<std::pair<std::size_t, std::size_t>, Integer>& memo) {
    const auto sm = static_cast<long long>(m);
    const auto sr = static_cast<long long>(rho);
    if (rho < d || (depth_left && *depth_left == 0)) {
        return binomial(sm, sr);
    }
    const bool memoize = !depth_left.has_value();
    if (memoize) {
        if (auto it = memo.find({m, rho}); it != memo.end()) {
            return it->second;
        }
    }
    const WeightSpectrum& s = provider.spectrum(m);
    Integer out = binomial(sm, sr);
    for (std::size_t w = d; w <= rho; ++w) {
        const Integer a = s.at(static_cast<long long>(w));
        if (a == 0) {
            continue;
        }
        std::optional<std::size_t> next = depth_left;
        if (next) {
            --*next;
        }
        out -= a * psi_tilde_rec(m - w, d, rho - w, provider, next, memo);
    }
    if (memoize) {
        memo.emplace(std::make_pair(m, rho), out);
    }
    return out;
}

}  // namespace

Integer psi_tilde(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider,
                  std::optional<std::size_t> max_depth) {
    if (rho > n) {
        throw PreconditionError("psi_tilde: rho exceeds n");
    }
    std::map<std::pair<std::size_t, std::size_t>, Integer> memo;
    return psi_tilde_rec(n, d, rho, provider, max_depth, memo);
}

Rational delta_tilde(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider) {
    Rational q(psi_tilde(n, d, rho, provider), binomial(static_cast<long long>(n), static_cast<long long>(rho)));
    q.canonicalize();
    return q;
}

Rational delta_tilde_2(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider) {
    if (rho > n) {
        throw PreconditionError("delta_tilde_2: rho exceeds n");
    }
    const auto sn = static_cast<long long>(n);
    const auto sr = static_cast<long long>(rho);
    const Integer top = binomial(sn, sr);
    Rational out = 1;
    if (rho < d) {
        return out;
    }
    const WeightSpectrum& outer = provider.spectrum(n);
    for (long long w1 = d; w1 <= sr; ++w1) {
        const Integer a1 = outer.at(w1);
        if (a1 == 0) {
            continue;
        }
        const Integer mid = binomial(sn - w1, sr - w1);
        Rational inner = 1;
        if (sr - w1 >= static_cast<long long>(d)) {
            const WeightSpectrum& s2 = provider.spectrum(n - static_cast<std::size_t>(w1));
            for (long long w2 = d; w2 <= sr - w1; ++w2) {
                const Integer a2 = s2.at(w2);
                if (a2 == 0) {
                    continue;
                }
                Rational term(a2 * binomial(sn - w1 - w2, sr - w1 - w2), mid);
                term.canonicalize();
                inner -= term;
            }
        }
        Rational outer_term(a1 * mid, top);
        outer_term.canonicalize();
        out -= outer_term * inner;
    }
    return out;
}

ApproxParams ApproxParams::checked(double z, std::size_t r) {
    const auto rd = static_cast<double>(r);
    if (!(z > rd - 1.0 && z <= rd)) {
        throw PreconditionError("z = " + std::to_string(z) + " outside (r - 1, r] for r = " + std::to_string(r));
    }
    return ApproxParams{z};
}

double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binomial_spectrum_estimate(std::size_t n, std::size_t w, double z) {
    return std::exp2(-z) * binomial(static_cast<long long>(n), static_cast<long long>(w)).get_d();
}

EntropyBound delta_entropy_bound(unsigned d, std::size_t rho, double z) {
    if (rho < d || d == 0) {
        throw PreconditionError("delta_entropy_bound needs 1 <= d <= rho");
    }
    EntropyBound b;
    Integer sum = 0;
    for (std::size_t w = d; w <= rho; ++w) {
        sum += binomial(static_cast<long long>(rho), static_cast<long long>(w));
    }
    b.binomial_sum = 1.0 - std::exp2(-z) * sum.get_d();
    const auto rd = static_cast<double>(rho);
    b.entropy = 1.0 - std::exp2(-z + rd * binary_entropy(static_cast<double>(d) / rd));
    if (rd < z) {
        b.weak = 1.0 - std::exp2(rd - z);
    }
    return b;
}

std::string method_tag(ErasureMethod m) {
    switch (m) {
        case ErasureMethod::Exact: return "exact";
        case ErasureMethod::Sampled: return "sampled";
        case ErasureMethod::PsiBound: return "psi-bound";
        case ErasureMethod::Recursive: return "recursive";
    }
    return {};
}

double ErasureReport::delta_value() const {
    if (delta_exact) {
        return delta_exact->get_d();
    }
    if (sampled) {
        return sampled->delta;
    }
    if (method == ErasureMethod::Recursive && delta_tilde) {
        return delta_tilde->get_d();
    }
    return delta_lower.get_d();
}

ErasureReport analyze_erasure(const Code& c, const WeightSpectrum& s, std::size_t rho, const ErasureOptions& opts,
                              ShortenedSpectrumProvider* provider) {
    const std::size_t n = c.length();
    const unsigned d = minimum_distance(s);
    const unsigned d_eff = d == kUnboundedDistance ? static_cast<unsigned>(n + 1) : d;
    const std::size_t rank_h = rank(c.parity_check());

    ErasureReport rep;
    rep.rho = rho;
    rep.total = binomial(static_cast<long long>(n), static_cast<long long>(rho));
    rep.psi = psi(n, d_eff, rho, s);
    rep.delta_lower = delta_lower(n, d_eff, rho, s);
    rep.exact_regime = is_exact_regime(d_eff, rho);

    std::unique_ptr<TrailingShortenProvider> own;
    if (provider == nullptr) {
        own = std::make_unique<TrailingShortenProvider>(c);
        provider = own.get();
    }
    rep.delta_tilde_2 = delta_tilde_2(n, d_eff, rho, *provider);
    if (opts.z && rho >= d_eff) {
        rep.bounds = delta_entropy_bound(d_eff, rho, *opts.z);
    }

    if (rho > rank_h) {
        rep.s_exact = Integer(0);
        rep.delta_exact = Rational(0);
        rep.method = ErasureMethod::Exact;
        return rep;
    }

    auto run_sampling = [&] {
        rep.sampled = s_rho_sampled(c.parity_check(), rho, opts.samples, opts.seed, opts.threads);
        rep.method = ErasureMethod::Sampled;
    };

    switch (opts.method) {
        case ErasureMethod::Exact: {
            EnumerationOptions eo;
            eo.budget = opts.budget;
            eo.threads = opts.threads;
            try {
                const std::uint64_t count = s_rho_exact(c.parity_check(), rho, eo);
                rep.s_exact = from_u64(count);
                rep.delta_exact = Rational(*rep.s_exact, rep.total);
                rep.delta_exact->canonicalize();
                rep.method = ErasureMethod::Exact;
            } catch (const BudgetExceeded&) {
                if (!opts.sample_when_over_budget) {
                    throw;
                }
                run_sampling();
            }
            break;
        }
        case ErasureMethod::Sampled:
            run_sampling();
            break;
        case ErasureMethod::PsiBound:
            rep.method = ErasureMethod::PsiBound;
            break;
        case ErasureMethod::Recursive: {
            rep.psi_tilde = psi_tilde(n, d_eff, rho, *provider, opts.recursive_depth);
            rep.delta_tilde = Rational(*rep.psi_tilde, rep.total);
            rep.delta_tilde->canonicalize();
            rep.method = ErasureMethod::Recursive;
            break;
        }
    }
    if (!rep.psi_tilde) {
        rep.psi_tilde = psi_tilde(n, d_eff, rho, *provider);
        rep.delta_tilde = Rational(*rep.psi_tilde, rep.total);
        rep.delta_tilde->canonicalize();
    }
    return rep;
}

std::optional<double> printed_table1_value(const std::string& family, std::size_t r, std::size_t rho) {
    struct Row {
        const char* family;
        std::size_t r;
        std::array<double, 4> values;  // rho = 4, 5, 6, 7
    };
    static constexpr std::array<Row, 4> kRows{{
        {"Hamming", 7, {0.9836, 0.9180, 0.7469, 0.4121}},
        {"Panchenko", 7, {0.9870, 0.9287, 0.7656, 0.4306}},
        {"Hamming", 8, {0.9920, 0.9600, 0.8741, 0.6879}},
        {"Panchenko", 8, {0.9934, 0.9647, 0.8830, 0.6996}},
    }};
    if (rho < 4 || rho > 7) {
        return std::nullopt;
    }
    for (const auto& row : kRows) {
        if (family == row.family && r == row.r) {
            return row.values[rho - 4];
        }
    }
    return std::nullopt;
}

std::vector<Table1Code> table1_codes(const std::vector<std::string>& keys) {
    std::vector<Table1Code> all;
    for (std::size_t r : {7U, 8U}) {
        all.push_back({"Hamming", r, extended_hamming(r)});
        all.push_back({"Panchenko", r, panchenko(r)});
    }
    if (keys.empty()) {
        return all;
    }
    std::vector<Table1Code> out;
    for (const auto& key : keys) {
        bool found = false;
        for (const auto& c : all) {
            const std::string short_family = c.family == "Hamming" ? "eh" : "panchenko";
            const std::string long_family = c.family == "Hamming" ? "hamming" : "panchenko";
            const std::string r = std::to_string(c.r);
            if (key == short_family + r || key == long_family + r) {
                out.push_back(c);
                found = true;
            }
        }
        if (!found) {
            throw PreconditionError("unknown table code '" + key + "' (expected eh7, eh8, panchenko7, panchenko8)");
        }
    }
    return out;
}

std::vector<Table1Entry> table1(const std::vector<Table1Code>& codes, std::size_t rho_min, std::size_t rho_max,
                                const ErasureOptions& opts) {
    std::vector<Table1Entry> out;
    for (const auto& tc : codes) {
        const WeightSpectrum s = spectrum_by_doubling(tc.code);
        TrailingShortenProvider provider(tc.code);
        for (std::size_t rho = rho_min; rho <= rho_max; ++rho) {
            Table1Entry e;
            e.family = tc.family;
            e.r = tc.r;
            e.n = tc.code.length();
            e.report = analyze_erasure(tc.code, s, rho, opts, &provider);
            e.printed = printed_table1_value(tc.family, tc.r, rho);
            out.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace qpc
