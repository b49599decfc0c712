#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qpc/bigint.hpp"
#include "qpc/construct.hpp"
#include "qpc/spectrum.hpp"

namespace qpc {

// Psi(n, d, rho) = C(n, rho) - sum_{w=d}^{rho} A_w C(n - w, rho - w).
// A lower bound on the number of correctable weight-rho erasure patterns;
// for rho < d it is C(n, rho).
Integer psi(std::size_t n, unsigned d, std::size_t rho, const WeightSpectrum& s);

// Psi / C(n, rho).
Rational delta_lower(std::size_t n, unsigned d, std::size_t rho, const WeightSpectrum& s);

// rho <= d + (d - 1) / 2, where Psi counts correctable patterns exactly.
bool is_exact_regime(unsigned d, std::size_t rho);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000'000ULL;
// Span-marker tables are 2^rows bytes.
inline constexpr std::size_t kExactMaxRows = 24;

struct EnumerationOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::size_t threads = 0;  // 0: default_thread_count()
    // Called after each finished task with (tasks done, tasks total).
    std::function<void(std::size_t, std::size_t)> progress;
};

// Number of rho-subsets of columns of H that are linearly independent.
// Depth-first over lexicographic prefixes; the span of the current prefix
// is kept as a 2^r membership table, and a prefix that is already
// dependent is not extended. Throws BudgetExceeded when C(n, rho) is over
// budget.
std::uint64_t s_rho_exact(const BitMatrix& h, std::size_t rho, const EnumerationOptions& opts = {});
inline std::uint64_t s_rho_exact(const Code& c, std::size_t rho, const EnumerationOptions& opts = {}) {
    return s_rho_exact(c.parity_check(), rho, opts);
}

// Monte Carlo estimate of S_rho from uniformly drawn rho-subsets.
struct SampledCount {
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double delta = 0.0;             // hits / samples
    double std_error = 0.0;         // sqrt(delta (1 - delta) / samples)
    double ci_halfwidth = 0.0;      // 1.96 * std_error, in delta units
    double estimate = 0.0;          // delta * C(n, rho)
    double estimate_halfwidth = 0.0;
};

// The sample budget is split over a fixed number of chunks, each with a
// stream derived from master_seed, so the result does not depend on the
// thread count.
SampledCount s_rho_sampled(const BitMatrix& h, std::size_t rho, std::uint64_t samples, std::uint64_t master_seed,
                           std::size_t threads = 0);

// Supplies A_w(m): the spectrum of the code cut down to length m.
class ShortenedSpectrumProvider {
public:
    virtual ~ShortenedSpectrumProvider() = default;
    virtual const WeightSpectrum& spectrum(std::size_t length) = 0;
};

// Keeps the first `length` columns of H and runs the oracle; results are
// cached per length.
class TrailingShortenProvider final : public ShortenedSpectrumProvider {
public:
    explicit TrailingShortenProvider(BitMatrix h) : h_(std::move(h)) {}
    explicit TrailingShortenProvider(const Code& c) : h_(c.parity_check()) {}

    const WeightSpectrum& spectrum(std::size_t length) override;

private:
    BitMatrix h_;
    std::mutex mutex_;
    std::map<std::size_t, std::unique_ptr<WeightSpectrum>> cache_;
};

// Psi~(n, d, rho) = C(n, rho) - sum_{w=d}^{rho} A_w(n) Psi~(n - w, d, rho - w),
// Psi~(m, d, rho') = C(m, rho') for rho' < d. With max_depth set, the
// recursion stops after that many levels (depth 1 gives Psi, depth 2 the
// two-step form).
Integer psi_tilde(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider,
                  std::optional<std::size_t> max_depth = std::nullopt);

Rational delta_tilde(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider);

// Two-step recursive estimate written out term by term:
//   1 - sum_{w1} A_{w1}(n) C(n-w1, rho-w1)/C(n, rho)
//         * [1 - sum_{w2} A_{w2}(n-w1) C(n-w1-w2, rho-w1-w2)/C(n-w1, rho-w1)].
Rational delta_tilde_2(std::size_t n, unsigned d, std::size_t rho, ShortenedSpectrumProvider& provider);

// z with r - 1 < z <= r.
struct ApproxParams {
    double z = 0.0;
    static ApproxParams checked(double z, std::size_t r);
};

double binary_entropy(double x);

// 2^-z C(n, w).
double binomial_spectrum_estimate(std::size_t n, std::size_t w, double z);

struct EntropyBound {
    double binomial_sum = 0.0;         // 1 - 2^-z sum_{w=d}^{rho} C(rho, w)
    double entropy = 0.0;              // 1 - 2^(-z + rho H(d / rho))
    std::optional<double> weak;        // 1 - 2^(rho - z); empty when rho >= z
};

EntropyBound delta_entropy_bound(unsigned d, std::size_t rho, double z);

enum class ErasureMethod { Exact, Sampled, PsiBound, Recursive };
std::string method_tag(ErasureMethod m);

struct ErasureOptions {
    ErasureMethod method = ErasureMethod::Exact;
    std::uint64_t samples = 100'000'000ULL;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::size_t threads = 0;
    std::optional<std::size_t> recursive_depth;  // for Recursive; empty = full
    std::optional<double> z;
    // Under Exact, fall back to sampling when C(n, rho) exceeds the budget.
    bool sample_when_over_budget = false;
};

struct ErasureReport {
    std::size_t rho = 0;
    Integer total;                       // C(n, rho)
    Integer psi;
    std::optional<Integer> psi_tilde;
    std::optional<Integer> s_exact;
    std::optional<SampledCount> sampled;
    Rational delta_lower;
    std::optional<Rational> delta_exact;
    std::optional<Rational> delta_tilde;
    std::optional<Rational> delta_tilde_2;
    std::optional<EntropyBound> bounds;
    bool exact_regime = false;
    ErasureMethod method = ErasureMethod::PsiBound;

    // Best available delta: exact, sampled, recursive, then the Psi bound.
    double delta_value() const;
};

// For rho > rank(H) nothing is independent; the report carries S = 0.
ErasureReport analyze_erasure(const Code& c, const WeightSpectrum& s, std::size_t rho, const ErasureOptions& opts,
                              ShortenedSpectrumProvider* provider = nullptr);

// Reference values printed for the Hamming and Panchenko codes at r = 7, 8
// and rho = 4..7 (four decimals).
std::optional<double> printed_table1_value(const std::string& family, std::size_t r, std::size_t rho);

struct Table1Entry {
    std::string family;  // "Hamming" or "Panchenko"
    std::size_t r = 0;
    std::size_t n = 0;
    ErasureReport report;
    std::optional<double> printed;
};

struct Table1Code {
    std::string family;
    std::size_t r = 0;
    Code code;
};

// The four codes of the comparison, or those whose "family+r" key (e.g.
// "panchenko7", "eh8") is listed.
std::vector<Table1Code> table1_codes(const std::vector<std::string>& keys = {});

std::vector<Table1Entry> table1(const std::vector<Table1Code>& codes, std::size_t rho_min, std::size_t rho_max,
                                const ErasureOptions& opts);

}  // namespace qpc
