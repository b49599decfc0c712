#include "qpc_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qpc/erasure.hpp"
#include "qpc/errors.hpp"
#include "qpc/parallel.hpp"
#include "qpc/product_sim.hpp"
#include "qpc/spectrum.hpp"

namespace qpc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const PreconditionError& e) {
        err << "qpc: refused: " << e.what() << '\n';
        return kPrecondition;
    } catch (const ConsistencyError& e) {
        err << "qpc: consistency check failed: " << e.what() << '\n';
        return kConsistency;
    } catch (const BudgetExceeded& e) {
        err << "qpc: budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const std::exception& e) {
        err << "qpc: error: " << e.what() << '\n';
        return kFailure;
    }
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string general(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string fraction(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return to_fraction(c);
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write failed for " + p.string());
    }
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
    fs::path q = p;
    q += suffix;
    return q;
}

// Options shared by every subcommand.
struct Common {
    std::size_t threads = 0;
    std::string manifest;
    int digits = 6;
};

struct Run {
    RunManifest manifest;
    std::ostream& out;
    std::ostream& err;
    std::size_t threads;
    int digits;
    // Output text for stdout when no file is given.
    void emit(const std::optional<fs::path>& path, const std::string& text) {
        if (path) {
            write_text(*path, text);
            manifest.add_output(*path);
        } else {
            out << text;
        }
    }
};

// construct ----------------------------------------------------------------

struct ConstructArgs {
    std::string family;
    std::size_t r = 0;
    std::optional<unsigned> g;
    std::string seed;
    std::size_t shorten = 0;
    std::string out;
};

Code build_code(const ConstructArgs& a) {
    Code c = [&] {
        if (a.family == "eh") {
            return extended_hamming(a.r);
        }
        if (a.family == "panchenko") {
            return panchenko(a.r);
        }
        if (a.family == "general") {
            if (!a.g) {
                throw PreconditionError("--family general needs --g");
            }
            std::string name = a.seed;
            if (name.empty()) {
                switch (*a.g) {
                    case 0: name = "M"; break;
                    case 2: name = "S"; break;
                    case 3: name = "example_9_5"; break;
                    default: throw PreconditionError("no built-in seed for g = " + std::to_string(*a.g));
                }
            }
            return general_qp_blocks(a.r, *a.g, seed(name));
        }
        if (a.seed.empty()) {
            throw PreconditionError("--family seed needs --seed NAME");
        }
        Code s = seed(a.seed);
        if (a.r != 0 && a.r != s.redundancy()) {
            throw PreconditionError("seed " + a.seed + " has r = " + std::to_string(s.redundancy()));
        }
        return s;
    }();
    if (a.shorten > 0) {
        if (a.shorten >= c.length()) {
            throw PreconditionError("--shorten must leave at least one column");
        }
        c = shorten_trailing(c, a.shorten);
    }
    return c;
}

void cmd_construct(Run& run, const ConstructArgs& a) {
    auto& p = run.manifest.parameters();
    p["family"] = a.family;
    p["r"] = a.r;
    p["g"] = a.g ? json(*a.g) : json(nullptr);
    p["seed"] = a.seed;
    p["shorten"] = a.shorten;
    const Code c = build_code(a);
    const fs::path out(a.out);
    write_text(out, to_text(c.parity_check()));
    run.manifest.add_output(out);
    const fs::path sidecar = with_suffix(out, ".json");
    write_text(sidecar, spec_to_json(c).dump(2) + "\n");
    run.manifest.add_output(sidecar);
    run.out << "wrote " << c.parity_check().rows() << "x" << c.parity_check().cols() << " matrix to " << out.string()
            << '\n';
}

// spectrum -----------------------------------------------------------------

struct SpectrumArgs {
    std::string code;
    std::string method;
    std::string out;
};

void cmd_spectrum(Run& run, const SpectrumArgs& a) {
    const ResolvedCode rc = resolve_code(a.code);
    if (rc.file) {
        run.manifest.add_input(*rc.file);
    }
    if (rc.sidecar) {
        run.manifest.add_input(*rc.sidecar);
    }
    std::string method = a.method;
    if (method.empty()) {
        method = rc.code.has_doubling_lineage() ? "recursion" : "oracle";
    }
    run.manifest.parameters()["code"] = a.code;
    run.manifest.parameters()["method"] = method;

    WeightSpectrum s;
    if (method == "recursion") {
        s = spectrum_by_doubling(rc.code);
    } else if (method == "oracle") {
        s = oracle_spectrum(rc.code, run.threads);
    } else {
        s = spectrum_by_doubling(rc.code);
        const WeightSpectrum o = oracle_spectrum(rc.code, run.threads);
        if (!(s == o)) {
            std::ostringstream msg;
            msg << "recursion and oracle spectra differ at weights";
            for (std::size_t w = 0; w <= s.n; ++w) {
                if (s.at(static_cast<long long>(w)) != o.at(static_cast<long long>(w))) {
                    msg << ' ' << w;
                }
            }
            throw ConsistencyError(msg.str());
        }
    }
    json j;
    j["n"] = s.n;
    j["k"] = rc.code.length() - rank(rc.code.parity_check());
    const unsigned d = minimum_distance(s);
    j["d"] = d == kUnboundedDistance ? json(nullptr) : json(d);
    j["method"] = method;
    json counts = json::array();
    for (const auto& c : s.counts) {
        counts.push_back(to_decimal(c));
    }
    j["counts"] = counts;
    run.emit(a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out), j.dump(2) + "\n");
}

// erasure ------------------------------------------------------------------

struct ErasureArgs {
    std::string code;
    std::size_t rho_min = 0;
    std::size_t rho_max = 0;
    bool exact = false;
    std::optional<std::uint64_t> sample;
    bool psi = false;
    std::optional<std::size_t> recursive;
    std::optional<double> z;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::optional<std::uint64_t> fallback_samples;
    std::string out;
};

const char* kErasureHeader =
    "rho,total,psi,psi_tilde,s_exact_or_estimate,ci_halfwidth,delta_lower,delta,delta_tilde,delta_tilde_2,"
    "delta_binomial,delta_entropy,delta_weak,printed,method\n";

std::string erasure_row(const ErasureReport& rep, std::optional<double> printed, int digits) {
    std::ostringstream row;
    row << rep.rho << ',' << to_decimal(rep.total) << ',' << to_decimal(rep.psi) << ','
        << (rep.psi_tilde ? to_decimal(*rep.psi_tilde) : "") << ',';
    if (rep.s_exact) {
        row << to_decimal(*rep.s_exact) << ',' << fixed(0.0, digits);
    } else if (rep.sampled) {
        row << fixed(rep.sampled->estimate, digits) << ',' << fixed(rep.sampled->ci_halfwidth, digits);
    } else {
        row << ',';
    }
    row << ',' << to_fixed(rep.delta_lower, digits) << ',';
    if (rep.delta_exact) {
        row << to_fixed(*rep.delta_exact, digits);
    } else {
        row << fixed(rep.delta_value(), digits);
    }
    row << ',' << (rep.delta_tilde ? to_fixed(*rep.delta_tilde, digits) : "") << ','
        << (rep.delta_tilde_2 ? to_fixed(*rep.delta_tilde_2, digits) : "") << ',';
    if (rep.bounds) {
        row << fixed(rep.bounds->binomial_sum, digits) << ',' << fixed(rep.bounds->entropy, digits) << ','
            << (rep.bounds->weak ? fixed(*rep.bounds->weak, digits) : "");
    } else {
        row << ",,";
    }
    row << ',' << (printed ? fixed(*printed, 4) : "") << ',' << method_tag(rep.method) << '\n';
    return row.str();
}

json erasure_json(const ErasureReport& rep) {
    json j;
    j["rho"] = rep.rho;
    j["total"] = to_decimal(rep.total);
    j["psi"] = to_decimal(rep.psi);
    j["delta_lower"] = fraction(rep.delta_lower);
    j["psi_tilde"] = rep.psi_tilde ? json(to_decimal(*rep.psi_tilde)) : json(nullptr);
    j["delta_tilde"] = rep.delta_tilde ? json(fraction(*rep.delta_tilde)) : json(nullptr);
    j["delta_tilde_2"] = rep.delta_tilde_2 ? json(fraction(*rep.delta_tilde_2)) : json(nullptr);
    j["s_exact"] = rep.s_exact ? json(to_decimal(*rep.s_exact)) : json(nullptr);
    j["delta_exact"] = rep.delta_exact ? json(fraction(*rep.delta_exact)) : json(nullptr);
    if (rep.sampled) {
        j["sampled"] = {{"samples", rep.sampled->samples},
                        {"hits", rep.sampled->hits},
                        {"delta", std::to_string(rep.sampled->hits) + "/" + std::to_string(rep.sampled->samples)},
                        {"ci_halfwidth", rep.sampled->ci_halfwidth}};
    } else {
        j["sampled"] = nullptr;
    }
    j["exact_regime"] = rep.exact_regime;
    j["method"] = method_tag(rep.method);
    return j;
}

void cmd_erasure(Run& run, const ErasureArgs& a) {
    const ResolvedCode rc = resolve_code(a.code);
    if (rc.file) {
        run.manifest.add_input(*rc.file);
    }
    if (rc.sidecar) {
        run.manifest.add_input(*rc.sidecar);
    }
    const Code& c = rc.code;
    if (a.rho_min < 1 || a.rho_min > a.rho_max || a.rho_max > c.length()) {
        throw PreconditionError("need 1 <= rho-min <= rho-max <= n = " + std::to_string(c.length()));
    }
    ErasureOptions opts;
    opts.seed = a.seed;
    opts.budget = a.budget;
    opts.threads = run.threads;
    if (a.sample) {
        if (*a.sample == 0) {
            throw PreconditionError("--sample needs at least one sample");
        }
        opts.method = ErasureMethod::Sampled;
        opts.samples = *a.sample;
    } else if (a.psi) {
        opts.method = ErasureMethod::PsiBound;
    } else if (a.recursive) {
        opts.method = ErasureMethod::Recursive;
        if (*a.recursive > 0) {
            opts.recursive_depth = *a.recursive;
        }
    } else {
        opts.method = ErasureMethod::Exact;
        if (a.fallback_samples) {
            opts.sample_when_over_budget = true;
            opts.samples = *a.fallback_samples;
        }
    }
    if (a.z) {
        opts.z = ApproxParams::checked(*a.z, c.redundancy()).z;
    }
    auto& p = run.manifest.parameters();
    p["code"] = a.code;
    p["rho_min"] = a.rho_min;
    p["rho_max"] = a.rho_max;
    p["method"] = method_tag(opts.method);
    p["samples"] = opts.samples;
    p["budget"] = opts.budget;
    p["recursive_depth"] = a.recursive ? json(*a.recursive) : json(nullptr);
    p["z"] = a.z ? json(*a.z) : json(nullptr);
    p["digits"] = run.digits;
    run.manifest.set_seed(a.seed);

    const WeightSpectrum s = c.has_doubling_lineage() ? spectrum_by_doubling(c) : oracle_spectrum(c, run.threads);
    TrailingShortenProvider provider(c);
    const auto family = table_family(c);
    std::string csv = kErasureHeader;
    json rows = json::array();
    for (std::size_t rho = a.rho_min; rho <= a.rho_max; ++rho) {
        const ErasureReport rep = analyze_erasure(c, s, rho, opts, &provider);
        const auto printed = family ? printed_table1_value(family->first, family->second, rho) : std::nullopt;
        csv += erasure_row(rep, printed, run.digits);
        rows.push_back(erasure_json(rep));
    }
    json side;
    side["code"] = spec_to_json(c);
    side["rows"] = rows;
    if (a.out.empty()) {
        run.out << csv;
        return;
    }
    run.emit(fs::path(a.out), csv);
    run.emit(with_suffix(a.out, ".json"), side.dump(2) + "\n");
}

// simulate -----------------------------------------------------------------

struct SimulateArgs {
    double p = 0.0;
    std::size_t d_plus = 3;
    std::uint64_t trials = 100'000;
    bool stratified = false;
    std::optional<std::size_t> kmax;
    std::uint64_t per_stratum = 10'000;
    double eps_tail = 1e-15;
    std::uint64_t seed = 1;
    std::string out;
};

json sim_json(const SimResult& r, std::uint64_t seed) {
    json j;
    j["p"] = r.p;
    j["d_plus"] = r.d_plus;
    j["trials"] = r.trials;
    j["failures"] = r.failures;
    j["miscorrections"] = r.miscorrections;
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["ci95"] = {r.ci_low, r.ci_high};
    j["strategy"] = r.strategy == SimStrategy::Plain ? "plain" : "stratified";
    j["tail_bound"] = r.tail_bound;
    j["seed"] = seed;
    if (r.strategy == SimStrategy::Plain) {
        j["estimate_fraction"] = std::to_string(r.failures) + "/" + std::to_string(r.trials);
    } else {
        json strata = json::array();
        for (const auto& s : r.strata) {
            strata.push_back({{"k", s.k}, {"weight", s.weight}, {"trials", s.trials}, {"failures", s.failures}});
        }
        j["strata"] = strata;
    }
    const auto printed = printed_table2_value(r.p, r.d_plus);
    j["printed"] = printed ? json(*printed) : json(nullptr);
    return j;
}

SimConfig sim_config(const SimulateArgs& a, std::size_t threads) {
    SimConfig cfg;
    cfg.p = a.p;
    cfg.d_plus = a.d_plus;
    cfg.trials = a.trials;
    cfg.master_seed = a.seed;
    cfg.strategy = a.stratified ? SimStrategy::Stratified : SimStrategy::Plain;
    cfg.kmax = a.kmax;
    cfg.per_stratum = a.per_stratum;
    cfg.eps_tail = a.eps_tail;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

void cmd_simulate(Run& run, const SimulateArgs& a) {
    const SimConfig cfg = sim_config(a, run.threads);
    auto& p = run.manifest.parameters();
    p["p"] = a.p;
    p["d_plus"] = a.d_plus;
    p["trials"] = a.trials;
    p["strategy"] = a.stratified ? "stratified" : "plain";
    p["kmax"] = a.kmax ? json(*a.kmax) : json(nullptr);
    p["per_stratum"] = a.per_stratum;
    p["eps_tail"] = a.eps_tail;
    run.manifest.set_seed(a.seed);
    const SimResult r = failure_probability(panchenko_product_72(), cfg);
    run.emit(a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out), sim_json(r, a.seed).dump(2) + "\n");
}

// table --------------------------------------------------------------------

struct TableArgs {
    int which = 1;
    std::vector<std::string> codes;
    std::size_t rho_min = 4;
    std::size_t rho_max = 7;
    std::string mode = "exact";
    std::uint64_t samples = 100'000'000ULL;
    std::uint64_t budget = kDefaultEnumerationBudget;
    std::vector<double> ps{1e-1, 1e-2, 5e-3};
    std::vector<std::size_t> dplus{3, 4, 5, 6};
    SimulateArgs sim;
    std::uint64_t seed = 1;
    std::string out;
};

std::string table1_csv(Run& run, const TableArgs& a) {
    ErasureOptions opts;
    opts.seed = a.seed;
    opts.samples = a.samples;
    opts.budget = a.budget;
    opts.threads = run.threads;
    if (a.mode == "exact") {
        opts.method = ErasureMethod::Exact;
        opts.sample_when_over_budget = true;
    } else if (a.mode == "sampled") {
        opts.method = ErasureMethod::Sampled;
    } else if (a.mode == "psi") {
        opts.method = ErasureMethod::PsiBound;
    } else {
        opts.method = ErasureMethod::Recursive;
    }
    const auto entries = table1(table1_codes(a.codes), a.rho_min, a.rho_max, opts);
    std::string csv = "code,r,n,rho,delta,ci_halfwidth,method,printed,deviation,delta_lower,delta_tilde_2\n";
    for (const auto& e : entries) {
        const double v = e.report.delta_value();
        std::ostringstream row;
        row << e.family << ',' << e.r << ',' << e.n << ',' << e.report.rho << ',';
        row << (e.report.delta_exact ? to_fixed(*e.report.delta_exact, run.digits) : fixed(v, run.digits)) << ',';
        row << (e.report.sampled ? fixed(e.report.sampled->ci_halfwidth, run.digits) : fixed(0.0, run.digits)) << ',';
        row << method_tag(e.report.method) << ',';
        if (e.printed) {
            row << fixed(*e.printed, 4) << ',' << fixed(v - *e.printed, run.digits);
        } else {
            row << ',';
        }
        row << ',' << to_fixed(e.report.delta_lower, run.digits) << ','
            << (e.report.delta_tilde_2 ? to_fixed(*e.report.delta_tilde_2, run.digits) : "") << '\n';
        csv += row.str();
    }
    return csv;
}

std::string table2_csv(Run& run, const TableArgs& a) {
    std::string csv = "p,d_plus,strategy,trials,failures,miscorrections,estimate,ci_low,ci_high,tail_bound,printed,"
                      "deviation\n";
    const ProductCode pc = panchenko_product_72();
    for (double p : a.ps) {
        for (std::size_t dp : a.dplus) {
            SimulateArgs sa = a.sim;
            sa.p = p;
            sa.d_plus = dp;
            sa.seed = a.seed;
            const SimResult r = failure_probability(pc, sim_config(sa, run.threads));
            const auto printed = printed_table2_value(p, dp);
            std::ostringstream row;
            row << general(p, run.digits) << ',' << dp << ','
                << (r.strategy == SimStrategy::Plain ? "plain" : "stratified") << ',' << r.trials << ','
                << r.failures << ',' << r.miscorrections << ',' << general(r.estimate, run.digits) << ','
                << general(r.ci_low, run.digits) << ',' << general(r.ci_high, run.digits) << ','
                << general(r.tail_bound, run.digits) << ',';
            if (printed) {
                row << general(*printed, 4) << ',' << general(r.estimate - *printed, run.digits);
            } else {
                row << ',';
            }
            row << '\n';
            csv += row.str();
        }
    }
    return csv;
}

void cmd_table(Run& run, const TableArgs& a) {
    auto& p = run.manifest.parameters();
    p["which"] = a.which;
    run.manifest.set_seed(a.seed);
    std::string csv;
    if (a.which == 1) {
        if (a.rho_min < 1 || a.rho_min > a.rho_max) {
            throw PreconditionError("need 1 <= rho-min <= rho-max");
        }
        p["codes"] = a.codes;
        p["rho_min"] = a.rho_min;
        p["rho_max"] = a.rho_max;
        p["mode"] = a.mode;
        p["samples"] = a.samples;
        p["budget"] = a.budget;
        csv = table1_csv(run, a);
    } else {
        p["p"] = a.ps;
        p["d_plus"] = a.dplus;
        p["trials"] = a.sim.trials;
        p["strategy"] = a.sim.stratified ? "stratified" : "plain";
        p["per_stratum"] = a.sim.per_stratum;
        p["kmax"] = a.sim.kmax ? json(*a.sim.kmax) : json(nullptr);
        csv = table2_csv(run, a);
    }
    p["digits"] = run.digits;
    run.emit(a.out.empty() ? std::nullopt : std::optional<fs::path>(a.out), csv);
}

void add_common(CLI::App* sub, Common& common) {
    sub->add_option("--threads", common.threads, "Worker threads (default: QPC_THREADS or all cores)");
    sub->add_option("--manifest", common.manifest, "Run manifest path (default: OUT.manifest.json)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-perfect code construction, spectra, erasure analysis and product-code simulation", "qpc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    Common common;

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "Build a parity-check matrix and its CodeSpec sidecar");
    construct->add_option("--family", ca.family, "eh | panchenko | general | seed")
        ->required()
        ->check(CLI::IsMember({"eh", "panchenko", "general", "seed"}));
    construct->add_option("--r", ca.r, "Redundancy");
    construct->add_option("--g", ca.g, "Family parameter g (general)");
    construct->add_option("--seed", ca.seed, "Seed name: M, S, EH3, example_9_5");
    construct->add_option("--shorten", ca.shorten, "Remove this many trailing columns");
    construct->add_option("--out", ca.out, "Matrix file")->required();
    add_common(construct, common);

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "Weight spectrum of a code");
    spectrum->add_option("--code", sa.code, "Matrix file or code name")->required();
    spectrum->add_option("--method", sa.method, "recursion | oracle | both")
        ->check(CLI::IsMember({"recursion", "oracle", "both"}));
    spectrum->add_option("--out", sa.out, "JSON output (default: stdout)");
    add_common(spectrum, common);

    ErasureArgs ea;
    auto* erasure = app.add_subcommand("erasure", "Erasure-correction statistics over a range of rho");
    erasure->add_option("--code", ea.code, "Matrix file or code name")->required();
    erasure->add_option("--rho-min", ea.rho_min)->required();
    erasure->add_option("--rho-max", ea.rho_max)->required();
    auto* o_exact = erasure->add_flag("--exact", ea.exact, "Exact enumeration (default)");
    auto* o_sample = erasure->add_option("--sample", ea.sample, "Monte Carlo with N samples");
    auto* o_psi = erasure->add_flag("--psi", ea.psi, "Psi lower bound only");
    auto* o_rec = erasure->add_option("--recursive", ea.recursive, "Recursive estimate to DEPTH (0: full)");
    o_exact->excludes(o_sample, o_psi, o_rec);
    o_sample->excludes(o_psi, o_rec);
    o_psi->excludes(o_rec);
    erasure->add_option("--z", ea.z, "Approximation parameter, r - 1 < z <= r");
    erasure->add_option("--seed", ea.seed, "Master seed for sampling");
    erasure->add_option("--budget", ea.budget, "Largest C(n, rho) enumerated exactly");
    erasure->add_option("--fallback-samples", ea.fallback_samples, "Sample with N draws when over budget");
    erasure->add_option("--out", ea.out, "CSV output; exact fractions go to OUT.json");
    erasure->add_option("--digits", common.digits, "Decimal digits in CSV");
    add_common(erasure, common);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Failure probability of the [72,64,4]^2 product code");
    simulate->add_option("--p", sim.p, "Bit error probability")->required();
    simulate->add_option("--dplus", sim.d_plus, "Extended decoding radius")->required();
    simulate->add_option("--trials", sim.trials, "Plain Monte Carlo trials");
    simulate->add_flag("--stratified", sim.stratified, "Stratify over the number of errors");
    simulate->add_option("--kmax", sim.kmax, "Largest stratum");
    simulate->add_option("--per-stratum", sim.per_stratum, "Trials per stratum");
    simulate->add_option("--eps-tail", sim.eps_tail, "Tail mass left unsimulated");
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--out", sim.out, "JSON output (default: stdout)");
    add_common(simulate, common);

    TableArgs ta;
    auto* table = app.add_subcommand("table", "Reproduction grids with deviations from the printed values");
    table->add_option("--which", ta.which, "1: erasure probabilities, 2: product-code failures")
        ->required()
        ->check(CLI::Range(1, 2));
    table->add_option("--codes", ta.codes, "Subset of eh7, eh8, panchenko7, panchenko8")->delimiter(',');
    table->add_option("--rho-min", ta.rho_min);
    table->add_option("--rho-max", ta.rho_max);
    table->add_option("--mode", ta.mode, "exact (sampling over budget) | sampled | psi | recursive")
        ->check(CLI::IsMember({"exact", "sampled", "psi", "recursive"}));
    table->add_option("--samples", ta.samples, "Samples per sampled entry");
    table->add_option("--budget", ta.budget, "Largest C(n, rho) enumerated exactly");
    table->add_option("--p", ta.ps, "Error probabilities")->delimiter(',');
    table->add_option("--dplus", ta.dplus, "Decoding radii")->delimiter(',');
    table->add_option("--trials", ta.sim.trials, "Plain Monte Carlo trials per cell");
    table->add_flag("--stratified", ta.sim.stratified);
    table->add_option("--kmax", ta.sim.kmax);
    table->add_option("--per-stratum", ta.sim.per_stratum);
    table->add_option("--seed", ta.seed, "Master seed");
    table->add_option("--out", ta.out, "CSV output (default: stdout)");
    table->add_option("--digits", common.digits, "Decimal digits in CSV");
    add_common(table, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "qpc: " << e.what() << '\n';
        return kPrecondition;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Run run{RunManifest(name, args), out, err,
            common.threads == 0 ? default_thread_count() : common.threads, common.digits};
    run.manifest.parameters()["threads"] = run.threads;

    std::string out_path;
    int code = kOk;
    try {
        if (common.digits < 0 || common.digits > 30) {
            throw PreconditionError("--digits must lie in [0, 30]");
        }
        if (name == "construct") {
            out_path = ca.out;
            cmd_construct(run, ca);
        } else if (name == "spectrum") {
            out_path = sa.out;
            cmd_spectrum(run, sa);
        } else if (name == "erasure") {
            out_path = ea.out;
            cmd_erasure(run, ea);
        } else if (name == "simulate") {
            out_path = sim.out;
            cmd_simulate(run, sim);
        } else {
            out_path = ta.out;
            cmd_table(run, ta);
        }
    } catch (...) {
        code = exit_code_for_current_exception(err);
        std::ostringstream msg;
        try {
            throw;
        } catch (const std::exception& e) {
            msg << e.what();
        }
        run.manifest.set_exit(code, msg.str());
    }

    // The manifest is written even when the command was refused.
    const std::string text = run.manifest.to_json().dump(2) + "\n";
    std::string manifest_path = common.manifest;
    if (manifest_path.empty() && !out_path.empty()) {
        manifest_path = out_path + ".manifest.json";
    }
    try {
        if (manifest_path.empty()) {
            err << text;
        } else {
            write_text(manifest_path, text);
        }
    } catch (...) {
        const int mc = exit_code_for_current_exception(err);
        return code == kOk ? mc : code;
    }
    return code;
}

}  // namespace qpc::cli
