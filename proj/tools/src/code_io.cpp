#include <fstream>
#include <regex>

#include "qpc/errors.hpp"
#include "qpc/spectrum.hpp"
#include "qpc_cli/cli.hpp"

namespace qpc::cli {

nlohmann::json spec_to_json(const Code& c) {
    const CodeSpec& s = c.spec();
    nlohmann::json j;
    j["n"] = s.n;
    j["r"] = s.r;
    j["k"] = s.n - rank(c.parity_check());
    j["d"] = s.d == kUnboundedDistance ? nlohmann::json(nullptr) : nlohmann::json(s.d);
    j["lineage"] = {
        {"seed", s.lineage.seed},
        {"doublings", s.lineage.doublings},
        {"g", s.lineage.g < 0 ? nlohmann::json(nullptr) : nlohmann::json(s.lineage.g)},
        {"shortened", s.lineage.shortened},
    };
    return j;
}

CodeSpec spec_from_json(const nlohmann::json& j) {
    try {
        CodeSpec s;
        s.n = j.at("n").get<std::size_t>();
        s.r = j.at("r").get<std::size_t>();
        s.d = j.at("d").is_null() ? kUnboundedDistance : j.at("d").get<unsigned>();
        const auto& l = j.at("lineage");
        s.lineage.seed = l.at("seed").get<std::string>();
        s.lineage.doublings = l.at("doublings").get<std::size_t>();
        s.lineage.g = l.at("g").is_null() ? -1 : l.at("g").get<int>();
        s.lineage.shortened = l.at("shortened").get<std::vector<std::size_t>>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("malformed code sidecar: ") + e.what());
    }
}

namespace {

Code default_general(std::size_t r, unsigned g) {
    switch (g) {
        case 0: return general_qp(r, 0, seed(SeedName::M));
        case 2: return general_qp(r, 2, seed(SeedName::S));
        case 3: return general_qp(r, 3, seed(SeedName::Example9));
        default: throw PreconditionError("no seed available for g = " + std::to_string(g));
    }
}

std::optional<Code> named_code(const std::string& name) {
    static const std::regex eh(R"((?:eh|hamming)(\d+))");
    static const std::regex pan(R"(panchenko(\d+))");
    static const std::regex qp(R"(qp(\d+)g(\d+))");
    std::smatch m;
    if (std::regex_match(name, m, eh)) {
        return extended_hamming(std::stoul(m[1]));
    }
    if (std::regex_match(name, m, pan)) {
        return panchenko(std::stoul(m[1]));
    }
    if (std::regex_match(name, m, qp)) {
        return default_general(std::stoul(m[1]), static_cast<unsigned>(std::stoul(m[2])));
    }
    if (name == "M" || name == "S" || name == "EH3" || name == "example_9_5") {
        return seed(name);
    }
    return std::nullopt;
}

}  // namespace

ResolvedCode resolve_code(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    const fs::path path(name_or_path);
    std::error_code ec;
    if (fs::is_regular_file(path, ec)) {
        std::ifstream in(path);
        BitMatrix h = read_matrix(in);
        fs::path sidecar = path;
        sidecar += ".json";
        if (fs::is_regular_file(sidecar, ec)) {
            std::ifstream sj(sidecar);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(sj);
            } catch (const nlohmann::json::exception& e) {
                throw PreconditionError("cannot parse " + sidecar.string() + ": " + e.what());
            }
            return {Code(spec_from_json(j), std::move(h)), path.string(), path, sidecar};
        }
        CodeSpec spec;
        spec.n = h.cols();
        spec.r = h.rows();
        spec.d = rank(h) <= kOracleMaxRank ? minimum_distance(oracle_spectrum(h)) : 0;
        return {Code(std::move(spec), std::move(h)), path.string(), path, std::nullopt};
    }
    if (auto c = named_code(name_or_path)) {
        return {std::move(*c), name_or_path, std::nullopt, std::nullopt};
    }
    throw PreconditionError("'" + name_or_path +
                            "' is neither a matrix file nor a code name (ehR, hammingR, panchenkoR, qpRgG, M, S, EH3, "
                            "example_9_5)");
}

std::optional<std::pair<std::string, std::size_t>> table_family(const Code& c) {
    const Lineage& l = c.spec().lineage;
    if (!l.shortened.empty()) {
        return std::nullopt;
    }
    const std::size_t r = c.redundancy();
    if ((l.seed == "EH3" && l.doublings + 3 == r) || (l.seed == "M" && l.doublings + 2 == r)) {
        return std::pair<std::string, std::size_t>{"Hamming", r};
    }
    if (l.seed == "S" && l.doublings + 4 == r) {
        return std::pair<std::string, std::size_t>{"Panchenko", r};
    }
    return std::nullopt;
}

}  // namespace qpc::cli
