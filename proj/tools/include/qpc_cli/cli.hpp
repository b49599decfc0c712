#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpc/construct.hpp"

namespace qpc::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kPrecondition = 2,
    kConsistency = 3,
    kBudget = 4,
};

// Runs `qpc <args...>` (args excludes the program name) and returns the exit
// code. Results go to files or `out`; diagnostics and stray manifests to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Exit code for the exception currently being handled.
int exit_code_for_current_exception(std::ostream& err);

// CodeSpec <-> JSON sidecar.
nlohmann::json spec_to_json(const Code& c);
CodeSpec spec_from_json(const nlohmann::json& j);

// Named codes ("eh7", "hamming8", "panchenko7", "qp8g3", "S", ...) or a
// matrix file. A file's CodeSpec comes from FILE.json when present.
struct ResolvedCode {
    Code code;
    std::string label;
    std::optional<std::filesystem::path> file;
    std::optional<std::filesystem::path> sidecar;
};
ResolvedCode resolve_code(const std::string& name_or_path);

// Table family ("Hamming" / "Panchenko") and r for an unshortened code of
// either chain, from its lineage.
std::optional<std::pair<std::string, std::size_t>> table_family(const Code& c);

std::string sha256_file(const std::filesystem::path& p);

// Collects what a run did; written as JSON at the end of every run.
class RunManifest {
public:
    RunManifest(std::string command, std::vector<std::string> argv);

    nlohmann::json& parameters() { return params_; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void add_input(const std::filesystem::path& p);
    void add_output(const std::filesystem::path& p);
    void set_exit(int code, const std::string& message);

    nlohmann::json to_json() const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    nlohmann::json params_ = nlohmann::json::object();
    std::optional<std::uint64_t> seed_;
    std::vector<std::filesystem::path> inputs_;
    std::vector<std::filesystem::path> outputs_;
    int exit_code_ = 0;
    std::string message_;
};

std::string version();

}  // namespace qpc::cli
