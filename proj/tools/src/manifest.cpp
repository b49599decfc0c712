#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "qpc/errors.hpp"
#include "qpc_cli/cli.hpp"

namespace qpc::cli {

std::string version() { return QPC_VERSION; }

std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw PreconditionError("cannot read " + p.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[md[i] >> 4];
        out += kHex[md[i] & 15];
    }
    return out;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)) {}

void RunManifest::add_input(const std::filesystem::path& p) { inputs_.push_back(p); }
void RunManifest::add_output(const std::filesystem::path& p) { outputs_.push_back(p); }

void RunManifest::set_exit(int code, const std::string& message) {
    exit_code_ = code;
    message_ = message;
}

nlohmann::json RunManifest::to_json() const {
    auto digests = [](const std::vector<std::filesystem::path>& files) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& f : files) {
            nlohmann::json e{{"path", f.string()}};
            std::error_code ec;
            if (std::filesystem::is_regular_file(f, ec)) {
                e["sha256"] = sha256_file(f);
            } else {
                e["sha256"] = nullptr;
            }
            arr.push_back(e);
        }
        return arr;
    };
    nlohmann::json j;
    j["command"] = command_;
    j["argv"] = argv_;
    j["parameters"] = params_;
    j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
    j["version"] = version();
    j["inputs"] = digests(inputs_);
    j["outputs"] = digests(outputs_);
    j["exit_code"] = exit_code_;
    if (!message_.empty()) {
        j["message"] = message_;
    }
    return j;
}

}  // namespace qpc::cli
