#include "hbeta/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include <openssl/evp.h>

#include "hbeta/errors.hpp"
#include "hbeta/io.hpp"

namespace hbeta {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(io::read_file(path)); }

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string library_version() { return HBETA_VERSION; }

namespace {

nlohmann::json digests_json(const std::vector<FileDigest>& files) {
    auto arr = nlohmann::json::array();
    for (const auto& f : files) arr.push_back({{"path", f.path}, {"sha256", f.sha256}});
    return arr;
}

std::vector<FileDigest> digests_from(const nlohmann::json& arr) {
    std::vector<FileDigest> out;
    for (const auto& f : arr) out.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>()});
    return out;
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
    return {{"command", m.command},     {"argv", m.argv},         {"config", m.config},
            {"seed", m.seed},           {"version", m.version},   {"inputs", digests_json(m.inputs)},
            {"outputs", digests_json(m.outputs)}, {"started", m.started}, {"finished", m.finished}};
}

RunManifest manifest_from_json(const nlohmann::json& j) {
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.config = j.at("config");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.at("version").get<std::string>();
        m.inputs = digests_from(j.at("inputs"));
        m.outputs = digests_from(j.at("outputs"));
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

void write_manifest(const fs::path& dir, RunManifest manifest, const std::vector<std::string>& outputs) {
    if (manifest.finished.empty()) manifest.finished = utc_now();
    manifest.outputs.clear();
    for (const auto& name : outputs) manifest.outputs.push_back({name, sha256_file(dir / name)});
    io::write_file_atomic(dir / kManifestName, to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path) {
    const std::string text = io::read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return manifest_from_json(j);
}

}  // namespace hbeta
