#pragma once

// Run manifests: what was run, with which inputs and outputs, so a run can
// be replayed and its outputs compared digest for digest.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace hbeta {

namespace fs = std::filesystem;

struct FileDigest {
    std::string path;
    std::string sha256;
};

struct RunManifest {
    std::string command;
    /// Full argument vector after the program name; replay re-runs it.
    std::vector<std::string> argv;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<FileDigest> inputs;
    /// Output files relative to the output directory.
    std::vector<FileDigest> outputs;
    std::string started;
    std::string finished;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const fs::path& path);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_now();

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

inline constexpr const char* kManifestName = "manifest.json";

/// Digests every listed output under dir and writes dir/manifest.json atomically.
void write_manifest(const fs::path& dir, RunManifest manifest, const std::vector<std::string>& outputs);
RunManifest read_manifest(const fs::path& path);

std::string library_version();

}  // namespace hbeta
