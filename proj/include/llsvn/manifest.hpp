// manifest.hpp - run manifests: enough provenance (config snapshot, seed,
// input digests, tool version) to rerun any command and get the same bytes
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "llsvn/common.hpp"

namespace llsvn {

// Streamed FNV-1a over the file's bytes; order-stable and fast enough for
// trade files of a few hundred MB.
inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path.string());
    std::uint64_t h = fnv1a64("");
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
    }
    return to_hex(h);
}

// Write-to-temp-then-rename so readers never see a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw DataError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct ManifestInput {
    std::string path;
    std::string digest;

    bool operator==(const ManifestInput&) const = default;
};

struct RunManifest {
    std::string command;
    std::string version = kVersion;
    nlohmann::json config = nlohmann::json::object();
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<ManifestInput> inputs;
    std::vector<std::string> outputs;
    double wall_ms = 0.0;

    void add_input(const std::filesystem::path& path) {
        inputs.push_back({path.string(), file_digest(path)});
    }
};

inline nlohmann::json manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["format"] = "llsvn-manifest";
    j["command"] = m.command;
    j["version"] = m.version;
    j["config"] = m.config;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : m.inputs) {
        j["inputs"].push_back({{"path", in.path}, {"digest", in.digest}});
    }
    j["outputs"] = m.outputs;
    j["wall_ms"] = m.wall_ms;
    return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "llsvn-manifest") {
        throw ParseError(0, "not a run manifest");
    }
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.version = j.at("version").get<std::string>();
        m.config = j.at("config");
        m.config_hash = j.at("config_hash").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& in : j.at("inputs")) {
            m.inputs.push_back({in.at("path").get<std::string>(), in.at("digest").get<std::string>()});
        }
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.wall_ms = j.at("wall_ms").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("bad run manifest: ") + e.what());
    }
    return m;
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
    write_file_atomic(path, manifest_json(m).dump(2) + "\n");
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, path.string() + ": " + e.what());
    }
    return manifest_from_json(j);
}

}  // namespace llsvn
