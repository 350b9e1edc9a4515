// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "serialize.hpp"
#include "sha256.hpp"
#include "version.hpp"

namespace derw_lab {

using nlohmann::json;

namespace {

std::string utc_now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace

json write_outputs(const std::string& command, const ExperimentConfig& config,
                   const derw::RegimeReport& regime, const json& normalizer_summary,
                   const std::vector<OutputFile>& files) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);

    json inventory = json::array();
    for (const auto& file : files) {
        write_file(dir / file.name, file.content);
        inventory.push_back({{"name", file.name},
                             {"bytes", file.content.size()},
                             {"sha256", sha256_hex(file.content)}});
    }

    const json config_json = config_to_json(config);
    json manifest;
    manifest["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    manifest["command"] = command;
    manifest["created_utc"] = utc_now_iso8601();
    manifest["config"] = config_json;
    manifest["config_hash"] = sha256_hex(config_json.dump());
    manifest["regime"] = regime_json(regime);
    manifest["normalizers"] = normalizer_summary;
    manifest["files"] = inventory;

    const auto tmp = dir / "run_manifest.json.tmp";
    write_file(tmp, manifest.dump(2) + "\n");
    std::filesystem::rename(tmp, dir / "run_manifest.json");
    return manifest;
}

}  // namespace derw_lab
