// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "derw/model.hpp"

namespace derw_lab {

struct OutputFile {
    std::string name;
    std::string content;
};

/// Writes every report file into out_dir, then composes and writes
/// run_manifest.json last (temp file + rename) as the completion marker.
/// Returns the manifest.
nlohmann::json write_outputs(const std::string& command, const ExperimentConfig& config,
                             const derw::RegimeReport& regime,
                             const nlohmann::json& normalizer_summary,
                             const std::vector<OutputFile>& files);

}  // namespace derw_lab
