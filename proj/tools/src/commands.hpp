// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "config.hpp"

namespace derw_lab {

// Exit codes: 0 success, 1 config error, 2 regime/theorem not applicable,
// 3 numerical failure. Config problems are thrown as ConfigError and mapped
// by the caller; these functions return 0/2/3.

int cmd_regime(const ExperimentConfig& config);
int cmd_normalizers(const ExperimentConfig& config);
int cmd_simulate(const ExperimentConfig& config);
int cmd_clt(const ExperimentConfig& config);
int cmd_lil(const ExperimentConfig& config);
int cmd_mconv(const ExperimentConfig& config);
int cmd_lemmas(const ExperimentConfig& config);
int cmd_phase_scan(const ExperimentConfig& config);

}  // namespace derw_lab
