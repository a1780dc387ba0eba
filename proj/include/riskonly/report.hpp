#pragma once

#include <string>
#include <vector>

#include "riskonly/backtest.hpp"

namespace riskonly {

/// One study, fully determined by a single config file.
struct RunConfig {
    std::string panel_path;
    BacktestConfig backtest;
    double risk_free_rate = 0.0;  // annual decimal, for Sharpe
    std::string output_dir = ".";
    std::vector<std::string> formats{"csv"};
};

/// Parses and validates the JSON config file. Unknown keys are rejected.
RunConfig load_run_config(const std::string& path);

/// 64-bit FNV-1a over the canonical serialized config, excluding the output
/// directory (which does not affect results). Hex string, stamped into every
/// report header.
std::string config_hash(const RunConfig& config);

/// Checks the config against the panel without running the backtest:
/// panel loads, history covers the window, benchmark map matches the assets.
/// Returns a human-readable summary; throws a typed Error on any problem.
std::string validate_study(const RunConfig& config);

/// Runs the full study and writes the report files (summary, cumulative,
/// correlations, turnover, assets, allocations, concentration) atomically
/// into the output directory. Returns the paths written. On error nothing
/// is left behind.
std::vector<std::string> run_study(const RunConfig& config);

}  // namespace riskonly
