#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riskonly/report.hpp"
#include "riskonly/version.hpp"

namespace {

// 0 success, 1 usage/config, 2 data, 3 numerical
int exit_code(const riskonly::Error& e) {
    switch (e.category()) {
        case riskonly::ErrorCategory::Config: return 1;
        case riskonly::ErrorCategory::Data: return 2;
        case riskonly::ErrorCategory::Numerical: return 3;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk-based portfolio construction, backtesting and reporting"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;

    auto* run = app.add_subcommand("run", "run a full study and write report files");
    run->add_option("--config", config_path, "path to the study config (JSON)")->required();
    run->add_option("--out", out_override, "override the config's output directory");

    auto* validate =
        app.add_subcommand("validate", "check config and panel without running");
    validate->add_option("--config", config_path, "path to the study config (JSON)")
        ->required();

    auto* version = app.add_subcommand("version", "print version and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (version->parsed()) {
            std::cout << "riskonly " << riskonly::kVersion << '\n';
            return 0;
        }
        riskonly::RunConfig config = riskonly::load_run_config(config_path);
        if (validate->parsed()) {
            std::cout << riskonly::validate_study(config) << '\n';
            return 0;
        }
        if (!out_override.empty()) config.output_dir = out_override;
        const auto written = riskonly::run_study(config);
        for (const auto& path : written) std::cout << path << '\n';
        return 0;
    } catch (const riskonly::Error& e) {
        std::cerr << "riskonly: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "riskonly: " << e.what() << '\n';
        return 1;
    }
}
