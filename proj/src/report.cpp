#include "riskonly/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riskonly/analytics.hpp"
#include "riskonly/version.hpp"

namespace riskonly {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string_view weighting_tag(WeightingScheme s) {
    return s == WeightingScheme::Equal ? "equal" : "exponential";
}

std::string_view mode_tag(RiskParityMode m) {
    return m == RiskParityMode::Naive ? "naive" : "erc";
}

json require_key(const json& obj, const char* key) {
    if (!obj.contains(key))
        throw Error(Errc::ConfigError, std::string("missing config key '") + key + "'");
    return obj.at(key);
}

// Canonical form used for hashing: sorted keys, output location excluded.
json canonical_config(const RunConfig& config) {
    json j;
    j["panel"] = config.panel_path;
    j["window"] = config.backtest.window;
    j["cost_rates"] = config.backtest.cost_rates;
    std::vector<std::string> tags;
    for (StrategyId id : config.backtest.strategies) tags.emplace_back(to_string(id));
    j["strategies"] = tags;
    j["risk_parity_mode"] = mode_tag(config.backtest.risk_parity_mode);
    j["low_beta_floor"] = config.backtest.low_beta_floor;
    j["covariance_weighting"] = weighting_tag(config.backtest.estimator.scheme);
    j["exp_halflife_months"] = config.backtest.estimator.exp_halflife_months;
    j["benchmark"] = config.backtest.balanced_assignment;
    j["risk_free_rate"] = config.risk_free_rate;
    j["formats"] = config.formats;
    return j;
}

}  // namespace

std::string config_hash(const RunConfig& config) {
    const std::string text = canonical_config(config).dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream file(path);
    if (!file.is_open())
        throw Error(Errc::ConfigError, "cannot open config file '" + path + "'");
    json j;
    try {
        file >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, "config '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::ConfigError, "config root must be an object");

    static const std::set<std::string> known = {
        "panel",          "window",          "cost_rates",         "strategies",
        "risk_parity_mode", "low_beta_floor", "covariance_weighting",
        "exp_halflife_months", "benchmark",   "risk_free_rate",     "output_dir",
        "formats"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw Error(Errc::ConfigError, "unknown config key '" + key + "'");

    RunConfig config;
    try {
        config.panel_path = require_key(j, "panel").get<std::string>();
        config.backtest.window = j.value("window", 36);
        if (j.contains("cost_rates"))
            config.backtest.cost_rates = j.at("cost_rates").get<std::vector<double>>();
        if (j.contains("strategies")) {
            config.backtest.strategies.clear();
            for (const auto& tag : j.at("strategies")) {
                const auto id = strategy_from_string(tag.get<std::string>());
                if (!id)
                    throw Error(Errc::ConfigError,
                                "unknown strategy '" + tag.get<std::string>() + "'");
                config.backtest.strategies.push_back(*id);
            }
        }
        if (j.contains("risk_parity_mode")) {
            const auto mode = j.at("risk_parity_mode").get<std::string>();
            if (mode == "naive")
                config.backtest.risk_parity_mode = RiskParityMode::Naive;
            else if (mode == "erc")
                config.backtest.risk_parity_mode = RiskParityMode::Erc;
            else
                throw Error(Errc::ConfigError, "risk_parity_mode must be naive or erc");
        }
        config.backtest.low_beta_floor = j.value("low_beta_floor", 0.05);
        if (j.contains("covariance_weighting")) {
            const auto scheme = j.at("covariance_weighting").get<std::string>();
            if (scheme == "equal")
                config.backtest.estimator.scheme = WeightingScheme::Equal;
            else if (scheme == "exponential")
                config.backtest.estimator.scheme = WeightingScheme::Exponential;
            else
                throw Error(Errc::ConfigError,
                            "covariance_weighting must be equal or exponential");
        }
        config.backtest.estimator.exp_halflife_months = j.value("exp_halflife_months", 12.0);
        config.backtest.balanced_assignment =
            require_key(j, "benchmark").get<std::map<std::string, double>>();
        config.risk_free_rate = j.value("risk_free_rate", 0.0);
        config.output_dir = j.value("output_dir", std::string("."));
        if (j.contains("formats"))
            config.formats = j.at("formats").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(Errc::ConfigError, std::string("bad config value: ") + e.what());
    }

    if (config.backtest.window < 2)
        throw Error(Errc::ConfigError, "window must be >= 2 months");
    if (config.backtest.cost_rates.empty())
        throw Error(Errc::ConfigError, "cost_rates must not be empty");
    for (double c : config.backtest.cost_rates)
        if (!(c >= 0.0)) throw Error(Errc::ConfigError, "cost rates must be >= 0");
    if (config.backtest.strategies.empty())
        throw Error(Errc::ConfigError, "strategies must not be empty");
    if (!(config.backtest.low_beta_floor > 0.0))
        throw Error(Errc::ConfigError, "low_beta_floor must be > 0");
    if (config.formats.empty())
        throw Error(Errc::ConfigError, "formats must not be empty");
    for (const auto& f : config.formats)
        if (f != "csv" && f != "tsv")
            throw Error(Errc::ConfigError, "unsupported report format '" + f + "'");

    // relative paths are resolved against the config file's directory
    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&base](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() || base.empty() ? fp.string() : (base / fp).string();
    };
    config.panel_path = resolve(config.panel_path);
    config.output_dir = resolve(config.output_dir);
    return config;
}

std::string validate_study(const RunConfig& config) {
    const ReturnPanel panel = load_panel_file(config.panel_path);
    if (panel.month_count() < config.backtest.window + 1)
        throw Error(Errc::InsufficientHistory,
                    "window of " + std::to_string(config.backtest.window) +
                        " months requires " + std::to_string(config.backtest.window + 1) +
                        " months of data, panel has " +
                        std::to_string(panel.month_count()));
    balanced_weights(panel.assets(), config.backtest.balanced_assignment);

    std::ostringstream out;
    out << "panel ok: " << panel.month_count() << " months x " << panel.asset_count()
        << " assets, " << to_string(panel.dates().front()) << " to "
        << to_string(panel.dates().back()) << "; " << (panel.month_count() - config.backtest.window)
        << " rebalance dates with a " << config.backtest.window << "-month window";
    return out.str();
}

namespace {

struct ConcentrationRow {
    double avg_hhi = 0.0;
    double avg_rdi_full = 0.0;
    double avg_rdi_simplified = 0.0;
    bool negative_rc_seen = false;
};

std::vector<ConcentrationRow> concentration_rows(const ReturnPanel& panel,
                                                 const BacktestResult& result,
                                                 const BacktestConfig& config) {
    std::vector<ConcentrationRow> rows(result.runs.size());
    const auto dates = static_cast<int>(result.months.size());
    for (int k = 0; k < dates; ++k) {
        const int t = result.months[static_cast<size_t>(k)];
        CovarianceEstimate cov;
        try {
            cov = sample_covariance(slice_window(panel, t, config.window), config.estimator);
        } catch (const Error& e) {
            throw Error(e.code(), e.detail() + " (concentration report at " +
                                      to_string(panel.dates()[static_cast<size_t>(t)]) + ")");
        }
        const Eigen::VectorXd vols = cov.matrix.diagonal().cwiseSqrt();
        for (size_t s = 0; s < result.runs.size(); ++s) {
            const auto& run = result.runs[s];
            WeightVector w{run.weights.row(k).transpose(), t,
                           std::string(to_string(run.id))};
            try {
                const RiskContributions rc = risk_contributions(w, cov);
                rows[s].avg_hhi += hhi(w);
                rows[s].avg_rdi_full += rdi_full(rc, panel.asset_count());
                rows[s].avg_rdi_simplified += rdi_simplified(w, vols);
                if ((rc.rc.array() < 0.0).any()) rows[s].negative_rc_seen = true;
            } catch (const Error& e) {
                throw Error(e.code(),
                            e.detail() + " (concentration report, strategy " +
                                std::string(to_string(run.id)) + " at " +
                                to_string(panel.dates()[static_cast<size_t>(t)]) + ")");
            }
        }
    }
    for (auto& row : rows) {
        row.avg_hhi /= dates;
        row.avg_rdi_full /= dates;
        row.avg_rdi_simplified /= dates;
    }
    return rows;
}

class ReportWriter {
public:
    ReportWriter(fs::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {}

    /// Stages one report; `body` holds schema header plus data rows.
    void stage(const std::string& name, const std::string& extension,
               const std::vector<std::string>& metadata, const std::string& body) {
        std::ostringstream out;
        out << "# riskonly report: " << name << '\n';
        out << "# config_hash: " << hash_ << '\n';
        out << "# tool_version: " << kVersion << '\n';
        for (const auto& line : metadata) out << "# " << line << '\n';
        out << body;
        staged_.emplace_back(name + "." + extension, out.str());
    }

    /// Write-temp-then-rename for every staged report; on failure removes
    /// everything this call created.
    std::vector<std::string> commit() {
        std::vector<std::string> written;
        std::vector<fs::path> temps;
        try {
            fs::create_directories(dir_);
            for (const auto& [name, text] : staged_) {
                const fs::path tmp = dir_ / (name + ".tmp");
                temps.push_back(tmp);
                std::ofstream out(tmp, std::ios::binary);
                if (!out) throw Error(Errc::IoError, "cannot write '" + tmp.string() + "'");
                out << text;
                out.close();
                if (!out) throw Error(Errc::IoError, "write failed for '" + tmp.string() + "'");
                const fs::path final_path = dir_ / name;
                fs::rename(tmp, final_path);
                temps.pop_back();
                written.push_back(final_path.string());
            }
        } catch (...) {
            std::error_code ec;
            for (const auto& t : temps) fs::remove(t, ec);
            for (const auto& w : written) fs::remove(w, ec);
            throw;
        }
        return written;
    }

private:
    fs::path dir_;
    std::string hash_;
    std::vector<std::pair<std::string, std::string>> staged_;
};

}  // namespace

std::vector<std::string> run_study(const RunConfig& config) {
    const ReturnPanel panel = load_panel_file(config.panel_path);
    const BacktestResult result = run_backtest(panel, config.backtest);
    const std::string hash = config_hash(config);

    const auto& months = result.months;
    const auto M = months.size();
    auto date_of = [&](size_t k) {
        return to_string(panel.dates()[static_cast<size_t>(months[k])]);
    };

    // stats per strategy x cost rate
    struct SummaryRow {
        std::string strategy;
        double cost = 0.0;
        PerformanceStats stats;
        double avg_turnover = 0.0;
        double final_index = 1.0;
    };
    std::vector<SummaryRow> summary;
    for (const auto& run : result.runs) {
        double avg_turnover = 0.0;
        for (size_t k = 1; k < run.turnover.size(); ++k) avg_turnover += run.turnover[k];
        if (run.turnover.size() > 1)
            avg_turnover /= static_cast<double>(run.turnover.size() - 1);
        for (size_t c = 0; c < result.cost_rates.size(); ++c) {
            SummaryRow row;
            row.strategy = to_string(run.id);
            row.cost = result.cost_rates[c];
            row.stats = annualize(run.net[c], config.risk_free_rate);
            row.avg_turnover = avg_turnover;
            row.final_index = run.cum_index[c].back();
            summary.push_back(std::move(row));
        }
    }

    // cost-free correlations between strategies
    std::vector<std::pair<std::string, std::vector<double>>> gross_series;
    for (const auto& run : result.runs)
        gross_series.emplace_back(std::string(to_string(run.id)), run.gross);
    const CorrelationMatrix correlations = strategy_correlations(gross_series);

    // per-asset statistics over the full panel
    std::vector<std::pair<std::string, PerformanceStats>> asset_stats;
    for (int i = 0; i < panel.asset_count(); ++i) {
        std::vector<double> column(panel.returns().col(i).data(),
                                   panel.returns().col(i).data() + panel.month_count());
        asset_stats.emplace_back(panel.assets()[static_cast<size_t>(i)],
                                 annualize(column, config.risk_free_rate));
    }

    const auto concentration = concentration_rows(panel, result, config.backtest);

    ReportWriter writer(config.output_dir, hash);
    for (const auto& format : config.formats) {
        const char d = format == "tsv" ? '\t' : ',';

        {
            std::ostringstream body;
            body << "strategy" << d << "cost_rate" << d << "annualized_return" << d
                 << "annualized_volatility" << d << "sharpe_ratio" << d
                 << "average_turnover" << d << "final_index" << '\n';
            for (const auto& row : summary) {
                body << row.strategy << d << fmt(row.cost) << d
                     << fmt(row.stats.annualized_return) << d
                     << fmt(row.stats.annualized_volatility) << d;
                if (row.stats.sharpe_ratio) body << fmt(*row.stats.sharpe_ratio);
                body << d << fmt(row.avg_turnover) << d << fmt(row.final_index) << '\n';
            }
            writer.stage("summary", format,
                         {"annualization: geometric monthly compounding, volatility scaled "
                          "by sqrt(12), stdev divisor T-1",
                          "risk_free_rate: " + fmt(config.risk_free_rate),
                          "net returns: gross - cost_rate * turnover; the initial purchase "
                          "carries no cost",
                          "average_turnover: mean rebalancing turnover, initial purchase "
                          "excluded"},
                         body.str());
        }

        {
            std::ostringstream body;
            body << "date";
            for (const auto& run : result.runs)
                for (double c : result.cost_rates)
                    body << d << to_string(run.id) << '@' << fmt(c);
            body << '\n';
            for (size_t k = 0; k < M; ++k) {
                body << date_of(k);
                for (const auto& run : result.runs)
                    for (size_t c = 0; c < result.cost_rates.size(); ++c)
                        body << d << fmt(run.cum_index[c][k]);
                body << '\n';
            }
            writer.stage("cumulative", format,
                         {"net cumulative return index, base 1.0 before the first listed "
                          "month"},
                         body.str());
        }

        {
            std::ostringstream body;
            body << "strategy";
            for (const auto& name : correlations.names) body << d << name;
            body << '\n';
            for (size_t i = 0; i < correlations.names.size(); ++i) {
                body << correlations.names[i];
                for (size_t j = 0; j < correlations.names.size(); ++j)
                    body << d << fmt(correlations.values(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j)));
                body << '\n';
            }
            writer.stage("correlations", format,
                         {"pearson correlation of monthly cost-free strategy returns"},
                         body.str());
        }

        {
            std::ostringstream body;
            body << "date";
            for (const auto& run : result.runs) body << d << to_string(run.id);
            body << '\n';
            for (size_t k = 1; k < M; ++k) {
                body << date_of(k);
                for (const auto& run : result.runs) body << d << fmt(run.turnover[k]);
                body << '\n';
            }
            writer.stage("turnover", format,
                         {"rebalancing turnover: min(buys, sells) against the drifted "
                          "previous allocation",
                          "initial_purchase_turnover: 1 per strategy at " +
                              (M > 0 ? date_of(0) : std::string("-")) +
                              ", excluded from cost-adjusted returns"},
                         body.str());
        }

        {
            std::ostringstream body;
            body << "asset" << d << "annualized_return" << d << "annualized_volatility" << d
                 << "sharpe_ratio" << '\n';
            for (const auto& [name, stats] : asset_stats) {
                body << name << d << fmt(stats.annualized_return) << d
                     << fmt(stats.annualized_volatility) << d;
                if (stats.sharpe_ratio) body << fmt(*stats.sharpe_ratio);
                body << '\n';
            }
            writer.stage("assets", format, {"statistics over the full panel history"}, body.str());
        }

        {
            std::ostringstream body;
            body << "strategy";
            for (const auto& asset : panel.assets()) body << d << asset;
            body << '\n';
            for (const auto& run : result.runs) {
                const Eigen::VectorXd avg = average_allocation(run.weights);
                body << to_string(run.id);
                for (Eigen::Index i = 0; i < avg.size(); ++i) body << d << fmt(avg(i));
                body << '\n';
            }
            writer.stage("allocations", format,
                         {"mean target weight per asset across rebalance dates"},
                         body.str());
        }

        {
            std::ostringstream body;
            body << "strategy" << d << "avg_hhi" << d << "avg_rdi_full" << d
                 << "avg_rdi_simplified" << '\n';
            std::vector<std::string> metadata = {
                "indices averaged over rebalance dates from each date's target weights "
                "and covariance estimate"};
            for (size_t s = 0; s < result.runs.size(); ++s) {
                if (concentration[s].negative_rc_seen)
                    metadata.push_back("warning: negative risk contributions encountered "
                                       "for strategy " +
                                       std::string(to_string(result.runs[s].id)));
                body << to_string(result.runs[s].id) << d << fmt(concentration[s].avg_hhi)
                     << d << fmt(concentration[s].avg_rdi_full) << d
                     << fmt(concentration[s].avg_rdi_simplified) << '\n';
            }
            writer.stage("concentration", format, metadata, body.str());
        }

    }
    return writer.commit();
}

}  // namespace riskonly
