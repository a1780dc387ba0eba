#include "riskonly/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <utility>

#include "riskonly/analytics.hpp"

namespace riskonly {

WeightVector drift_weights(const WeightVector& w, const Eigen::VectorXd& period_returns) {
    if (period_returns.size() != w.weights.size())
        throw Error(Errc::MalformedRow, "return vector length does not match weights");
    const double portfolio_return = w.weights.dot(period_returns);
    if (!(1.0 + portfolio_return > 0.0))
        throw Error(Errc::PortfolioWipeout, "portfolio return reached -100%");
    Eigen::VectorXd drifted =
        w.weights.cwiseProduct((1.0 + period_returns.array()).matrix()) /
        (1.0 + portfolio_return);
    return WeightVector{std::move(drifted), w.as_of, w.strategy_id};
}

double turnover(const WeightVector& previous_drifted, const WeightVector& target) {
    if (previous_drifted.weights.size() != target.weights.size())
        throw Error(Errc::MalformedRow, "weight vectors cover different asset sets");
    const Eigen::ArrayXd diff = target.weights.array() - previous_drifted.weights.array();
    const double buys = diff.max(0.0).sum();
    const double sells = (-diff).max(0.0).sum();
    return std::min(buys, sells);
}

namespace {

struct StrategyContext {
    const ReturnPanel* panel;
    const BacktestConfig* config;
    const WeightVector* balanced;        // null unless needed
    const Eigen::VectorXd* bench_series; // null unless needed
};

WeightVector target_weights(StrategyId id, const StrategyContext& ctx, int t) {
    const auto& cfg = *ctx.config;
    switch (id) {
        case StrategyId::Balanced: {
            WeightVector w = *ctx.balanced;
            w.as_of = t;
            return w;
        }
        case StrategyId::EqualWeight: {
            WeightVector w = equal_weights(ctx.panel->asset_count());
            w.as_of = t;
            return w;
        }
        case StrategyId::MinVariance: {
            const auto slice = slice_window(*ctx.panel, t, cfg.window);
            return min_variance_weights(sample_covariance(slice, cfg.estimator));
        }
        case StrategyId::RiskParity: {
            const auto slice = slice_window(*ctx.panel, t, cfg.window);
            return risk_parity_weights(sample_covariance(slice, cfg.estimator),
                                       cfg.risk_parity_mode);
        }
        case StrategyId::LowBeta: {
            const auto slice = slice_window(*ctx.panel, t, cfg.window);
            return low_beta_weights(
                benchmark_beta(slice, *ctx.bench_series, "balanced", cfg.estimator),
                cfg.low_beta_floor);
        }
    }
    throw Error(Errc::ConfigError, "unknown strategy");
}

StrategyRun run_strategy(StrategyId id, const StrategyContext& ctx) {
    const ReturnPanel& panel = *ctx.panel;
    const BacktestConfig& cfg = *ctx.config;
    const int T = panel.month_count();
    const int window = cfg.window;
    const int M = T - window;
    const int N = panel.asset_count();

    StrategyRun run;
    run.id = id;
    run.gross.resize(static_cast<size_t>(M));
    run.turnover.assign(static_cast<size_t>(M), 0.0);
    run.weights = Eigen::MatrixXd::Zero(M, N);
    run.initial_turnover = 1.0;

    WeightVector previous;
    for (int t = window; t < T; ++t) {
        const int k = t - window;
        WeightVector target;
        try {
            target = target_weights(id, ctx, t);
        } catch (const Error& e) {
            throw Error(e.code(), e.detail() + " (strategy " + std::string(to_string(id)) +
                                      " at " +
                                      to_string(panel.dates()[static_cast<size_t>(t)]) + ")");
        }
        if (k > 0) {
            const WeightVector drifted =
                drift_weights(previous, panel.returns().row(t - 1).transpose());
            run.turnover[static_cast<size_t>(k)] = turnover(drifted, target);
        }
        run.gross[static_cast<size_t>(k)] =
            target.weights.dot(panel.returns().row(t).transpose());
        run.weights.row(k) = target.weights.transpose();
        previous = std::move(target);
    }

    const size_t costs = cfg.cost_rates.size();
    run.net.assign(costs, std::vector<double>(static_cast<size_t>(M)));
    run.cum_index.assign(costs, std::vector<double>(static_cast<size_t>(M)));
    for (size_t c = 0; c < costs; ++c) {
        double index = 1.0;
        for (int k = 0; k < M; ++k) {
            const double net = run.gross[static_cast<size_t>(k)] -
                               cfg.cost_rates[c] * run.turnover[static_cast<size_t>(k)];
            if (!(1.0 + net > 0.0))
                throw Error(Errc::PortfolioWipeout,
                            "net return reached -100% (strategy " +
                                std::string(to_string(id)) + " at " +
                                to_string(panel.dates()[static_cast<size_t>(window + k)]) +
                                ")");
            run.net[c][static_cast<size_t>(k)] = net;
            index *= 1.0 + net;
            run.cum_index[c][static_cast<size_t>(k)] = index;
        }
    }
    return run;
}

}  // namespace

BacktestResult run_backtest(const ReturnPanel& panel, const BacktestConfig& config) {
    if (config.window < 2)
        throw Error(Errc::ConfigError, "window must be >= 2 months");
    for (double c : config.cost_rates)
        if (c < 0.0) throw Error(Errc::ConfigError, "cost rates must be nonnegative");
    if (config.strategies.empty())
        throw Error(Errc::ConfigError, "no strategies configured");
    if (panel.month_count() < config.window + 1)
        throw Error(Errc::InsufficientHistory,
                    "window of " + std::to_string(config.window) + " months requires " +
                        std::to_string(config.window + 1) + " months of data, panel has " +
                        std::to_string(panel.month_count()));

    // canonical order, deduplicated
    std::vector<StrategyId> strategies;
    for (StrategyId id : kAllStrategies)
        if (std::find(config.strategies.begin(), config.strategies.end(), id) !=
            config.strategies.end())
            strategies.push_back(id);

    const bool needs_balanced =
        std::find(strategies.begin(), strategies.end(), StrategyId::Balanced) !=
        strategies.end();
    const bool needs_bench =
        std::find(strategies.begin(), strategies.end(), StrategyId::LowBeta) !=
        strategies.end();

    WeightVector balanced;
    Eigen::VectorXd bench_series;
    if (needs_balanced || needs_bench) {
        balanced = balanced_weights(panel.assets(), config.balanced_assignment);
        if (needs_bench) bench_series = panel.returns() * balanced.weights;
    }

    StrategyContext ctx{&panel, &config, &balanced, &bench_series};

    BacktestResult result;
    result.cost_rates = config.cost_rates;
    for (int t = config.window; t < panel.month_count(); ++t) result.months.push_back(t);

    // Strategies are independent; fan out and merge in canonical tag order.
    std::vector<std::future<StrategyRun>> futures;
    futures.reserve(strategies.size());
    for (StrategyId id : strategies)
        futures.push_back(std::async(std::launch::async,
                                     [id, &ctx]() { return run_strategy(id, ctx); }));
    std::exception_ptr first_error;
    for (auto& f : futures) {
        try {
            result.runs.push_back(f.get());
        } catch (...) {
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

}  // namespace riskonly
