#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "riskonly/strategies.hpp"

namespace riskonly {

struct BacktestConfig {
    int window = 36;  // estimation window, months
    std::vector<double> cost_rates{0.0, 0.001, 0.005};  // per unit turnover
    std::vector<StrategyId> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    RiskParityMode risk_parity_mode = RiskParityMode::Naive;
    double low_beta_floor = 0.05;
    /// Fixed fractions for the balanced strategy; also defines the benchmark
    /// return series used by the low-beta strategy.
    std::map<std::string, double> balanced_assignment;
    EstimatorOptions estimator;
};

/// One strategy's series over the backtest months [window, T).
struct StrategyRun {
    StrategyId id{};
    std::vector<double> gross;                  // length M = T - window
    std::vector<std::vector<double>> net;       // [cost_rate][month]
    std::vector<std::vector<double>> cum_index; // [cost_rate][month], base 1.0
    Eigen::MatrixXd weights;                    // M x N target weights
    /// Rebalancing turnover; entry 0 is 0.0 (the initial purchase is not a
    /// rebalancing trade and carries no cost — see initial_turnover).
    std::vector<double> turnover;
    /// The first month's full purchase, recorded separately and excluded
    /// from cost-adjusted returns.
    double initial_turnover = 1.0;
};

struct BacktestResult {
    std::vector<int> months;  // panel month indices, window..T-1
    std::vector<double> cost_rates;
    std::vector<StrategyRun> runs;  // canonical strategy order
};

/// Post-period weights after one month of differential returns:
/// w_i (1 + r_i) / (1 + w.r). Throws PortfolioWipeout when the portfolio
/// return reaches -100%.
WeightVector drift_weights(const WeightVector& w,
                           const Eigen::VectorXd& period_returns);

/// min(total buys, total sells) between the drifted previous allocation and
/// the new target; the two legs coincide for fully invested long-only books.
double turnover(const WeightVector& previous_drifted, const WeightVector& target);

/// Monthly rebalancing loop: for each month t in [window, T) estimate over
/// [t-window, t), map estimates to target weights, realize the month's gross
/// return, measure turnover against the drifted previous allocation, and
/// deduct proportional costs. Errors from estimation or a strategy abort the
/// run annotated with the failing strategy and date.
BacktestResult run_backtest(const ReturnPanel& panel, const BacktestConfig& config);

}  // namespace riskonly
