#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskonly/estimation.hpp"
#include "riskonly/strategies.hpp"

namespace riskonly {

struct PerformanceStats {
    double annualized_return = 0.0;      // decimal per year
    double annualized_volatility = 0.0;  // decimal per sqrt(year)
    /// Absent when volatility is zero.
    std::optional<double> sharpe_ratio;
};

/// Fractional (Euler) risk contributions; entries sum to 1 when
/// portfolio_vol > 0.
struct RiskContributions {
    Eigen::VectorXd rc;
    double portfolio_vol = 0.0;
};

struct CorrelationMatrix {
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // Pearson, diagonal exactly 1
};

/// Geometric annualization of a monthly series: (prod(1+r))^(12/T) - 1,
/// stdev * sqrt(12) with the T-1 divisor, Sharpe on the annualized figures.
PerformanceStats annualize(const std::vector<double>& monthly_returns,
                           double risk_free_annual = 0.0);

/// Pairwise Pearson correlations of equally long monthly return series.
CorrelationMatrix strategy_correlations(
    const std::vector<std::pair<std::string, std::vector<double>>>& series);

/// Normalized Herfindahl-Hirschman index of capital weights:
/// ((sum w^2) - 1/N) / (1 - 1/N); 0 at equal weights, 1 at full
/// concentration.
double hhi(const WeightVector& w);

/// RC_n = w_n (Sigma w)_n / (w' Sigma w); portfolio_vol = sqrt(w' Sigma w).
RiskContributions risk_contributions(const WeightVector& w,
                                     const CovarianceEstimate& cov);

/// Risk diversification index: the HHI analog over fractional risk
/// contributions. Evaluates the formula as written even for out-of-range
/// contributions (callers attach a warning for negative inputs).
double rdi_full(const RiskContributions& rc, int n);

/// Simplified RDI under the zero-correlation assumption:
/// ((sum w^4 s^4)/(sum w^2 s^2)^2 - 1/N) / (1 - 1/N).
double rdi_simplified(const WeightVector& w, const Eigen::VectorXd& vols);

/// Arithmetic mean of weights per asset across rebalance dates (rows).
Eigen::VectorXd average_allocation(const Eigen::MatrixXd& weight_history);
Eigen::VectorXd average_allocation(const std::vector<WeightVector>& history);

}  // namespace riskonly
