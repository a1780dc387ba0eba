#pragma once

#include <Eigen/Core>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskonly/estimation.hpp"

namespace riskonly {

enum class StrategyId { Balanced, EqualWeight, MinVariance, RiskParity, LowBeta };

/// Canonical strategy ordering: fixed-weight benchmarks first, then the
/// risk-only strategies. Results and reports are merged in this order.
inline constexpr std::array<StrategyId, 5> kAllStrategies = {
    StrategyId::Balanced, StrategyId::EqualWeight, StrategyId::MinVariance,
    StrategyId::RiskParity, StrategyId::LowBeta};

std::string_view to_string(StrategyId id);
std::optional<StrategyId> strategy_from_string(std::string_view tag);

/// Long-only, fully invested allocation at one rebalance date.
struct WeightVector {
    Eigen::VectorXd weights;  // capital fractions, >= 0, sum 1
    int as_of = 0;            // month index of the rebalance date
    std::string strategy_id;
};

/// Covariance structure factor_var * beta beta^T + diag(idio_vars).
struct SingleFactorModel {
    Eigen::VectorXd betas;
    Eigen::VectorXd idio_vars;  // > 0 elementwise, return^2 units
    double factor_var = 0.0;    // >= 0
};

enum class RiskParityMode { Naive, Erc };

struct ErcOptions {
    double tolerance = 1e-10;  // max |RC_n - 1/N| at convergence
    int max_sweeps = 10000;
};

/// Minimum-variance weights: the unconstrained solution is proportional to
/// the row sums of the inverse covariance; if any weight comes out negative
/// the most-negative asset is removed and the reduced problem re-solved until
/// the allocation is long-only. Removed assets receive weight zero.
WeightVector min_variance_weights(const CovarianceEstimate& cov);

/// Builds the single-factor covariance and delegates to
/// min_variance_weights; diagnostic for the structure where w_n * idio_var_n
/// is affine in beta_n whenever the unconstrained weights are positive.
WeightVector single_factor_min_variance(const SingleFactorModel& model);

/// Naive mode: inverse-volatility weights (exact risk parity when
/// correlations are zero). Erc mode: cyclical fixed-point iteration on the
/// simplex until all fractional risk contributions equal 1/N.
WeightVector risk_parity_weights(const CovarianceEstimate& cov,
                                 RiskParityMode mode,
                                 const ErcOptions& options = {});

/// w_n proportional to 1 / max(beta_n, floor); the floor keeps the map total
/// for non-positive betas.
WeightVector low_beta_weights(const BetaEstimate& betas, double floor = 0.05);

WeightVector equal_weights(int n);

/// Fixed-weight benchmark allocation; every panel asset must be assigned and
/// the fractions must sum to one.
WeightVector balanced_weights(const std::vector<std::string>& assets,
                              const std::map<std::string, double>& assignment);

}  // namespace riskonly
