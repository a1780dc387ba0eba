#pragma once

#include <Eigen/Core>
#include <string>

#include "riskonly/market_data.hpp"

namespace riskonly {

enum class WeightingScheme { Equal, Exponential };

struct EstimatorOptions {
    WeightingScheme scheme = WeightingScheme::Equal;
    /// Half-life in months for the exponential scheme; ignored otherwise.
    double exp_halflife_months = 12.0;
};

/// N x N covariance of monthly returns over one estimation window
/// (monthly return^2 units).
struct CovarianceEstimate {
    Eigen::MatrixXd matrix;
    int window_end = 0;     // month index just after the window
    int window_length = 0;  // months
};

struct BetaEstimate {
    Eigen::VectorXd betas;
    std::string benchmark_id;
    int window_end = 0;
};

/// Sample covariance over the slice. Equal weighting uses the unbiased
/// T-1 divisor: C(i,j) = 1/(L-1) * sum_t (r_ti - mean_i)(r_tj - mean_j).
/// The exponential scheme applies normalized half-life decay weights with
/// the 1/(1 - sum p^2) small-sample correction.
CovarianceEstimate sample_covariance(const PanelSlice& slice,
                                     const EstimatorOptions& options = {});

/// Regression betas of each asset against a benchmark return series covering
/// the whole panel (indexed by the slice), with the same estimator settings
/// as sample_covariance: beta_n = cov(r_n, r_B) / var(r_B).
BetaEstimate benchmark_beta(const PanelSlice& slice,
                            const Eigen::VectorXd& benchmark_returns,
                            const std::string& benchmark_id,
                            const EstimatorOptions& options = {});

}  // namespace riskonly
