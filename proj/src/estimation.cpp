#include "riskonly/estimation.hpp"

#include <cmath>
#include <string>

#include "riskonly/errors.hpp"

namespace riskonly {

namespace {

// Normalized observation weights for the window, oldest first.
Eigen::VectorXd window_weights(int length, const EstimatorOptions& options) {
    Eigen::VectorXd p(length);
    if (options.scheme == WeightingScheme::Equal) {
        p.setConstant(1.0 / length);
        return p;
    }
    if (!(options.exp_halflife_months > 0.0))
        throw Error(Errc::ConfigError, "exponential half-life must be positive");
    for (int t = 0; t < length; ++t)
        p(t) = std::pow(0.5, (length - 1 - t) / options.exp_halflife_months);
    p /= p.sum();
    return p;
}

// Unbiased-analog divisor: equal weighting gives exactly 1/(L-1) after the
// 1/(1 - sum p^2) correction.
double bias_correction(const Eigen::VectorXd& p) {
    const double denom = 1.0 - p.squaredNorm();
    if (!(denom > 1e-12))
        throw Error(Errc::WindowTooShort,
                    "effective window too short for the weighting scheme");
    return 1.0 / denom;
}

}  // namespace

CovarianceEstimate sample_covariance(const PanelSlice& slice,
                                     const EstimatorOptions& options) {
    const int length = slice.length();
    if (length < 2)
        throw Error(Errc::WindowTooShort,
                    "covariance needs at least 2 months, got " + std::to_string(length));
    const Eigen::MatrixXd window = slice.returns();
    const Eigen::VectorXd p = window_weights(length, options);
    const double correction = bias_correction(p);

    const Eigen::RowVectorXd mean = p.transpose() * window;
    const Eigen::MatrixXd centered = window.rowwise() - mean;
    Eigen::MatrixXd cov =
        correction * (centered.transpose() * p.asDiagonal() * centered);
    cov = 0.5 * (cov + cov.transpose()).eval();
    return CovarianceEstimate{std::move(cov), slice.end, length};
}

BetaEstimate benchmark_beta(const PanelSlice& slice,
                            const Eigen::VectorXd& benchmark_returns,
                            const std::string& benchmark_id,
                            const EstimatorOptions& options) {
    const int length = slice.length();
    if (length < 2)
        throw Error(Errc::WindowTooShort,
                    "beta needs at least 2 months, got " + std::to_string(length));
    if (benchmark_returns.size() < slice.end)
        throw Error(Errc::MalformedRow, "benchmark series does not cover the window");

    const Eigen::MatrixXd window = slice.returns();
    const Eigen::VectorXd bench = benchmark_returns.segment(slice.start, length);
    const Eigen::VectorXd p = window_weights(length, options);
    const double correction = bias_correction(p);

    const double bench_mean = p.dot(bench);
    const Eigen::VectorXd bench_centered = bench.array() - bench_mean;
    const double bench_var = correction * bench_centered.dot(p.asDiagonal() * bench_centered);
    if (!(bench_var > 1e-30))
        throw Error(Errc::DegenerateBenchmark,
                    "benchmark variance is zero over the window");

    const Eigen::RowVectorXd mean = p.transpose() * window;
    const Eigen::MatrixXd centered = window.rowwise() - mean;
    Eigen::VectorXd betas =
        correction * (centered.transpose() * (p.asDiagonal() * bench_centered)) / bench_var;
    return BetaEstimate{std::move(betas), benchmark_id, slice.end};
}

}  // namespace riskonly
