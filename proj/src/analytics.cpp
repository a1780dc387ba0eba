#include "riskonly/analytics.hpp"

#include <cmath>
#include <string>

#include "riskonly/errors.hpp"

namespace riskonly {

namespace {

// Snap FP noise at the index bounds; genuinely out-of-range values (possible
// only for invalid inputs such as negative risk contributions) pass through.
double snap_unit_interval(double v) {
    if (v < 0.0 && v > -1e-12) return 0.0;
    if (v > 1.0 && v < 1.0 + 1e-12) return 1.0;
    return v;
}

double normalized_concentration(double sum_of_squares, int n) {
    const double inv_n = 1.0 / static_cast<double>(n);
    return snap_unit_interval((sum_of_squares - inv_n) / (1.0 - inv_n));
}

}  // namespace

PerformanceStats annualize(const std::vector<double>& monthly_returns,
                           double risk_free_annual) {
    const auto T = monthly_returns.size();
    if (T < 2)
        throw Error(Errc::SeriesTooShort,
                    "need at least 2 monthly returns, got " + std::to_string(T));

    double product = 1.0;
    double mean = 0.0;
    for (double r : monthly_returns) {
        product *= 1.0 + r;
        mean += r;
    }
    mean /= static_cast<double>(T);
    if (!(product > 0.0))
        throw Error(Errc::PortfolioWipeout,
                    "cumulative growth is non-positive; annualized return undefined");

    double ss = 0.0;
    for (double r : monthly_returns) ss += (r - mean) * (r - mean);
    const double monthly_sd = std::sqrt(ss / static_cast<double>(T - 1));

    PerformanceStats stats;
    stats.annualized_return = std::pow(product, 12.0 / static_cast<double>(T)) - 1.0;
    stats.annualized_volatility = monthly_sd * std::sqrt(12.0);
    if (stats.annualized_volatility > 0.0)
        stats.sharpe_ratio =
            (stats.annualized_return - risk_free_annual) / stats.annualized_volatility;
    return stats;
}

CorrelationMatrix strategy_correlations(
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
    const auto count = static_cast<Eigen::Index>(series.size());
    if (count == 0) throw Error(Errc::EmptyHistory, "no series given");
    const size_t length = series[0].second.size();
    if (length < 2) throw Error(Errc::SeriesTooShort, "series need length >= 2");

    Eigen::MatrixXd centered(static_cast<Eigen::Index>(length), count);
    CorrelationMatrix out;
    for (Eigen::Index j = 0; j < count; ++j) {
        const auto& [name, values] = series[static_cast<size_t>(j)];
        if (values.size() != length)
            throw Error(Errc::SeriesTooShort, "series '" + name + "' has mismatched length");
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(length);
        for (size_t t = 0; t < length; ++t)
            centered(static_cast<Eigen::Index>(t), j) = values[t] - mean;
        if (centered.col(j).squaredNorm() <= 1e-30)
            throw Error(Errc::DegenerateSeries, "series '" + name + "' has zero variance");
        out.names.push_back(name);
    }

    out.values = Eigen::MatrixXd::Identity(count, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = i + 1; j < count; ++j) {
            const double corr = centered.col(i).dot(centered.col(j)) /
                                (centered.col(i).norm() * centered.col(j).norm());
            out.values(i, j) = corr;
            out.values(j, i) = corr;
        }
    }
    return out;
}

double hhi(const WeightVector& w) {
    const auto n = static_cast<int>(w.weights.size());
    if (n < 2)
        throw Error(Errc::SingleAssetUniverse, "HHI needs at least 2 assets");
    return normalized_concentration(w.weights.squaredNorm(), n);
}

RiskContributions risk_contributions(const WeightVector& w, const CovarianceEstimate& cov) {
    if (cov.matrix.rows() != w.weights.size())
        throw Error(Errc::MalformedRow, "covariance size does not match weights");
    const Eigen::VectorXd sigma_w = cov.matrix * w.weights;
    const double total = w.weights.dot(sigma_w);
    if (!(total > 0.0))
        throw Error(Errc::ZeroRiskPortfolio, "portfolio variance is zero");
    RiskContributions out;
    out.rc = w.weights.cwiseProduct(sigma_w) / total;
    out.portfolio_vol = std::sqrt(total);
    return out;
}

double rdi_full(const RiskContributions& rc, int n) {
    if (n < 2)
        throw Error(Errc::SingleAssetUniverse, "RDI needs at least 2 assets");
    if (rc.rc.size() != n)
        throw Error(Errc::MalformedRow, "risk contribution length does not match n");
    return normalized_concentration(rc.rc.squaredNorm(), n);
}

double rdi_simplified(const WeightVector& w, const Eigen::VectorXd& vols) {
    const auto n = static_cast<int>(w.weights.size());
    if (n < 2)
        throw Error(Errc::SingleAssetUniverse, "RDI needs at least 2 assets");
    if (vols.size() != w.weights.size())
        throw Error(Errc::MalformedRow, "volatility vector length does not match weights");
    const Eigen::ArrayXd ws = w.weights.array() * vols.array();  // w_n sigma_n
    const double second = ws.square().sum();
    if (!(second > 0.0))
        throw Error(Errc::ZeroRiskPortfolio, "sum of squared weight-volatility products is zero");
    const double fourth = ws.square().square().sum();
    return normalized_concentration(fourth / (second * second), n);
}

Eigen::VectorXd average_allocation(const Eigen::MatrixXd& weight_history) {
    if (weight_history.rows() == 0)
        throw Error(Errc::EmptyHistory, "no rebalance dates in weight history");
    return weight_history.colwise().mean().transpose();
}

Eigen::VectorXd average_allocation(const std::vector<WeightVector>& history) {
    if (history.empty())
        throw Error(Errc::EmptyHistory, "no rebalance dates in weight history");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(history.size()),
                         history[0].weights.size());
    for (size_t i = 0; i < history.size(); ++i) {
        if (history[i].weights.size() != rows.cols())
            throw Error(Errc::MalformedRow, "weight history has inconsistent asset counts");
        rows.row(static_cast<Eigen::Index>(i)) = history[i].weights.transpose();
    }
    return average_allocation(rows);
}

}  // namespace riskonly
